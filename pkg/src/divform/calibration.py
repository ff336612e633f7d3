"""Calibrated verification thresholds, loaded from the packaged data file.

Thresholds that were fixed empirically (bands, floors, slack factors) live in
data/calibration.json so that recalibration is a data change, not a code
change.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=1)
def load_calibration() -> dict:
    text = resources.files("divform").joinpath("data/calibration.json").read_text()
    return json.loads(text)
