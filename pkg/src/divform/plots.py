"""Figure rendering for the report paths.

Each CSV-producing subcommand can render a companion PNG next to its output
file.  The figures are diagnostic: residual decay on a log-log scale,
large-sieve bound ratios across the dyadic grid, the normalized error
function, and the distribution of approximation denominators.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402

_STYLE = {"figure.figsize": (7.0, 4.5), "font.size": 10, "axes.grid": True,
          "grid.alpha": 0.3}


def _figure():
    plt.rcParams.update(_STYLE)
    return plt.subplots()


def residual_figure(records, path: str) -> None:
    fig, ax = _figure()
    xs = [r.x for r in records]
    ys = [abs(r.residual) for r in records if r.residual != 0]
    xs_nz = [r.x for r in records if r.residual != 0]
    ax.loglog(xs_nz, ys, "o-", label="|S - main term|")
    ax.loglog(xs, [x ** 1.5 for x in xs], "--", color="gray",
              label="x^(3/2) guide")
    ax.set_xlabel("x")
    ax.set_ylabel("absolute residual")
    ax.legend()
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def sieve_figure(samples, path: str) -> None:
    fig, ax = _figure()
    ax.loglog([s.d_scale for s in samples], [s.bound_ratio for s in samples],
              "o-", base=2)
    ax.set_xlabel("D")
    ax.set_ylabel("S(D,H,M) / ((D+M) sqrt(D))")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def rho_figure(rows, path: str) -> None:
    fig, ax = _figure()
    ys = [r["d"] for r in rows if r["d"] >= 2]
    es = [r["e_value"] / (r["d"] ** (4 / 3) * math.log(r["d"]) ** 2)
          for r in rows if r["d"] >= 2]
    ax.plot(ys, es, lw=0.7)
    ax.set_xlabel("y")
    ax.set_ylabel("E(y) / (y^(4/3) log(y)^2)")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)


def approx_figure(rows, path: str) -> None:
    fig, ax = _figure()
    ax.scatter([r["d"] for r in rows], [r["q_over_sqrt_d"] for r in rows],
               s=2, alpha=0.4)
    ax.set_xlabel("d")
    ax.set_ylabel("q / sqrt(d)")
    ax.set_xscale("log")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
