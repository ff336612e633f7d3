import pytest

from divform.arith import FormParameter, Sieve
from divform.rho import RhoTable


@pytest.fixture(scope="session")
def sieve_10k():
    return Sieve(10_000)


@pytest.fixture(scope="session")
def rho_tables():
    """Shared prefix tables; N=2 goes deep for the integral cutoff study."""
    tables = {}
    for n, limit in ((2, 400_000), (67, 100_000), (163, 100_000)):
        tables[n] = RhoTable.build(FormParameter.make(n), limit)
    return tables


@pytest.fixture(scope="session")
def params():
    return {n: FormParameter.make(n) for n in (1, 2, 3, 7, 11, 19, 43, 67, 163)}
