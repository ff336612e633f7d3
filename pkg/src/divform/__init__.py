"""divform: exact divisor sums over binary quadratic forms n^2 + N*m^2.

The package computes S_N(x) = sum_{m,n<=x} d(n^2 + N*m^2) by two independent
exact engines, enumerates roots of v^2 + N = 0 (mod d) by two independent
algorithms, builds the rational approximations and large-sieve sums that
control the error term, and assembles the coefficients of the asymptotic
expansion S_N(x) = C1*x^2*log(x) + C2*x^2 + O(x^(3/2+eps)) for the
class-number-one forms.
"""

from .arith import CLASS_NUMBER_ONE, FactoredInteger, FormParameter, factor

__version__ = "0.1.0"

__all__ = [
    "CLASS_NUMBER_ONE",
    "FactoredInteger",
    "FormParameter",
    "factor",
    "__version__",
]
