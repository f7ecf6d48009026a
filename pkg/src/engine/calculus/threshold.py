"""
Correctly floored evaluation of the generation threshold

    threshold(n) = floor( (sqrt(3)/2) * n / sqrt(log2 n) ).

The value is enclosed in an interval [lo, hi] computed with gmpy2 under
directed rounding: every operation feeding the lower end rounds toward
-inf and every operation feeding the upper end rounds toward +inf (the
denominator with the opposite direction). The floor is accepted once both
ends have the same floor; otherwise the working precision is doubled.
"""

import logging
from typing import Tuple

import gmpy2

from ..errors import InadmissibleInputError, InsufficientPrecisionError

logger = logging.getLogger(__name__)

DEFAULT_PRECISION = 64
MAX_PRECISION = 8192


def _enclose(n: int, precision: int) -> Tuple["gmpy2.mpfr", "gmpy2.mpfr"]:
    n = gmpy2.mpz(n)
    with gmpy2.context(precision=precision, round=gmpy2.RoundDown):
        numerator_lo = gmpy2.sqrt(gmpy2.mpfr(3)) * n / 2
        denominator_lo = gmpy2.sqrt(gmpy2.log2(gmpy2.mpfr(n)))
    with gmpy2.context(precision=precision, round=gmpy2.RoundUp):
        numerator_hi = gmpy2.sqrt(gmpy2.mpfr(3)) * n / 2
        denominator_hi = gmpy2.sqrt(gmpy2.log2(gmpy2.mpfr(n)))
    with gmpy2.context(precision=precision, round=gmpy2.RoundDown):
        lo = numerator_lo / denominator_hi
    with gmpy2.context(precision=precision, round=gmpy2.RoundUp):
        hi = numerator_hi / denominator_lo
    return lo, hi


def threshold_interval(n: int, precision: int = DEFAULT_PRECISION) -> Tuple["gmpy2.mpfr", "gmpy2.mpfr"]:
    """Return an enclosure [lo, hi] of c*n/sqrt(log2 n) at the given precision."""
    if not isinstance(n, int) or n < 2:
        raise InadmissibleInputError(f"threshold requires an integer n >= 2, got {n!r}")
    # n itself must convert to mpfr exactly.
    precision = max(precision, n.bit_length() + 2)
    return _enclose(n, precision)


def threshold(n: int, precision: int = DEFAULT_PRECISION, max_precision: int = MAX_PRECISION) -> int:
    """
    Correctly floored threshold floor(c*n/sqrt(log2 n)) with c = sqrt(3)/2.

    Args:
        n: Degree, n >= 2
        precision: Initial working precision in bits
        max_precision: Precision at which escalation gives up

    Raises:
        InsufficientPrecisionError: if the enclosure still straddles an
            integer at `max_precision` bits.
    """
    working = precision
    while True:
        lo, hi = threshold_interval(n, working)
        floor_lo = int(gmpy2.floor(lo))
        floor_hi = int(gmpy2.floor(hi))
        if floor_lo == floor_hi:
            logger.debug(f"threshold({n}) = {floor_lo} at {working} bits")
            return floor_lo
        if working * 2 > max_precision:
            raise InsufficientPrecisionError(
                f"threshold({n}) straddles an integer between {floor_lo} and {floor_hi} "
                f"at {working} bits; increase max_precision"
            )
        working *= 2
