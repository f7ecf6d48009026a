"""
Exact arithmetic kernel for the generation-bound calculus.

Factorizations, the K / omega / omega1 statistics, the rational weight
ws(s) = s / 2^K(s) * binom(K(s), floor(K(s)/2)) and
E_sol(s, p) = min(ws(s), s_p). Every value is an int or a Fraction;
nothing here touches floating point.
"""

import logging
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Tuple

from sympy import binomial as sympy_binomial
from sympy import factorint, isprime, multiplicity

from ..errors import InadmissibleInputError, ResourceLimitError

logger = logging.getLogger(__name__)

# Largest integer the kernel accepts; the largest degree in play is 2^35 * 15.
MAX_INPUT = 2 ** 40

# ws(s) is evaluated exactly only up to this K(s).
WS_EXACT_K_LIMIT = 2 ** 16


@dataclass(frozen=True)
class FactoredInteger:
    """
    A positive integer held as its prime factorization.

    `factors` maps each prime to its positive exponent; the empty map is 1.
    """
    factors: Dict[int, int] = field(default_factory=dict)

    @property
    def value(self) -> int:
        result = 1
        for prime, exponent in self.factors.items():
            result *= prime ** exponent
        return result

    @property
    def omega(self) -> int:
        return sum(self.factors.values())

    @property
    def omega1(self) -> int:
        return sum(prime * exponent for prime, exponent in self.factors.items())

    @property
    def k_value(self) -> int:
        return sum(exponent * (prime - 1) for prime, exponent in self.factors.items())

    def items(self) -> Tuple[Tuple[int, int], ...]:
        return tuple(sorted(self.factors.items()))

    def __str__(self):
        if not self.factors:
            return "1"
        return " * ".join(
            f"{prime}^{exponent}" if exponent > 1 else str(prime)
            for prime, exponent in self.items()
        )


def _require_positive(s: int, name: str = "s") -> None:
    if not isinstance(s, int) or isinstance(s, bool):
        raise InadmissibleInputError(f"{name} must be an integer, got {s!r}")
    if s < 1:
        raise InadmissibleInputError(f"{name} must be a positive integer, got {s}")
    if s > MAX_INPUT:
        raise InadmissibleInputError(f"{name} = {s} exceeds the supported maximum 2^40")


@lru_cache(maxsize=4096)
def factorize(s: int) -> FactoredInteger:
    """Factor s (1 <= s <= 2^40) into primes."""
    _require_positive(s)
    return FactoredInteger({int(p): int(e) for p, e in factorint(s).items()})


def omega(s: int) -> int:
    return factorize(s).omega


def omega1(s: int) -> int:
    return factorize(s).omega1


def k_value(s: int) -> int:
    """K(s) = omega1(s) - omega(s) = sum r_i (p_i - 1); K(1) = 0."""
    return factorize(s).k_value


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient C(n, k) for 0 <= k <= n."""
    if n < 0 or k < 0:
        raise InadmissibleInputError(f"binomial arguments must be non-negative, got ({n}, {k})")
    if k > n:
        raise InadmissibleInputError(f"binomial requires k <= n, got ({n}, {k})")
    return int(sympy_binomial(n, k))


def ws(s: int) -> Fraction:
    """
    The rational weight ws(s) = s * C(K, floor(K/2)) / 2^K with K = K(s).

    Raises:
        ResourceLimitError: if K(s) is too large for exact evaluation.
    """
    k = k_value(s)
    if k > WS_EXACT_K_LIMIT:
        raise ResourceLimitError(
            f"ws({s}) needs C({k}, {k // 2}); exact evaluation is limited to K(s) <= {WS_EXACT_K_LIMIT}"
        )
    return Fraction(s * binomial(k, k // 2), 2 ** k)


def p_part(s: int, p: int) -> int:
    """Largest power of the prime p dividing s."""
    _require_positive(s)
    if not isprime(p):
        raise InadmissibleInputError(f"p must be prime, got {p}")
    return p ** int(multiplicity(p, s))


@lru_cache(maxsize=65536)
def e_sol(s: int, p: int = 2) -> Fraction:
    """
    E_sol(s, p) = min(ws(s), s_p), compared exactly.

    C(K, floor(K/2)) >= 2^K / sqrt(2K + 2) for K >= 1, so ws(s) >= s_p as soon
    as (s / s_p)^2 >= 2K(s) + 2. The minimum is then s_p and the binomial is
    never formed; in particular E_sol(s, p) = 1 when p does not divide s.
    """
    s_p = p_part(s, p)
    if s_p == 1:
        return Fraction(1)
    cofactor = s // s_p
    if cofactor * cofactor >= 2 * k_value(s) + 2:
        return Fraction(s_p)
    return min(ws(s), Fraction(s_p))


def decimal_string(value: Fraction, digits: int = 6) -> str:
    """Render a rational as "≈" plus `digits` significant digits."""
    with localcontext() as ctx:
        ctx.prec = digits
        approx = Decimal(value.numerator) / Decimal(value.denominator)
    return f"≈{approx:g}"


def parse_degree(m: int) -> Tuple[int, int, int]:
    """
    Split an admissible degree m = 2^x 3^y 5^z (0 <= y, z <= 1, m >= 2) into (x, y, z).

    Raises:
        InadmissibleInputError: for any other m.
    """
    if not isinstance(m, int) or isinstance(m, bool) or m < 2 or m > MAX_INPUT:
        raise InadmissibleInputError(f"degree must be an integer in [2, 2^40], got {m!r}")
    factors = factorize(m).factors
    extra = sorted(set(factors) - {2, 3, 5})
    if extra:
        raise InadmissibleInputError(f"degree {m} has prime divisors {extra} outside {{2, 3, 5}}")
    if factors.get(3, 0) > 1 or factors.get(5, 0) > 1:
        raise InadmissibleInputError(f"degree {m} is divisible by 9 or 25")
    return factors.get(2, 0), factors.get(3, 0), factors.get(5, 0)
