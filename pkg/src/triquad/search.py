"""Search for square-flanked primes.

A prime p is square-flanked for exponent A when the square parts of
p + 2 and p - 2 both exceed (log p)^A, i.e. m^2 | p + 2 and n^2 | p - 2
with m, n > (log p)^A.  Two search strategies are provided: a direct
scan over all primes up to a limit, and a congruence-window search that
enumerates candidate pairs (m, n) and walks the residue class
-2 mod m^2, +2 mod n^2 through the primes.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from math import gcd

from . import _kernels
from .arith import Congruence, crt_pair, primes_in_ap, square_part
from .errors import InvalidGrhExponents, WindowTooLarge

logger = logging.getLogger(__name__)

# Strict threshold comparisons are done in log space with a small guard
# so that float noise cannot admit a tie: m > (log p)^A becomes
# log m > A*log(log p) + _GUARD.
_GUARD = 1e-9


def _above(m: int, bound_log: float) -> bool:
    return math.log(m) > bound_log + _GUARD


def _below(m: int, bound_log: float) -> bool:
    return math.log(m) < bound_log - _GUARD


@dataclass(frozen=True)
class SearchWindow:
    """Pair window ((log x)^A, (log x)^B) for the congruence search up to x.

    Requires 0 < A < B < 2A and (log x)^B < sqrt(x - 2); the latter keeps
    every modulus m^2 n^2 below x so each residue class can contain a prime.
    """

    x: int
    A: float
    B: float

    def __post_init__(self):
        if self.x < 3:
            raise ValueError(f"x must be at least 3, got {self.x}")
        if not self.A > 0:
            raise ValueError(f"A > 0 violated: A = {self.A}")
        if not self.A < self.B:
            raise ValueError(f"A < B violated: A = {self.A}, B = {self.B}")
        if not self.B < 2 * self.A:
            raise ValueError(f"B < 2A violated: B = {self.B}, A = {self.A}")
        if math.log(self.x) ** self.B >= math.sqrt(self.x - 2):
            raise WindowTooLarge(
                f"(log x)^B = {math.log(self.x) ** self.B:.6g} >= "
                f"sqrt(x - 2) = {math.sqrt(self.x - 2):.6g} at x = {self.x}"
            )

    @property
    def lower(self) -> float:
        return math.log(self.x) ** self.A

    @property
    def upper(self) -> float:
        return math.log(self.x) ** self.B


@dataclass(frozen=True)
class PairCandidate:
    """Odd coprime pair (m, n) with the combined class -2 mod m^2, +2 mod n^2."""

    m: int
    n: int
    congruence: Congruence


@dataclass(frozen=True)
class SquareFlankedPrime:
    """Verified square-flanked prime with its recomputed square-part witnesses."""

    p: int
    m: int
    n: int
    A: float


def format_record(rec: SquareFlankedPrime) -> str:
    """One-line record 'p m n A', A as a decimal literal."""
    return f"{rec.p} {rec.m} {rec.n} {rec.A}"


def _odd_ints_between(lo_log: float, hi_log: float) -> list[int]:
    """Odd integers m with lo_log < log m < hi_log, both strict with guard."""
    if hi_log <= lo_log:
        return []
    m = max(3, int(math.exp(lo_log)) - 1)
    if m % 2 == 0:
        m += 1
    out = []
    while not _above(m, hi_log):
        if _above(m, lo_log) and _below(m, hi_log):
            out.append(m)
        m += 2
    return out


def _pairs_from_values(values: list[int]) -> list[PairCandidate]:
    pairs = []
    for m in values:
        for n in values:
            if m == n or gcd(m, n) != 1:
                continue
            c = crt_pair(Congruence(-2, m * m), Congruence(2, n * n))
            assert gcd(c.residue, c.modulus) == 1
            pairs.append(PairCandidate(m, n, c))
    return pairs


def enumerate_pairs(window: SearchWindow) -> list[PairCandidate]:
    """All ordered odd coprime pairs (m, n) inside the window.

    Each pair carries the CRT-combined congruence p = -2 mod m^2,
    p = +2 mod n^2; its residue is automatically coprime to the modulus
    because m and n are odd.  An empty result is a diagnostic, not an
    error: small windows often contain no usable pair.
    """
    lx = math.log(math.log(window.x))
    values = _odd_ints_between(window.A * lx, window.B * lx)
    pairs = _pairs_from_values(values)
    if not pairs:
        logger.info(
            "empty pair window at x=%d: ((log x)^%g, (log x)^%g) = (%.4g, %.4g)",
            window.x, window.A, window.B, window.lower, window.upper,
        )
    return pairs


def grh_window_pairs(x: int, eps: float, alpha: float) -> list[PairCandidate]:
    """Pairs for the power-range window (x^eps, x^alpha).

    Exponents must satisfy 0 < eps < 1/8 and eps < alpha < 1/4 - eps,
    the range where the conditional progression estimates keep the error
    term below the main term.
    """
    if not 0 < eps < 0.125:
        raise InvalidGrhExponents(f"epsilon < 1/8 violated: epsilon = {eps}")
    if not eps < alpha < 0.25 - eps:
        raise InvalidGrhExponents(
            f"epsilon < alpha < 1/4 - epsilon violated: "
            f"epsilon = {eps}, alpha = {alpha}"
        )
    if x < 3:
        raise ValueError(f"x must be at least 3, got {x}")
    lx = math.log(x)
    values = _odd_ints_between(eps * lx, alpha * lx)
    pairs = _pairs_from_values(values)
    if not pairs:
        logger.info("empty power window at x=%d: (x^%g, x^%g)", x, eps, alpha)
    return pairs


def _verified(p: int, A: float) -> SquareFlankedPrime | None:
    """Recompute both square parts of p +- 2 and check the threshold."""
    m = square_part(p + 2).root
    n = square_part(p - 2).root
    thr = A * math.log(math.log(p))
    if m > 1 and n > 1 and _above(m, thr) and _above(n, thr):
        assert gcd(m, n) == 1  # common factor would divide 4, both odd
        return SquareFlankedPrime(p, m, n, A)
    return None


def find_flanked_primes(window: SearchWindow) -> list[SquareFlankedPrime]:
    """Square-flanked primes p < x found through the window's congruence classes.

    Walks each pair's residue class, confirms primality, recomputes the
    actual square parts (they may exceed the pair witnesses) and keeps
    primes passing the threshold for exponent A.  Results are deduplicated
    and sorted by p.
    """
    found: dict[int, SquareFlankedPrime] = {}
    for pair in enumerate_pairs(window):
        for p in primes_in_ap(window.x, pair.congruence):
            if p in found:
                continue
            rec = _verified(p, window.A)
            if rec is not None:
                found[p] = rec
    return [found[p] for p in sorted(found)]


def direct_scan(limit: int, A: float) -> list[SquareFlankedPrime]:
    """All square-flanked primes p <= limit for exponent A, by exhaustive scan.

    Tabulates square parts up to limit + 2 once, then tests every odd
    prime.  This is the completeness oracle for the windowed search.
    """
    if limit < 5:
        raise ValueError(f"limit must be at least 5, got {limit}")
    if not A > 0:
        raise ValueError(f"A > 0 violated: A = {A}")
    table = _kernels.square_part_table(limit + 3)
    out = []
    for p in _kernels.sieve_primes(limit + 1):
        if p < 3:
            continue
        m = table[p + 2]
        n = table[p - 2]
        if m == 1 or n == 1:
            continue
        thr = A * math.log(math.log(p))
        if _above(m, thr) and _above(n, thr):
            out.append(SquareFlankedPrime(p, m, n, A))
    return out
