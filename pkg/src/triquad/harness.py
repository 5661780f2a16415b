"""Finite-x evaluation of the flanked-prime sum chain.

The chain bounds the weighted count of square-flanked primes from
below: the full weighted sum S dominates a sum restricted to pairs
(m, n) from a window, which splits into a main term of x/phi(m^2 n^2)
summands, a progression error budget, and an exact log 2 correction.
Every inequality in the chain is exposed as a checkable quantity, and
an asymptotic floor ((2 - zeta(2))/4) * x/(log x)^(2A) gives the shape
the main term approaches for large x.  A GRH variant swaps the log-power
window for the power window (x^eps, x^alpha) with an x^(1/2) (log x)^2
error shape.

Windows at reachable x are usually empty for the asymptotically
interesting exponents, so every sum accepts a forced list of (m, n)
pairs as a testing hook; forced rows are oracle material, not chain
assertions.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from . import _kernels
from .arith import Congruence, crt_pair, euler_phi, theta_psi
from .errors import InvalidGrhExponents, WindowTooLarge
from .search import PairCandidate, SearchWindow, enumerate_pairs, grh_window_pairs

logger = logging.getLogger(__name__)

ZETA2 = math.pi * math.pi / 6
FLOOR_CONSTANT = (2 - ZETA2) / 4

_GUARD = 1e-9


@dataclass(frozen=True)
class HarnessConfig:
    """Exponents and grid for the log-power window chain.

    B defaults to 1.5*A and C to 7.5*A + 1, the midpoints of the allowed
    ranges A < B < 2A and C > 4B.
    """

    A: float
    B: Optional[float] = None
    C: Optional[float] = None
    x_grid: Sequence[int] = ()

    def __post_init__(self):
        if self.B is None:
            object.__setattr__(self, "B", 1.5 * self.A)
        if self.C is None:
            object.__setattr__(self, "C", 7.5 * self.A + 1)
        object.__setattr__(self, "x_grid", tuple(self.x_grid))
        if not self.A > 0:
            raise ValueError(f"A > 0 violated: A = {self.A}")
        if not self.A < self.B:
            raise ValueError(f"A < B violated: A = {self.A}, B = {self.B}")
        if not self.B < 2 * self.A:
            raise ValueError(f"B < 2A violated: B = {self.B}, A = {self.A}")
        if not self.C > 4 * self.B:
            raise ValueError(f"C > 4B violated: C = {self.C}, B = {self.B}")
        if any(b <= a for a, b in zip(self.x_grid, self.x_grid[1:])):
            raise ValueError("x_grid must be strictly increasing")
        if any(x < 7 for x in self.x_grid):
            raise ValueError("grid points must be at least 7")


@dataclass(frozen=True)
class GrhConfig:
    """Exponents and grid for the power window chain."""

    epsilon: float
    alpha: float
    x_grid: Sequence[int] = ()

    def __post_init__(self):
        object.__setattr__(self, "x_grid", tuple(self.x_grid))
        if not 0 < self.epsilon < 0.125:
            raise InvalidGrhExponents(
                f"epsilon < 1/8 violated: epsilon = {self.epsilon}"
            )
        if not self.epsilon < self.alpha < 0.25 - self.epsilon:
            raise InvalidGrhExponents(
                f"epsilon < alpha < 1/4 - epsilon violated: "
                f"epsilon = {self.epsilon}, alpha = {self.alpha}"
            )
        if any(b <= a for a, b in zip(self.x_grid, self.x_grid[1:])):
            raise ValueError("x_grid must be strictly increasing")
        if any(x < 7 for x in self.x_grid):
            raise ValueError("grid points must be at least 7")


@dataclass(frozen=True)
class TermBreakdown:
    """One grid row of the sum chain."""

    x: int
    S: float
    S_restricted: float
    main_term: float
    asymptotic_floor: float
    error_budget: float
    log2_budget: float
    pair_count: int

    @property
    def certified_floor_proxy(self) -> float:
        """main_term - log2_budget, the unconditional part of the lower bound."""
        return self.main_term - self.log2_budget


def _divisors_above(m: int, threshold_log: float) -> int:
    """Count divisors d of m with log d > threshold_log + guard."""
    count = 0
    i = 1
    while i * i <= m:
        if m % i == 0:
            if math.log(i) > threshold_log + _GUARD:
                count += 1
            j = m // i
            if j != i and math.log(j) > threshold_log + _GUARD:
                count += 1
        i += 1
    return count


def weighted_sum(x: int, A: float) -> float:
    """Sum of log p over primes 3 <= p < x, weighted by flanking multiplicity.

    The weight is #{m : m^2 | p+2, m > (log p)^A} * #{n : n^2 | p-2,
    n > (log p)^A}.  Divisor sets come from batch square-part sieving:
    m^2 | p+2 exactly when m divides the square part root of p+2.
    """
    if x < 7:
        raise ValueError(f"weighted_sum needs x >= 7, got {x}")
    table = _kernels.square_part_table(x + 2)
    terms = []
    for p in _kernels.sieve_primes(x):
        if p < 3:
            continue
        mp = table[p + 2]
        mn = table[p - 2]
        if mp == 1 or mn == 1:
            continue  # thresholds exceed 1 for every p >= 3
        thr = A * math.log(math.log(p))
        cm = _divisors_above(mp, thr)
        if cm == 0:
            continue
        cn = _divisors_above(mn, thr)
        if cn:
            terms.append(math.log(p) * cm * cn)
    return math.fsum(terms)


def _weighted_sum_fixed_threshold(x: int, threshold_log: float) -> float:
    """Same weighted sum with the p-independent threshold log m > threshold_log."""
    table = _kernels.square_part_table(x + 2)
    terms = []
    for p in _kernels.sieve_primes(x):
        if p < 3:
            continue
        mp = table[p + 2]
        mn = table[p - 2]
        if mp == 1 or mn == 1:
            continue
        cm = _divisors_above(mp, threshold_log)
        if cm == 0:
            continue
        cn = _divisors_above(mn, threshold_log)
        if cn:
            terms.append(math.log(p) * cm * cn)
    return math.fsum(terms)


def forced_pair_candidates(pairs: Iterable[tuple[int, int]]) -> list[PairCandidate]:
    """Build candidates from explicit (m, n) values, bypassing window bounds.

    Testing hook: the values must still be odd, distinct and coprime or
    the congruence classes would not make sense.
    """
    out = []
    for m, n in pairs:
        if m % 2 == 0 or n % 2 == 0 or m == n or math.gcd(m, n) != 1:
            raise ValueError(f"forced pair ({m}, {n}) must be odd, distinct, coprime")
        c = crt_pair(Congruence(-2, m * m), Congruence(2, n * n))
        out.append(PairCandidate(m, n, c))
    return out


def _window_pairs(x: int, A: float, B: float) -> list[PairCandidate]:
    return enumerate_pairs(SearchWindow(x, A, B))


def restricted_sum(
    x: int,
    A: float,
    B: float,
    forced_pairs: Optional[Iterable[tuple[int, int]]] = None,
) -> float:
    """Sum over window pairs of theta(x; m^2 n^2, a_{m,n}).

    Raises WindowTooLarge (via window construction) when
    (log x)^B >= sqrt(x - 2).  With forced_pairs the window is bypassed.
    """
    if forced_pairs is not None:
        pairs = forced_pair_candidates(forced_pairs)
    else:
        pairs = _window_pairs(x, A, B)
    return math.fsum(theta_psi(x, pc.congruence).theta for pc in pairs)


def main_term(
    x: int,
    A: float,
    B: float,
    forced_pairs: Optional[Iterable[tuple[int, int]]] = None,
) -> float:
    """Sum over window pairs of x/phi(m^2 n^2), accumulated exactly."""
    if forced_pairs is not None:
        pairs = forced_pair_candidates(forced_pairs)
    else:
        pairs = _window_pairs(x, A, B)
    total = sum(
        (Fraction(x, euler_phi(pc.congruence.modulus)) for pc in pairs),
        Fraction(0),
    )
    return float(total)


def main_term_float_path(x: int, pairs: Iterable[PairCandidate]) -> float:
    """Naive float accumulation of the main term; precision cross-check hook."""
    return math.fsum(x / euler_phi(pc.congruence.modulus) for pc in pairs)


def asymptotic_floor(x: int, A: float) -> float:
    """((2 - zeta(2))/4) * x / (log x)^(2A), zeta(2) = pi^2/6 at full precision."""
    if x < 3:
        raise ValueError(f"asymptotic_floor needs x >= 3, got {x}")
    return FLOOR_CONSTANT * x / math.log(x) ** (2 * A)


def sandwich_check(a: int, b: int) -> bool:
    """Integral bounds around sum_{n=a}^{b} 1/(2n+1)^2.

    Checks int_a^{b+1} dt/(2t+1)^2 <= sum <= int_a^b dt/(2t+1)^2
    + 1/(2a+1)^2, using the antiderivative F(t) = -1/(2(2t+1)).
    """
    if not 1 <= a <= b:
        raise ValueError(f"needs 1 <= a <= b, got ({a}, {b})")

    def integral(lo: int, hi: int) -> float:
        # F(hi) - F(lo) with F(t) = -1/(2(2t+1))
        return 1 / (2 * (2 * lo + 1)) - 1 / (2 * (2 * hi + 1))

    total = math.fsum(1 / (2 * n + 1) ** 2 for n in range(a, b + 1))
    lower = integral(a, b + 1)
    upper = integral(a, b) + 1 / (2 * a + 1) ** 2
    return lower <= total <= upper


def theta_deviation_report(
    x: int, pairs: Iterable[PairCandidate]
) -> list[tuple[int, int, float, float, float]]:
    """Per-pair (m, n, theta, x/phi(q), deviation) rows.

    Observational: the progression error constants are unknown, so the
    deviations are reported for comparison against a budget, never
    asserted against one.
    """
    rows = []
    for pc in pairs:
        t = theta_psi(x, pc.congruence).theta
        expected = x / euler_phi(pc.congruence.modulus)
        rows.append((pc.m, pc.n, t, expected, t - expected))
    return rows


def _breakdown(
    x: int,
    pairs: list[PairCandidate],
    s_value: float,
    floor: float,
    error_budget: float,
    genuine: bool,
) -> TermBreakdown:
    restricted = math.fsum(theta_psi(x, pc.congruence).theta for pc in pairs)
    mt = float(
        sum(
            (Fraction(x, euler_phi(pc.congruence.modulus)) for pc in pairs),
            Fraction(0),
        )
    )
    log2_budget = len(pairs) * math.log(2)
    if genuine:
        # domain inclusion: every prime counted by the restricted sum is
        # counted by S with at least weight 1
        assert s_value >= restricted - 1e-9 * max(1.0, abs(s_value))
    return TermBreakdown(
        x, s_value, restricted, mt, floor, error_budget, log2_budget, len(pairs)
    )


def chain_report(
    cfg: HarnessConfig,
    forced_pairs: Optional[Iterable[tuple[int, int]]] = None,
) -> list[TermBreakdown]:
    """One TermBreakdown per grid x; the S >= S_restricted chain asserted.

    Grid points whose window violates (log x)^B < sqrt(x - 2) are
    reported via a warning and skipped; with forced_pairs the window is
    bypassed and rows are plain measurements (no chain assertion).
    """
    forced = (
        None if forced_pairs is None else forced_pair_candidates(forced_pairs)
    )
    rows = []
    for x in cfg.x_grid:
        if forced is not None:
            pairs = forced
        else:
            try:
                pairs = _window_pairs(x, cfg.A, cfg.B)
            except WindowTooLarge as exc:
                logger.warning("skipping x=%d: %s", x, exc)
                continue
        rows.append(
            _breakdown(
                x,
                pairs,
                weighted_sum(x, cfg.A),
                asymptotic_floor(x, cfg.A),
                len(pairs) * x / math.log(x) ** cfg.C,
                genuine=forced is None,
            )
        )
    return rows


def grh_chain_report(
    cfg: GrhConfig,
    forced_pairs: Optional[Iterable[tuple[int, int]]] = None,
) -> list[TermBreakdown]:
    """Power-window variant: windows (x^eps, x^alpha), sqrt(x) (log x)^2 budget.

    S uses the fixed threshold m, n > x^eps so the domain inclusion
    against the windowed sum still holds exactly.
    """
    forced = (
        None if forced_pairs is None else forced_pair_candidates(forced_pairs)
    )
    rows = []
    for x in cfg.x_grid:
        pairs = forced if forced is not None else grh_window_pairs(
            x, cfg.epsilon, cfg.alpha
        )
        lx = math.log(x)
        rows.append(
            _breakdown(
                x,
                pairs,
                _weighted_sum_fixed_threshold(x, cfg.epsilon * lx),
                FLOOR_CONSTANT * x ** (1 - 2 * cfg.epsilon),
                len(pairs) * math.sqrt(x) * lx * lx,
                genuine=forced is None,
            )
        )
    return rows


CSV_HEADER = "x,S,S_restricted,main_term,floor,error_budget,log2_budget,pair_count"


def rows_to_csv(rows: Iterable[TermBreakdown]) -> str:
    """Fixed-header CSV with 12 significant digits on the real columns."""
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.x},{r.S:.12g},{r.S_restricted:.12g},{r.main_term:.12g},"
            f"{r.asymptotic_floor:.12g},{r.error_budget:.12g},"
            f"{r.log2_budget:.12g},{r.pair_count}"
        )
    return "\n".join(lines) + "\n"
