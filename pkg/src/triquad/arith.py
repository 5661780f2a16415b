"""Core arithmetic: congruences, CRT, primality, square parts, progressions.

Everything here is exact integer arithmetic except the Chebyshev-style
log tallies, which return floats accumulated in compensated sums.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass
from math import gcd, isqrt
from typing import Iterator

from . import _kernels
from .errors import NonCoprimeModuli, ResidueNotCoprime

logger = logging.getLogger(__name__)

# Deterministic Miller-Rabin witness set for n < 2**64.
_MR_BASES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]
_MR_LIMIT = 1 << 64
_MR_RANDOM_ROUNDS = 64


@dataclass(frozen=True)
class Congruence:
    """Residue class `residue` mod `modulus`, residue normalized to [0, modulus)."""

    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def holds_for(self, n: int) -> bool:
        return n % self.modulus == self.residue


@dataclass(frozen=True)
class SquareDecomposition:
    """n = root**2 * squarefree with squarefree squarefree."""

    root: int
    squarefree: int

    @property
    def value(self) -> int:
        return self.root * self.root * self.squarefree


@dataclass(frozen=True)
class ThetaTally:
    """Chebyshev log sums over a progression: theta on primes, psi on prime powers."""

    x: int
    modulus: int
    residue: int
    theta: float
    psi: float
    count: int


def crt_pair(c1: Congruence, c2: Congruence) -> Congruence:
    """Combine two congruences with coprime moduli into one mod m1*m2.

    Raises NonCoprimeModuli when gcd(m1, m2) > 1.
    """
    m1, m2 = c1.modulus, c2.modulus
    g = gcd(m1, m2)
    if g != 1:
        raise NonCoprimeModuli(f"moduli {m1} and {m2} share factor {g}")
    # a = a1 + m1 * ((a2 - a1) / m1 mod m2)
    t = (c2.residue - c1.residue) * pow(m1, -1, m2) % m2
    return Congruence(c1.residue + m1 * t, m1 * m2)


def _miller_rabin(n: int, bases) -> bool:
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in bases:
        a %= n
        if a == 0:
            continue
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    """Primality test: deterministic below 2**64, else 64 Miller-Rabin rounds.

    The witness set {2, ..., 37} is exact for n < 2**64.  Above that the
    rounds use witnesses from a generator seeded by n, so results are
    reproducible; the error probability is below 4**-64.  Use
    primality_mode(n) to know which regime applies.
    """
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    if n < _MR_LIMIT:
        return _miller_rabin(n, _MR_BASES)
    rng = random.Random(n)
    bases = [rng.randrange(2, n - 1) for _ in range(_MR_RANDOM_ROUNDS)]
    return _miller_rabin(n, bases)


def primality_mode(n: int) -> str:
    """'deterministic' when the fixed witness set is exact, else 'probabilistic'."""
    return "deterministic" if n < _MR_LIMIT else "probabilistic"


def square_part(n: int) -> SquareDecomposition:
    """Largest m with m*m | n, paired with the squarefree cofactor.

    Trial division by d <= cbrt(n) leaves a remainder that is 1, a prime,
    a prime square, or a product of two distinct primes; of those only the
    square contributes, via an exact perfect-square check.
    """
    if n < 1:
        raise ValueError(f"square_part needs n >= 1, got {n}")
    root = 1
    rem = n
    d = 2
    while d * d * d <= rem:
        if rem % d == 0:
            e = 0
            while rem % d == 0:
                rem //= d
                e += 1
            root *= d ** (e >> 1)
            # an odd leftover power of d is squarefree, drop it from rem
        d += 1
    # rem now has at most two prime factors, both above its cube root,
    # so it contributes to the square part only if it is a perfect square
    s = isqrt(rem)
    if s * s == rem:
        root *= s
    return SquareDecomposition(root, n // (root * root))


def square_part_table(limit: int):
    """Array t with t[i] = square_part(i).root for 1 <= i < limit."""
    return _kernels.square_part_table(limit)


def euler_phi(n: int) -> int:
    """Euler totient by trial factorization."""
    if n < 1:
        raise ValueError(f"euler_phi needs n >= 1, got {n}")
    result = n
    rem = n
    d = 2
    while d * d <= rem:
        if rem % d == 0:
            while rem % d == 0:
                rem //= d
            result -= result // d
        d += 1
    if rem > 1:
        result -= result // rem
    return result


_PRESIEVE_PRIMES = None


def _presieve_primes() -> list[int]:
    global _PRESIEVE_PRIMES
    if _PRESIEVE_PRIMES is None:
        _PRESIEVE_PRIMES = _kernels.sieve_primes(1000)
    return _PRESIEVE_PRIMES


def primes_in_ap(limit: int, c: Congruence) -> Iterator[int]:
    """Primes p < limit with p = c.residue mod c.modulus, ascending.

    Steps through the progression in segments, strikes segment members
    divisible by small primes, and confirms survivors with is_prime.
    Non-coprime residues are handled exactly: at most the single prime
    gcd(residue, modulus) can occur.
    """
    q, a = c.modulus, c.residue
    g = gcd(a, q)
    if g > 1:
        # every member is divisible by g, so only p = g itself qualifies
        if g < limit and g % q == a % q and is_prime(g):
            yield g
        return
    small = _presieve_primes()
    seg = 4096
    k = 0
    while True:
        first = a + k * q
        if first >= limit:
            return
        size = min(seg, (limit - 1 - first) // q + 1)
        alive = bytearray([1]) * size
        for r in small:
            if r >= limit:
                break
            if q % r == 0:
                continue  # member = a mod r with gcd(a, q) = 1, never 0
            # solve a + j*q = 0 mod r for j, then mark j, j+r, ...
            j = (-(first % r)) * pow(q, -1, r) % r
            for i in range(j, size, r):
                if first + i * q != r:
                    alive[i] = 0
        for i in range(size):
            if alive[i]:
                cand = first + i * q
                if cand >= 2 and is_prime(cand):
                    yield cand
        k += size


def theta_psi(x: int, c: Congruence) -> ThetaTally:
    """Chebyshev theta and psi restricted to a progression, with prime count.

    theta = sum of log p over primes p < x in the class, psi additionally
    counts log p for every prime power p^k < x in the class.  Requires
    gcd(residue, modulus) = 1.
    """
    if x < 1:
        raise ValueError(f"theta_psi needs x >= 1, got {x}")
    if gcd(c.residue, c.modulus) != 1:
        raise ResidueNotCoprime(
            f"residue {c.residue} not coprime to modulus {c.modulus}"
        )
    theta, psi, count = _kernels.theta_psi_tally(x, c.modulus, c.residue)
    return ThetaTally(x, c.modulus, c.residue, theta, psi, count)
