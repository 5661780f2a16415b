"""Pure Python kernels.

Same contract as the compiled module `_native`; used as a fallback when
the extension is unavailable or when TRIQUAD_PURE_KERNELS is set.
Everything here returns exact integers except theta_psi_tally, whose
log sums are accumulated with math.fsum.
"""

from __future__ import annotations

import math
from array import array
from math import gcd, isqrt

BACKEND = "pure"


def sieve_primes(limit: int) -> list[int]:
    """All primes strictly below limit, ascending."""
    if limit <= 2:
        return []
    flags = bytearray([1]) * limit
    flags[0:2] = b"\x00\x00"
    for p in range(2, isqrt(limit - 1) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(range(p * p, limit, p)))
    return [i for i in range(limit) if flags[i]]


def square_part_table(limit: int) -> array:
    """t[i] = largest m with m*m dividing i, for 0 <= i < limit (t[0] = 0)."""
    t = array("q", bytes(8 * limit))
    for i in range(1, limit):
        t[i] = 1
    d = 2
    while d * d < limit:
        dd = d * d
        # ascending d, so the last write wins and is the largest
        for j in range(dd, limit, dd):
            t[j] = d
        d += 1
    return t


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n) for arbitrary integers."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    k = 1
    if n < 0:
        n = -n
        if a < 0:
            k = -1
    if n % 2 == 0:
        if a % 2 == 0:
            return 0
        t = 0
        while n % 2 == 0:
            n //= 2
            t += 1
        if t % 2 == 1 and a % 8 in (3, 5):
            k = -k
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                k = -k
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a %= n
    return k if n == 1 else 0


def class_number_forms(abs_disc: int) -> int:
    """Count reduced primitive binary quadratic forms of discriminant -abs_disc.

    Expects abs_disc > 0 with -abs_disc = 0 or 1 mod 4.  Walks b over one
    parity class while 3*b*b <= abs_disc, factors M = (b*b + abs_disc)/4
    over a in [max(b,1), sqrt(M)], and counts each (a, b, c) once for the
    ambiguous shapes b = 0, b = a, a = c and twice otherwise (for +-b).
    """
    h = 0
    b = abs_disc & 1
    while 3 * b * b <= abs_disc:
        m = (b * b + abs_disc) // 4
        a = b if b > 1 else 1
        while a * a <= m:
            if m % a == 0:
                if gcd(gcd(a, b), m // a) == 1:
                    h += 1 if (b == 0 or b == a or a * a == m) else 2
            a += 1
        b += 2
    return h


def dirichlet_class_number(abs_disc: int) -> int:
    """h(-abs_disc) by the finite character sum, exact integer arithmetic.

    h = w/(2|D|) * |sum_{a=1}^{|D|-1} chi_D(a) * a| with w = 6, 4, 2 for
    |D| = 3, 4, >= 5.  The division is exact; a remainder means the input
    was not a fundamental discriminant.
    """
    d = -abs_disc
    s = 0
    for a in range(1, abs_disc):
        s += kronecker(d, a) * a
    w = 6 if abs_disc == 3 else 4 if abs_disc == 4 else 2
    num = w * abs(s)
    if num % (2 * abs_disc) != 0:
        raise ValueError(f"character sum not divisible for |D| = {abs_disc}")
    return num // (2 * abs_disc)


def theta_psi_tally(x: int, q: int, a: int) -> tuple[float, float, int]:
    """(theta, psi, count) over the progression a mod q up to x.

    theta sums log p over primes p < x with p = a mod q, psi additionally
    sums log p for every prime power p^k < x in the progression, count is
    the number of primes.
    """
    a %= q
    primes = sieve_primes(x)
    logs = [math.log(p) for p in primes if p % q == a]
    theta = math.fsum(logs)
    count = len(logs)
    extra = []
    for p in primes:
        if p * p >= x:
            break
        lp = math.log(p)
        pw = p * p
        while pw < x:
            if pw % q == a:
                extra.append(lp)
            pw *= p
    psi = theta + math.fsum(extra)
    return theta, psi, count
