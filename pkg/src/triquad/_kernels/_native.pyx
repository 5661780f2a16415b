# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: sieves, form counts, character sums, progression tallies.

Same contract as the pure module; see pure.py for the reference
semantics.  Hot loops run on C integers, log sums use Kahan compensation.
"""

from cpython cimport array
import array

from libc.math cimport log as c_log
from libc.stdlib cimport free, malloc

BACKEND = "native"


cdef unsigned char *_sieve_flags(long long limit) except NULL:
    # caller frees; flags[i] = 1 iff i prime, for 0 <= i < limit
    cdef unsigned char *flags = <unsigned char *> malloc(limit)
    if flags == NULL:
        raise MemoryError()
    cdef long long i, p, j
    for i in range(limit):
        flags[i] = 1
    if limit > 0:
        flags[0] = 0
    if limit > 1:
        flags[1] = 0
    p = 2
    while p * p < limit:
        if flags[p]:
            j = p * p
            while j < limit:
                flags[j] = 0
                j += p
        p += 1
    return flags


def sieve_primes(long long limit):
    """All primes strictly below limit, ascending."""
    if limit <= 2:
        return []
    cdef unsigned char *flags = _sieve_flags(limit)
    cdef list out = []
    cdef long long i
    try:
        for i in range(2, limit):
            if flags[i]:
                out.append(i)
    finally:
        free(flags)
    return out


def square_part_table(long long limit):
    """t[i] = largest m with m*m dividing i, for 0 <= i < limit (t[0] = 0)."""
    cdef array.array t = array.array("q", [])
    array.resize(t, limit)
    cdef long long[::1] v = t
    cdef long long i, d, dd, j
    v[0] = 0
    for i in range(1, limit):
        v[i] = 1
    d = 2
    while d * d < limit:
        dd = d * d
        j = dd
        while j < limit:
            v[j] = d
            j += dd
        d += 1
    return t


cdef long long _gcd3(long long a, long long b, long long c) noexcept:
    cdef long long t
    while b:
        t = a % b
        a = b
        b = t
    while c:
        t = a % c
        a = c
        c = t
    return a


cdef int _kron(long long a, long long n) noexcept:
    cdef int k = 1
    cdef long long t, r
    if n == 0:
        return 1 if (a == 1 or a == -1) else 0
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
        r = a % 8
        if r < 0:
            r += 8
        if t % 2 == 1 and (r == 3 or r == 5):
            k = -k
    a %= n
    if a < 0:
        a += n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            r = n % 8
            if r == 3 or r == 5:
                k = -k
        t = a
        a = n
        n = t
        if a % 4 == 3 and n % 4 == 3:
            k = -k
        a %= n
    return k if n == 1 else 0


def kronecker(a, n):
    """Kronecker symbol (a|n) for arbitrary integers."""
    if -(2 ** 62) < a < 2 ** 62 and -(2 ** 62) < n < 2 ** 62:
        return _kron(a, n)
    from . import pure
    return pure.kronecker(a, n)


def class_number_forms(long long abs_disc):
    """Count reduced primitive forms of discriminant -abs_disc."""
    cdef long long h = 0, b, m, a
    b = abs_disc & 1
    while 3 * b * b <= abs_disc:
        m = (b * b + abs_disc) // 4
        a = b if b > 1 else 1
        while a * a <= m:
            if m % a == 0:
                if _gcd3(a, b, m // a) == 1:
                    h += 1 if (b == 0 or b == a or a * a == m) else 2
            a += 1
        b += 2
    return h


def dirichlet_class_number(long long abs_disc):
    """h(-abs_disc) by the finite character sum, exact integer arithmetic."""
    cdef long long d = -abs_disc
    cdef long long s = 0, a
    for a in range(1, abs_disc):
        s += _kron(d, a) * a
    if s < 0:
        s = -s
    cdef long long w = 6 if abs_disc == 3 else 4 if abs_disc == 4 else 2
    cdef long long num = w * s
    if num % (2 * abs_disc) != 0:
        raise ValueError(f"character sum not divisible for |D| = {abs_disc}")
    return num // (2 * abs_disc)


def theta_psi_tally(long long x, long long q, long long a):
    """(theta, psi, count) over the progression a mod q up to x."""
    a %= q
    if a < 0:
        a += q
    cdef unsigned char *flags = _sieve_flags(x if x > 2 else 2)
    # Kahan-compensated sums
    cdef double theta = 0.0, ctheta = 0.0
    cdef double extra = 0.0, cextra = 0.0
    cdef double y, tt
    cdef long long count = 0
    cdef long long p, pw
    try:
        for p in range(2, x):
            if flags[p]:
                if p % q == a:
                    y = c_log(<double> p) - ctheta
                    tt = theta + y
                    ctheta = (tt - theta) - y
                    theta = tt
                    count += 1
                if p * p < x:
                    pw = p * p
                    while pw < x:
                        if pw % q == a:
                            y = c_log(<double> p) - cextra
                            tt = extra + y
                            cextra = (tt - extra) - y
                            extra = tt
                        if pw > x // p:
                            break
                        pw *= p
    finally:
        free(flags)
    return theta, theta + extra, count
