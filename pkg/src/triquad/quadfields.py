"""Quadratic field arithmetic.

Class numbers of imaginary fields by two independent routes (reduced
form counting and the finite Dirichlet character sum), real class
numbers by the finite analytic formula, fundamental units by continued
fractions, Louboutin's upper bound, local p-th power tests at places
above p, and the per-field p-rationality criteria built from those
pieces: an imaginary quadratic field is p-rational when p does not
divide its class number; a real one exactly when additionally its
fundamental unit fails to be a local p-th power somewhere above p.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Iterator, Optional

import mpmath

from . import _kernels
from .arith import is_prime, square_part
from .errors import (
    EvenOrSmallPrime,
    NotFundamental,
    NotSquarefree,
    PerfectSquareInput,
    PrecisionFailure,
    UnsupportedPrime,
)

logger = logging.getLogger(__name__)

EULER_GAMMA = 0.5772156649015329
# 1 + gamma - log(pi), the lemma constant; it is at most 1/2
LOUBOUTIN_CONSTANT = 1 + EULER_GAMMA - math.log(math.pi)

# exact class numbers are computed up to this |D|; beyond it the
# rationality verdicts fall back to the Louboutin bound
EXACT_CLASS_NUMBER_LIMIT = 10**7


@dataclass(frozen=True)
class QuadFieldDescriptor:
    """Quadratic field Q(sqrt(kernel)) described by its squarefree kernel."""

    d_input: int
    kernel: int
    D: int
    signature: str  # "real" | "imaginary"


@dataclass(frozen=True)
class ReducedForm:
    """Reduced primitive positive form ax^2 + bxy + cy^2 of discriminant D < 0."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c


@dataclass(frozen=True)
class FundamentalUnit:
    """eps = (u + v*sqrt(kernel))/denom > 1, the smallest unit of the maximal order."""

    kernel: int
    u: int
    v: int
    denom: int
    norm: int

    def embed_float(self) -> float:
        return (self.u + self.v * math.sqrt(self.kernel)) / self.denom

    def log_value(self) -> mpmath.mpf:
        """log(eps) at the current mpmath precision; safe for huge u, v."""
        return mpmath.log(
            (mpmath.mpf(self.u) + mpmath.mpf(self.v) * mpmath.sqrt(self.kernel))
            / self.denom
        )


@dataclass(frozen=True)
class PRationalityVerdict:
    """Outcome of the p-rationality criterion for one quadratic field."""

    field: QuadFieldDescriptor
    p: int
    status: str  # "proved" | "refuted" | "inconclusive"
    class_number: Optional[int]
    class_number_method: str  # "forms" | "dirichlet" | "bound-only" | "analytic"
    bound: Optional[float]
    splitting: Optional[str]  # "split" | "inert" | "ramified" for real fields
    unit: Optional[FundamentalUnit]
    unit_is_pth_power: Optional[tuple[bool, ...]]


def descriptor(d: int) -> QuadFieldDescriptor:
    """Field descriptor for Q(sqrt(d)): squarefree kernel and fundamental D.

    d may carry square factors (e.g. p(p+2) for p = 7); they are stripped.
    Perfect squares are rejected since they would describe Q itself.
    """
    if d in (0, 1):
        raise PerfectSquareInput(f"d = {d} does not define a quadratic field")
    sq = square_part(abs(d))
    if sq.squarefree == 1 and d > 0:
        raise PerfectSquareInput(f"d = {d} is a perfect square")
    kernel = sq.squarefree if d > 0 else -sq.squarefree
    D = kernel if kernel % 4 == 1 else 4 * kernel
    return QuadFieldDescriptor(d, kernel, D, "imaginary" if d < 0 else "real")


def is_fundamental(D: int) -> bool:
    """True when D is a fundamental discriminant (of either sign)."""
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return square_part(abs(D)).root == 1
    if D % 4 == 0:
        q = D // 4
        return q % 4 in (2, 3) and square_part(abs(q)).root == 1
    return False


def _require_fundamental_negative(D: int) -> int:
    if D >= 0 or not is_fundamental(D):
        raise NotFundamental(f"{D} is not a negative fundamental discriminant")
    return -D


# process-level memo of exact imaginary class numbers, keyed by D
_h_memo: dict[int, int] = {}
# optional file-backed store installed by the CLI; must provide
# get(D, method) -> int | None and record(D, h, method)
_store = None


def set_class_number_store(store) -> None:
    """Install (or clear, with None) a persistent class number store."""
    global _store
    _store = store


def reduced_forms(D: int) -> Iterator[ReducedForm]:
    """All reduced primitive forms of fundamental discriminant D < 0.

    Python-level enumeration used for validation; the counting loop in
    the kernels is the fast path.
    """
    abs_d = _require_fundamental_negative(D)
    b = abs_d & 1
    while 3 * b * b <= abs_d:
        m = (b * b + abs_d) // 4
        a = b if b > 1 else 1
        while a * a <= m:
            if m % a == 0:
                c = m // a
                if gcd(gcd(a, b), c) == 1:
                    yield ReducedForm(a, b, c)
                    if b != 0 and b != a and a != c:
                        yield ReducedForm(a, -b, c)
            a += 1
        b += 2


def class_number_imaginary(D: int) -> int:
    """h(D) for D < 0 fundamental, by counting reduced forms."""
    abs_d = _require_fundamental_negative(D)
    h = _h_memo.get(D)
    if h is not None:
        return h
    if _store is not None:
        h = _store.get(D, "forms")
    if h is None:
        h = _kernels.class_number_forms(abs_d)
        if _store is not None:
            _store.record(D, h, "forms")
    _h_memo[D] = h
    return h


def class_number_imaginary_oracle(D: int) -> int:
    """h(D) by the finite Dirichlet character sum; independent of the form count.

    h = w/(2|D|) * |sum chi_D(a) * a|, exact integers throughout.  Never
    consults the memo, so it can serve as a cross-check.
    """
    abs_d = _require_fundamental_negative(D)
    h = _kernels.dirichlet_class_number(abs_d)
    if _store is not None:
        _store.record(D, h, "dirichlet")
    return h


def kronecker_chi(D: int, a: int) -> int:
    """Kronecker symbol (D|a), the quadratic character attached to D."""
    return _kernels.kronecker(D, a)


def louboutin_bound(D: int) -> float:
    """Upper bound for h(D), D < 0: (w*sqrt(d)/(4pi)) * (log d + 1 + gamma - log pi).

    w = 6, 4, 2 for d = |D| = 3, 4, >= 5.  Dominates the class number for
    every fundamental D < 0, which lets rationality verdicts avoid exact
    class number work for huge discriminants.
    """
    if D >= 0:
        raise ValueError(f"needs D < 0, got {D}")
    d = -D
    w = 6 if d == 3 else 4 if d == 4 else 2
    return w * math.sqrt(d) / (4 * math.pi) * (math.log(d) + LOUBOUTIN_CONSTANT)


def class_number_real(D: int, eps: FundamentalUnit) -> int:
    """h(D) for D > 0 fundamental, by the finite character-log-sin sum.

    h = sqrt(D) L(1, chi) / (2 log eps) with
    L(1, chi) = -(1/sqrt(D)) * sum_{a=1}^{D-1} chi_D(a) log sin(pi a / D),
    so the sqrt(D) factors cancel.  The pre-rounding value must sit within
    1e-3 of an integer; one retry at higher precision, then PrecisionFailure.
    """
    if D <= 0 or not is_fundamental(D):
        raise NotFundamental(f"{D} is not a positive fundamental discriminant")
    chi = [kronecker_chi(D, a) for a in range(D)]
    s = math.fsum(
        chi[a] * math.log(math.sin(math.pi * a / D)) for a in range(1, D) if chi[a]
    )
    log_eps = float(eps.log_value())
    raw = -s / (2 * log_eps)
    h = round(raw)
    if abs(raw - h) <= 1e-3 and h >= 1:
        return h
    logger.warning("real class number for D=%d off integer (%.6f), retrying", D, raw)
    with mpmath.workdps(60):
        ssum = mpmath.fsum(
            chi[a] * mpmath.log(mpmath.sin(mpmath.pi * a / D))
            for a in range(1, D)
            if chi[a]
        )
        raw2 = -ssum / (2 * eps.log_value())
        h2 = int(mpmath.nint(raw2))
        if abs(raw2 - h2) <= 1e-3 and h2 >= 1:
            return h2
    raise PrecisionFailure(f"class number for D = {D} not near an integer: {raw!r}")


def fundamental_unit(kernel: int) -> FundamentalUnit:
    """Fundamental unit of Q(sqrt(kernel)) by the continued fraction of omega.

    omega = sqrt(kernel) for kernel = 2, 3 mod 4, else (1 + sqrt(kernel))/2.
    The convergent p/q just before the period of omega closes gives
    eps = q_{l-1} * omega + (q_l - a0 * q_{l-1}), of norm (-1)^l; both the
    norm equation and eps > 1 are verified exactly before returning.
    """
    if kernel <= 1:
        raise ValueError(f"kernel must exceed 1, got {kernel}")
    if square_part(kernel).root != 1:
        raise NotSquarefree(f"kernel {kernel} has a square factor")
    d = kernel
    if d % 4 == 1:
        p0, q0 = 1, 2
    else:
        p0, q0 = 0, 1
    s = isqrt(d)
    a0 = (p0 + s) // q0
    # complete quotient alpha_1 = (P + sqrt d)/Q; the expansion is purely
    # periodic from here, so recurrence of (P, Q) marks the period end
    big_p = a0 * q0 - p0
    big_q = (d - big_p * big_p) // q0
    anchor = (big_p, big_q)
    q_prev, q_cur = 0, 1
    length = 0
    while True:
        a = (big_p + s) // big_q
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        length += 1
        big_p = a * big_q - big_p
        big_q = (d - big_p * big_p) // big_q
        if (big_p, big_q) == anchor:
            break
    v_omega = q_prev
    u_omega = q_cur - a0 * q_prev
    if d % 4 == 1:
        # u_omega + v_omega*(1+sqrt d)/2 = (2u+v + v sqrt d)/2
        u, v, denom = 2 * u_omega + v_omega, v_omega, 2
        if u % 2 == 0 and v % 2 == 0:
            u //= 2
            v //= 2
            denom = 1
    else:
        u, v, denom = u_omega, v_omega, 1
    norm_num = u * u - d * v * v
    norm = norm_num // (denom * denom)
    assert norm * denom * denom == norm_num and abs(norm) == 1, (kernel, u, v, denom)
    assert norm == (-1) ** length
    assert u >= 1 and v >= 1 and u + v * s >= denom  # eps > 1
    return FundamentalUnit(kernel, u, v, denom, norm)


@dataclass(frozen=True)
class ExplicitUnitRecord:
    """One member of the closed-form unit family attached to a flanked prime."""

    label: str
    d: int
    u: int
    v: int
    denom: int
    norm: int
    kernel: int
    kernel_matches: bool  # d itself squarefree
    fundamental: Optional[FundamentalUnit]
    power_index: Optional[int]  # claimed unit = fundamental**power_index


def _as_kernel_pair(u: int, v: int, denom: int, root: int) -> tuple[Fraction, Fraction]:
    # (u + v*sqrt(d))/denom with d = root^2 * kernel, as x + y*sqrt(kernel)
    return Fraction(u, denom), Fraction(v * root, denom)


def _unit_power_index(
    eps: FundamentalUnit, target: tuple[Fraction, Fraction], cap: int = 200
) -> Optional[int]:
    """k with eps**k equal to target (exact), or None within the cap."""
    d = eps.kernel
    x = (Fraction(eps.u, eps.denom), Fraction(eps.v, eps.denom))
    acc = x
    for k in range(1, cap + 1):
        if acc == target:
            return k
        acc = (acc[0] * x[0] + d * acc[1] * x[1], acc[0] * x[1] + acc[1] * x[0])
    return None


def explicit_unit_family(p: int, compare_fundamental: bool = True) -> list[ExplicitUnitRecord]:
    """The three closed-form units attached to p: norms verified exactly.

    (p+1) + sqrt(p(p+2)), (p-1) + sqrt(p(p-2)), (p + sqrt(p^2-4))/2, each
    of norm 1 by the polynomial identities (p+-1)^2 - p(p+-2) = 1 and
    (p^2 - (p^2-4))/4 = 1.  When d is squarefree the unit is compared to
    the continued-fraction fundamental unit (and is expected to equal it);
    otherwise the record flags the kernel mismatch and reports the power
    relation in the kernel field.  compare_fundamental=False skips the
    continued-fraction work and leaves those fields None.
    """
    if p < 5 or not is_prime(p):
        raise UnsupportedPrime(f"family needs a prime p >= 5, got {p}")
    claims = [
        ("p(p+2)", p * (p + 2), p + 1, 1, 1),
        ("p(p-2)", p * (p - 2), p - 1, 1, 1),
        ("(p-2)(p+2)", p * p - 4, p, 1, 2),
    ]
    out = []
    for label, d, u, v, denom in claims:
        norm_num = u * u - d * v * v
        assert norm_num == denom * denom, (label, p)  # the defining identity
        sq = square_part(d)
        kernel = sq.squarefree
        fund = None
        power = None
        if compare_fundamental:
            fund = fundamental_unit(kernel)
            power = _unit_power_index(fund, _as_kernel_pair(u, v, denom, sq.root))
        out.append(
            ExplicitUnitRecord(
                label, d, u, v, denom, 1, kernel, sq.root == 1, fund, power
            )
        )
    return out


# --- local p-th power tests ---------------------------------------------


def _sqrt_mod_prime(a: int, p: int) -> int:
    """Square root of a mod p (a must be a residue); Tonelli-Shanks."""
    a %= p
    if a == 0:
        return 0
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, tt = 0, t
        while tt != 1:
            tt = tt * tt % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def _qmul(x, y, d, mod):
    a, b = x
    c, e = y
    return (a * c + d * b * e) % mod, (a * e + b * c) % mod


def _qpow(x, n, d, mod):
    r = (1, 0)
    while n:
        if n & 1:
            r = _qmul(r, x, d, mod)
        x = _qmul(x, x, d, mod)
        n >>= 1
    return r


def _is_pth_power_split(z: int, p: int) -> bool:
    """z in Z_p^x is a p-th power iff z^(p-1) = 1 mod p^2."""
    return pow(z, p - 1, p * p) == 1


def _is_pth_power_inert(a: int, b: int, kernel: int, p: int) -> bool:
    """(a + b*t), t^2 = kernel, in the unramified quadratic extension."""
    return _qpow((a, b), p * p - 1, kernel, p * p) == (1, 0)


def _is_pth_power_ramified(a: int, b: int, kernel: int, p: int) -> bool:
    """(a + b*t), t = sqrt(kernel) a uniformizer: test z^(p-1) = 1 mod pi^3.

    pi^3 O meets Z_p[t] in p^2 Z_p + p pi Z_p, so the condition reads:
    constant coefficient 1 mod p^2 and t-coefficient 0 mod p.
    """
    w = _qpow((a, b), p - 1, kernel, p * p)
    return w[0] == 1 and w[1] % p == 0


def unit_is_pth_power_locally(
    kernel: int, eps: FundamentalUnit, p: int
) -> tuple[bool, ...]:
    """Per-place booleans: is eps a p-th power in the completion above p?

    Split p (chi_D(p) = +1): two places, one per square root of kernel
    mod p^2.  Inert (chi = -1): one place, tested in the quadratic
    extension ring mod p^2.  Ramified (chi = 0): one place, tested through
    eps^(p-1) mod pi^3.
    """
    if p < 5:
        raise EvenOrSmallPrime(f"local test needs p >= 5, got {p}")
    if kernel == 1 or square_part(abs(kernel)).root != 1:
        raise NotSquarefree(f"kernel {kernel} must be squarefree, != 1")
    D = kernel if kernel % 4 == 1 else 4 * kernel
    chi = kronecker_chi(D, p)
    p2 = p * p
    dinv = pow(eps.denom, -1, p2)
    if chi == 1:
        r0 = _sqrt_mod_prime(kernel, p)
        # Hensel: refine r0 so r^2 = kernel mod p^2
        r = (r0 - (r0 * r0 - kernel) * pow(2 * r0, -1, p2)) % p2
        assert (r * r - kernel) % p2 == 0
        return tuple(
            _is_pth_power_split((eps.u + eps.v * root) * dinv % p2, p)
            for root in (r, p2 - r)
        )
    a = eps.u * dinv % p2
    b = eps.v * dinv % p2
    if chi == -1:
        return (_is_pth_power_inert(a, b, kernel, p),)
    return (_is_pth_power_ramified(a, b, kernel, p),)


def p_rationality(field: QuadFieldDescriptor, p: int) -> PRationalityVerdict:
    """Decide p-rationality of a quadratic field by the class-number criteria.

    Imaginary: p not dividing h suffices; h is computed exactly for
    |D| <= 1e7, otherwise the Louboutin bound below p proves the same.
    A failed imaginary check is inconclusive, never refuting.  Real:
    p-rational exactly when p does not divide h and the fundamental unit
    is not a local p-th power at some place above p.
    """
    if p < 5 or not is_prime(p):
        raise UnsupportedPrime(f"p-rationality machinery needs a prime p >= 5, got {p}")
    if field.signature == "imaginary":
        if -field.D <= EXACT_CLASS_NUMBER_LIMIT:
            h = class_number_imaginary(field.D)
            status = "proved" if h % p != 0 else "inconclusive"
            return PRationalityVerdict(
                field, p, status, h, "forms", None, None, None, None
            )
        bound = louboutin_bound(field.D)
        if _store is not None:
            _store.record(field.D, bound, "bound-only")
        status = "proved" if bound < p else "inconclusive"
        return PRationalityVerdict(
            field, p, status, None, "bound-only", bound, None, None, None
        )
    eps = fundamental_unit(field.kernel)
    h = class_number_real(field.D, eps)
    flags = unit_is_pth_power_locally(field.kernel, eps, p)
    chi = kronecker_chi(field.D, p)
    splitting = "split" if chi == 1 else "inert" if chi == -1 else "ramified"
    ok = h % p != 0 and not all(flags)
    return PRationalityVerdict(
        field,
        p,
        "proved" if ok else "refuted",
        h,
        "analytic",
        None,
        splitting,
        eps,
        flags,
    )
