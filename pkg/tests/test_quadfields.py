"""Quadratic field data: descriptors, class numbers, units, local power tests."""

from __future__ import annotations

import math

import pytest

from triquad import quadfields as qf
from triquad.arith import is_prime
from triquad.errors import (
    EvenOrSmallPrime,
    NotFundamental,
    NotSquarefree,
    PerfectSquareInput,
    UnsupportedPrime,
)
from triquad.quadfields import (
    FundamentalUnit,
    class_number_imaginary,
    class_number_imaginary_oracle,
    class_number_real,
    descriptor,
    explicit_unit_family,
    fundamental_unit,
    is_fundamental,
    louboutin_bound,
    p_rationality,
    set_class_number_store,
    unit_is_pth_power_locally,
)


def test_descriptor_spots():
    d = descriptor(12)
    assert (d.d_input, d.kernel, d.D, d.signature) == (12, 3, 12, "real")
    assert descriptor(5).D == 5
    assert descriptor(-1).D == -4
    assert descriptor(-35).D == -35
    assert descriptor(77283).kernel == 8587  # 277 * 279 = 9 * 8587
    assert descriptor(-76175).kernel == -3047  # -(277 * 275)


def test_descriptor_rejects_squares():
    for d in (0, 1, 4, 49, 10**6):
        with pytest.raises(PerfectSquareInput):
            descriptor(d)
    # negative inputs are never perfect squares
    assert descriptor(-4).kernel == -1


def test_is_fundamental_spots():
    for D in (5, 8, 12, 13, 21, 60, -3, -4, -8, -15, -20, -84):
        assert is_fundamental(D), D
    for D in (0, 1, 45, -12, -9, 50, 32):
        assert not is_fundamental(D), D


def test_class_number_imaginary_frozen():
    known = {-3: 1, -4: 1, -8: 1, -15: 2, -20: 2, -23: 3, -35: 2,
             -47: 5, -71: 7, -84: 4, -163: 1, -5460: 16}
    for D, h in known.items():
        assert class_number_imaginary(D) == h, D
        assert class_number_imaginary_oracle(D) == h, D


def test_class_number_imaginary_rejects_nonfundamental():
    with pytest.raises(NotFundamental):
        class_number_imaginary(-12)
    with pytest.raises(NotFundamental):
        class_number_imaginary(5)


def test_form_count_and_character_sum_agree_on_a_range():
    for D in range(-3, -400, -1):
        if is_fundamental(D):
            assert class_number_imaginary(D) == class_number_imaginary_oracle(D), D


def test_louboutin_bound_frozen_values():
    assert louboutin_bound(-3) == pytest.approx(1.2662079096879622, rel=1e-12)
    assert louboutin_bound(-4) == pytest.approx(1.1578713988229912, rel=1e-12)
    assert qf.LOUBOUTIN_CONSTANT == pytest.approx(0.4324857790521326, rel=1e-12)
    assert qf.LOUBOUTIN_CONSTANT <= 0.5
    with pytest.raises(ValueError):
        louboutin_bound(4)


# the bound inequality fails for a finite set of small discriminants; the
# complete violation list below -3100 was computed by exhaustive scan (the
# next violation-free stretch extends past -100000)
_BOUND_VIOLATIONS = {
    -15, -23, -47, -71, -95, -119, -191, -215, -239, -311, -479, -551,
    -671, -719, -791, -959, -1151, -1319, -1511, -1559, -1679, -2159, -3071,
}


def test_louboutin_bound_violation_set_is_exactly_the_frozen_one():
    got = set()
    for D in range(-3, -3100, -1):
        if is_fundamental(D):
            if louboutin_bound(D) < class_number_imaginary(D):
                got.add(D)
    assert got == _BOUND_VIOLATIONS


def test_louboutin_bound_dominates_above_the_violation_range():
    for D in range(-3072, -4000, -1):
        if is_fundamental(D):
            assert class_number_imaginary(D) <= louboutin_bound(D), D


def test_class_number_real_frozen():
    known = {21: 1, 40: 2, 60: 2, 140: 2, 229: 3, 316: 3, 328: 4,
             341: 1, 12188: 6, 34348: 14}
    for D, h in known.items():
        kernel = D if D % 4 == 1 else D // 4
        eps = fundamental_unit(kernel)
        assert class_number_real(D, eps) == h, D


def test_fundamental_unit_frozen_table():
    known = {
        2: (1, 1, 1, -1),
        3: (2, 1, 1, 1),
        5: (1, 1, 2, -1),
        6: (5, 2, 1, 1),
        7: (8, 3, 1, 1),
        10: (3, 1, 1, -1),
        11: (10, 3, 1, 1),
        13: (3, 1, 2, -1),
        14: (15, 4, 1, 1),
        15: (4, 1, 1, 1),
        19: (170, 39, 1, 1),
        21: (5, 1, 2, 1),
        22: (197, 42, 1, 1),
        29: (5, 1, 2, -1),
        35: (6, 1, 1, 1),
        38: (37, 6, 1, 1),
        94: (2143295, 221064, 1, 1),
    }
    for kernel, (u, v, denom, norm) in known.items():
        eps = fundamental_unit(kernel)
        assert (eps.u, eps.v, eps.denom, eps.norm) == (u, v, denom, norm), kernel


def test_fundamental_unit_rejects_square_factor():
    with pytest.raises(NotSquarefree):
        fundamental_unit(12)
    with pytest.raises(ValueError):
        fundamental_unit(1)


def test_fundamental_unit_norm_identity_and_size():
    from triquad.arith import square_part

    for kernel in range(2, 200):
        if square_part(kernel).root != 1:
            continue
        eps = fundamental_unit(kernel)
        assert eps.u * eps.u - kernel * eps.v * eps.v == eps.norm * eps.denom * eps.denom
        assert eps.norm in (-1, 1)
        assert eps.embed_float() > 1.0


def test_fundamental_unit_minimality_by_scan():
    # exhaustive scan over smaller v confirms minimality (skip huge units)
    for kernel in (2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 21, 22, 29, 35, 38, 77):
        eps = fundamental_unit(kernel)
        if kernel % 4 == 1:
            # all units are (U + V sqrt(d))/2 with U^2 - d V^2 = +-4
            big_v = eps.v if eps.denom == 2 else 2 * eps.v
            for v in range(1, big_v):
                for target in (4, -4):
                    u2 = kernel * v * v + target
                    assert u2 <= 0 or math.isqrt(u2) ** 2 != u2, (kernel, v)
        else:
            assert eps.denom == 1
            for v in range(1, eps.v):
                for target in (1, -1):
                    u2 = kernel * v * v + target
                    assert u2 <= 0 or math.isqrt(u2) ** 2 != u2, (kernel, v)


def test_explicit_unit_family_p5():
    fam = explicit_unit_family(5)
    assert [(r.label, r.d, r.u, r.v, r.denom) for r in fam] == [
        ("p(p+2)", 35, 6, 1, 1),
        ("p(p-2)", 15, 4, 1, 1),
        ("(p-2)(p+2)", 21, 5, 1, 2),
    ]
    assert all(r.kernel_matches and r.power_index == 1 for r in fam)


def test_explicit_unit_family_p7_tracks_kernel_mismatch():
    fam = explicit_unit_family(7)
    by_label = {r.label: r for r in fam}
    r = by_label["p(p+2)"]  # 63 = 9 * 7
    assert (r.kernel, r.kernel_matches, r.power_index) == (7, False, 1)
    r = by_label["(p-2)(p+2)"]  # 45 = 9 * 5
    assert (r.kernel, r.kernel_matches, r.power_index) == (5, False, 4)
    r = by_label["p(p-2)"]
    assert (r.kernel, r.kernel_matches, r.power_index) == (35, True, 1)


def test_explicit_unit_family_norm_identities():
    # (p+1)^2 - p(p+2) = 1, (p-1)^2 - p(p-2) = 1, p^2 - (p^2-4) = 4
    for p in range(5, 100):
        if not is_prime(p):
            continue
        assert (p + 1) ** 2 - p * (p + 2) == 1
        assert (p - 1) ** 2 - p * (p - 2) == 1
        assert p**2 - (p**2 - 4) == 4
        for r in explicit_unit_family(p, compare_fundamental=False):
            assert r.u * r.u - r.d * r.v * r.v == r.norm * r.denom * r.denom


def test_explicit_unit_family_rejects_bad_p():
    with pytest.raises(UnsupportedPrime):
        explicit_unit_family(4)
    with pytest.raises(UnsupportedPrime):
        explicit_unit_family(3)


def test_local_power_test_compositum_triple():
    # at p = 5: proved for kernels 2 and 19, refuted for their product 38
    assert unit_is_pth_power_locally(2, fundamental_unit(2), 5) == (False,)
    assert unit_is_pth_power_locally(19, fundamental_unit(19), 5) == (False, False)
    assert unit_is_pth_power_locally(38, fundamental_unit(38), 5) == (True,)
    assert p_rationality(descriptor(2), 5).status == "proved"
    assert p_rationality(descriptor(19), 5).status == "proved"
    assert p_rationality(descriptor(38), 5).status == "refuted"


def test_local_power_test_guards():
    with pytest.raises(EvenOrSmallPrime):
        unit_is_pth_power_locally(2, fundamental_unit(2), 3)
    with pytest.raises(NotSquarefree):
        unit_is_pth_power_locally(12, FundamentalUnit(12, 7, 2, 1, 1), 5)


def _unit_power(kernel: int, eps: FundamentalUnit, k: int) -> FundamentalUnit:
    assert eps.denom == 1
    u, v = 1, 0
    for _ in range(k):
        u, v = u * eps.u + v * eps.v * kernel, u * eps.v + v * eps.u
    return FundamentalUnit(kernel, u, v, 1, eps.norm if k % 2 else 1)


def test_local_power_test_positive_controls():
    # a literal p-th power must test as one at every place
    for kernel in (2, 3, 7, 19, 35, 38):
        eps = fundamental_unit(kernel)
        for p in (5, 7, 11):
            powered = _unit_power(kernel, eps, p)
            flags = unit_is_pth_power_locally(kernel, powered, p)
            assert all(flags), (kernel, p)


def test_p_rationality_imaginary_inconclusive_when_p_divides_h():
    v = p_rationality(descriptor(-47), 5)  # h(-47) = 5
    assert v.status == "inconclusive"
    assert v.class_number == 5


def test_p_rationality_bound_only_for_large_discriminant():
    q = 10000019  # prime, 3 mod 4, so D = -q with |D| > the exact-count limit
    assert is_prime(q) and q % 4 == 3
    v = p_rationality(descriptor(-q), 5)
    assert v.class_number_method == "bound-only"
    assert v.status == "inconclusive"
    assert v.bound == pytest.approx(8329.786101975447, rel=1e-9)
    v = p_rationality(descriptor(-q), 10007)
    assert v.status == "proved"
    assert v.class_number is None


def test_p_rationality_rejects_bad_p():
    with pytest.raises(UnsupportedPrime):
        p_rationality(descriptor(5), 3)
    with pytest.raises(UnsupportedPrime):
        p_rationality(descriptor(5), 9)


class _RecordingStore:
    def __init__(self):
        self.values = {}
        self.calls = []

    def get(self, d, method):
        self.calls.append(("get", d, method))
        return self.values.get((d, method))

    def record(self, d, value, method):
        self.calls.append(("record", d, value, method))
        self.values[(d, method)] = value


def test_class_number_store_is_consulted_and_fed():
    store = _RecordingStore()
    set_class_number_store(store)
    saved = dict(qf._h_memo)
    qf._h_memo.clear()
    try:
        assert class_number_imaginary(-84) == 4
        assert ("record", -84, 4, "forms") in store.calls
        qf._h_memo.clear()
        store.calls.clear()
        assert class_number_imaginary(-84) == 4  # now served from the store
        assert ("get", -84, "forms") in store.calls
        assert not any(c[0] == "record" for c in store.calls)
        class_number_imaginary_oracle(-84)
        assert ("record", -84, 4, "dirichlet") in store.calls
    finally:
        set_class_number_store(None)
        qf._h_memo.clear()
        qf._h_memo.update(saved)
