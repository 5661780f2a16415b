"""Seven-subfield certificates: pipeline, serialization, verification."""

from __future__ import annotations

import dataclasses

import pytest

from triquad.certify import (
    certify_triquadratic,
    discriminant_bound_check,
    parse_certificate,
    serialize_certificate,
    subfield_kernels,
    verify_certificate,
)
from triquad.errors import NotFlanked, UnsupportedPrime
from triquad.search import direct_scan


def test_subfield_kernels_frozen():
    assert subfield_kernels(5) == [35, 15, 21, -1, -35, -15, -21]
    assert subfield_kernels(277) == [8587, 3047, 341, -1, -8587, -3047, -341]


def test_certify_5_is_certified_with_exact_class_numbers():
    cert = certify_triquadratic(5)
    assert cert.conclusion == "certified"
    assert cert.flank is None and cert.discriminant_checks is None
    by_kernel = {v.field.kernel: v for v in cert.subfields}
    assert by_kernel[-35].class_number == 2
    assert by_kernel[-15].class_number == 2
    assert by_kernel[-21].class_number == 4  # D = -84
    assert by_kernel[-1].class_number == 1
    assert all(v.status == "proved" for v in cert.subfields)
    # real side evidence is populated
    assert by_kernel[35].unit is not None
    assert by_kernel[35].splitting == "ramified"
    assert by_kernel[21].splitting == "split"
    assert by_kernel[21].unit_is_pth_power == (False, False)


def test_certify_277_with_flank_witnesses():
    cert = certify_triquadratic(277, flank_exponent=0.5)
    assert cert.conclusion == "certified"
    assert cert.flank == (3, 5, 0.5)
    hs = [v.class_number for v in cert.subfields]
    assert hs == [14, 6, 1, 1, 18, 38, 28]
    assert [c.ok for c in cert.discriminant_checks] == [True, True, True]
    assert [c.abs_discriminant for c in cert.discriminant_checks] == [8587, 3047, 1364]


def test_certify_rejects_bad_p():
    with pytest.raises(UnsupportedPrime):
        certify_triquadratic(3)
    with pytest.raises(UnsupportedPrime):
        certify_triquadratic(9)
    with pytest.raises(UnsupportedPrime):
        certify_triquadratic(-7)


def test_certify_not_flanked():
    # 5 + 2 = 7 is squarefree, so 5 can never carry flank witnesses
    with pytest.raises(NotFlanked):
        certify_triquadratic(5, flank_exponent=0.5)


def test_round_trip_is_byte_exact():
    for cert in (certify_triquadratic(5), certify_triquadratic(277, 0.5)):
        text = serialize_certificate(cert)
        assert parse_certificate(text) == cert
        assert serialize_certificate(parse_certificate(text)) == text
        # re-running the pipeline reproduces the same bytes
        again = certify_triquadratic(cert.p, cert.flank[2] if cert.flank else None)
        assert serialize_certificate(again) == text


def test_parse_rejects_malformed():
    with pytest.raises(ValueError):
        parse_certificate("not a certificate\n")
    with pytest.raises(ValueError):
        parse_certificate("schema: cert-v2\np: 5\n")


def test_verify_accepts_genuine_certificates():
    assert verify_certificate(certify_triquadratic(5))
    assert verify_certificate(certify_triquadratic(277, flank_exponent=0.5))


def test_verify_rejects_tampering():
    cert = certify_triquadratic(5)
    v0 = cert.subfields[0]

    bad_h = dataclasses.replace(v0, class_number=3)
    assert not verify_certificate(
        dataclasses.replace(cert, subfields=(bad_h,) + cert.subfields[1:])
    )

    bad_unit = dataclasses.replace(
        v0, unit=dataclasses.replace(v0.unit, u=v0.unit.u + 1)
    )
    assert not verify_certificate(
        dataclasses.replace(cert, subfields=(bad_unit,) + cert.subfields[1:])
    )

    # six subfields is structurally invalid
    assert not verify_certificate(
        dataclasses.replace(cert, subfields=cert.subfields[:6])
    )

    assert not verify_certificate(dataclasses.replace(cert, conclusion="failed"))
    assert not verify_certificate(dataclasses.replace(cert, p=7))

    flipped = dataclasses.replace(v0, status="refuted")
    assert not verify_certificate(
        dataclasses.replace(cert, subfields=(flipped,) + cert.subfields[1:])
    )


def test_verify_rejects_forged_flank_section():
    cert = certify_triquadratic(277, flank_exponent=0.5)
    assert not verify_certificate(dataclasses.replace(cert, flank=(5, 3, 0.5)))
    assert not verify_certificate(dataclasses.replace(cert, discriminant_checks=None))
    bare = certify_triquadratic(277)
    assert not verify_certificate(
        dataclasses.replace(bare, discriminant_checks=cert.discriminant_checks)
    )


def test_discriminant_bound_check_frozen():
    assert discriminant_bound_check(277, 0.5) == (True, True, True)
    with pytest.raises(NotFlanked):
        discriminant_bound_check(277, 2.0)  # 3 < (log 277)^2
    with pytest.raises(NotFlanked):
        discriminant_bound_check(5, 0.5)
    with pytest.raises(UnsupportedPrime):
        discriminant_bound_check(10, 0.5)


def test_bound_check_holds_for_full_square_part_witnesses():
    # witnesses equal to the complete square roots satisfy the ceilings
    for rec in direct_scan(2000, 0.4):
        if rec.p >= 5:
            assert discriminant_bound_check(rec.p, 0.4) == (True, True, True)


def test_certify_7_aggregates_consistently():
    cert = certify_triquadratic(7)
    statuses = [v.status for v in cert.subfields]
    if all(s == "proved" for s in statuses):
        assert cert.conclusion == "certified"
    elif "refuted" in statuses:
        assert cert.conclusion == "failed"
    else:
        assert cert.conclusion == "inconclusive"
    assert verify_certificate(cert)
