"""Seven-subfield p-rationality certificates for triquadratic fields.

For a prime p >= 5 the field K = Q(sqrt(p(p+2)), sqrt(p(p-2)), i) is
abelian of degree 8 over Q, and its seven quadratic subfields have
kernels equal to the squarefree parts of p(p+2), p(p-2), (p+2)(p-2),
-1, -p(p+2), -p(p-2), -(p+2)(p-2).  Since p does not divide 8,
p-rationality of all seven subfields lifts to K.  This module runs the
per-field criteria, assembles the evidence into a machine-checkable
certificate, serializes it as stable key-value text (schema cert-v1)
and re-validates certificates from scratch.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Optional

from .arith import is_prime, square_part
from .errors import NotFlanked, TriquadError, UnsupportedPrime
from .quadfields import (
    EXACT_CLASS_NUMBER_LIMIT,
    FundamentalUnit,
    PRationalityVerdict,
    QuadFieldDescriptor,
    class_number_imaginary_oracle,
    class_number_real,
    descriptor,
    fundamental_unit,
    louboutin_bound,
    p_rationality,
    unit_is_pth_power_locally,
)

logger = logging.getLogger(__name__)

SCHEMA = "cert-v1"

_ARGUMENT = (
    "all seven quadratic subfields are p-rational; the compositum is abelian "
    "over Q of degree 8, and p >= 5 does not divide 8, so p-rationality "
    "propagates from the cyclic subextensions to the full field"
)


@dataclass(frozen=True)
class DiscriminantBoundCheck:
    """|D| of an imaginary subfield against its flanking-derived ceiling."""

    index: int  # 1-based position of the subfield in the certificate
    abs_discriminant: int
    limit: float
    ok: bool


@dataclass(frozen=True)
class TriquadraticCertificate:
    p: int
    subfields: tuple[PRationalityVerdict, ...]
    flank: Optional[tuple[int, int, float]]  # (m, n, A) when supplied
    discriminant_checks: Optional[tuple[DiscriminantBoundCheck, ...]]
    conclusion: str  # "certified" | "failed" | "inconclusive"


def subfield_kernels(p: int) -> list[int]:
    """The seven kernels in fixed order, as squarefree parts with sign."""
    products = [
        p * (p + 2),
        p * (p - 2),
        (p + 2) * (p - 2),
        -1,
        -p * (p + 2),
        -p * (p - 2),
        -(p + 2) * (p - 2),
    ]
    return [descriptor(d).kernel for d in products]


def _conclusion(verdicts) -> str:
    statuses = [v.status for v in verdicts]
    if all(s == "proved" for s in statuses):
        return "certified"
    if any(s == "refuted" for s in statuses):
        return "failed"
    return "inconclusive"


def _flank_witnesses(p: int, A: float) -> tuple[int, int]:
    m = square_part(p + 2).root
    n = square_part(p - 2).root
    thr = A * math.log(math.log(p))
    if m == 1 or n == 1 or math.log(m) <= thr + 1e-9 or math.log(n) <= thr + 1e-9:
        raise NotFlanked(
            f"p = {p} has square parts ({m}, {n}), "
            f"not both above (log p)^{A}"
        )
    return m, n


def _bound_records(p: int, A: float) -> list[DiscriminantBoundCheck]:
    _flank_witnesses(p, A)
    lp = math.log(p)
    specs = [
        (5, -p * (p + 2), 4 * p * (p + 2) / lp ** (2 * A)),
        (6, -p * (p - 2), 4 * p * (p - 2) / lp ** (2 * A)),
        (7, -(p + 2) * (p - 2), 4 * (p + 2) * (p - 2) / lp ** (4 * A)),
    ]
    out = []
    for index, d, limit in specs:
        abs_disc = abs(descriptor(d).D)
        out.append(DiscriminantBoundCheck(index, abs_disc, limit, abs_disc <= limit))
    return out


def discriminant_bound_check(p: int, A: float) -> tuple[bool, bool, bool]:
    """Imaginary-subfield discriminant ceilings from the flanking condition.

    For p flanked with witnesses m, n > (log p)^A the three imaginary
    subfield discriminants obey |D| <= 4p(p+2)/(log p)^(2A),
    4p(p-2)/(log p)^(2A) and 4(p+2)(p-2)/(log p)^(4A).  Raises NotFlanked
    when p does not meet the threshold at exponent A.
    """
    if p < 5 or not is_prime(p):
        raise UnsupportedPrime(f"needs a prime p >= 5, got {p}")
    r = _bound_records(p, A)
    return r[0].ok, r[1].ok, r[2].ok


def certify_triquadratic(
    p: int, flank_exponent: Optional[float] = None
) -> TriquadraticCertificate:
    """Run the p-rationality criterion on all seven subfields of the field of p.

    Real subfields are expected to come out proved for every p >= 5 (their
    fundamental units have the closed forms attached to the flanking
    structure); the computation re-derives this rather than assuming it.
    When flank_exponent is given, p must be square-flanked at that
    exponent and the certificate additionally carries the discriminant
    bound section.  Pure function of its arguments; repeated runs
    serialize byte-identically.
    """
    if p < 5 or not is_prime(p):
        raise UnsupportedPrime(f"certification needs a prime p >= 5, got {p}")
    products = [
        p * (p + 2),
        p * (p - 2),
        (p + 2) * (p - 2),
        -1,
        -p * (p + 2),
        -p * (p - 2),
        -(p + 2) * (p - 2),
    ]
    verdicts = tuple(p_rationality(descriptor(d), p) for d in products)
    flank = None
    checks = None
    if flank_exponent is not None:
        m, n = _flank_witnesses(p, flank_exponent)
        flank = (m, n, flank_exponent)
        checks = tuple(_bound_records(p, flank_exponent))
    return TriquadraticCertificate(p, verdicts, flank, checks, _conclusion(verdicts))


# --- serialization --------------------------------------------------------


def _bool_text(value: bool) -> str:
    return "true" if value else "false"


def serialize_certificate(cert: TriquadraticCertificate) -> str:
    """Stable key-value text, schema cert-v1; all integers decimal."""
    lines = [
        f"schema: {SCHEMA}",
        f"p: {cert.p}",
        f"conclusion: {cert.conclusion}",
        f"argument: {_ARGUMENT}",
        f"subfield_count: {len(cert.subfields)}",
    ]
    if cert.flank is not None:
        m, n, a = cert.flank
        lines += [f"flank_m: {m}", f"flank_n: {n}", f"flank_A: {a!r}"]
    for i, v in enumerate(cert.subfields, start=1):
        k = f"subfield.{i}"
        lines.append(f"{k}.input: {v.field.d_input}")
        lines.append(f"{k}.kernel: {v.field.kernel}")
        lines.append(f"{k}.discriminant: {v.field.D}")
        lines.append(f"{k}.signature: {v.field.signature}")
        lines.append(f"{k}.status: {v.status}")
        lines.append(f"{k}.class_number_method: {v.class_number_method}")
        if v.class_number is not None:
            lines.append(f"{k}.class_number: {v.class_number}")
        if v.bound is not None:
            lines.append(f"{k}.bound: {v.bound!r}")
        if v.unit is not None:
            lines.append(f"{k}.unit_u: {v.unit.u}")
            lines.append(f"{k}.unit_v: {v.unit.v}")
            lines.append(f"{k}.unit_denom: {v.unit.denom}")
            lines.append(f"{k}.unit_norm: {v.unit.norm}")
        if v.splitting is not None:
            lines.append(f"{k}.splitting: {v.splitting}")
        if v.unit_is_pth_power is not None:
            flags = ",".join(_bool_text(b) for b in v.unit_is_pth_power)
            lines.append(f"{k}.unit_is_pth_power: {flags}")
    if cert.discriminant_checks is not None:
        for c in cert.discriminant_checks:
            k = f"bound_check.{c.index}"
            lines.append(f"{k}.abs_discriminant: {c.abs_discriminant}")
            lines.append(f"{k}.limit: {c.limit!r}")
            lines.append(f"{k}.ok: {_bool_text(c.ok)}")
    return "\n".join(lines) + "\n"


def parse_certificate(text: str) -> TriquadraticCertificate:
    """Inverse of serialize_certificate; raises ValueError on malformed text."""
    fields: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if ": " not in line:
            raise ValueError(f"malformed certificate line: {raw!r}")
        key, value = line.split(": ", 1)
        fields[key] = value
    if fields.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema: {fields.get('schema')!r}")
    p = int(fields["p"])
    count = int(fields["subfield_count"])
    verdicts = []
    for i in range(1, count + 1):
        k = f"subfield.{i}"
        kernel = int(fields[f"{k}.kernel"])
        disc = int(fields[f"{k}.discriminant"])
        signature = fields[f"{k}.signature"]
        field = QuadFieldDescriptor(
            int(fields[f"{k}.input"]), kernel, disc, signature
        )
        h = fields.get(f"{k}.class_number")
        bound = fields.get(f"{k}.bound")
        unit = None
        if f"{k}.unit_u" in fields:
            unit = FundamentalUnit(
                kernel,
                int(fields[f"{k}.unit_u"]),
                int(fields[f"{k}.unit_v"]),
                int(fields[f"{k}.unit_denom"]),
                int(fields[f"{k}.unit_norm"]),
            )
        flags = fields.get(f"{k}.unit_is_pth_power")
        verdicts.append(
            PRationalityVerdict(
                field,
                p,
                fields[f"{k}.status"],
                None if h is None else int(h),
                fields[f"{k}.class_number_method"],
                None if bound is None else float(bound),
                fields.get(f"{k}.splitting"),
                unit,
                None
                if flags is None
                else tuple(part == "true" for part in flags.split(",")),
            )
        )
    flank = None
    if "flank_m" in fields:
        flank = (
            int(fields["flank_m"]),
            int(fields["flank_n"]),
            float(fields["flank_A"]),
        )
    checks = None
    check_indices = sorted(
        int(key.split(".")[1])
        for key in fields
        if key.startswith("bound_check.") and key.endswith(".ok")
    )
    if check_indices:
        checks = tuple(
            DiscriminantBoundCheck(
                i,
                int(fields[f"bound_check.{i}.abs_discriminant"]),
                float(fields[f"bound_check.{i}.limit"]),
                fields[f"bound_check.{i}.ok"] == "true",
            )
            for i in check_indices
        )
    return TriquadraticCertificate(
        p, tuple(verdicts), flank, checks, fields["conclusion"]
    )


# --- verification ---------------------------------------------------------


def _kernel_closure_ok(kernels: list[int]) -> bool:
    kernel_set = set(kernels)
    if len(kernel_set) != 7:
        return False
    for i, a in enumerate(kernels):
        for b in kernels[i + 1 :]:
            prod = a * b
            sf = square_part(abs(prod)).squarefree
            if prod < 0:
                sf = -sf
            if sf not in kernel_set:
                return False
    return True


def _verify_verdict(v: PRationalityVerdict, p: int) -> bool:
    field = v.field
    # descriptor consistency from the kernel alone
    ref = descriptor(field.kernel)
    if (ref.kernel, ref.D, ref.signature) != (field.kernel, field.D, field.signature):
        return False
    if field.signature == "imaginary":
        if v.class_number is not None:
            if -field.D > EXACT_CLASS_NUMBER_LIMIT:
                return False
            if v.class_number_method not in ("forms", "dirichlet"):
                return False
            h = class_number_imaginary_oracle(field.D)
            if h != v.class_number:
                return False
            expected = "proved" if h % p != 0 else "inconclusive"
            return v.status == expected
        if v.bound is None or v.class_number_method != "bound-only":
            return False
        bound = louboutin_bound(field.D)
        if not math.isclose(bound, v.bound, rel_tol=1e-9):
            return False
        expected = "proved" if bound < p else "inconclusive"
        return v.status == expected
    # real field: recompute unit, class number and the local tests
    if v.class_number_method != "analytic":
        return False
    eps = fundamental_unit(field.kernel)
    if v.unit != eps or v.class_number is None:
        return False
    if class_number_real(field.D, eps) != v.class_number:
        return False
    flags = unit_is_pth_power_locally(field.kernel, eps, p)
    if v.unit_is_pth_power != flags:
        return False
    expected = (
        "proved" if v.class_number % p != 0 and not all(flags) else "refuted"
    )
    return v.status == expected


def verify_certificate(cert: TriquadraticCertificate) -> bool:
    """Recheck a certificate from first principles.

    Structural invariants (seven subfields, the exact kernel list and its
    multiplicative closure), then every evidence item: imaginary class
    numbers via the character-sum oracle, bounds, real class numbers,
    fundamental units and local power tests, each re-derived without
    consulting caches, and finally the status and conclusion aggregation
    rules.  Any mismatch or computational error yields False.
    """
    try:
        if cert.conclusion not in ("certified", "failed", "inconclusive"):
            return False
        if len(cert.subfields) != 7:
            return False
        if cert.p < 5 or not is_prime(cert.p):
            return False
        p = cert.p
        inputs = [v.field.d_input for v in cert.subfields]
        if inputs != [
            p * (p + 2),
            p * (p - 2),
            (p + 2) * (p - 2),
            -1,
            -p * (p + 2),
            -p * (p - 2),
            -(p + 2) * (p - 2),
        ]:
            return False
        kernels = [v.field.kernel for v in cert.subfields]
        if kernels != subfield_kernels(cert.p):
            return False
        if not _kernel_closure_ok(kernels):
            return False
        for v in cert.subfields:
            if v.p != cert.p:
                return False
            if not _verify_verdict(v, cert.p):
                return False
        if _conclusion(cert.subfields) != cert.conclusion:
            return False
        if cert.flank is not None:
            m, n, a = cert.flank
            if (m, n) != _flank_witnesses(cert.p, a):
                return False
            if cert.discriminant_checks is None:
                return False
            expected = _bound_records(cert.p, a)
            got = list(cert.discriminant_checks)
            if len(got) != 3:
                return False
            for e, g in zip(expected, got):
                if (e.index, e.abs_discriminant, e.ok) != (
                    g.index,
                    g.abs_discriminant,
                    g.ok,
                ) or not math.isclose(e.limit, g.limit, rel_tol=1e-9):
                    return False
        elif cert.discriminant_checks is not None:
            return False
        return True
    except (TriquadError, ValueError, ArithmeticError):
        return False
