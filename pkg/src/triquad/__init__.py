"""Square-flanked primes, quadratic class numbers, p-rationality certificates.

A prime p is square-flanked at exponent A when p + 2 and p - 2 carry
square divisors m^2 and n^2 with m, n > (log p)^A.  The package finds
such primes, computes the class numbers and fundamental units of the
quadratic subfields of Q(sqrt(p(p+2)), sqrt(p(p-2)), i), certifies
p-rationality of that triquadratic field, and evaluates the analytic
sum chain that bounds the count of flanked primes from below.

Hot kernels run on a compiled extension when available; set
TRIQUAD_PURE_KERNELS=1 to force the pure Python fallback.
"""

from ._kernels import active_backend
from .arith import (
    Congruence,
    SquareDecomposition,
    crt_pair,
    is_prime,
    primality_mode,
    square_part,
    theta_psi,
)
from .certify import (
    TriquadraticCertificate,
    certify_triquadratic,
    discriminant_bound_check,
    parse_certificate,
    serialize_certificate,
    verify_certificate,
)
from .errors import TriquadError
from .harness import (
    GrhConfig,
    HarnessConfig,
    TermBreakdown,
    chain_report,
    grh_chain_report,
    rows_to_csv,
    weighted_sum,
)
from .quadfields import (
    FundamentalUnit,
    PRationalityVerdict,
    QuadFieldDescriptor,
    class_number_imaginary,
    class_number_real,
    descriptor,
    fundamental_unit,
    louboutin_bound,
    p_rationality,
)
from .search import (
    SearchWindow,
    SquareFlankedPrime,
    direct_scan,
    enumerate_pairs,
    find_flanked_primes,
)

__version__ = "0.1.0"

__all__ = [
    "Congruence",
    "FundamentalUnit",
    "GrhConfig",
    "HarnessConfig",
    "PRationalityVerdict",
    "QuadFieldDescriptor",
    "SearchWindow",
    "SquareDecomposition",
    "SquareFlankedPrime",
    "TermBreakdown",
    "TriquadError",
    "TriquadraticCertificate",
    "active_backend",
    "certify_triquadratic",
    "chain_report",
    "class_number_imaginary",
    "class_number_real",
    "crt_pair",
    "descriptor",
    "direct_scan",
    "discriminant_bound_check",
    "enumerate_pairs",
    "find_flanked_primes",
    "fundamental_unit",
    "grh_chain_report",
    "is_prime",
    "louboutin_bound",
    "p_rationality",
    "parse_certificate",
    "primality_mode",
    "rows_to_csv",
    "serialize_certificate",
    "square_part",
    "theta_psi",
    "verify_certificate",
    "weighted_sum",
    "__version__",
]
