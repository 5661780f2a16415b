"""Kernel backend selection.

The compiled extension is preferred when importable; setting the
environment variable TRIQUAD_PURE_KERNELS (to anything non-empty)
forces the pure Python fallback.  Both expose the same functions with
identical semantics, so callers import names from this package only.
"""

import os

from . import pure as _pure

if os.environ.get("TRIQUAD_PURE_KERNELS"):
    _impl = _pure
else:
    try:
        from . import _native as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _pure

BACKEND = _impl.BACKEND

sieve_primes = _impl.sieve_primes
square_part_table = _impl.square_part_table
kronecker = _impl.kronecker
class_number_forms = _impl.class_number_forms
dirichlet_class_number = _impl.dirichlet_class_number
theta_psi_tally = _impl.theta_psi_tally


def active_backend() -> str:
    """Name of the kernel implementation in use: 'native' or 'pure'."""
    return BACKEND
