"""Exception types shared across the package."""


class TriquadError(Exception):
    """Base class for all package-specific errors."""


class NonCoprimeModuli(TriquadError):
    """CRT moduli share a common factor."""


class ResidueNotCoprime(TriquadError):
    """Progression residue shares a factor with the modulus."""


class PerfectSquareInput(TriquadError):
    """Field constructor given a perfect square (the field would be Q)."""


class NotFundamental(TriquadError):
    """Integer is not a fundamental discriminant."""


class NotSquarefree(TriquadError):
    """Kernel expected to be squarefree is not."""


class PrecisionFailure(TriquadError):
    """Analytic class number did not converge to an integer."""


class EvenOrSmallPrime(TriquadError):
    """Local power test requires an odd prime p >= 5."""


class UnsupportedPrime(TriquadError):
    """Rationality machinery requires a prime p >= 5."""


class NotFlanked(TriquadError):
    """Prime fails the square-flanking threshold for the given exponent."""


class WindowTooLarge(TriquadError):
    """Pair window bound exceeds sqrt(x - 2), residues would collide."""


class InvalidGrhExponents(TriquadError):
    """GRH window exponents outside 0 < eps < 1/8, eps < alpha < 1/4 - eps."""
