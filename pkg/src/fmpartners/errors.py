"""Exception hierarchy shared by all modules."""


class LatticeError(Exception):
    """Base class for every error raised by fmpartners."""


class NotPositiveDefinite(LatticeError):
    pass


class Degenerate(LatticeError):
    pass


class OddLattice(LatticeError):
    pass


class ZeroVector(LatticeError):
    pass


class ParseError(LatticeError):
    pass


class NotElementary(LatticeError):
    pass


class HalfIntegerValues(LatticeError):
    pass


class Defective(LatticeError):
    pass


class UnsupportedPrime(LatticeError):
    pass


class UnsupportedCodimension(LatticeError):
    pass


class TooLarge(LatticeError):
    pass


class NoIsometricSubgroup(LatticeError):
    pass


class OrderMismatch(LatticeError):
    pass


class AssumptionFailed(LatticeError):
    pass


class Unsupported(LatticeError):
    pass


class NotCertified(LatticeError):
    pass


class HyperplaneNotInvariant(LatticeError):
    pass


class ActionNotFaithful(LatticeError):
    pass


class NotAHyperplane(LatticeError):
    pass


class CountMismatch(LatticeError):
    pass


class VectorNotInClosure(LatticeError):
    pass
