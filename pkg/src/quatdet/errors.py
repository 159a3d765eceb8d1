"""Exception types raised by quatdet."""


class QuatError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(QuatError, ValueError):
    pass


class NonSquare(DimensionMismatch):
    pass


class IndexOutOfRange(QuatError, IndexError):
    pass


class IndexEqual(QuatError, ValueError):
    pass


class NotAPermutation(QuatError, ValueError):
    pass


class BadSplitIndex(QuatError, ValueError):
    pass


class Degenerate(QuatError, ValueError):
    """Leading coefficient of a quaternion quadratic vanishes."""


class NoConvergence(QuatError, ArithmeticError):
    pass


class PairingFailure(QuatError, ArithmeticError):
    """Eigenvalues of a complexification did not split into conjugate pairs."""


class NotAnEigenvalue(QuatError, ValueError):
    pass


class NonRealDeterminant(QuatError, ArithmeticError):
    """det of a complexification came out non-real; indicates a layout bug."""


class StrategyDisagreement(QuatError, ArithmeticError):
    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report


class NotHermitian(QuatError, ValueError):
    pass


class CriteriaDisagreement(QuatError, ArithmeticError):
    pass


class SingularMatrix(QuatError, ArithmeticError):
    pass


class SingularLeadingBlock(SingularMatrix):
    pass


class SingularSchurComplement(SingularMatrix):
    pass


class ZeroEntry(QuatError, ValueError):
    pass
