"""Exception types raised by the fitting routines."""


class DegenerateInputError(ValueError):
    """Input admits no meaningful rank-1 structured fit (e.g. the zero matrix)."""


class ReciprocalOfZeroError(ArithmeticError):
    """The winning generator sits at the origin of the reciprocal branch.

    The fit would need a generator at infinity, which this library never
    represents.  Carries the offending in-disc point for diagnostics.
    """

    def __init__(self, message: str, z: complex = 0j):
        super().__init__(message)
        self.z = z
