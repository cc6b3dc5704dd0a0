"""Exception types shared across the package."""


class ConvexRangeError(Exception):
    """Base class for all errors raised by this package."""


class InputFormatError(ConvexRangeError):
    """Malformed input file or JSON payload."""


# --- matrix kernel ---

class NotHermitian(ConvexRangeError):
    """Matrix failed the Hermitian symmetry check."""


class NoConvergence(ConvexRangeError):
    """Iterative eigensolver exceeded its sweep budget."""

    def __init__(self, sweeps, off_norm):
        self.sweeps = sweeps
        self.off_norm = off_norm
        super().__init__(
            f"Jacobi sweep budget exhausted after {sweeps} sweeps "
            f"(remaining off-diagonal norm {off_norm:.3e})"
        )


class BadRank(ConvexRangeError):
    """Requested rank outside 1..n."""


# --- exact polytope geometry ---

class NotInPolytope(ConvexRangeError):
    """Point is not a member of the polytope."""


class TooLarge(ConvexRangeError):
    """Polytope exceeds the guard for exhaustive face enumeration."""


class Singleton(ConvexRangeError):
    """Operation requires a polytope with at least two vertices."""


# --- weight vectors, pinching, matrix-interval faces ---

class LengthMismatch(ConvexRangeError):
    """Vectors have different lengths."""


class Unsorted(ConvexRangeError):
    """Weight vector is not sorted non-increasing."""


class NotMajorized(ConvexRangeError):
    """Majorization precondition failed."""


class IndexOutOfRange(ConvexRangeError):
    """Pinching step indices outside the vector."""


class DegeneratePinch(ConvexRangeError):
    """Pinch witness construction needs distinct values and t in (0,1)."""


class NotInUnitInterval(ConvexRangeError):
    """Matrix is not inside the operator interval 0 <= a <= 1."""


class NotInTraceSlice(ConvexRangeError):
    """Matrix violates the trace-slice membership conditions."""


class MissingWitness(ConvexRangeError):
    """Boundary curve carries no attaining witnesses."""


# --- discrete vector measures ---

class TooManyAtoms(ConvexRangeError):
    """Atom count exceeds the exhaustive-enumeration guard."""


class TooFewPoints(ConvexRangeError):
    """Operation needs at least two attained points."""


class Infeasible(ConvexRangeError):
    """Constraint system has no solution in the unit box."""
