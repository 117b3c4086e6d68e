"""Exception hierarchy shared by all modules."""


class SparseBoundsError(Exception):
    """Base class for every error raised by this package."""


class ConvergenceError(SparseBoundsError):
    """The Jacobi eigensolver exhausted its sweep budget.

    Attributes
    ----------
    off_norm : float
        Frobenius norm of the off-diagonal part when the solver gave up.
    sweeps : int
        Number of sweeps performed.
    """

    def __init__(self, off_norm, sweeps):
        super().__init__(
            f"Jacobi eigensolver did not converge after {sweeps} sweeps "
            f"(off-diagonal mass {off_norm:.3e})"
        )
        self.off_norm = off_norm
        self.sweeps = sweeps


class SingularMatrixError(SparseBoundsError):
    """Cholesky factorization met a non-positive pivot."""

    def __init__(self, pivot, value=None):
        msg = f"matrix is not positive definite: Cholesky pivot {pivot} is non-positive"
        if value is not None:
            msg += f" ({value:.3e})"
        super().__init__(msg)
        self.pivot = pivot
        self.value = value


class DependentAtomError(SparseBoundsError):
    """Appending an atom would make the Gram matrix numerically singular."""

    def __init__(self, schur):
        super().__init__(
            f"non-positive Schur complement {schur:.3e}: appended atom is numerically dependent"
        )
        self.schur = schur


class KernelError(SparseBoundsError):
    """Invalid kernel specification or kernel input."""


class InputError(SparseBoundsError):
    """Malformed input data (CSV rows, sample arrays, misaligned records)."""
