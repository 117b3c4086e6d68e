"""Online sparsification of kernel dictionaries with certified error bounds."""
from ._backend import NAME as BACKEND
from .approximation import ResidualReport, atom_loo_residual, project_sample, submatrix_min_eigenvalue
from .bounds import BoundCertificate, BoundId, Direction, Status, certify_dictionary, gershgorin_bounds
from .criteria import AdmissionRecord, CriterionConfig, Decision, Dictionary, Kind, run_stream
from .errors import (
    ConvergenceError,
    DependentAtomError,
    InputError,
    KernelError,
    SingularMatrixError,
    SparseBoundsError,
)
from .features import FeatureExpansion, KpcaAxes, empirical_mean, kpca, project_feature
from .kernels import Family, KernelSpec, NormBounds, Provenance, gram, kernel_eval, norm_bounds
from .linalg import EigenResult, inverse_append, jacobi_eigen, solve_spd

__version__ = "0.1.0"
