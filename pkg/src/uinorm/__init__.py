"""Unitarily invariant norm inequalities for elementary operators built from
Herglotz-class functions of normal matrices, with a seeded verification
harness."""
from ._backend import NAME as BACKEND
from .calculus import (
    ContourSpec,
    GOneCertificate,
    HerglotzMeasure,
    apply,
    apply_spectral,
    g1_certify,
    herglotz_eval,
    resolvent,
    riesz_dunford,
    spectral_gap,
)
from .errors import (
    AccuracyError,
    ContourError,
    ConvergenceError,
    DomainError,
    NotNormalError,
    PreconditionError,
    ShapeError,
    SingularMatrixError,
    UinormError,
    UsageError,
)
from .inequalities import STATEMENTS, TrialReport
from .linalg import (
    SpectralDecomposition,
    absolute_value,
    adjoint,
    direct_sum,
    eig_normal,
    multiply,
    singular_values,
    solve,
)
from .norms import NormKind, ky_fan_dominates, norm, norm_suite
from .sampling import SamplerConfig

__version__ = "0.1.0"
