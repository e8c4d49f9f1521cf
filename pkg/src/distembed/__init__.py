"""distembed: kernel embeddings of point masses and their derivatives.

The package embeds finite atomic generalized measures (weighted point
masses plus distributional derivatives) into reproducing kernel Hilbert
spaces, computes the induced inner products / norms / semi-metrics,
builds characteristic kernels out of given ones, and diagnoses how far a
stationary kernel's injectivity reaches from the support of its spectral
measure.  The ``distembed`` CLI wraps the library and ships a set of
desk-scale experiments.
"""

from .core import (
    Atom,
    GeneralizedMeasure,
    MultiIndex,
    gm_derivative,
    gm_dipole_quotient,
    gm_discretize_uniform,
    gm_linear_combine,
    gm_point_mass,
    gm_total_mass,
)
from .cpd import (
    BrownianCorrespondenceReport,
    CpdKernel,
    brownian_correspondence_check,
    cpd_quadratic_form,
    cpd_spectral_form,
    negative_distance_kernel,
)
from .embedding import (
    EmbeddedFunction,
    SpdDiagnostic,
    distance,
    embed_eval,
    embed_eval_deriv,
    gram_entry,
    inner,
    norm,
    spd_check,
)
from .errors import (
    DistembedError,
    InvalidArgumentError,
    NumericalInconsistencyError,
    QuadratureBudgetError,
    SchemaError,
    UnsupportedConfigurationError,
    UnsupportedOrderError,
)
from .kernels import (
    UNBOUNDED,
    Kernel,
    StationaryProfile,
    brownian_kernel,
    constant_kernel,
    cosine_kernel,
    gaussian_kernel,
    inverse_multiquadric_kernel,
    kernel_center,
    kernel_deriv,
    kernel_deriv_fd,
    kernel_derived,
    kernel_eval,
    kernel_scale,
    kernel_shift_constant,
    kernel_sum,
    laplace_kernel,
    sinc_kernel,
)
from .spectral import (
    CharacteristicClass,
    CharacteristicVerdict,
    SpectralMeasure,
    SupportSpec,
    diagnose_characteristic,
    ft_gm,
    periodic_null_distribution,
    sinc_null_measure,
    spectral_norm_sq,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
