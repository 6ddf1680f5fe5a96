"""Restoration of blurred, Poisson-noisy images.

Split ADMM with a closed-form spectral deblurring step, a closed-form
Kullback-Leibler data prox, a pluggable denoiser in the regularization slot,
and residual-balancing adaptation of the penalty parameter. A degradation
simulator and quality metrics round out the experiment harness.
"""

from .errors import (
    BridgeError,
    DimensionError,
    DivergenceError,
    DomainError,
    InternalError,
    ParameterError,
    PnpDeblurError,
    ProtocolError,
)
from .grid import ImageGrid, Otf, Problem, Psf, as_grid, elementwise, new_image
from .kernels import HAVE_COMPILED, IMPLEMENTATION
from .linops import (
    SpectralSolver,
    convolve,
    convolve_adjoint,
    psf_to_otf,
    solve_deblur_system,
)
from .metrics import MetricReport, compute_metrics, mse, psnr, relative_error, ssim
from .proximal import (
    Denoiser,
    FirmnessReport,
    check_firm_nonexpansive,
    dct_l1_prox,
    dct_softthresh_denoiser,
    identity_denoiser,
    kl_value,
    project_nonneg,
    prox_kl,
    scaling_denoiser,
    soft_threshold,
)
from .simulate import Degraded, DegradeSpec, degrade, gaussian_psf
from .solver import (
    GammaSchedule,
    Residuals,
    RunConfig,
    RunReport,
    SplitState,
    StrengthPolicy,
    TracePoint,
    compute_residuals,
    init_state,
    pnp_step,
    prox_split_step,
    run,
    update_gamma,
)

__version__ = "0.1.0"
