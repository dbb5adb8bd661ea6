"""sgnsep: sub-Rayleigh separation estimation with a signum Fourier filter.

Library and CLI for the estimation of the separation between two faint
incoherent point sources below the diffraction scale: PSF models and
two-source detection densities, the signum-mask (Hilbert-transform) 4f
processor, Fisher-information/Cramer-Rao analysis, a photon-counting
camera Monte Carlo, and the calibration-fit separation estimator.

Hot kernels run on a compiled Cython backend when available, with a
pure-NumPy fallback selected at import (see ``sgnsep.BACKEND``).
"""

from ._backend import BACKEND
from .camera import (
    CameraConfig,
    ScanRecord,
    central_statistic,
    pixel_probabilities,
    read_scans,
    simulate_batch,
    simulate_scan,
    write_scans,
)
from .errors import ConfigurationError, FitError, NumericalError
from .estimator import (
    CalibrationCurve,
    EstimatorStats,
    empirical_calibration,
    estimate_separation,
    evaluate_estimator,
    fit_calibration,
    model_calibration,
)
from .fisher import (
    CrlbResult,
    FisherResult,
    crlb,
    fisher_continuous,
    fisher_direct_asymptote,
    fisher_pixelated,
    fisher_sgn_asymptote,
    gaussian_direct_family,
    gaussian_sgn_family,
)
from .processor import (
    SampledField,
    apply_signum,
    field_energy,
    filtered_intensity_gaussian,
    sample_psf,
    sgn_density,
)
from .psf import (
    AmplitudePsf,
    DetectionDensity,
    GaussianPsf,
    direct_density,
    gaussian_psf,
    parabolic_alpha,
)
from .specfun import DawsonEvalConfig, dawson

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "__version__",
    "ConfigurationError",
    "FitError",
    "NumericalError",
    "DawsonEvalConfig",
    "dawson",
    "AmplitudePsf",
    "GaussianPsf",
    "gaussian_psf",
    "DetectionDensity",
    "direct_density",
    "parabolic_alpha",
    "SampledField",
    "sample_psf",
    "apply_signum",
    "field_energy",
    "filtered_intensity_gaussian",
    "sgn_density",
    "FisherResult",
    "CrlbResult",
    "fisher_continuous",
    "fisher_direct_asymptote",
    "fisher_sgn_asymptote",
    "fisher_pixelated",
    "crlb",
    "gaussian_direct_family",
    "gaussian_sgn_family",
    "CameraConfig",
    "ScanRecord",
    "pixel_probabilities",
    "simulate_scan",
    "simulate_batch",
    "central_statistic",
    "write_scans",
    "read_scans",
    "CalibrationCurve",
    "EstimatorStats",
    "fit_calibration",
    "model_calibration",
    "empirical_calibration",
    "estimate_separation",
    "evaluate_estimator",
]
