"""Special functions: Dawson's integral on the real line.

D(z) = exp(-z^2) * integral_0^z exp(t^2) dt

is the Hilbert transform of a Gaussian up to normalization; it is odd,
linear near the origin (D(z) ~ z(1 - 2z^2/3)), peaks near z = 0.924 and
decays like 1/(2z).  The evaluation policy — power series below a
cutoff, optimally truncated asymptotic expansion above — lives in the
kernel backends; this module adds the configurable policy surface.
"""

from dataclasses import dataclass

from ._backend import kernels
from . import _kernels_py

__all__ = ["DawsonEvalConfig", "dawson", "DEFAULT_CONFIG"]


@dataclass(frozen=True)
class DawsonEvalConfig:
    """Evaluation policy for Dawson's integral.

    series_cutoff : argument magnitude below which the power series is
        used (the asymptotic expansion takes over above it).  The
        asymptotic branch bottoms out at a relative exp(-cutoff^2), so
        cutoffs below ~5.3 trade away the default 1e-12 accuracy.
    series_tol : relative truncation tolerance of the series.
    """

    series_cutoff: float = 6.0
    series_tol: float = 1e-16

    def __post_init__(self):
        if not self.series_cutoff > 0:
            raise ValueError(f"series_cutoff must be > 0, got {self.series_cutoff}")
        if not 0 < self.series_tol < 1e-10:
            raise ValueError(
                f"series_tol must be in (0, 1e-10), got {self.series_tol}"
            )


DEFAULT_CONFIG = DawsonEvalConfig()


def dawson(z, config=None):
    """Dawson's integral D(z) for real scalar or array ``z``.

    Odd in z exactly (bit for bit); relative accuracy ~1e-15 on the real
    line under the default policy.  Non-finite input raises ValueError.
    """
    if config is None or config == DEFAULT_CONFIG:
        return kernels.dawson(z)
    # custom policies go through the pure-Python path, which takes the
    # cutoff/tolerance as arguments
    return _kernels_py.dawson(z, cutoff=config.series_cutoff, tol=config.series_tol)
