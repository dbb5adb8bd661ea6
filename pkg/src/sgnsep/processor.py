"""Coherent 4f processor with a signum mask in the Fourier plane.

Multiplying the spectrum by i*sgn(f) is a pure phase mask whose
image-space action is the Hilbert transform (p.v. convolution with
1/(pi x)); applied to an even amplitude profile it produces an odd
output that vanishes at the profile center, so the detected intensity
acquires a dark notch there.  For the Gaussian profile the filtered
amplitude is a Dawson function and the single-source intensity is

    |Psi_sgn(u)|^2 = 2 sqrt(2) D(u / 2 sigma)^2 / (pi^(3/2) sigma).

The discrete transform uses the band-limited Hilbert kernel
k_j = 2/(pi j) for odd lags j (zero otherwise), applied as a linear
(zero-padded FFT) convolution.  For profiles that are effectively
band-limited on the grid this is exact to machine precision at every
grid node: a plain per-bin sgn multiply on the periodic grid would
instead wrap the slowly decaying 1/x output tails around the domain and
limit pointwise accuracy to O(x / L^2).

Filtered intensities keep genuine 1/x^2 tails, so a finite window holds
1 - O(1/window) of the photon mass; mass bookkeeping against the
analytic tail estimate replaces naive window renormalization, which
would visibly distort the interior values.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from ._backend import kernels
from .errors import ConfigurationError, NumericalError
from .psf import DetectionDensity, GaussianPsf

__all__ = [
    "SampledField",
    "signum_mask",
    "sample_psf",
    "field_energy",
    "apply_signum",
    "filtered_intensity_gaussian",
    "sgn_density",
]


def signum_mask(f):
    """The Fourier-plane mask rule: -1, 0, +1 by frequency sign."""
    return np.sign(f)

DEFAULT_GRID_SIZE = 4096
DEFAULT_STEP_FRACTION = 1.0 / 64.0  # grid step as a fraction of sigma


@dataclass
class SampledField:
    """Complex field amplitudes on a uniform grid symmetric about zero.

    The grid has a power-of-two length of at least 1024 and satisfies
    grid_min = -(M/2) * grid_step, so x = 0 is a grid node.
    """

    grid_min: float
    grid_step: float
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.values = np.asarray(self.values)
        m = self.values.shape[0]
        if self.values.ndim != 1:
            raise ConfigurationError("field values must be one-dimensional")
        if m < 1024 or m & (m - 1):
            raise ConfigurationError(
                f"grid length must be a power of two >= 1024, got {m}"
            )
        if not self.grid_step > 0:
            raise ConfigurationError(f"grid_step must be > 0, got {self.grid_step}")
        expected = -(m // 2) * self.grid_step
        if not math.isclose(self.grid_min, expected, rel_tol=1e-12, abs_tol=0.0):
            raise ConfigurationError(
                f"grid must be symmetric about 0: grid_min={self.grid_min!r}, "
                f"expected {expected!r}"
            )

    @property
    def x(self):
        return self.grid_min + self.grid_step * np.arange(self.values.shape[0])


def sample_psf(psf, m=DEFAULT_GRID_SIZE, step=None, shift=0.0):
    """Sample an amplitude PSF (optionally displaced by ``shift``) onto the
    default processor grid."""
    if step is None:
        step = DEFAULT_STEP_FRACTION * psf.sigma
    grid_min = -(m // 2) * step
    x = grid_min + step * np.arange(m)
    return SampledField(grid_min, step, psf.amplitude(x - shift))


def field_energy(f):
    """Total energy of the sampled field, sum |v|^2 * step."""
    return float(np.sum(np.abs(f.values) ** 2) * f.grid_step)


def _hilbert_kernel(m):
    # band-limited discrete Hilbert kernel over lags -(m-1)..(m-1)
    j = np.arange(1, m)
    half = np.where(j % 2 == 1, 2.0 / (np.pi * j), 0.0)
    return np.concatenate([-half[::-1], [0.0], half])


def apply_signum(f, feature_scale=None):
    """Apply the signum Fourier-plane mask (convention i*sgn(f)) to a field.

    Returns a field on the same grid.  The zero-frequency response is
    zero (the kernel sums to zero), applying the mask twice recovers the
    negated input up to its unrecoverable DC-band content, and the
    in-band transfer modulus is one, so no energy is absorbed.

    feature_scale, when given, is the smallest length scale of the field
    (the PSF width); the grid step must resolve it with at least eight
    samples or a ConfigurationError is raised.
    """
    if feature_scale is not None and f.grid_step > feature_scale / 8.0:
        raise ConfigurationError(
            f"grid step {f.grid_step} too coarse for feature scale "
            f"{feature_scale} (need step <= scale/8)"
        )
    v = f.values
    m = v.shape[0]
    kernel = _hilbert_kernel(m)
    n_lin = m + kernel.shape[0] - 1
    nfft = 1 << (n_lin - 1).bit_length()
    product = np.fft.fft(v, nfft) * np.fft.fft(kernel, nfft)
    full = np.fft.ifft(product)[:n_lin]
    out = full[m - 1 : 2 * m - 1]
    if not np.iscomplexobj(v):
        out = out.real
    return SampledField(f.grid_min, f.grid_step, np.ascontiguousarray(out))


def filtered_intensity_gaussian(x, s, sigma):
    """Two-source detection density behind the signum filter for a
    Gaussian PSF: the half-half mixture of Dawson-form intensities
    displaced by +-s/2."""
    if not sigma > 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    return 0.5 * (
        kernels.sgn_intensity(np.subtract(x, 0.5 * s), sigma)
        + kernels.sgn_intensity(np.add(x, 0.5 * s), sigma)
    )


def _numeric_sgn_density(psf, s, m, step):
    sigma = psf.sigma
    if step > sigma / 8.0:
        raise ConfigurationError(
            f"grid step {step} too coarse for sigma {sigma} (need step <= sigma/8)"
        )
    minus = apply_signum(sample_psf(psf, m, step, shift=-0.5 * s))
    plus = apply_signum(sample_psf(psf, m, step, shift=+0.5 * s))
    p_grid = 0.5 * (np.abs(minus.values) ** 2 + np.abs(plus.values) ** 2)
    x = minus.x
    halfwidth = -minus.grid_min

    # mass bookkeeping via the far-field multipole expansion of the
    # filtered amplitude, H[Psi](x) ~ (1/pi)(A/x + M2/x^3) with A the
    # integrated amplitude and M2 its second moment; the out-of-window
    # mass of a component displaced by c is then
    # (1/pi^2) [A^2/(X -+ c) + (2/3) A M2/(X -+ c)^3] summed over edges
    amp_integral = float(np.sum(psf.amplitude(x)) * step)
    second_moment = float(np.sum(x * x * psf.amplitude(x)) * step)

    def _tail_beyond(radius):
        total = 0.0
        for c in (-0.5 * s, 0.5 * s):
            for edge in (radius - c, radius + c):
                total += 0.5 / np.pi**2 * (
                    amp_integral**2 / edge
                    + 2.0 * amp_integral * second_moment / (3.0 * edge**3)
                )
        return total

    tail = _tail_beyond(halfwidth)
    window_mass = float(np.sum(p_grid) * step)
    defect = abs(window_mass + tail - 1.0)
    if defect > 1e-4:
        raise NumericalError(
            f"grid inadequate for the filtered density: window mass "
            f"{window_mass:.6f} + tail estimate {tail:.6f} misses unit mass "
            f"by {defect:.2e}"
        )

    centered = apply_signum(sample_psf(psf, m, step))
    g_grid = np.abs(centered.values) ** 2
    # cubic interpolation: the dark notch bottoms out near alpha s^2/4,
    # which linear interpolation bias (~step^2) would swamp at small s
    p_spline = CubicSpline(x, p_grid)
    g_spline = CubicSpline(x, g_grid)

    def _tail_intensity(u):
        # |H[Psi]|^2 in the far field, next-order term included
        return (amp_integral / u + second_moment / u**3) ** 2 / np.pi**2

    def pdf(xq):
        xq = np.asarray(xq, dtype=float)
        out = np.maximum(p_spline(xq), 0.0)
        far = np.abs(xq) > halfwidth
        if np.any(far):
            xf = xq[far]
            out = np.array(out, copy=True)
            out[far] = 0.5 * (_tail_intensity(xf - 0.5 * s) + _tail_intensity(xf + 0.5 * s))
        return out if out.ndim else float(out)

    def component(u):
        u = np.asarray(u, dtype=float)
        out = np.maximum(g_spline(u), 0.0)
        far = np.abs(u) > halfwidth
        if np.any(far):
            out = np.array(out, copy=True)
            out[far] = _tail_intensity(u[far])
        return out if out.ndim else float(out)

    dens = DetectionDensity(
        kind="signum_filtered",
        psf=psf,
        separation=s,
        component_intensity=component,
        component_intensity_prime=None,
        rebuild=lambda s2: _numeric_sgn_density(psf, s2, m, step),
    )
    dens.pdf = pdf  # grid-exact mixture of the two filtered components
    return dens


def sgn_density(psf, s, method="auto", m=DEFAULT_GRID_SIZE, step=None):
    """Detection density behind the signum filter at separation s >= 0.

    Gaussian PSFs route to the closed Dawson form ("auto"/"analytic");
    any PSF can go through the numeric processor path ("numeric"), which
    filters each displaced component on the sampling grid and checks the
    photon-mass bookkeeping (window mass plus analytic tail) against
    unity to 1e-4.
    """
    if s < 0:
        raise ValueError(f"separation must be >= 0, got {s}")
    is_gaussian = isinstance(psf, GaussianPsf)
    if method == "analytic" and not is_gaussian:
        raise ValueError("analytic filtered densities exist only for Gaussian PSFs")
    if method == "auto" and not is_gaussian:
        method = "numeric"
    if method == "numeric":
        return _numeric_sgn_density(psf, s, m, step if step is not None else DEFAULT_STEP_FRACTION * psf.sigma)
    sigma = psf.sigma
    return DetectionDensity(
        kind="signum_filtered",
        psf=psf,
        separation=s,
        component_intensity=lambda u: kernels.sgn_intensity(u, sigma),
        component_intensity_prime=lambda u: kernels.sgn_intensity_prime(u, sigma),
        rebuild=lambda s2: sgn_density(psf, s2),
    )
