"""Pure-NumPy kernel backend.

Hot numerical kernels used throughout the library: Dawson's integral and
the single-source intensity profiles (plain Gaussian imaging and its
signum-filtered, Dawson-shaped counterpart).  A compiled Cython twin of
this module (``sgnsep._kernels``) is preferred at import time when
available; both expose the same names and must agree to ~1 ulp.

All functions accept scalars or ndarrays and are pure.
"""

import math

import numpy as np

BACKEND_NAME = "python"

# Dawson evaluation policy: power series below the cutoff, optimally
# truncated asymptotic expansion above.  The series is summed in the
# all-positive form exp(-z^2) * sum z^(2n+1)/(n!(2n+1)) to avoid the
# catastrophic cancellation of the alternating Maclaurin form.
SERIES_CUTOFF = 6.0
SERIES_TOL = 1e-16

_SQRT2PI = math.sqrt(2.0 * math.pi)
# 2*sqrt(2)/pi^(3/2): peak-normalization constant of the filtered profile
_C_SGN = 2.0 * math.sqrt(2.0) / math.pi**1.5


def _dawson_series(z, tol=SERIES_TOL):
    """D(z) for 0 <= z <= cutoff via the cancellation-free series."""
    if z == 0.0:
        return 0.0
    z2 = z * z
    power = z  # z^(2n+1)/n!
    total = z
    n = 0
    while n < 500:
        n += 1
        power *= z2 / n
        term = power / (2 * n + 1)
        total += term
        if term < tol * total:
            break
    return math.exp(-z2) * total


def _dawson_asymptotic(z):
    """D(z) for large z: 1/(2z) * sum (2k-1)!!/(2 z^2)^k, truncated at the
    smallest term."""
    z2 = z * z
    term = 0.5 / z
    total = term
    for k in range(1, 100):
        nxt = term * (2 * k - 1) / (2.0 * z2)
        if nxt >= term:
            break
        term = nxt
        total += term
        if term < 1e-18 * total:
            break
    return total


def _dawson_scalar(z, cutoff=SERIES_CUTOFF, tol=SERIES_TOL):
    if not math.isfinite(z):
        raise ValueError(f"dawson requires a finite argument, got {z!r}")
    az = abs(z)
    if az <= cutoff:
        val = _dawson_series(az, tol)
    else:
        val = _dawson_asymptotic(az)
    return -val if z < 0.0 else val


def dawson(x, cutoff=SERIES_CUTOFF, tol=SERIES_TOL):
    """Dawson's integral D(x) = exp(-x^2) * integral_0^x exp(t^2) dt.

    Odd in x (exactly, bit for bit); relative accuracy of order 1e-15
    over the real line.  Raises ValueError on non-finite input.
    """
    if np.ndim(x) == 0:
        return _dawson_scalar(float(x), cutoff, tol)
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("dawson requires finite arguments")
    out = np.empty_like(arr)
    flat_in = arr.ravel()
    flat_out = out.ravel()
    for i in range(flat_in.size):
        flat_out[i] = _dawson_scalar(flat_in[i], cutoff, tol)
    return out


def gaussian_amplitude(u, sigma):
    """Unit-energy Gaussian amplitude profile, intensity std dev sigma."""
    u = np.asarray(u, dtype=float) if np.ndim(u) else float(u)
    c = (2.0 * math.pi * sigma * sigma) ** -0.25
    return c * np.exp(-0.25 * np.square(u) / (sigma * sigma))


def hilbert_gaussian_amplitude(u, sigma):
    """Hilbert transform of the Gaussian amplitude: 2c/sqrt(pi) D(u/2sigma)."""
    c = (2.0 * math.pi * sigma * sigma) ** -0.25
    return 2.0 * c / math.sqrt(math.pi) * dawson(np.divide(u, 2.0 * sigma))


def direct_intensity(u, sigma):
    """Single-source image-plane intensity: normal pdf with std dev sigma."""
    u = np.asarray(u, dtype=float) if np.ndim(u) else float(u)
    return np.exp(-0.5 * np.square(u / sigma)) / (_SQRT2PI * sigma)


def direct_intensity_prime(u, sigma):
    u = np.asarray(u, dtype=float) if np.ndim(u) else float(u)
    return -(u / (sigma * sigma)) * direct_intensity(u, sigma)


def sgn_intensity(u, sigma):
    """Signum-filtered single-source intensity: 2*sqrt(2)*D(u/2sigma)^2/(pi^1.5 sigma)."""
    d = dawson(np.divide(u, 2.0 * sigma))
    return _C_SGN / sigma * np.square(d)


def sgn_intensity_prime(u, sigma):
    """d/du of sgn_intensity via D'(z) = 1 - 2 z D(z)."""
    z = np.divide(u, 2.0 * sigma)
    d = dawson(z)
    return _C_SGN / (sigma * sigma) * d * (1.0 - 2.0 * z * d)
