"""Calibration-fit separation estimator and its statistical evaluation.

The central-column count behind the signum filter responds quadratically
to the separation, n(s) ~ a + b s^2 (the filtered density is parabolic
near the origin), so the measurement chain is: fit (a, b) from mean
responses at known separations, then invert each scan's central count
through s_hat = sqrt(max(0, (n - a)/b)).  The clamp keeps estimates
real; it also floors them at zero, which biases the mean upward as the
true separation approaches zero.
"""

import io
from dataclasses import dataclass

import numpy as np

from .camera import central_statistic, pixel_probabilities
from .errors import FitError

__all__ = [
    "CalibrationCurve",
    "EstimatorStats",
    "fit_calibration",
    "model_calibration",
    "empirical_calibration",
    "estimate_separation",
    "evaluate_estimator",
    "write_stats",
    "read_stats",
]

STATS_SCHEMA_VERSION = "sgnsep-stats-v1"
STATS_COLUMNS = ("s_true", "mean", "variance", "bias", "n",
                 "crlb_pixelated", "crlb_direct")


@dataclass(frozen=True)
class CalibrationCurve:
    """Quadratic response fit n(s) = a + b s^2 with its diagnostics."""

    a: float
    b: float
    residual_rms: float
    s_grid: tuple

    def response(self, s):
        return self.a + self.b * np.square(s)


@dataclass(frozen=True)
class EstimatorStats:
    """Sample statistics of the estimator at one true separation."""

    s_true: float
    mean_estimate: float
    variance: float
    bias: float
    n_samples: int


def fit_calibration(pairs):
    """Least-squares fit of mean_count = a + b s^2 over (s, mean_count)
    pairs.  Requires at least three distinct separations and a positive
    curvature b (a flat response carries no separation signal)."""
    pairs = [(float(s), float(n)) for s, n in pairs]
    if len({s for s, _ in pairs}) < 3:
        raise FitError("calibration needs at least 3 distinct separations")
    if any(n < 0 for _, n in pairs):
        raise FitError("mean counts must be nonnegative")
    s = np.array([p[0] for p in pairs])
    n = np.array([p[1] for p in pairs])
    design = np.column_stack([np.ones_like(s), s * s])
    coef, *_ = np.linalg.lstsq(design, n, rcond=None)
    a, b = float(coef[0]), float(coef[1])
    resid = n - design @ coef
    rms = float(np.sqrt(np.mean(resid**2)))
    # a flat response (b <= 0, or a quadratic term lost in rounding noise)
    # carries no invertible separation signal
    if b <= 0 or b * float(np.max(s)) ** 2 < 1e-9 * max(abs(a), 1.0):
        raise FitError(
            f"degenerate calibration: fitted curvature b={b!r} carries no signal"
        )
    if a < 0:
        raise FitError(f"unphysical calibration: negative count floor a={a!r}")
    return CalibrationCurve(a=a, b=b, residual_rms=rms, s_grid=tuple(sorted(set(s))))


def model_calibration(density_family, camera, s_grid, columns_summed=1):
    """Calibration from noiseless model means: the expected central
    statistic N * q_center(s) computed from the pixel probabilities."""
    c = camera.n_pixels // 2
    half = (columns_summed - 1) // 2
    sel = slice(c - half, c - half + columns_summed)
    pairs = []
    for s in s_grid:
        q = pixel_probabilities(density_family(s), camera)
        pairs.append((s, camera.mean_detections * float(q[sel].sum())))
    return fit_calibration(pairs)


def empirical_calibration(scans, columns_summed=1):
    """Calibration from simulated (noisy) scans at known separations,
    mimicking a real calibration run: group by true_s, fit the mean
    central statistics."""
    groups = {}
    for rec in scans:
        groups.setdefault(rec.true_s, []).append(
            central_statistic(rec, columns_summed)
        )
    pairs = [(s, float(np.mean(v))) for s, v in sorted(groups.items())]
    return fit_calibration(pairs)


def estimate_separation(n, cal):
    """Invert a central count through the calibration curve:
    s_hat = sqrt(max(0, (n - a)/b)).  Counts at or below the floor a map
    to zero; the function is total."""
    return float(np.sqrt(max(0.0, (n - cal.a) / cal.b)))


def evaluate_estimator(scans, cal, columns_summed=1):
    """Per-separation sample mean, unbiased (n-1) variance, and bias of
    the estimator over a batch of scans sharing one true separation."""
    if len(scans) < 2:
        raise ValueError("need at least 2 scans to form a variance")
    s_true = scans[0].true_s
    if any(rec.true_s != s_true for rec in scans):
        raise ValueError("scan batch mixes different true separations")
    estimates = np.array(
        [estimate_separation(central_statistic(r, columns_summed), cal) for r in scans]
    )
    mean = float(estimates.mean())
    var = float(estimates.var(ddof=1))
    return EstimatorStats(
        s_true=s_true,
        mean_estimate=mean,
        variance=var,
        bias=mean - s_true,
        n_samples=len(scans),
    )


def write_stats(path, rows, metadata=None):
    """Write per-separation statistics as CSV with columns
    (s_true, mean, variance, bias, n, crlb_pixelated, crlb_direct)."""
    buf = io.StringIO()
    buf.write(f"# {STATS_SCHEMA_VERSION}\n")
    for k in sorted(metadata or {}):
        buf.write(f"# {k}={metadata[k]}\n")
    buf.write(",".join(STATS_COLUMNS) + "\n")
    for row in rows:
        cells = []
        for col in STATS_COLUMNS:
            v = row[col]
            cells.append(str(int(v)) if col == "n" else repr(float(v)))
        buf.write(",".join(cells) + "\n")
    data = buf.getvalue()
    if hasattr(path, "write"):
        path.write(data)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(data)


def read_stats(path):
    """Read a stats CSV back into (rows, metadata)."""
    if hasattr(path, "read"):
        lines = path.read().splitlines()
    else:
        with open(path) as fh:
            lines = fh.read().splitlines()
    metadata = {}
    header = None
    rows = []
    for line in lines:
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if "=" in body:
                k, v = body.split("=", 1)
                metadata[k.strip()] = v.strip()
            continue
        cells = line.split(",")
        if header is None:
            header = cells
            continue
        row = dict(zip(header, cells))
        rows.append({k: (int(v) if k == "n" else float(v)) for k, v in row.items()})
    return rows, metadata
