"""Monte Carlo photon-counting camera.

Reproduces the detection pipeline of a column-binned CCD: pixelation of
the detection density, Poisson shot noise, optional Gaussian readout
noise, and the central-column data reduction.  All lengths are in
sigma = 1 units; physical-unit conversion happens at the CLI boundary.

Signum-filtered densities have 1/x^2 intensity tails, so a realistic
camera intercepts ~1 - O(1/span) of the photons (about 0.91 for the
default geometry).  The simulator draws counts from the on-camera
conditional distribution (pixel masses renormalized to one) with
mean_detections interpreted as the mean number of detected photons,
which is how a real frame is counted.

The per-scan random stream is a counter-based Philox generator keyed by
the scan seed, so batches are reproducible and order-insensitive.
"""

import hashlib
import io
from dataclasses import dataclass

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import ConfigurationError

__all__ = [
    "CameraConfig",
    "ScanRecord",
    "pixel_masses",
    "pixel_probabilities",
    "simulate_scan",
    "simulate_batch",
    "scan_seeds",
    "central_statistic",
    "write_scans",
    "read_scans",
]

# 7.4 um pixels and sigma = 33.2 um, the reference experiment geometry
DEFAULT_PIXEL_WIDTH = 7.4 / 33.2
DEFAULT_N_PIXELS = 101
DEFAULT_MEAN_DETECTIONS = 434_000.0

_GL_NODES, _GL_WEIGHTS = leggauss(24)

SCAN_SCHEMA_VERSION = "sgnsep-scan-v1"


@dataclass(frozen=True)
class CameraConfig:
    """Column geometry and noise model of the photon-counting camera.

    pixel_width and center_offset are in sigma units; readout_noise_sd is
    the per-column Gaussian noise level in photoelectrons (a statistic
    summing c columns then carries sd readout_noise_sd * sqrt(c)).
    """

    pixel_width: float = DEFAULT_PIXEL_WIDTH
    n_pixels: int = DEFAULT_N_PIXELS
    center_offset: float = 0.0
    mean_detections: float = DEFAULT_MEAN_DETECTIONS
    readout_noise_sd: float = 0.0
    columns_summed: int = 1

    def __post_init__(self):
        if not self.pixel_width > 0:
            raise ConfigurationError(f"pixel_width must be > 0, got {self.pixel_width}")
        if self.n_pixels < 1:
            raise ConfigurationError(f"n_pixels must be >= 1, got {self.n_pixels}")
        if not self.mean_detections > 0:
            raise ConfigurationError(
                f"mean_detections must be > 0, got {self.mean_detections}"
            )
        if self.readout_noise_sd < 0:
            raise ConfigurationError(
                f"readout_noise_sd must be >= 0, got {self.readout_noise_sd}"
            )
        if self.columns_summed < 1:
            raise ConfigurationError(
                f"columns_summed must be >= 1, got {self.columns_summed}"
            )
        if self.span < 8.0:
            raise ConfigurationError(
                f"pixel grid must span at least 8 sigma, got {self.span:.3f}"
            )

    @property
    def span(self):
        return self.pixel_width * self.n_pixels

    def edges(self):
        """Pixel boundary positions, length n_pixels + 1."""
        half = 0.5 * self.span
        return self.center_offset - half + self.pixel_width * np.arange(self.n_pixels + 1)


@dataclass
class ScanRecord:
    """One recorded intensity scan, reduced to per-column counts."""

    counts: np.ndarray
    seed: int
    true_s: float
    n_emitted: int

    def __post_init__(self):
        self.counts = np.asarray(self.counts)
        if np.any(self.counts < 0):
            raise ValueError("counts must be nonnegative")


def pixel_masses(density, camera):
    """Raw per-pixel photon masses P_i = integral of p(x|s) over pixel i
    (24-node Gauss-Legendre per panel; no renormalization).

    Pixels wider than the PSF scale are split into sub-sigma panels so
    the quadrature always resolves the density's features."""
    edges = camera.edges()
    sigma = density.psf.sigma
    n_panels = max(1, int(np.ceil(camera.pixel_width / sigma)))
    if n_panels > 1:
        fractions = np.linspace(0.0, 1.0, n_panels + 1)[:-1]
        panel_starts = (edges[:-1, None] + camera.pixel_width * fractions[None, :]).ravel()
        a = panel_starts
        b = panel_starts + camera.pixel_width / n_panels
    else:
        a, b = edges[:-1], edges[1:]
    mid = 0.5 * (a + b)[:, None]
    halfw = 0.5 * (b - a)[:, None]
    xs = mid + halfw * _GL_NODES[None, :]
    vals = density.pdf(xs)
    panel_masses = (vals * _GL_WEIGHTS[None, :]).sum(axis=1) * halfw[:, 0]
    if n_panels > 1:
        return np.add.reduceat(panel_masses, np.arange(0, panel_masses.size, n_panels))
    return panel_masses


def pixel_probabilities(density, camera, min_coverage=None, return_coverage=False):
    """Per-pixel detection probabilities, renormalized to sum to one.

    Coverage (the raw mass intercepted by the camera) below min_coverage
    raises ConfigurationError.  The default gate is 0.999 for direct
    densities; filtered densities keep 1/x^2 tails that no realistic
    camera can intercept, so their gate is 0.5 and the renormalized
    vector is the on-camera conditional distribution.
    """
    masses = pixel_masses(density, camera)
    coverage = float(masses.sum())
    if min_coverage is None:
        min_coverage = 0.999 if density.kind == "direct" else 0.5
    if coverage < min_coverage:
        raise ConfigurationError(
            f"camera intercepts only {coverage:.6f} of the photon mass "
            f"(gate {min_coverage}); widen the pixel grid"
        )
    probs = masses / coverage
    if return_coverage:
        return probs, coverage
    return probs


def simulate_scan(density, camera, seed, _probs=None):
    """Simulate one scan: Poisson(mean_detections) photons multinomially
    split over the pixel probabilities, plus per-column Gaussian readout
    noise (clamped at zero) when configured.  Deterministic given seed."""
    probs = pixel_probabilities(density, camera) if _probs is None else _probs
    rng = np.random.Generator(np.random.Philox(key=np.uint64(seed)))
    n_emitted = int(rng.poisson(camera.mean_detections))
    counts = rng.multinomial(n_emitted, probs)
    if camera.readout_noise_sd > 0:
        counts = np.clip(
            counts + rng.normal(0.0, camera.readout_noise_sd, counts.shape), 0.0, None
        )
    else:
        counts = counts.astype(np.int64)
    return ScanRecord(counts=counts, seed=int(seed), true_s=density.separation,
                      n_emitted=n_emitted)


def scan_seeds(master_seed, n_scans):
    """Derive n_scans independent 64-bit scan seeds from a master seed."""
    root = np.random.SeedSequence(int(master_seed))
    return [int(child.generate_state(1, np.uint64)[0]) for child in root.spawn(n_scans)]


def simulate_batch(density, camera, n_scans, master_seed):
    """Simulate n_scans independent scans; scan i is bit-identical to
    simulate_scan called with the i-th derived seed, so batches may be
    recomputed in any order or in parallel."""
    probs = pixel_probabilities(density, camera)
    return [
        simulate_scan(density, camera, seed, _probs=probs)
        for seed in scan_seeds(master_seed, n_scans)
    ]


def central_statistic(scan, columns_summed=1):
    """Total detections in the central pixel column (or the central
    columns_summed columns).  Requires an odd column count so the center
    is unambiguous."""
    n = scan.counts.shape[0]
    if n % 2 == 0:
        raise ConfigurationError(
            f"central statistic needs an odd column count, got {n}"
        )
    if columns_summed < 1 or columns_summed > n:
        raise ConfigurationError(f"columns_summed out of range: {columns_summed}")
    c = n // 2
    half = (columns_summed - 1) // 2
    lo = c - half
    hi = lo + columns_summed
    if lo < 0 or hi > n:
        raise ConfigurationError("summed columns exceed the camera")
    return float(scan.counts[lo:hi].sum())


def _format_count(v):
    f = float(v)
    return str(int(f)) if f.is_integer() else repr(f)


def _metadata_block(metadata):
    lines = [f"# {SCAN_SCHEMA_VERSION}"]
    body = "".join(f"{k}={metadata[k]}\n" for k in sorted(metadata))
    digest = hashlib.sha256(body.encode()).hexdigest()[:12]
    lines.append(f"# config_hash={digest}")
    lines.extend(f"# {k}={metadata[k]}" for k in sorted(metadata))
    return lines


def write_scans(path, records, metadata=None):
    """Write scan records as CSV: '#' metadata lines, a header row, then
    one row per scan (scan_id, seed, true_s, pixel_0..pixel_{M-1})."""
    if not records:
        raise ValueError("no scan records to write")
    n_pix = records[0].counts.shape[0]
    buf = io.StringIO()
    for line in _metadata_block(metadata or {}):
        buf.write(line + "\n")
    header = ["scan_id", "seed", "true_s"] + [f"pixel_{i}" for i in range(n_pix)]
    buf.write(",".join(header) + "\n")
    for i, rec in enumerate(records):
        if rec.counts.shape[0] != n_pix:
            raise ValueError("inconsistent pixel counts across records")
        row = [str(i), str(rec.seed), repr(float(rec.true_s))]
        row.extend(_format_count(v) for v in rec.counts)
        buf.write(",".join(row) + "\n")
    data = buf.getvalue()
    if hasattr(path, "write"):
        path.write(data)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(data)


def read_scans(path):
    """Read a scan CSV back into (records, metadata).  Counts come back
    as floats; n_emitted is reconstructed as the count total (exact for
    noiseless records)."""
    if hasattr(path, "read"):
        lines = path.read().splitlines()
    else:
        with open(path) as fh:
            lines = fh.read().splitlines()
    metadata = {}
    header = None
    records = []
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
        counts = np.array([float(c) for c in cells[3:]])
        records.append(
            ScanRecord(
                counts=counts,
                seed=int(cells[1]),
                true_s=float(cells[2]),
                n_emitted=int(round(counts.sum())),
            )
        )
    if header is None:
        raise ValueError("no header row found")
    return records, metadata
