"""Acceptance self-test: the library's end-to-end quality gate.

Each check pins one verifiable claim of the implementation — asymptote
fidelity, scaling laws, transform accuracy, coefficient identities,
photon-mass conservation, Monte Carlo estimator efficiency against the
pixelated Cramer-Rao bound, bias structure, and bit determinism — with
explicit tolerances and runtime budgets.  ``run()`` executes them and
returns structured results; the CLI prints one PASS/FAIL line each.
"""

import math
import os
import tempfile
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import camera as cam
from . import estimator as est
from . import fisher as fi
from . import processor as proc
from .psf import gaussian_psf, parabolic_alpha

__all__ = ["CheckResult", "run", "ALL_CHECKS"]

DEFAULT_SEED = 20260810
_N_SCANS = 200
_S_LIST = (0.042, 0.06, 0.10, 0.14, 0.18)


@dataclass
class CheckResult:
    criterion: str
    passed: bool
    detail: str
    seconds: float
    subchecks: tuple = field(default_factory=tuple)  # (label, passed) pairs


def _result(criterion, subchecks, detail, t0, budget):
    seconds = time.perf_counter() - t0
    subchecks = tuple(subchecks) + ((f"runtime < {budget:.0f} s", seconds < budget),)
    passed = all(ok for _, ok in subchecks)
    return CheckResult(criterion, passed, detail, seconds, subchecks)


def check_asymptote_fidelity():
    """1: quadrature Fisher information matches the closed small-s laws."""
    t0 = time.perf_counter()
    direct = fi.gaussian_direct_family(1.0)
    sgn = fi.gaussian_sgn_family(1.0)
    worst_d = 0.0
    for s in np.geomspace(0.01, 0.1, 6):
        dev = abs(
            fi.fisher_continuous(direct, s).value / fi.fisher_direct_asymptote(s).value
            - 1.0
        )
        worst_d = max(worst_d, dev)
    worst_s = 0.0
    for s in np.geomspace(0.005, 0.05, 6):
        dev = abs(
            fi.fisher_continuous(sgn, s).value / fi.fisher_sgn_asymptote(s).value - 1.0
        )
        worst_s = max(worst_s, dev)
    subs = [
        ("direct within 2% on [0.01, 0.1]", worst_d < 0.02),
        ("filtered within 5% on [0.005, 0.05]", worst_s < 0.05),
    ]
    return _result(
        "1 asymptote fidelity",
        subs,
        f"max deviation: direct {worst_d:.3%}, filtered {worst_s:.3%}",
        t0,
        budget=10.0,
    )


def check_scaling_slopes():
    """2: log-log slope 2 for direct imaging, 1 behind the filter."""
    t0 = time.perf_counter()
    grid = np.geomspace(0.005, 0.05, 9)
    slopes = {}
    for name, family in (
        ("direct", fi.gaussian_direct_family(1.0)),
        ("sgn", fi.gaussian_sgn_family(1.0)),
    ):
        vals = np.array([fi.fisher_continuous(family, s).value for s in grid])
        slopes[name] = float(np.polyfit(np.log(grid), np.log(vals), 1)[0])
    subs = [
        ("direct slope in 2.00 +- 0.05", abs(slopes["direct"] - 2.0) < 0.05),
        ("filtered slope in 1.00 +- 0.05", abs(slopes["sgn"] - 1.0) < 0.05),
    ]
    return _result(
        "2 scaling-law slopes",
        subs,
        f"slopes: direct {slopes['direct']:.4f}, filtered {slopes['sgn']:.4f}",
        t0,
        budget=30.0,
    )


def _filter_error(m, step):
    psf = gaussian_psf(1.0)
    out = proc.apply_signum(proc.sample_psf(psf, m=m, step=step))
    x = out.x
    sel = np.abs(x) <= 4.0
    ref = proc.filtered_intensity_gaussian(x[sel], 0.0, 1.0)
    return float(np.max(np.abs(np.abs(out.values[sel]) ** 2 - ref)))


def check_hilbert_dawson():
    """3: numeric filter matches the Dawson-form intensity; second-order
    refinement until the 1e-12 floor."""
    t0 = time.perf_counter()
    err0 = _filter_error(4096, 1.0 / 64.0)
    err1 = _filter_error(8192, 1.0 / 128.0)
    subs = [
        ("default grid error < 1e-6 on |x| <= 4", err0 < 1e-6),
        ("halving the step cuts error >= 4x (or already at the 1e-12 floor)",
         err1 <= err0 / 4.0 or err0 <= 1e-12),
    ]
    return _result(
        "3 Hilbert/Dawson oracle",
        subs,
        f"max |intensity - analytic|: default {err0:.2e}, refined {err1:.2e}",
        t0,
        budget=5.0,
    )


def check_alpha_identity():
    """4: parabolic coefficient value and the linear-law identity."""
    t0 = time.perf_counter()
    psf = gaussian_psf(1.0)
    target = (2.0 * math.pi**3) ** -0.5
    a_closed = parabolic_alpha(psf)
    a_quad = parabolic_alpha(psf, method="quadrature")
    dev_closed = abs(a_closed / target - 1.0)
    dev_quad = abs(a_quad / target - 1.0)
    worst_ulp = 0.0
    for s in (1e-4, 0.01, 0.3, 2.0):
        lhs = fi.fisher_sgn_asymptote(s, 1.0).value
        rhs = (math.pi / 2.0) * parabolic_alpha(psf) * s
        worst_ulp = max(worst_ulp, abs(lhs - rhs) / rhs)
    subs = [
        ("alpha = (2 pi^3)^(-1/2) within 1e-8", dev_closed < 1e-8),
        ("quadrature route within 1e-8", dev_quad < 1e-8),
        ("linear law == (pi/2) alpha s to machine precision", worst_ulp < 5e-16),
    ]
    return _result(
        "4 coefficient identity",
        subs,
        f"alpha closed dev {dev_closed:.1e}, quadrature dev {dev_quad:.1e}, "
        f"identity dev {worst_ulp:.1e}",
        t0,
        budget=10.0,
    )


def check_energy_conservation():
    """5: the filter absorbs no photons (unit total intensity mass)."""
    t0 = time.perf_counter()
    worst = 0.0
    for s in (0.0, 0.2, 1.0):
        mass, _ = quad(
            lambda x: proc.filtered_intensity_gaussian(x, s, 1.0),
            -np.inf,
            np.inf,
            limit=400,
            epsabs=1e-10,
            epsrel=1e-10,
        )
        worst = max(worst, abs(mass - 1.0))
    subs = [("total filtered mass within 1e-6 of 1", worst < 1e-6)]
    return _result(
        "5 energy conservation",
        subs,
        f"max |mass - 1| = {worst:.2e} over s in (0, 0.2, 1.0)",
        t0,
        budget=10.0,
    )


def _campaign(master_seed, readout_sd=0.0, s_list=_S_LIST):
    """Shared Monte Carlo campaign at the reference-experiment scale."""
    sgn_family = fi.gaussian_sgn_family(1.0)
    direct_family = fi.gaussian_direct_family(1.0)
    camera = cam.CameraConfig(readout_noise_sd=readout_sd)
    cal = est.model_calibration(sgn_family, camera, _S_LIST)
    n_det = int(camera.mean_detections)
    seeds = [
        int(child.generate_state(1, np.uint64)[0])
        for child in np.random.SeedSequence(master_seed).spawn(len(s_list))
    ]
    rows = []
    for s, seed in zip(s_list, seeds):
        density = sgn_family(s)
        records = cam.simulate_batch(density, camera, _N_SCANS, seed)
        stats = est.evaluate_estimator(records, cal)
        row = {"stats": stats}
        if s > 0:
            row["crlb_pix"] = fi.crlb(fi.fisher_pixelated(density, camera), n_det).variance_bound
            row["crlb_direct"] = fi.crlb(fi.fisher_continuous(direct_family, s), n_det).variance_bound
        rows.append(row)
    return rows


def check_crlb_sandwich(master_seed=DEFAULT_SEED):
    """6: estimator variance sits in [0.8x, 2.5x] the pixelated CRLB and
    beats the direct-imaging CRLB >= 3x at s = 0.06."""
    t0 = time.perf_counter()
    rows = _campaign(master_seed)
    subs = []
    details = []
    gain_006 = None
    for row in rows:
        st = row["stats"]
        ratio = st.variance / row["crlb_pix"]
        subs.append((f"s={st.s_true}: var/CRLB in [0.8, 2.5]", 0.8 <= ratio <= 2.5))
        details.append(f"s={st.s_true}: ratio={ratio:.2f}")
        if st.s_true == 0.06:
            gain_006 = row["crlb_direct"] / st.variance
    subs.append(("s=0.06 beats the direct CRLB >= 3x", gain_006 is not None and gain_006 >= 3.0))
    details.append(f"direct-CRLB/variance at 0.06 = {gain_006:.1f}")
    return _result("6 CRLB sandwich", subs, "; ".join(details), t0, budget=300.0)


def check_bias_profile(master_seed=DEFAULT_SEED):
    """7: near-unbiased for s >= 0.1; positive clamp bias at s <= 0.042.

    The second clause is reported as specified, at the smallest measured
    separation 0.042 sigma; diagnostics at smaller separations show where
    the zero-floor clamp actually dominates the (negative) square-root
    concavity bias for this photon budget.
    """
    t0 = time.perf_counter()
    rows = _campaign(master_seed, s_list=(0.0, 0.02, 0.042, 0.06, 0.10, 0.14, 0.18))
    by_s = {row["stats"].s_true: row["stats"] for row in rows}
    subs = []
    details = []
    for s in (0.10, 0.14, 0.18):
        st = by_s[s]
        se = math.sqrt(st.variance / st.n_samples)
        ok = abs(st.bias) <= 3.0 * se
        subs.append((f"s={s}: |bias| <= 3 SE", ok))
        details.append(f"s={s}: bias={st.bias:+.5f} ({st.bias / se:+.1f} SE)")
    st = by_s[0.042]
    subs.append(("s=0.042: positive bias", st.bias > 0.0))
    details.append(f"s=0.042: bias={st.bias:+.5f}")
    details.append(
        "clamp-regime diagnostics: "
        + ", ".join(f"s={s}: bias={by_s[s].bias:+.5f}" for s in (0.0, 0.02))
    )
    return _result("7 bias profile", subs, "; ".join(details), t0, budget=300.0)


def check_simulate_determinism(master_seed=DEFAULT_SEED):
    """8: the simulate command is byte-deterministic given its seed."""
    from . import cli

    t0 = time.perf_counter()
    with tempfile.TemporaryDirectory() as tmp:
        paths = [os.path.join(tmp, f"run{i}.csv") for i in (0, 1)]
        for p in paths:
            cli.main(
                [
                    "simulate",
                    "--s-list", "0.06,0.1",
                    "--n-scans", "10",
                    "--seed", str(master_seed),
                    "--out", p,
                ]
            )
        blobs = [open(p, "rb").read() for p in paths]
    subs = [("two runs byte-identical", blobs[0] == blobs[1])]
    return _result(
        "8 determinism",
        subs,
        f"output size {len(blobs[0])} bytes",
        t0,
        budget=60.0,
    )


ALL_CHECKS = (
    ("1", check_asymptote_fidelity),
    ("2", check_scaling_slopes),
    ("3", check_hilbert_dawson),
    ("4", check_alpha_identity),
    ("5", check_energy_conservation),
    ("6", check_crlb_sandwich),
    ("7", check_bias_profile),
    ("8", check_simulate_determinism),
)


def run(criteria=None, master_seed=DEFAULT_SEED):
    """Run the selected acceptance checks (all by default) and return
    their CheckResults."""
    wanted = None if criteria is None else {str(c) for c in criteria}
    results = []
    for key, fn in ALL_CHECKS:
        if wanted is not None and key not in wanted:
            continue
        if fn in (check_crlb_sandwich, check_bias_profile, check_simulate_determinism):
            results.append(fn(master_seed))
        else:
            results.append(fn())
    return results
