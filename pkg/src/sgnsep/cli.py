"""Command-line harness.

Subcommands:

  fisher-curve   Fisher information vs separation (plot-ready CSV)
  density        detection density and Fisher-information density profiles
  simulate       Monte Carlo camera campaign -> scan CSV
  estimate       scan CSV -> per-separation estimator statistics CSV
  selftest       run the acceptance checks and print PASS/FAIL lines

All output is CSV with '#' metadata lines (schema version, config hash,
seed); every command is deterministic given its configuration and seed.
Physical units (micrometers) exist only at this boundary: flags take um,
computation runs in sigma = 1 units.
"""

import argparse
import sys
from dataclasses import dataclass, fields, replace

import numpy as np

from . import camera as cam
from . import estimator as est
from . import fisher as fi
from . import selftest
from ._backend import BACKEND

__all__ = [
    "ExperimentConfig",
    "main",
    "cmd_fisher_curve",
    "cmd_density_profile",
    "cmd_simulate",
    "cmd_estimate",
    "cmd_selftest",
]

DEFAULT_SIGMA_UM = 33.2
DEFAULT_PIXEL_UM = 7.4


@dataclass(frozen=True)
class ExperimentConfig:
    """Campaign configuration; lengths in physical micrometers, the
    separation list in sigma units."""

    sigma_um: float = DEFAULT_SIGMA_UM
    pixel_um: float = DEFAULT_PIXEL_UM
    n_pixels: int = 101
    n_detections: float = 434_000.0
    n_scans: int = 200
    seed: int = selftest.DEFAULT_SEED
    readout_sd: float = 0.0
    columns_summed: int = 1
    kind: str = "sgn"
    s_list: tuple = (0.042, 0.06, 0.10, 0.14, 0.18)

    def __post_init__(self):
        if not self.s_list:
            raise ValueError("s_list must be nonempty")
        if any(s <= 0 for s in self.s_list):
            raise ValueError("separations must be strictly positive")
        if list(self.s_list) != sorted(self.s_list):
            raise ValueError("s_list must be sorted ascending")
        if self.kind not in ("direct", "sgn"):
            raise ValueError(f"kind must be 'direct' or 'sgn', got {self.kind!r}")

    def camera(self):
        return cam.CameraConfig(
            pixel_width=self.pixel_um / self.sigma_um,
            n_pixels=self.n_pixels,
            mean_detections=self.n_detections,
            readout_noise_sd=self.readout_sd,
            columns_summed=self.columns_summed,
        )

    def density_family(self):
        if self.kind == "direct":
            return fi.gaussian_direct_family(1.0)
        return fi.gaussian_sgn_family(1.0)

    def metadata(self):
        return {
            "sigma_um": repr(self.sigma_um),
            "pixel_um": repr(self.pixel_um),
            "n_pixels": str(self.n_pixels),
            "n_detections": repr(self.n_detections),
            "n_scans": str(self.n_scans),
            "seed": str(self.seed),
            "readout_sd": repr(self.readout_sd),
            "columns_summed": str(self.columns_summed),
            "kind": self.kind,
            "s_list": ",".join(repr(s) for s in self.s_list),
        }


def _parse_s_list(text):
    return tuple(float(tok) for tok in text.split(",") if tok.strip())


def read_config_file(path):
    """Parse a flat key = value configuration document."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
            key, val = (part.strip() for part in line.split("=", 1))
            values[key] = val
    return values


_CONFIG_PARSERS = {
    "sigma_um": float,
    "pixel_um": float,
    "n_pixels": int,
    "n_detections": float,
    "n_scans": int,
    "seed": int,
    "readout_sd": float,
    "columns_summed": int,
    "kind": str,
    "s_list": _parse_s_list,
    "out": str,
}


def build_config(args):
    """Merge defaults, config file, and flags (flags win).  Returns the
    campaign config and the output path (file value unless a flag
    overrode it)."""
    cfg = ExperimentConfig()
    file_out = None
    if getattr(args, "config", None):
        overrides = {}
        for key, val in read_config_file(args.config).items():
            if key not in _CONFIG_PARSERS:
                raise ValueError(f"unknown configuration key {key!r}")
            overrides[key] = _CONFIG_PARSERS[key](val)
        file_out = overrides.pop("out", None)
        cfg = replace(cfg, **overrides)
    flag_overrides = {}
    for f in fields(ExperimentConfig):
        val = getattr(args, f.name, None)
        if val is not None:
            flag_overrides[f.name] = val
    out = getattr(args, "out", None) or file_out
    return replace(cfg, **flag_overrides), out


def _write_csv(path, metadata, header, rows):
    lines = [f"# sgnsep-{metadata.pop('schema')}"]
    lines += [f"# {k}={metadata[k]}" for k in sorted(metadata)]
    lines.append(",".join(header))
    lines += [",".join(row) for row in rows]
    data = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(data)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(data)


def _fmt(v):
    return repr(float(v))


def cmd_fisher_curve(kind, s_min, s_max, n_points, out):
    """Fisher information vs separation: columns
    (s, F_direct, F_sgn, F_sgn_asymptote)."""
    if not (s_max > s_min >= 0 and n_points >= 2):
        raise ValueError("need s_max > s_min >= 0 and at least two points")
    grid = np.linspace(s_min, s_max, n_points)
    direct = fi.gaussian_direct_family(1.0)
    sgn = fi.gaussian_sgn_family(1.0)
    rows = []
    for s in grid:
        f_d = f_s = float("nan")
        if kind in ("direct", "both"):
            f_d = 0.0 if s == 0 else fi.fisher_continuous(direct, s).value
        if kind in ("sgn", "both"):
            f_s = 0.0 if s == 0 else fi.fisher_continuous(sgn, s).value
        f_a = fi.fisher_sgn_asymptote(s).value
        rows.append([_fmt(s), _fmt(f_d), _fmt(f_s), _fmt(f_a)])
    _write_csv(
        out,
        {"schema": "fisher-curve-v1", "kind": kind, "sigma": "1"},
        ["s", "F_direct", "F_sgn", "F_sgn_asymptote"],
        rows,
    )


def cmd_density_profile(s_list, kind, x_max, n_points, out):
    """Density and Fisher-information density profiles: columns
    (s, x, p, fisher_density), one block per separation."""
    family = (
        fi.gaussian_direct_family(1.0) if kind == "direct" else fi.gaussian_sgn_family(1.0)
    )
    xs = np.linspace(-x_max, x_max, n_points)
    rows = []
    for s in s_list:
        dens = family(s)
        p = np.asarray(dens.pdf(xs))
        dp = np.asarray(dens.dpdf_ds(xs))
        fdens = np.where(p > 1e-280, dp * dp / np.where(p > 0, p, 1.0), 0.0)
        for x, pv, fv in zip(xs, p, fdens):
            rows.append([_fmt(s), _fmt(x), _fmt(pv), _fmt(fv)])
    _write_csv(
        out,
        {"schema": "density-v1", "kind": kind, "sigma": "1"},
        ["s", "x", "p", "fisher_density"],
        rows,
    )


def cmd_simulate(cfg, out):
    """Full Monte Carlo campaign: n_scans scans per separation, written
    as one scan CSV (deterministic given the seed)."""
    family = cfg.density_family()
    camera = cfg.camera()
    seeds = [
        int(child.generate_state(1, np.uint64)[0])
        for child in np.random.SeedSequence(cfg.seed).spawn(len(cfg.s_list))
    ]
    records = []
    for s, seed in zip(cfg.s_list, seeds):
        records.extend(cam.simulate_batch(family(s), camera, cfg.n_scans, seed))
    cam.write_scans(out, records, cfg.metadata())


def cmd_estimate(scans_path, calibration, out):
    """Estimator statistics from a scan CSV: per-separation mean,
    variance, bias, and the pixelated / direct-imaging CRLBs."""
    records, meta = cam.read_scans(scans_path)
    cfg = ExperimentConfig(
        sigma_um=float(meta["sigma_um"]),
        pixel_um=float(meta["pixel_um"]),
        n_pixels=int(meta["n_pixels"]),
        n_detections=float(meta["n_detections"]),
        n_scans=int(meta["n_scans"]),
        seed=int(meta["seed"]),
        readout_sd=float(meta["readout_sd"]),
        columns_summed=int(meta["columns_summed"]),
        kind=meta["kind"],
        s_list=_parse_s_list(meta["s_list"]),
    )
    family = cfg.density_family()
    camera = cfg.camera()
    if calibration == "model":
        cal = est.model_calibration(family, camera, cfg.s_list, cfg.columns_summed)
    elif calibration == "empirical":
        cal = est.empirical_calibration(records, cfg.columns_summed)
    else:
        raise ValueError(f"calibration must be 'model' or 'empirical', got {calibration!r}")

    direct_family = fi.gaussian_direct_family(1.0)
    n_det = int(camera.mean_detections)
    groups = {}
    for rec in records:
        groups.setdefault(rec.true_s, []).append(rec)
    rows = []
    summary = []
    for s in sorted(groups):
        stats = est.evaluate_estimator(groups[s], cal, cfg.columns_summed)
        dens = family(s)
        f_pix = fi.fisher_pixelated(dens, camera)
        f_cont = fi.fisher_continuous(family, s)
        crlb_pix = fi.crlb(f_pix, n_det).variance_bound
        crlb_dir = fi.crlb(fi.fisher_continuous(direct_family, s), n_det).variance_bound
        rows.append(
            {
                "s_true": s,
                "mean": stats.mean_estimate,
                "variance": stats.variance,
                "bias": stats.bias,
                "n": stats.n_samples,
                "crlb_pixelated": crlb_pix,
                "crlb_direct": crlb_dir,
            }
        )
        summary.append(
            f"  s={s:<7g} mean={stats.mean_estimate:.5f} var={stats.variance:.3e} "
            f"crlb_pix={crlb_pix:.3e} crlb_cont={fi.crlb(f_cont, n_det).variance_bound:.3e} "
            f"crlb_direct={crlb_dir:.3e}"
        )
    meta_out = dict(meta)
    meta_out["calibration"] = calibration
    meta_out["calibration_a"] = repr(cal.a)
    meta_out["calibration_b"] = repr(cal.b)
    est.write_stats(out, rows, meta_out)
    print(f"calibration: a={cal.a:.3f} b={cal.b:.2f} (rms {cal.residual_rms:.3f})")
    print("\n".join(summary))


def cmd_selftest(criteria=None, master_seed=selftest.DEFAULT_SEED):
    """Run the acceptance checks; returns the number of failures."""
    results = selftest.run(criteria, master_seed)
    for res in results:
        flag = "PASS" if res.passed else "FAIL"
        print(f"[{flag}] criterion {res.criterion} ({res.seconds:.1f} s): {res.detail}")
        for label, ok in res.subchecks:
            if not ok:
                print(f"       failed: {label}")
    failures = sum(not r.passed for r in results)
    print(f"{len(results) - failures}/{len(results)} criteria passed (backend: {BACKEND})")
    return failures


def _add_experiment_flags(p):
    p.add_argument("--config", help="flat key = value configuration file")
    p.add_argument("--sigma-um", dest="sigma_um", type=float, help="PSF width in um")
    p.add_argument("--pixel-um", dest="pixel_um", type=float, help="pixel pitch in um")
    p.add_argument("--n-pixels", dest="n_pixels", type=int, help="camera columns")
    p.add_argument("--n-detections", dest="n_detections", type=float,
                   help="mean detections per scan")
    p.add_argument("--n-scans", dest="n_scans", type=int, help="scans per separation")
    p.add_argument("--seed", dest="seed", type=int, help="master seed")
    p.add_argument("--s-list", dest="s_list", type=_parse_s_list,
                   help="comma-separated separations in sigma units")
    p.add_argument("--readout-sd", dest="readout_sd", type=float,
                   help="per-column readout noise sd in electrons")
    p.add_argument("--columns-summed", dest="columns_summed", type=int,
                   help="columns summed into the central statistic")
    p.add_argument("--kind", dest="kind", choices=["direct", "sgn"],
                   help="imaging mode")


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="sgnsep",
        description="Sub-Rayleigh separation estimation with a signum Fourier filter",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fisher-curve", help="Fisher information vs separation")
    p.add_argument("--kind", choices=["direct", "sgn", "both"], default="both")
    p.add_argument("--s-min", type=float, default=0.0)
    p.add_argument("--s-max", type=float, default=2.5)
    p.add_argument("--n-points", type=int, default=41)
    p.add_argument("--out", default="-")

    p = sub.add_parser("density", help="density and Fisher-density profiles")
    p.add_argument("--s-list", type=_parse_s_list, default=(0.2, 0.4))
    p.add_argument("--kind", choices=["direct", "sgn"], default="sgn")
    p.add_argument("--x-max", type=float, default=4.0)
    p.add_argument("--n-points", type=int, default=401)
    p.add_argument("--out", default="-")

    p = sub.add_parser("simulate", help="Monte Carlo camera campaign")
    _add_experiment_flags(p)
    p.add_argument("--out", help="scan CSV path (may also come from --config)")

    p = sub.add_parser("estimate", help="estimator statistics from a scan CSV")
    p.add_argument("--scans", required=True, help="scan CSV from 'simulate'")
    p.add_argument("--calibration", choices=["model", "empirical"], default="model")
    p.add_argument("--out", required=True)

    p = sub.add_parser("selftest", help="run the acceptance checks")
    p.add_argument("--criteria", help="comma-separated criterion numbers (default all)")
    p.add_argument("--seed", type=int, default=selftest.DEFAULT_SEED)

    args = parser.parse_args(argv)
    if args.command == "fisher-curve":
        cmd_fisher_curve(args.kind, args.s_min, args.s_max, args.n_points, args.out)
    elif args.command == "density":
        cmd_density_profile(args.s_list, args.kind, args.x_max, args.n_points, args.out)
    elif args.command == "simulate":
        cfg, out = build_config(args)
        if out is None:
            parser.error("simulate needs --out (flag or config file)")
        cmd_simulate(cfg, out)
    elif args.command == "estimate":
        cmd_estimate(args.scans, args.calibration, args.out)
    elif args.command == "selftest":
        criteria = args.criteria.split(",") if args.criteria else None
        return cmd_selftest(criteria, args.seed)
    return 0


if __name__ == "__main__":
    sys.exit(main())
