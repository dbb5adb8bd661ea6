"""CLI commands: schemas, determinism, config precedence, round trips."""

import numpy as np
import pytest

from sgnsep import cli
from sgnsep.estimator import read_stats


def _read_table(path):
    meta = {}
    rows = []
    header = None
    for line in open(path).read().splitlines():
        if not line:
            continue
        if line.startswith("#"):
            if "=" in line:
                k, v = line[1:].split("=", 1)
                meta[k.strip()] = v.strip()
            continue
        cells = line.split(",")
        if header is None:
            header = cells
        else:
            rows.append(dict(zip(header, [float(c) for c in cells])))
    return header, rows, meta


class TestFisherCurve:
    def test_schema_and_zero_row(self, tmp_path):
        out = tmp_path / "fisher.csv"
        cli.main(["fisher-curve", "--s-min", "0", "--s-max", "0.4",
                  "--n-points", "5", "--out", str(out)])
        header, rows, _ = _read_table(out)
        assert header == ["s", "F_direct", "F_sgn", "F_sgn_asymptote"]
        assert rows[0]["s"] == 0.0
        assert rows[0]["F_direct"] == 0.0
        assert rows[0]["F_sgn"] == 0.0
        assert rows[0]["F_sgn_asymptote"] == 0.0

    def test_small_s_ratio_and_crossing(self, tmp_path):
        out = tmp_path / "fisher.csv"
        cli.main(["fisher-curve", "--s-min", "0.01", "--s-max", "2.0",
                  "--n-points", "24", "--out", str(out)])
        _, rows, _ = _read_table(out)
        # near the origin the quadrature tracks the linear law
        assert 0.95 <= rows[0]["F_sgn"] / rows[0]["F_sgn_asymptote"] <= 1.05
        # the direct and filtered curves cross inside (0, 5)
        diff = [r["F_direct"] - r["F_sgn"] for r in rows]
        assert min(diff) < 0 < max(diff)

    def test_crossing_location_regression(self):
        # frozen from quadrature: the curves cross near 1.0829 sigma
        from scipy.optimize import brentq

        from sgnsep.fisher import fisher_continuous, gaussian_direct_family, gaussian_sgn_family

        direct, sgn = gaussian_direct_family(1.0), gaussian_sgn_family(1.0)
        s_star = brentq(
            lambda s: fisher_continuous(direct, s).value - fisher_continuous(sgn, s).value,
            0.5, 4.0, xtol=1e-10,
        )
        assert s_star == pytest.approx(1.0828563801048465, abs=1e-6)

    def test_kind_filter(self, tmp_path):
        out = tmp_path / "fisher.csv"
        cli.main(["fisher-curve", "--kind", "direct", "--s-min", "0.1",
                  "--s-max", "0.2", "--n-points", "2", "--out", str(out)])
        _, rows, _ = _read_table(out)
        assert np.isnan(rows[0]["F_sgn"])
        assert rows[0]["F_direct"] > 0


class TestDensityProfile:
    def test_schema_and_parity(self, tmp_path):
        out = tmp_path / "density.csv"
        cli.main(["density", "--s-list", "0.2,0.4", "--n-points", "81",
                  "--x-max", "2.0", "--out", str(out)])
        header, rows, _ = _read_table(out)
        assert header == ["s", "x", "p", "fisher_density"]
        by_s = {}
        for r in rows:
            by_s.setdefault(r["s"], []).append(r)
        assert set(by_s) == {0.2, 0.4}
        block = by_s[0.2]
        p = np.array([r["p"] for r in block])
        assert np.allclose(p, p[::-1], atol=1e-12)
        assert np.all(np.array([r["fisher_density"] for r in block]) >= 0)


class TestSimulateEstimate:
    def _simulate(self, tmp_path, **overrides):
        out = tmp_path / "scans.csv"
        args = [
            "simulate",
            "--s-list", overrides.pop("s_list", "0.06,0.1"),
            "--n-scans", str(overrides.pop("n_scans", 25)),
            "--n-detections", str(overrides.pop("n_detections", 50000)),
            "--seed", str(overrides.pop("seed", 11)),
            "--out", str(out),
        ]
        cli.main(args)
        return out

    def test_byte_determinism(self, tmp_path):
        a = self._simulate(tmp_path, seed=11)
        blob_a = a.read_bytes()
        a.unlink()
        b = self._simulate(tmp_path, seed=11)
        assert blob_a == b.read_bytes()

    def test_seed_changes_output(self, tmp_path):
        a = self._simulate(tmp_path, seed=11).read_bytes()
        (tmp_path / "scans.csv").unlink()
        b = self._simulate(tmp_path, seed=12).read_bytes()
        assert a != b

    def test_estimate_round_trip(self, tmp_path):
        scans = self._simulate(tmp_path, s_list="0.06,0.1,0.14", n_scans=40)
        out = tmp_path / "stats.csv"
        cli.main(["estimate", "--scans", str(scans), "--out", str(out)])
        rows, meta = read_stats(out)
        assert [r["s_true"] for r in rows] == [0.06, 0.1, 0.14]
        for r in rows:
            assert r["n"] == 40
            assert r["variance"] > 0
            assert r["crlb_pixelated"] > 0
            assert r["crlb_direct"] > r["crlb_pixelated"]  # sub-Rayleigh gain
        assert meta["calibration"] == "model"

    def test_estimate_rejects_direct_kind_scans(self, tmp_path):
        # plain imaging has a falling central response (the dip forms), so
        # the growing-quadratic calibration is degenerate by construction
        from sgnsep.errors import FitError

        out = tmp_path / "scans.csv"
        cli.main([
            "simulate", "--kind", "direct", "--s-list", "0.06,0.1,0.14",
            "--n-scans", "10", "--n-detections", "50000", "--seed", "3",
            "--out", str(out),
        ])
        with pytest.raises(FitError):
            cli.main(["estimate", "--scans", str(out),
                      "--out", str(tmp_path / "stats.csv")])

    def test_estimate_empirical_calibration(self, tmp_path):
        scans = self._simulate(tmp_path, s_list="0.06,0.1,0.14", n_scans=40)
        out = tmp_path / "stats.csv"
        cli.main(["estimate", "--scans", str(scans), "--calibration", "empirical",
                  "--out", str(out)])
        rows, meta = read_stats(out)
        assert meta["calibration"] == "empirical"
        assert len(rows) == 3


class TestConfigFile:
    def test_precedence_flags_over_file_over_defaults(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text(
            "# campaign configuration\n"
            "n_scans = 7\n"
            "seed = 123\n"
            "s_list = 0.05,0.1\n"
            "n_detections = 20000\n"
        )
        out = tmp_path / "scans.csv"
        cli.main(["simulate", "--config", str(cfg), "--seed", "999",
                  "--out", str(out)])
        _, rows, meta = _read_table(out)
        assert meta["seed"] == "999"        # flag wins
        assert meta["n_scans"] == "7"       # file wins over default
        assert meta["kind"] == "sgn"        # default
        assert len(rows) == 14

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("pixels = 3\n")
        with pytest.raises(ValueError):
            cli.main(["simulate", "--config", str(cfg), "--out", str(tmp_path / "x.csv")])

    def test_config_validation(self):
        with pytest.raises(ValueError):
            cli.ExperimentConfig(s_list=())
        with pytest.raises(ValueError):
            cli.ExperimentConfig(s_list=(0.1, 0.05))
        with pytest.raises(ValueError):
            cli.ExperimentConfig(s_list=(-0.1, 0.05))
        with pytest.raises(ValueError):
            cli.ExperimentConfig(kind="holographic")


class TestSelftestCommand:
    def test_fast_criteria_subset(self, capsys):
        rc = cli.main(["selftest", "--criteria", "4,5"])
        out = capsys.readouterr().out
        assert "criterion 4" in out
        assert "criterion 5" in out
        assert "criterion 1" not in out
        assert rc == 0
