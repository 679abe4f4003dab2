import numpy as np
import pytest

from mixflow import cli, harness
from mixflow.config import dump_config, parse_config
from mixflow.diagnostics import read_diagnostics
from mixflow.fields import read_snapshot
from mixflow.solver import PositivityLossError

SMALL = "[grid]\nN = 32\n[run]\nt_end = 0.01\ncadence = 5\nsnapshot_cadence = 20\n"


def write(tmp_path, text, name="c.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_uniform_run_is_quiet(tmp_path):
    cfg = parse_config("[grid]\nN = 16\n[initial]\namp_rho = 0\namp_theta = 0\namp_u = 0\namp_Y = 0\n"
                       "[run]\nmax_steps = 100\ncadence = 10\n")
    res = harness.run(cfg, tmp_path)
    assert res.exit_code == 0 and res.steps == 100
    for name in ("kinetic", "bd", "temperature", "entropy"):
        assert res.summary[f"residual_{name}_abs"] <= 1e-12
    assert res.summary["drift_energy"] <= 1e-12


def test_run_artifacts(tmp_path):
    cfg = parse_config(SMALL)
    res = harness.run(cfg, tmp_path)
    assert res.exit_code == 0 and res.t == pytest.approx(0.01, rel=1e-12)
    digest, rows = read_diagnostics(tmp_path / "diagnostics.csv")
    assert digest == cfg.digest() and len(rows) == len(res.records)
    assert rows[-1]["t"] == res.t
    kv = harness.read_summary(tmp_path / "summary.kv")
    assert kv["status"] == "ok" and kv["exit_code"] == "0"
    assert "identity kinetic" in (tmp_path / "summary.txt").read_text()
    snaps = sorted(tmp_path.glob("snapshot_*.mfs"))
    assert snaps[0].name == "snapshot_000000.mfs" and len(snaps) >= 3
    for s in snaps:
        fs, grid, header = read_snapshot(s)
        fs.check()
        assert header["digest"] == cfg.digest() and grid.N == (32,)
    fs, _, header = read_snapshot(snaps[-1])
    assert header["t"] == res.t
    sidecar = snaps[-1].with_suffix(".mfs.cfg")
    assert parse_config(sidecar.read_text()) == cfg
    assert parse_config((tmp_path / "config.cfg").read_text()) == cfg


def test_entropy_nondecreasing_and_drifts(tmp_path):
    res = harness.run(parse_config(SMALL), tmp_path)
    s = res.summary
    assert s["entropy_min_increment"] >= 0
    assert max(s["drift_mass"], s["drift_momentum"], s["drift_energy"]) < 1e-12
    assert s["sign_violations"] == 0


def test_inadmissible_kinetics_only_warn(tmp_path):
    # exchange toward the heavier species with unequal formation entropies
    text = SMALL + "[mixture]\ns_st = 0.0, 5.0\n[kinetics]\nkind = pairwise_exchange\ndonor = 1\nacceptor = 0\n"
    cfg = parse_config(text)
    audit = harness.constitutive_audit(cfg)
    assert audit.passed and audit.warnings() == ["admissibility.second_law_sampling"]
    res = harness.run(cfg, tmp_path)
    assert res.exit_code == 0 and res.summary["admissibility_violations"] > 0


def test_positivity_loss_report(tmp_path, monkeypatch):
    cfg = parse_config(SMALL)
    real = harness.build_solver

    def fragile(c, grid=None):
        solver = real(c, grid)
        step, calls = solver.step, []

        def broken(q, t, dt):
            calls.append(1)
            if len(calls) == 7:
                raise PositivityLossError("temperature", -1.0, (3,))
            return step(q, t, dt)
        solver.step = broken
        return solver

    monkeypatch.setattr(harness, "build_solver", fragile)
    res = harness.run(cfg, tmp_path)
    assert res.exit_code == harness.EXIT_POSITIVITY and res.steps == 6
    kv = harness.read_summary(tmp_path / "summary.kv")
    assert kv["failure_quantity"] == "temperature" and kv["failure_step"] == "7"
    fs, _, _ = read_snapshot(tmp_path / kv["last_good_snapshot"])
    fs.check()


def test_sign_violation_exit(tmp_path):
    res = harness.run(parse_config(SMALL + "sign_tol = -1.0\n"), tmp_path)
    assert res.exit_code == harness.EXIT_SIGN and res.status == "sign_violation"


def test_uniform_windows():
    from types import SimpleNamespace as R
    recs = [R(t=t) for t in (0.0, 0.1, 0.2, 0.3, 0.35, 0.4, 0.45, 0.5)]
    wins = harness.uniform_windows(recs)
    assert [[r.t for r in w] for w in wins] == [[0.0, 0.1, 0.2, 0.3], [0.3, 0.35, 0.4, 0.45, 0.5]]


class TestAudit:
    def test_default_passes(self):
        res = harness.constitutive_audit(parse_config(""))
        assert res.passed and res.failures() == []

    @pytest.mark.parametrize("text, name", [
        ("[transport]\nalpha = 1.0\n", "coefficients.alpha_at_least_2"),
        ("[transport]\nmu1 = 3.0\n", "transport.mu_prime_upper"),
        ("[transport]\nmu1 = 0.25\n", "transport.mu_prime_lower"),
        ("[transport]\nnu = 0.5\n", "transport.nu_coupling"),
    ])
    def test_broken_hypotheses_named(self, text, name):
        res = harness.constitutive_audit(parse_config(text))
        assert not res.passed and name in res.failures()
        assert "FAIL  " + name in res.text()


class TestCli:
    def test_validate_and_audit(self, tmp_path, capsys):
        good = write(tmp_path, "")
        assert cli.main(["validate", good]) == 0
        assert cli.main(["audit", good, "--output-dir", str(tmp_path / "a")]) == 0
        assert (tmp_path / "a" / "audit.txt").exists()
        bad = write(tmp_path, "[transport]\nalpha = 1.0\n", "bad.cfg")
        assert cli.main(["audit", bad]) == harness.EXIT_AUDIT
        assert "coefficients.alpha_at_least_2" in capsys.readouterr().out

    def test_config_errors(self, tmp_path, capsys):
        assert cli.main(["validate", str(tmp_path / "missing.cfg")]) == harness.EXIT_CONFIG
        bad = write(tmp_path, "[mixture]\ngamma_minus = 0.5\n")
        assert cli.main(["validate", bad]) == harness.EXIT_CONFIG
        assert "gamma_minus must exceed 1" in capsys.readouterr().err
        typo = write(tmp_path, "[transport]\nvisocsity = 2\n", "typo.cfg")
        assert cli.main(["run", typo]) == harness.EXIT_CONFIG
        assert "visocsity" in capsys.readouterr().err

    def test_run_refuses_failed_audit(self, tmp_path):
        path = write(tmp_path, SMALL + "[transport]\nnu = 0.5\n")
        out = tmp_path / "out"
        assert cli.main(["run", path, "--output-dir", str(out)]) == harness.EXIT_AUDIT
        assert not out.exists()

    def test_run_with_overrides(self, tmp_path, capsys):
        path = write(tmp_path, SMALL)
        out = tmp_path / "out"
        code = cli.main(["run", path, "--output-dir", str(out), "--cadence", "2", "--max-steps", "6",
                         "--seed", "4"])
        assert code == 0 and "run status: ok" in capsys.readouterr().out
        _, rows = read_diagnostics(out / "diagnostics.csv")
        assert len(rows) == 4
        saved = parse_config((out / "config.cfg").read_text())
        assert saved.run.cadence == 2 and saved.run.seed == 4 and saved.run.max_steps == 6

    def test_bad_initial_condition(self, tmp_path, capsys):
        path = write(tmp_path, "[initial]\nY0 = 0.05, 0.95\n")
        assert cli.main(["run", path, "--output-dir", str(tmp_path / "o"), "--quiet"]) == 1
        assert "species 0" in capsys.readouterr().err

    def test_mms_errors(self, tmp_path):
        path = write(tmp_path, "[initial]\nkind = manufactured\n")
        assert cli.main(["mms", path, "--levels", "2"]) == harness.EXIT_MMS
        path = write(tmp_path, "[grid]\ndim = 2\nN = 8\n[initial]\nu0 = 0.0\n", "d2.cfg")
        assert cli.main(["mms", path]) == harness.EXIT_MMS

    def test_dump_is_valid_input(self, tmp_path):
        path = write(tmp_path, dump_config(parse_config(SMALL)))
        assert cli.main(["validate", path]) == 0
