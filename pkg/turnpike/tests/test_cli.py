"""End-to-end tests of the command line and the Turnpike client."""
import os

import pytest

from turnpike import Turnpike, emit_builtin_configs, worker_count
from turnpike.__main__ import main
from turnpike.client import cheap_control_horizon
from turnpike.exceptions import ConfigError
from turnpike.io import load_config

PARTICLE = """
experiment = particle
seed = 4
particle.n = 12
particle.dt = 0.01
particle.t_end = 1
particle.fit_t_lo = 0.2
particle.fit_t_hi = 0.8
particle.snapshot_every = 10
"""

PLESS = """
experiment = pless
pless.m_cells = 40
pless.t_end = 1
pless.snapshot_times = 0, 0.5, 1
pless.fit_t_lo = 0.1
pless.fit_t_hi = 0.8
"""

EULER = """
experiment = euler
euler.m_cells = 40
euler.t_end = 1
euler.snapshot_times = 0, 1
euler.cheap_control = false
"""

CONVERGENCE = """
experiment = convergence
meanfield.n_list = 20, 320
meanfield.dt = 0.05
meanfield.t_end = 0.2
"""


def _config(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def _kv(directory):
    with open(os.path.join(directory, "report.kv"), encoding="utf-8") as handle:
        return dict(line.split("=", 1) for line in handle.read().splitlines())


def test_particle_run(tmp_path, capsys):
    out = str(tmp_path / "out")
    assert main(["run", "--config", _config(tmp_path, PARTICLE), "--out-dir", out]) == 0
    assert capsys.readouterr().out.strip() == "particle: PASS"
    kv = _kv(out)
    assert kv["passed"] == "true"
    assert kv["particle.seed_used"] == "4"
    assert kv["check.cheap_control"] == "true"
    # t_end = 1 is shorter than 10 sqrt(lambda), so the check reruns over 5.
    assert float(kv["cheap_control.horizon"]) == pytest.approx(5.0)
    with open(os.path.join(out, "particle_costs.csv"), encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    assert lines[0] == "t,state_cost,control_cost,total_integrand"
    assert len(lines) == 102
    with open(os.path.join(out, "particle_snapshots.csv"), encoding="utf-8") as handle:
        assert len(handle.read().splitlines()) == 1 + 11 * 12


def test_particle_run_is_deterministic(tmp_path):
    config = _config(tmp_path, PARTICLE)
    first, second = str(tmp_path / "a"), str(tmp_path / "b")
    assert main(["run", "--config", config, "--out-dir", first]) == 0
    assert main(["run", "--config", config, "--out-dir", second]) == 0
    for name in ("particle_costs.csv", "particle_snapshots.csv", "report.kv"):
        with open(os.path.join(first, name), "rb") as a, open(os.path.join(second, name), "rb") as b:
            assert a.read() == b.read()


def test_seed_override(tmp_path):
    out = str(tmp_path / "out")
    text = PARTICLE + "particle.seed = 99\n"
    assert main(["run", "--config", _config(tmp_path, text), "--out-dir", out, "--seed", "5"]) == 0
    assert _kv(out)["particle.seed_used"] == "5"


def test_pless_run(tmp_path):
    out = str(tmp_path / "out")
    assert main(["run", "--config", _config(tmp_path, PLESS), "--out-dir", out]) == 0
    kv = _kv(out)
    for check in ("mass_conservation", "no_floor_events", "q1_null_integral", "energy.non_increasing",
                  "energy.envelope", "energy.fit_rate", "turnpike.envelope", "cheap_control"):
        assert kv["check.%s" % check] == "true", check
    with open(os.path.join(out, "pless_snapshots.csv"), encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    assert lines[0] == "t,x,rho,u"
    assert len(lines) == 1 + 3 * 40


def test_euler_run(tmp_path):
    out = str(tmp_path / "out")
    assert main(["run", "--config", _config(tmp_path, EULER), "--out-dir", out]) == 0
    kv = _kv(out)
    assert kv["check.q2_nonpositive_integral"] == "true"
    assert kv["check.energy_inequality"] == "true"
    assert "check.cheap_control" not in kv
    with open(os.path.join(out, "euler_series.csv"), encoding="utf-8") as handle:
        assert handle.readline().strip() == "t,h_functional,state_cost,g_cost"
    with open(os.path.join(out, "euler_snapshots.csv"), encoding="utf-8") as handle:
        assert len(handle.read().splitlines()) == 1 + 2 * 40


def test_convergence_run(tmp_path):
    out = str(tmp_path / "out")
    assert main(["run", "--config", _config(tmp_path, CONVERGENCE), "--out-dir", out]) == 0
    with open(os.path.join(out, "convergence.csv"), encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    assert lines[0] == "N,moment2_t0,moment2_tend,w1_x,w1_v,cost_total"
    assert [line.split(",")[0] for line in lines[1:]] == ["20", "320"]
    kv = _kv(out)
    assert kv["check.N320.cheap_control"] == "true"
    assert kv["check.w1_x.non_increasing"] == "true"
    assert kv["meanfield.reduced_sizes"] == "true"
    assert kv["meanfield.reference_n_list"] == "100,1000,10000"


def test_fit_subcommand(tmp_path, capsys):
    out = str(tmp_path / "out")
    assert main(["run", "--config", _config(tmp_path, PARTICLE), "--out-dir", out]) == 0
    capsys.readouterr()
    series = os.path.join(out, "particle_costs.csv")
    fit_dir = str(tmp_path / "fit")
    assert main(["fit", "--series", series, "--t-lo", "0.2", "--t-hi", "0.8", "--column", "total_integrand",
                 "--out", fit_dir]) == 0
    text = capsys.readouterr().out
    assert "fit.alpha_hat" in text
    assert float(_kv(fit_dir)["fit.alpha_hat"]) >= 0.9 * 4.0


def test_fit_subcommand_errors(tmp_path):
    series = _config(tmp_path, "t,a\n0,1\n1,0.5\n", "short.csv")
    assert main(["fit", "--series", series, "--t-lo", "0", "--t-hi", "1"]) == 2
    assert main(["fit", "--series", series, "--t-lo", "1", "--t-hi", "0"]) == 2
    assert main(["fit", "--series", str(tmp_path / "missing.csv"), "--t-lo", "0", "--t-hi", "1"]) == 2


def test_bad_config_exits_with_usage_error(tmp_path, capsys):
    config = _config(tmp_path, PARTICLE + "particle.bogus = 1\n")
    assert main(["run", "--config", config, "--out-dir", str(tmp_path / "out")]) == 2
    assert "particle.bogus" in capsys.readouterr().err
    assert not os.path.exists(str(tmp_path / "out"))
    assert main(["run", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_unknown_kernel(tmp_path):
    config = _config(tmp_path, PARTICLE + "kernel.name = gaussian\n")
    assert main(["run", "--config", config, "--out-dir", str(tmp_path / "out")]) == 2


def test_runtime_error_exit_code(tmp_path):
    text = "experiment = euler\neuler.m_cells = 20\neuler.t_end = 0.1\neuler.p0 = 1e-12\neuler.e_floor = 1e-8\n"
    assert main(["run", "--config", _config(tmp_path, text), "--out-dir", str(tmp_path / "out")]) == 3


def test_init_configs(tmp_path, capsys):
    out = str(tmp_path / "configs")
    assert main(["init-configs", "--out-dir", out]) == 0
    written = capsys.readouterr().out.split()
    assert sorted(os.path.basename(p) for p in written) == ["convergence.cfg", "euler.cfg", "particle.cfg",
                                                            "pless.cfg"]
    for path in written:
        config = load_config(path)
        assert config.output_dir == "out/%s" % config.experiment
    assert len(emit_builtin_configs(out)) == 4
    for path in written:
        run_dir = str(tmp_path / "runs" / os.path.basename(path))
        assert main(["run", "--config", path, "--out-dir", run_dir]) == 0, path
        assert _kv(run_dir)["passed"] == "true"
    euler = _kv(str(tmp_path / "runs" / "euler.cfg"))
    assert euler["floor_events"] == "0"
    assert float(euler["cheap_control.horizon"]) == pytest.approx(10.0)


def test_worker_count():
    assert worker_count({}) == 1
    assert worker_count({"TURNPIKE_THREADS": "4"}) == 4
    with pytest.raises(ConfigError):
        worker_count({"TURNPIKE_THREADS": "zero"})
    with pytest.raises(ConfigError):
        worker_count({"TURNPIKE_THREADS": "0"})


def test_client_outcome(tmp_path):
    config = load_config(_config(tmp_path, PARTICLE))
    outcome = Turnpike(workers=1).run(config, str(tmp_path / "out"))
    assert outcome.status == 0
    assert outcome.report.passed
    assert sorted(os.path.basename(p) for p in outcome.files) == [
        "particle_costs.csv", "particle_snapshots.csv", "report.kv", "report.txt"]


def test_cheap_control_horizon():
    assert cheap_control_horizon(0.25, 1.0) == 5.0
    assert cheap_control_horizon(1.0, 4.0) == 10.0
    assert cheap_control_horizon(1.0, 12.0) == 12.0
