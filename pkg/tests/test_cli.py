import subprocess
import sys

import pytest

from reject_gate.cli import main
from reject_gate.config import ExperimentConfig


@pytest.fixture
def small_config(tmp_path):
    path = tmp_path / "small.cfg"
    cfg = ExperimentConfig(trials=4, m_values=(5, 20), n_test=100, output_dir=str(tmp_path / "res"))
    path.write_text(cfg.dumps())
    return path


def test_demo_fig1(tmp_path):
    assert main(["--out", str(tmp_path), "demo", "fig1"]) == 0
    lines = (tmp_path / "fig1.csv").read_text().splitlines()
    assert lines[0] == "x,prediction,uncertainty,threshold,accepted"
    svg = (tmp_path / "fig1.svg").read_text()
    assert svg.lstrip().startswith("<?xml") and "<svg" in svg
    rows = [ln.split(",") for ln in lines[1:]]
    flips = [float(rows[i][0]) for i in range(1, len(rows)) if rows[i][4] != rows[i - 1][4]]
    assert any(abs(x - -3.2566) < 0.01 for x in flips)


def test_demo_fig2b_repeatable(tmp_path):
    main(["demo", "fig2b", "--out", str(tmp_path / "a")])
    main(["demo", "fig2b", "--out", str(tmp_path / "b")])
    for name in ("fig2b.csv", "fig2b.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_demo_no_svg(tmp_path):
    assert main(["demo", "fig2a", "--no-svg", "--out", str(tmp_path)]) == 0
    assert (tmp_path / "fig2a.csv").exists() and not (tmp_path / "fig2a.svg").exists()


def test_demo_seed_changes_fit(tmp_path):
    main(["demo", "fig2b", "--no-svg", "--seed", "1", "--out", str(tmp_path / "a")])
    main(["demo", "fig2b", "--no-svg", "--seed", "2", "--out", str(tmp_path / "b")])
    assert (tmp_path / "a" / "fig2b.csv").read_text() != (tmp_path / "b" / "fig2b.csv").read_text()


def test_demo_env_seed_zero_is_honoured(tmp_path, monkeypatch):
    main(["demo", "fig2b", "--no-svg", "--seed", "0", "--out", str(tmp_path / "flag")])
    monkeypatch.setenv("REJECT_GATE_SEED", "0")
    main(["demo", "fig2b", "--no-svg", "--out", str(tmp_path / "env")])
    assert (tmp_path / "flag" / "fig2b.csv").read_text() == (tmp_path / "env" / "fig2b.csv").read_text()


def test_experiment_outputs(small_config, tmp_path, capsys):
    assert main(["experiment", str(small_config)]) == 0
    out = tmp_path / "res"
    lines = (out / "aurec.csv").read_text().splitlines()
    assert lines[0] == "m,method,mean_aurec,q40,q60,trials"
    assert {ln.split(",")[1] for ln in lines[1:]} == {"plug_in", "bayesian", "epistemic",
                                                      "aleatoric_oracle"}
    assert (out / "aurec.svg").exists()
    assert "epistemic" in capsys.readouterr().out


def test_experiment_missing_trials(tmp_path, capsys):
    text = "\n".join(ln for ln in ExperimentConfig().dumps().splitlines() if not ln.startswith("trials"))
    path = tmp_path / "bad.cfg"
    path.write_text(text)
    assert main(["experiment", str(path)]) == 1
    assert "trials" in capsys.readouterr().err


def test_experiment_missing_file(tmp_path):
    assert main(["experiment", str(tmp_path / "nope.cfg")]) == 2


def test_experiment_unwritable_output(small_config, tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert main(["experiment", str(small_config), "--out", str(blocker / "sub")]) == 2


def test_seed_precedence(small_config, tmp_path, monkeypatch):
    def csv(*extra):
        out = tmp_path / ("o" + "_".join(extra))
        main(["experiment", str(small_config), "--no-svg", "--out", str(out), *extra])
        return (out / "aurec.csv").read_text()

    base = csv()
    monkeypatch.setenv("REJECT_GATE_SEED", "999")
    env = csv()
    assert env != base
    assert csv("--seed", "999") == env
    monkeypatch.setenv("REJECT_GATE_SEED", "1")
    assert csv("--seed", "999") == env


def test_bad_env_seed(small_config, monkeypatch):
    monkeypatch.setenv("REJECT_GATE_SEED", "abc")
    assert main(["experiment", str(small_config)]) == 1


def test_verify_passes(capsys):
    assert main(["verify"]) == 0
    out = capsys.readouterr().out
    assert "theorem1" in out and "FAIL" not in out


def test_verify_perturbed_names_theorem1(capsys):
    assert main(["verify", "--perturb-epistemic", "0.05"]) == 3
    assert "theorem1" in capsys.readouterr().err


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "reject_gate", "demo", "fig1", "--no-svg",
                           "--out", str(tmp_path)], capture_output=True, text=True)
    assert proc.returncode == 0 and (tmp_path / "fig1.csv").exists()
