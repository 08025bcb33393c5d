import io
import json

import pandas as pd
import pytest

from tests.conftest import ALPHA, BETA, TAU_DIRAC, U_STAR, V_STAR
from wcdelay.cli import main
from wcdelay.config import BASE_DIR, settings


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_csv(text: str) -> pd.DataFrame:
    return pd.read_csv(io.StringIO(text))


class TestEquilibria:
    def test_section3(self, capsys):
        code, out, _ = run_cli(capsys, "equilibria", "--preset", "section3")
        assert code == 0
        frame = read_csv(out)
        assert list(frame.columns) == ["u_star", "v_star", "phi1", "phi2", "alpha", "beta"]
        row = frame.iloc[((frame.u_star - U_STAR).abs() + (frame.v_star - V_STAR).abs()).idxmin()]
        assert row.alpha == pytest.approx(ALPHA, rel=1e-3)
        assert row.beta == pytest.approx(BETA, rel=1e-3)

    def test_decoupled_json(self, capsys):
        code, out, _ = run_cli(capsys, "equilibria", "--preset", "decoupled", "--format", "json")
        assert code == 0
        rows = json.loads(out)
        assert len(rows) == 1
        assert rows[0]["u_star"] == pytest.approx(0.5)
        assert rows[0]["v_star"] == pytest.approx(0.5)

    def test_model_from_yaml(self, capsys, tmp_path):
        config = tmp_path / "run.yaml"
        config.write_text(
            "model:\n  a: 0\n  b: 0\n  c: 0\n  d: 0\n  theta_u: 0\n  theta_v: 0\n  delta: 2\n",
            encoding="utf-8",
        )
        code, out, _ = run_cli(capsys, "equilibria", "--config", str(config))
        assert code == 0
        assert len(read_csv(out)) == 1

    def test_missing_model(self, capsys):
        code, _, err = run_cli(capsys, "equilibria")
        assert code == 2
        assert "preset" in err


class TestConfigErrors:
    def test_malformed_json_names_line(self, capsys, tmp_path):
        config = tmp_path / "run.json"
        config.write_text('{\n  "preset": "section3",\n  "kernel" "dirac"\n}\n', encoding="utf-8")
        code, _, err = run_cli(capsys, "critical-tau", "--config", str(config))
        assert code == 2
        assert "第 3 行" in err

    def test_unknown_key(self, capsys, tmp_path):
        config = tmp_path / "run.json"
        config.write_text(json.dumps({"preset": "section3", "kernal": "dirac"}), encoding="utf-8")
        code, _, err = run_cli(capsys, "critical-tau", "--config", str(config))
        assert code == 2
        assert "kernal" in err

    def test_bad_kernel_token(self, capsys):
        code, _, err = run_cli(capsys, "boundary", "--kernel", "uniform:eps=1.5")
        assert code == 2
        assert "eps=1.5" in err

    def test_unknown_preset(self, capsys):
        code, _, err = run_cli(capsys, "equilibria", "--preset", "nope")
        assert code == 2
        assert "section3" in err

    @pytest.mark.parametrize("item", ["bogus_tol=1", "marginal_tol=abc", "marginal_tol"])
    def test_tol_override_rejected(self, capsys, item):
        code, _, _ = run_cli(capsys, "presets", "--tol-override", item)
        assert code == 2

    def test_tol_override_is_scoped(self, capsys):
        before = settings.arc_tol
        code, _, _ = run_cli(capsys, "boundary", "--kernel", "gamma:p=2", "--tol-override", "arc_tol=0.5")
        assert code == 0
        assert settings.arc_tol == before


class TestBoundary:
    def test_strong_gamma_json(self, capsys):
        code, out, _ = run_cli(capsys, "boundary", "--kernel", "gamma:p=2", "--tau", "1", "--format", "json")
        assert code == 0
        document = json.loads(out)
        assert document["bounded"] is True
        assert document["double_hopf"] == pytest.approx([-18.0, 81.0], abs=1e-8)
        assert document["zero_hopf"] == pytest.approx([-8.0, -9.0], abs=1e-8)
        assert {row["segment"] for row in document["segments"]} == {"gamma", "l0", "ltau"}

    def test_weak_gamma_unbounded(self, capsys):
        code, out, _ = run_cli(capsys, "boundary", "--kernel", "gamma:p=1", "--format", "json")
        assert code == 0
        document = json.loads(out)
        assert document["bounded"] is False
        assert document["double_hopf"] is None
        assert "closure_radius" in document

    def test_csv_with_companion(self, capsys, tmp_path):
        path = tmp_path / "out" / "dirac.csv"
        code, _, _ = run_cli(capsys, "boundary", "--kernel", "dirac", "--output", str(path))
        assert code == 0
        frame = pd.read_csv(path)
        assert list(frame.columns) == ["segment", "omega", "alpha", "beta"]
        companion = json.loads((tmp_path / "out" / "dirac.codim2.json").read_text(encoding="utf-8"))
        assert companion["bt"] == [2.0, 1.0]
        assert companion["mu_tau"] == pytest.approx(-2.26183, abs=1e-4)

    def test_zero_delay_rejected(self, capsys):
        code, _, _ = run_cli(capsys, "boundary", "--tau", "0")
        assert code == 4


class TestCriticalTau:
    def test_dirac(self, capsys):
        code, out, _ = run_cli(capsys, "critical-tau", "--preset", "section3", "--kernel", "dirac")
        assert code == 0
        document = json.loads(out)
        assert document["tau_star"] == pytest.approx(TAU_DIRAC, abs=1e-5)
        assert document["crossing_type"] == "HopfLine"
        assert len(document["direct_candidates"]) == 2

    def test_weak_gamma_none(self, capsys):
        code, out, _ = run_cli(
            capsys, "critical-tau", "--alpha", str(ALPHA), "--beta", str(BETA),
            "--kernel", "gamma:p=1", "--tau-max", "100",
        )
        assert code == 0
        document = json.loads(out)
        assert document["tau_star"] is None
        assert document["crossing_type"] is None

    def test_unstable_without_delay(self, capsys):
        code, _, _ = run_cli(capsys, "critical-tau", "--alpha", "2.5", "--beta", "0")
        assert code == 4

    def test_alpha_without_beta(self, capsys):
        code, _, _ = run_cli(capsys, "critical-tau", "--alpha", "1.0")
        assert code == 2


class TestSimulate:
    def test_dirac_oscillates(self, capsys, tmp_path):
        # τ=0.1 远离 Hopf 点，轨道是多峰的复杂振荡，只要求不衰减
        path = tmp_path / "traj.csv"
        code, _, _ = run_cli(
            capsys, "simulate", "--preset", "section3", "--kernel", "dirac", "--tau", "0.1",
            "--dt", "0.002", "--t-end", "40", "--output", str(path),
        )
        assert code == 0
        assert list(pd.read_csv(path).columns) == ["t", "u", "v"]
        behavior = json.loads((tmp_path / "traj.behavior.json").read_text(encoding="utf-8"))
        assert behavior["verdict"] != "Decay"
        assert behavior["amplitude"] > 0

    def test_dirac_limit_cycle_past_hopf(self, capsys, tmp_path):
        path = tmp_path / "cycle.csv"
        code, _, _ = run_cli(
            capsys, "simulate", "--preset", "section3", "--kernel", "dirac", "--tau", str(1.1 * TAU_DIRAC),
            "--dt", "0.002", "--t-end", "40", "--output", str(path),
        )
        assert code == 0
        behavior = json.loads((tmp_path / "cycle.behavior.json").read_text(encoding="utf-8"))
        assert behavior["verdict"] == "LimitCycle"
        assert behavior["period"] > 0

    def test_gamma_chain_columns(self, capsys, tmp_path):
        path = tmp_path / "chain.csv"
        code, _, _ = run_cli(
            capsys, "simulate", "--preset", "section3", "--kernel", "gamma:p=2", "--tau", "0.1",
            "--dt", "0.01", "--t-end", "2", "--output", str(path),
        )
        assert code == 0
        assert list(pd.read_csv(path).columns) == ["t", "u", "v", "x1", "x2", "y1", "y2"]

    def test_zero_delay(self, capsys):
        code, out, _ = run_cli(
            capsys, "simulate", "--preset", "section3", "--tau", "0", "--dt", "0.01", "--t-end", "5",
        )
        assert code == 0
        frame = read_csv(out)
        assert len(frame) == 501
        assert frame.t.iloc[-1] == pytest.approx(5.0)

    def test_step_exceeds_delay(self, capsys):
        code, _, err = run_cli(
            capsys, "simulate", "--preset", "section3", "--tau", "0.01", "--dt", "0.05", "--t-end", "1",
        )
        assert code == 2
        assert "step exceeds delay" in err


class TestScan:
    ARGS = ("scan", "--kernel", "dirac", "--tau", "1", "--resolution", "21", "21")

    def test_known_regions(self, capsys):
        code, out, _ = run_cli(capsys, *self.ARGS)
        assert code == 0
        frame = read_csv(out)
        assert len(frame) == 441
        rhombus = frame[frame.alpha.abs() + frame.beta.abs() < 0.99]
        assert not rhombus.empty and (rhombus.verdict == "Stable").all()
        below = frame[frame.beta < frame.alpha - 1.0 - 1e-6]
        assert not below.empty and (below.verdict == "Unstable").all()

    def test_deterministic(self, capsys, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        run_cli(capsys, *self.ARGS, "--output", str(first))
        run_cli(capsys, *self.ARGS, "--output", str(second))
        assert first.read_bytes() == second.read_bytes()


def test_sweep(capsys, tmp_path):
    code, _, _ = run_cli(
        capsys, "sweep", "--preset", "section3", "--kernel", "gamma:p=1",
        "--tau-min", "0.5", "--tau-max", "1", "--points", "2", "--dt", "0.01", "--t-end", "5",
        "--output", str(tmp_path),
    )
    assert code == 0
    assert (tmp_path / "tau_0.5.csv").exists()
    assert (tmp_path / "tau_1.csv").exists()
    summary = pd.read_csv(tmp_path / "summary.csv")
    assert list(summary.columns) == ["tau", "verdict", "amplitude", "period", "final_distance_to_equilibrium"]
    assert summary.tau.tolist() == pytest.approx([0.5, 1.0])


def test_sweep_needs_directory(capsys):
    code, _, _ = run_cli(capsys, "sweep", "--preset", "section3")
    assert code == 2


def test_presets(capsys):
    code, out, _ = run_cli(capsys, "presets")
    assert code == 0
    assert set(read_csv(out).name) == {"section3", "decoupled"}


@pytest.mark.parametrize("kernel", ["dirac", "gamma:p=2"])
def test_repro_script_covers_time_evolution(kernel):
    script = (BASE_DIR / "scripts" / "repro.sh").read_text(encoding="utf-8")
    assert f'--kernel {kernel} --tau "$tau"' in script
