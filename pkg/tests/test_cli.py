import json
from pathlib import Path

import numpy as np
import pytest

from wta.cli import main


def write(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def run_config(tmp_path, **overrides):
    cfg = {
        "graph": {"inline": {"n": 2, "edges": [[0, 1, 1.0]]}},
        "x0": {"inline": [2.0, 1.0]},
        "direction": "forward",
        "integrator": {"dt": 1e-3, "t_end": 10.0, "record_stride": 100},
    }
    cfg.update(overrides)
    return write(tmp_path / "run.json", cfg)


class TestSimulate:
    def test_two_agent_run(self, tmp_path, capsys):
        cfg = run_config(tmp_path)
        out = tmp_path / "out"
        assert main(["simulate", "--config", cfg, "--out", str(out), "--quiet"]) == 0
        report = json.loads((out / "report.json").read_text())
        assert report["classification"]["class"] == "E_s"
        final = np.array(report["final_state"])
        assert np.abs(final - [3.0, 0.0]).max() < 1e-6
        last = (out / "trajectory.csv").read_text().splitlines()[-1].split(",")
        assert abs(float(last[1]) - 3.0) < 1e-6

    def test_reverse_consensus(self, tmp_path):
        cfg = run_config(
            tmp_path,
            graph={"random": {"n": 12, "p": 0.8, "seed": 5}},
            x0={"random": {"low": 0.2, "high": 1.0, "seed": 6}},
            direction="reverse",
            integrator={"dt": 1e-2, "t_end": 40.0, "record_stride": 100},
        )
        out = tmp_path / "out"
        assert main(["simulate", "--config", cfg, "--out", str(out), "--quiet"]) == 0
        rows = (out / "trajectory.csv").read_text().splitlines()
        last = [float(v) for v in rows[-1].split(",")]
        n = 12
        assert last[n + 3] - last[n + 4] < 1e-6  # max - min
        assert last[n + 2] < 1e-10  # entropy

    def test_malformed_config_exits_1_without_outputs(self, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        out = tmp_path / "out"
        assert main(["simulate", "--config", str(bad), "--out", str(out)]) == 1
        assert not out.exists()

    def test_svg_does_not_alter_data(self, tmp_path):
        cfg = run_config(tmp_path)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(["simulate", "--config", cfg, "--out", str(out_a), "--quiet"]) == 0
        assert main(["simulate", "--config", cfg, "--out", str(out_b),
                     "--quiet", "--svg"]) == 0
        assert (out_a / "trajectory.csv").read_bytes() == (
            out_b / "trajectory.csv"
        ).read_bytes()
        assert (out_b / "trajectory.svg").exists()
        assert (out_b / "entropy.svg").exists()


class TestClassify:
    def graph_file(self, tmp_path):
        return write(
            tmp_path / "g.json", {"n": 3, "edges": [[0, 1, 1.0], [1, 2, 1.0]]}
        )

    def run(self, tmp_path, capsys, x, graph=None):
        gf = graph or self.graph_file(tmp_path)
        sf = write(tmp_path / "s.json", {"x": x})
        code = main(["classify", "--graph", gf, "--state", sf])
        return code, json.loads(capsys.readouterr().out)

    def test_stable(self, tmp_path, capsys):
        code, report = self.run(tmp_path, capsys, [1.0, 0.0, 1.0])
        assert code == 0 and report["class"] == "E_s"

    def test_unstable(self, tmp_path, capsys):
        gf = write(tmp_path / "g2.json", {"n": 2, "edges": [[0, 1, 1.0]]})
        sf = write(tmp_path / "s2.json", {"x": [1.0, 1.0]})
        assert main(["classify", "--graph", gf, "--state", sf]) == 0
        assert json.loads(capsys.readouterr().out)["class"] == "E_u"

    def test_not_equilibrium_still_exit_0(self, tmp_path, capsys):
        gf = write(tmp_path / "g3.json", {"n": 2, "edges": [[0, 1, 1.0]]})
        sf = write(tmp_path / "s3.json", {"x": [2.0, 1.0]})
        assert main(["classify", "--graph", gf, "--state", sf]) == 0
        assert json.loads(capsys.readouterr().out)["class"] == "not_equilibrium"

    def test_dimension_error_exit_1(self, tmp_path, capsys):
        code, = (main(["classify", "--graph", self.graph_file(tmp_path),
                       "--state", write(tmp_path / "s4.json", {"x": [1.0]})]),)
        assert code == 1


def optimize_config(tmp_path, n=2, **overrides):
    cfg = {
        "graph": {"inline": {"n": n, "edges": []}},
        "alpha": 0,
        "x_alpha0": 2.0,
        "x0_others": [1.0] * (n - 1),
        "horizon": 10.0,
        "integrator": {"dt": 1e-3, "stop_on_equilibrium": True},
    }
    cfg.update(overrides)
    return write(tmp_path / "opt.json", cfg)


class TestOptimize:
    def test_two_agent_exhaustive(self, tmp_path):
        cfg = optimize_config(tmp_path)
        out = tmp_path / "out"
        assert main(["optimize", "--config", cfg, "--out", str(out), "--quiet"]) == 0
        res = json.loads((out / "optimize.json").read_text())
        assert res["best_mask"] == "1"
        assert abs(res["best_value"] - 3.0) < 1e-6

    def test_greedy_byte_identical_reruns(self, tmp_path):
        cfg = optimize_config(tmp_path, n=5, x0_others=[1.0, 0.4, 0.2, 0.9],
                              horizon=3.0)
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            assert main(["optimize", "--config", cfg, "--mode", "greedy",
                         "--out", str(out), "--seed", "7", "--quiet"]) == 0
        assert (out_a / "optimize.json").read_bytes() == (
            out_b / "optimize.json"
        ).read_bytes()

    def test_guard_exit_3(self, tmp_path):
        cfg = optimize_config(tmp_path, n=26, x0_others=[1.0] * 25)
        assert main(["optimize", "--config", cfg, "--out", str(tmp_path / "o"),
                     "--quiet"]) == 3

    def test_sweep_csv(self, tmp_path):
        cfg = optimize_config(
            tmp_path, horizon=2.0,
            sweep_grid={"start": 0.0, "stop": 1.0, "count": 3},
        )
        out = tmp_path / "out"
        assert main(["optimize", "--config", cfg, "--sweep", "--out", str(out),
                     "--svg", "--quiet"]) == 0
        lines = (out / "sweep.csv").read_text().splitlines()
        assert lines[0] == "x_alpha0,mask,final_value"
        assert len(lines) == 1 + 3 * 2
        assert (out / "sweep.svg").exists()


class TestExperiment:
    def test_unknown_name_exit_1(self, tmp_path):
        assert main(["experiment", "fig9_nope", "--out", str(tmp_path)]) == 1

    def test_fig4_small_scale(self, tmp_path):
        out = tmp_path / "fig4"
        assert main(["experiment", "fig4_nine_agents", "--seed", "3",
                     "--out", str(out), "--agents", "6", "--t-end", "3.0",
                     "--quiet"]) == 0
        report = json.loads((out / "report.json").read_text())
        assert report["manifest"]["parameters"]["agents"] == 6
        assert (out / "fig4_trajectories.csv").exists()

    def test_manifest_reruns_byte_identical(self, tmp_path):
        args = ["experiment", "fig3_entropy", "--seed", "2", "--agents", "25",
                "--dt", "0.002", "--quiet"]
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        assert main(args + ["--out", str(out_a)]) == 0
        assert main(args + ["--out", str(out_b)]) == 0
        for name in ("fig3_entropy.csv", "manifest.json", "report.json"):
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes()
