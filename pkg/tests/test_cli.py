"""End-to-end CLI tests: output conventions, exit codes, determinism,
config-file merging, and the metadata sidecar."""
import json
import math
import subprocess
import sys
from fractions import Fraction as F

import pytest

from adelic.radial import RadialStep


def run_cli(args, cwd):
    return subprocess.run(
        [sys.executable, "-m", "adelic.cli", *args],
        capture_output=True, cwd=cwd,
    )


@pytest.fixture
def step_file(tmp_path):
    path = tmp_path / "step.json"
    path.write_text(RadialStep.sphere_indicator(F(2)).ft().to_json())
    return path


class TestExactCommands:
    def test_phi(self, tmp_path):
        proc = run_cli(["phi", "10"], tmp_path)
        assert proc.returncode == 0
        assert proc.stdout == b"2520\n"

    def test_phi_fraction(self, tmp_path):
        proc = run_cli(["phi", "1/4"], tmp_path)
        assert proc.stdout == b"1/6\n"

    def test_ppow_range(self, tmp_path):
        proc = run_cli(["ppow", "range", "1", "12"], tmp_path)
        assert proc.stdout == b"2\n3\n4\n5\n7\n8\n9\n11\n"

    def test_norm_distance(self, tmp_path):
        proc = run_cli(["norm", "2:-1:1", "3:0:2"], tmp_path)
        assert proc.returncode == 0
        assert proc.stdout == b"2\n"

    def test_volume(self, tmp_path):
        assert run_cli(["volume", "ball", "4"], tmp_path).stdout == b"12\n"
        assert run_cli(["volume", "sphere", "4"], tmp_path).stdout == b"6\n"

    def test_ft_inline_json(self, tmp_path):
        f = RadialStep.ball_indicator(F(2))
        proc = run_cli(["ft", "--json", f.to_json()], tmp_path)
        assert proc.returncode == 0
        assert RadialStep.from_json(proc.stdout.decode()) == f.ft()


class TestFloatOutputs:
    def test_kernel_eval_two_fields(self, tmp_path):
        proc = run_cli(
            ["kernel", "eval", "--radius", "2", "--t", "1", "--alpha", "2"],
            tmp_path,
        )
        assert proc.returncode == 0
        value, bound = proc.stdout.split()
        assert math.isclose(float(value), 0.06756313793675311, rel_tol=1e-12)
        assert 0.0 < float(bound) < 1e-9

    def test_normalize_within_tolerance(self, tmp_path):
        proc = run_cli(
            ["kernel", "normalize", "--t", "1", "--alpha", "2",
             "--tol", "1e-6"],
            tmp_path,
        )
        assert proc.returncode == 0
        value, achieved = proc.stdout.split()
        assert abs(float(value) - 1.0) <= 1e-6
        assert float(achieved) <= 1e-6

    def test_tail_mass_below_bound(self, tmp_path):
        proc = run_cli(
            ["kernel", "tail", "--epsilon", "2", "--t", "0.01",
             "--alpha", "2"],
            tmp_path,
        )
        mass, bound = map(float, proc.stdout.split())
        assert 0.0 <= mass <= bound


class TestExitCodes:
    def test_missing_subcommand_args(self, tmp_path):
        assert run_cli(["phi"], tmp_path).returncode == 2

    def test_bad_choice(self, tmp_path):
        assert run_cli(["volume", "cube", "2"], tmp_path).returncode == 2

    def test_non_norm_radius(self, tmp_path):
        proc = run_cli(
            ["kernel", "eval", "--radius", "5/3", "--t", "1",
             "--alpha", "2"],
            tmp_path,
        )
        assert proc.returncode == 2

    def test_missing_parameter(self, tmp_path):
        proc = run_cli(["kernel", "eval", "--radius", "2"], tmp_path)
        assert proc.returncode == 2
        assert b"missing required parameter" in proc.stderr

    def test_tolerance_failure_exit_3(self, tmp_path):
        proc = run_cli(
            ["kernel", "normalize", "--t", "1", "--alpha", "2",
             "--tol", "1e-17"],
            tmp_path,
        )
        assert proc.returncode == 3

    def test_cancellation_exit_4(self, tmp_path):
        proc = run_cli(["norm", "2:z:12"], tmp_path)
        assert proc.returncode == 4

    def test_unknown_verify_suite(self, tmp_path):
        assert run_cli(["verify", "nope"], tmp_path).returncode == 2


class TestDeterminism:
    def test_simulate_byte_identical(self, tmp_path):
        args = ["simulate", "--t-step", "0.1", "--steps", "60", "--alpha",
                "2", "--seed", "7", "--output", "path.csv"]
        run_cli(args, tmp_path)
        first = (tmp_path / "path.csv").read_bytes()
        run_cli(args, tmp_path)
        assert (tmp_path / "path.csv").read_bytes() == first
        head = first.decode().splitlines()[0]
        assert head == "step,time,radius,point"

    def test_distinct_seeds_differ(self, tmp_path):
        args = ["simulate", "--t-step", "0.1", "--steps", "60",
                "--alpha", "2", "--output", "path.csv"]
        run_cli(args + ["--seed", "7"], tmp_path)
        first = (tmp_path / "path.csv").read_bytes()
        run_cli(args + ["--seed", "8"], tmp_path)
        assert (tmp_path / "path.csv").read_bytes() != first

    def test_solve_stdout_stable(self, step_file, tmp_path):
        args = ["solve", "homogeneous", "--t", "1", "--alpha", "2",
                "--input", str(step_file)]
        outs = {run_cli(args, tmp_path).stdout for _ in range(2)}
        assert len(outs) == 1


class TestSidecar:
    def test_meta_written_next_to_output(self, tmp_path):
        run_cli(
            ["simulate", "--t-step", "0.1", "--steps", "10", "--alpha", "2",
             "--seed", "3", "--output", "p.csv"],
            tmp_path,
        )
        meta = json.loads((tmp_path / "p.csv.meta.json").read_text())
        assert meta["config"]["seed"] == 3
        assert meta["config"]["command"] == "simulate"
        assert "wall_time_s" in meta
        # wall time stays out of the primary output
        assert b"wall" not in (tmp_path / "p.csv").read_bytes()

    def test_meta_flag_without_output(self, tmp_path):
        run_cli(
            ["kernel", "eval", "--radius", "2", "--t", "1", "--alpha", "2",
             "--meta", "m.json"],
            tmp_path,
        )
        meta = json.loads((tmp_path / "m.json").read_text())
        assert meta["config"]["params"]["t"] == 1.0
        assert meta["error_bounds"]["value"] > 0.0


class TestConfigFile:
    def test_config_supplies_defaults(self, tmp_path):
        (tmp_path / "cfg.json").write_text(
            json.dumps({"t": 1.0, "alpha": 2.0})
        )
        proc = run_cli(
            ["kernel", "eval", "--radius", "2", "--config", "cfg.json"],
            tmp_path,
        )
        assert proc.returncode == 0
        assert math.isclose(
            float(proc.stdout.split()[0]), 0.06756313793675311,
            rel_tol=1e-12,
        )

    def test_flag_overrides_config(self, tmp_path):
        (tmp_path / "cfg.json").write_text(
            json.dumps({"t": 99.0, "alpha": 2.0})
        )
        proc = run_cli(
            ["kernel", "eval", "--radius", "2", "--config", "cfg.json",
             "--t", "1", "--meta", "m.json"],
            tmp_path,
        )
        assert math.isclose(
            float(proc.stdout.split()[0]), 0.06756313793675311,
            rel_tol=1e-12,
        )
        meta = json.loads((tmp_path / "m.json").read_text())
        assert meta["config"]["params"]["t"] == 1.0


class TestSolveAdelic:
    def test_outputs_and_finite_sidecar(self, step_file, tmp_path):
        rows = ["x,value"]
        for i in range(161):
            x = -4.0 + i * 0.05
            rows.append("%.17g,%.17g" % (x, math.exp(-x * x)))
        (tmp_path / "grid.csv").write_text("\n".join(rows) + "\n")
        proc = run_cli(
            ["solve", "adelic", "--t", "0.5", "--alpha", "2", "--beta", "2",
             "--real", "grid.csv", "--fin", str(step_file),
             "--output", "out.csv", "--tol", "1e-3"],
            tmp_path,
        )
        assert proc.returncode == 0, proc.stderr
        lines = (tmp_path / "out.csv").read_text().splitlines()
        assert lines[0] == "x,value"
        assert len(lines) == 162
        fin = json.loads((tmp_path / "out.csv.finite.json").read_text())
        assert fin["exact"] is True

    def test_requires_output(self, step_file, tmp_path):
        (tmp_path / "g.csv").write_text("x,value\n0,1\n1,0.5\n")
        proc = run_cli(
            ["solve", "adelic", "--t", "0.1", "--alpha", "2", "--beta", "2",
             "--real", "g.csv", "--fin", str(step_file)],
            tmp_path,
        )
        assert proc.returncode == 2


class TestVerify:
    def test_verify_suite_passes(self, tmp_path):
        proc = run_cli(["verify", "volumes"], tmp_path)
        assert proc.returncode == 0
        out = proc.stdout.decode()
        assert "PASS criterion-2-volume-telescoping" in out
        # deterministic stdout: no timings outside the sidecar
        assert run_cli(["verify", "volumes"], tmp_path).stdout == proc.stdout
