"""Acceptance gate: runs every check suite at its stated tolerance and
time budget, printing one pass/fail line per criterion."""
import pytest

from adelic import checks


def _run(name, capsys):
    (result,) = checks.run_suite(name)
    with capsys.disabled():
        print(f"\n{result.line()}  [{result.elapsed:.2f}s "
              f"of {result.budget:.0f}s budget]")
    assert result.passed, result.detail


class TestAcceptance:
    def test_criterion_01_phi_order_algebra(self, capsys):
        _run("phi-order", capsys)

    def test_criterion_02_volume_telescoping(self, capsys):
        _run("volumes", capsys)

    def test_criterion_03_radial_transforms(self, capsys):
        _run("radial-ft", capsys)

    def test_criterion_04_heat_kernel(self, capsys):
        _run("kernel", capsys)

    def test_criterion_05_semigroup_monte_carlo(self, capsys):
        _run("semigroup", capsys)

    def test_criterion_06_sampler_law(self, capsys):
        _run("sampler", capsys)

    def test_criterion_07_markov_conditions(self, capsys):
        _run("markov", capsys)

    def test_criterion_08_solvers(self, capsys):
        _run("solvers", capsys)

    def test_criterion_09_real_adelic_factor(self, capsys):
        _run("real-adelic", capsys)

    def test_criterion_10_cli_determinism(self, capsys):
        _run("determinism", capsys)
