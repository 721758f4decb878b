import dataclasses

import pytest

from selfnorm.BernsteinOptimizer import BernsteinOptimizer
from selfnorm.BoundEvaluation import Regime
from selfnorm.ExactOracle import ExactOracle
from selfnorm.Simulator import Simulator
import selfnormcli.VerifySuite as verifySuite
from selfnormcli.RecordWriter import RecordWriter
from selfnormcli.SelfNormCli import main
from selfnormcli.VerifySuite import VerifySuite, suiteKey

suite = VerifySuite(ExactOracle(), Simulator(), BernsteinOptimizer(), RecordWriter(12), fast=True, seed=42)

# suites without a Monte Carlo acceptance criterion
DETERMINISTIC = [
    "FORM EQUIVALENCE", "ENDPOINT", "MONOTONE IN X", "MONOTONE IN N", "DOMINANCE", "BERNSTEIN CONSISTENCY",
    "MAJORIZATION", "TSTAT RANGE", "ORACLE BOUND", "WEIGHTED ORACLE BOUND", "ENDPOINT EXACTNESS", "ZERO REGIME",
    "TWO POINT BERNSTEIN", "MIRROR SYMMETRY", "ORACLE MONOTONE", "EFRON EXACT", "DETERMINISM", "ROUND TRIP",
    "BYTE IDENTICAL",
]


def test_suite_key():
    assert (suiteKey("monotone-in_x") == "MONOTONE IN X")
    assert (suiteKey("  byte   identical ") == "BYTE IDENTICAL")


def test_all_suites_are_registered():
    assert (len(suite.suites()) == 24)
    assert (set(DETERMINISTIC) <= set(suite.suites()))


@pytest.mark.parametrize("name", DETERMINISTIC)
def test_deterministic_suite(name):
    [result] = suite.run([name])
    assert (result.suite == name)
    assert (result.passed), result.detail
    assert (result.checks > 0)


def test_run_keeps_order():
    results = suite.run(["zero regime", "endpoint"])
    assert ([r.suite for r in results] == ["ZERO REGIME", "ENDPOINT"])


def test_unknown_suite():
    with pytest.raises(ValueError, match="unknown suite"):
        suite.run(["NO SUCH SUITE"])


def test_verify_command(capsys):
    assert (main(["verify", "--fast", "--suite", "ENDPOINT", "--suite", "majorization"]) == 0)
    lines = capsys.readouterr().out.splitlines()
    assert (lines[0].split() == ["SUITE", "STATUS", "CHECKS", "DETAIL"])
    assert (lines[1].startswith("ENDPOINT"))
    assert (" PASS " in lines[1])
    assert (lines[2].startswith("MAJORIZATION"))

    assert (main(["verify", "--suite", "NOPE"]) == 2)


def test_optimizer_failure_is_reported():
    """
    should turn an optimizer that does not converge into a failed suite and keep running the others
    """
    capped = VerifySuite(ExactOracle(), Simulator(), BernsteinOptimizer(1e-10, 5), RecordWriter(12), fast=True)
    bernstein, endpoint = capped.run(["BERNSTEIN CONSISTENCY", "ENDPOINT"])
    assert (not bernstein.passed)
    assert ("ConvergenceError" in bernstein.detail)
    assert (endpoint.passed)


def test_verify_exits_1_on_failure(tmp_path, capsys):
    path = tmp_path / "capped.conf"
    path.write_text("selfnorm.bernstein.maxIterations = 5\n")
    assert (main(["verify", "--fast", "--config", str(path), "--suite", "BERNSTEIN CONSISTENCY"]) == 1)
    out = capsys.readouterr().out
    assert ("BERNSTEIN CONSISTENCY" in out and "FAIL" in out)


def test_broken_endpoint_convention_fails(monkeypatch, capsys):
    """
    should fail the ENDPOINT suite when the endpoint value is not 2^-n
    """
    original = verifySuite.boundBn

    def zeroAtEndpoint(n, beta, x):
        e = original(n, beta, x)
        return dataclasses.replace(e, value=0.0) if e.regime == Regime.Endpoint else e

    monkeypatch.setattr(verifySuite, "boundBn", zeroAtEndpoint)
    assert (main(["verify", "--fast", "--suite", "ENDPOINT"]) == 1)
    lines = capsys.readouterr().out.splitlines()
    assert (lines[1].startswith("ENDPOINT") and " FAIL " in lines[1])
