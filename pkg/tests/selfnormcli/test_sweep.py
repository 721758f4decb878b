import csv
import io
import json

import pytest

from selfnorm.BernsteinOptimizer import BernsteinOptimizer
from selfnorm.BetaParam import BetaParam
from selfnorm.DistributionSpec import DistributionSpec
from selfnorm.ExactOracle import ExactOracle
from selfnorm.Simulator import Simulator
from selfnorm.Statistic import Statistic
from selfnormcli.RecordWriter import RecordWriter
from selfnormcli.SelfNormCli import main
from selfnormcli.Sweep import Sweep
from selfnormcli.SweepGrid import SweepGrid

COLUMNS = ["n", "beta", "s", "x", "bound_bn", "bound_corollary", "bernstein_numeric", "oracle_exact",
           "mc_p_hat", "mc_ci_low", "mc_ci_high", "trials", "seed"]

sweep = Sweep(ExactOracle(), Simulator(), BernsteinOptimizer())


def rows(text: str) -> list[dict[str, str]]:
    return list(csv.DictReader(io.StringIO(text)))


def test_interior_cell():
    [row] = sweep.run(SweepGrid([4], [BetaParam(2.0)], [0.5]))
    assert (row.boundBn == pytest.approx(0.592593, abs=1e-6))
    assert (row.oracleExact == 0.375)
    assert (row.bernsteinNumeric == pytest.approx(row.boundBn, rel=1e-9))
    assert (row.mcPHat is None)
    assert (row.trials is None)


def test_endpoint_cell():
    [row] = sweep.run(SweepGrid([4], [BetaParam(2.0)], [1.0]))
    assert (row.boundBn == 0.0625)
    assert (row.oracleExact == 0.0625)
    assert (row.bernsteinNumeric is None)


def test_no_oracle_beyond_budget():
    [row] = sweep.run(SweepGrid([64], [BetaParam(2.0)], [0.5], Statistic.RunningMax, DistributionSpec.gaussian(), 2000, 1))
    assert (row.oracleExact is None)
    assert (row.boundBn > 0.0)
    assert (row.mcPHat is not None)
    assert (row.seed == 1)


def test_tstat_cells():
    grid = SweepGrid([4], [BetaParam(2.0)], [1.0], Statistic.Tstat, DistributionSpec.rademacher(), 4000, 3)
    [row] = sweep.run(grid)
    assert (row.x == 1.0)
    assert (row.boundBn == pytest.approx(16 / 27, rel=1e-12))
    assert (row.oracleExact == 0.25)


def test_grid_validation():
    """
    should reject empty lists, unsorted s values and s outside (0, 1]
    """
    with pytest.raises(ValueError, match="requirement failed"):
        SweepGrid([], [BetaParam(2.0)], [0.5])
    with pytest.raises(ValueError):
        SweepGrid([4], [BetaParam(2.0)], [1.5])
    with pytest.raises(ValueError):
        SweepGrid([1], [BetaParam(2.0)], [0.5], Statistic.Tstat)
    with pytest.raises(ValueError):
        SweepGrid.make("4,x", "2", "0.5")
    with pytest.raises(ValueError, match="sorted ascending"):
        SweepGrid([4], [BetaParam(2.0)], [0.9, 0.1])


def test_csv_columns(capsys):
    assert (main(["sweep", "--n", "4,64", "--beta", "2", "--s", "0.5,1"]) == 0)
    out = capsys.readouterr().out
    assert (out.splitlines()[0] == ",".join(COLUMNS))
    assert ("\r" not in out)
    parsed = rows(out)
    assert (len(parsed) == 4)
    assert (parsed[1]["bound_bn"] == "0.0625")
    assert (parsed[1]["oracle_exact"] == "0.0625")
    assert (parsed[1]["bernstein_numeric"] == "")
    assert (parsed[2]["oracle_exact"] == "")
    assert (parsed[0]["mc_p_hat"] == "")


def test_json_output(tmp_path):
    path = tmp_path / "sweep.json"
    assert (main(["sweep", "--n", "4", "--s", "0.5", "--dist", "rademacher", "--trials", "1000",
                  "--format", "json", "--out", str(path)]) == 0)
    [record] = json.loads(path.read_text())
    assert (list(record) == COLUMNS)
    assert (record["trials"] == 1000)
    assert (0.0 <= record["mc_ci_low"] <= record["mc_p_hat"] <= record["mc_ci_high"] <= 1.0)


def test_grid_file(tmp_path, capsys):
    path = tmp_path / "grid.conf"
    path.write_text("n = [2, 3]\nbeta = [1.5]\ns = [0.25, 0.75]\ndist = \"twopoint:3.7\"\ntrials = 500\nseed = 9\n")
    assert (main(["sweep", "--grid", str(path)]) == 0)
    parsed = rows(capsys.readouterr().out)
    assert (len(parsed) == 4)
    assert ({r["seed"] for r in parsed} == {"9"})
    assert (all(r["oracle_exact"] != "" for r in parsed))


def test_unwritable_path(capsys):
    assert (main(["sweep", "--n", "4", "--s", "0.5", "--out", "/nonexistent-dir/sweep.csv"]) == 2)


def test_unsorted_s_values(capsys):
    assert (main(["sweep", "--n", "4", "--s", "0.9,0.1"]) == 2)
    assert ("sorted ascending" in capsys.readouterr().err)


def test_round_trip():
    """
    should read back the written values at 12 significant digits
    """
    grid = SweepGrid([3, 8], [BetaParam(1.5), BetaParam(2.0)], [0.3, 1.0], Statistic.FinalSum,
                     DistributionSpec.rademacher(), 3000, 5)
    result = sweep.run(grid)
    writer = RecordWriter(12)
    parsed = RecordWriter.parseCsv(writer.renderCsv(result))
    for row, fields in zip(result, parsed):
        for key, value in row.to_dict().items():
            back = RecordWriter.parseReal(fields[key])
            if value is None:
                assert (back is None)
            else:
                assert (back == pytest.approx(value, rel=1e-11))


def test_byte_identical_across_threads(monkeypatch, capsys):
    """
    should write identical CSV for any SELFNORM_THREADS
    """
    outputs = []
    for threads in ("1", "2", "8"):
        monkeypatch.setenv("SELFNORM_THREADS", threads)
        assert (main(["sweep", "--n", "6,12", "--beta", "1.5,2", "--s", "0.4,0.8", "--dist", "gaussian",
                      "--trials", "10000", "--seed", "3"]) == 0)
        outputs.append(capsys.readouterr().out)
    assert (outputs[0] == outputs[1] == outputs[2])


def test_tstat_cell_far_in_the_tail():
    """
    should report an interior bound near 2^-n and no numeric Bernstein value once the threshold rounds to the endpoint
    """
    [row] = sweep.run(SweepGrid([2], [BetaParam(2.0)], [1e8], Statistic.Tstat))
    assert (row.boundBn == pytest.approx(0.25, rel=1e-6))
    assert (row.bernsteinNumeric is None)
    assert (row.oracleExact == 0.0)
