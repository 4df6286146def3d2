import json

import pytest
from click.testing import CliRunner

from ffchain.cli import main
from ffchain.polynomial import parse_poly


@pytest.fixture
def runner():
    return CliRunner()


def test_inv_text(runner):
    result = runner.invoke(main, ["inv", "--p", "2", "--n", "3", "--basis", "x^3+x+1", "--elem", "x^2+x+1"])
    assert result.exit_code == 0
    assert result.output == "x^2 (#4)\n"


def test_inv_infers_degree_and_prints_json(runner):
    result = runner.invoke(main, ["inv", "--basis", "#13", "--elem", "#7", "--format", "json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data == {"p": 2, "n": 3, "basis": "#13", "elem": "#7", "inverse": "#5"}
    assert parse_poly(data["inverse"], 2) == parse_poly("x^2+1", 2)


def test_inv_reducible_basis(runner):
    result = runner.invoke(main, ["inv", "--basis", "x^4", "--elem", "x"])
    assert result.exit_code == 1
    assert "non è irriducibile" in result.output
    assert "fattore x" in result.output


def test_inv_zero_element(runner):
    result = runner.invoke(main, ["inv", "--basis", "x^3+x+1", "--elem", "0"])
    assert result.exit_code == 1


@pytest.mark.parametrize(
    "args",
    [
        ["inv", "--basis", "x^3+x+1", "--elem", "x^^2"],
        ["inv", "--basis", "x^3+", "--elem", "x"],
        ["inv", "--n", "4", "--basis", "x^3+x+1", "--elem", "x"],
        ["inv", "--basis", "x^3+x+1"],
        ["inv", "--basis", "x^3+x+1", "--elem", "x", "--colour", "red"],
        ["inv", "--basis", "x^3+x+1", "--elem", "x", "--format", "dot"],
        ["partition", "--f1", "#11", "--f2", "#19"],
        ["irreducibles"],
    ],
)
def test_usage_errors(runner, args):
    result = runner.invoke(main, args)
    assert result.exit_code == 2


def test_not_prime(runner):
    result = runner.invoke(main, ["inv", "--p", "4", "--basis", "x^2+x+1", "--elem", "x"])
    assert result.exit_code == 1


def test_help_lists_flags(runner):
    result = runner.invoke(main, ["partition", "--help"])
    assert result.exit_code == 0
    for flag in ("--p", "--n", "--format", "--out", "--guard", "--f1", "--f2"):
        assert flag in result.output


def test_chain(runner):
    result = runner.invoke(main, ["chain", "--basis", "#11", "--basis", "#13", "--elem", "#7", "--k", "6", "--format", "json"])
    assert result.exit_code == 0
    assert json.loads(result.output)["elements"] == ["#7", "#4", "#3", "#6", "#2", "#5", "#7"]

    result = runner.invoke(main, ["chain", "--basis", "#11", "--basis", "#13", "--elem", "#7", "--k", "2", "--format", "csv"])
    assert result.output.splitlines() == [
        "i,basis,index,element",
        "0,,#7,x^2+x+1",
        "1,#11,#4,x^2",
        "2,#13,#3,x+1",
    ]


def test_partition_json(runner):
    result = runner.invoke(main, ["partition", "--p", "2", "--n", "3", "--f1", "#11", "--f2", "#13", "--format", "json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert len(data["cycles"]) == 1
    assert data["cycles"][0]["len"] == 6
    assert data["covered"] == 6


def test_partition_same_basis(runner):
    result = runner.invoke(main, ["partition", "--f1", "#11", "--f2", "#11"])
    assert result.exit_code == 1


def test_perm(runner):
    result = runner.invoke(main, ["perm", "--f1", "#11", "--f2", "#13"])
    assert result.exit_code == 0
    assert "cicli: (2 5 7 4 3 6)" in result.output

    result = runner.invoke(main, ["perm", "--f1", "#11", "--f2", "#13", "--orientation", "1", "--format", "json"])
    data = json.loads(result.output)
    assert data["cycles"] == [[2, 6, 3, 4, 7, 5]]
    assert data["fixed_points"] == [0, 1]

    result = runner.invoke(main, ["perm", "--f1", "#11", "--f2", "#13", "--orientation", "10"])
    assert result.exit_code == 1


def test_loops_f16(runner):
    args = ["loops", "--basis", "x^4+x+1", "--basis", "x^4+x^3+1", "--basis", "x^4+x^3+x^2+x+1", "--elem", "x^2+x+1"]
    result = runner.invoke(main, args + ["--format", "json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["k"] == 24
    assert len(data["elements"]) == 25

    result = runner.invoke(main, args + ["--format", "dot"])
    assert result.output.startswith("digraph loop {")
    assert result.output.count(" -> ") == 24


def test_loops_census(runner):
    result = runner.invoke(main, ["loops", "--basis", "#19", "--basis", "#25", "--basis", "#31", "--format", "json"])
    assert result.exit_code == 0
    assert json.loads(result.output)["state_coverage"] == 42

    result = runner.invoke(main, ["loops", "--basis", "#19", "--basis", "#25", "--format", "dot"])
    assert result.exit_code == 2


def test_irreducibles(runner):
    result = runner.invoke(main, ["irreducibles", "--n", "4"])
    assert result.output.splitlines() == ["x^4+x+1 (#19)", "x^4+x^3+1 (#25)", "x^4+x^3+x^2+x+1 (#31)"]

    result = runner.invoke(main, ["irreducibles", "--n", "6", "--count-only"])
    assert result.output == "9\n"

    result = runner.invoke(main, ["irreducibles", "--p", "3", "--n", "2", "--format", "json"])
    assert json.loads(result.output)["polynomials"] == ["#10", "#14", "#17"]


def test_indexed_output_reparses(runner):
    result = runner.invoke(main, ["irreducibles", "--p", "5", "--n", "2", "--format", "json"])
    for text in json.loads(result.output)["polynomials"]:
        assert parse_poly(text, 5).degree == 2


def test_export_f8(runner, tmp_path):
    out = tmp_path / "f8_union.dot"
    result = runner.invoke(main, ["export", "--basis", "x^3+x+1", "--basis", "x^3+x^2+1", "--out", str(out)])
    assert result.exit_code == 0
    dot = out.read_text(encoding="utf-8")
    assert dot.startswith("graph union {")
    assert dot.count(" -- ") == 6
    assert '"4" -- "7" [style=solid, color=blue];' in dot


def test_export_json_loop(runner):
    result = runner.invoke(main, ["export", "--basis", "#19", "--basis", "#25", "--basis", "#31", "--elem", "#7", "--format", "json"])
    assert result.exit_code == 0
    data = json.loads(result.output)
    assert data["directed"] is True
    assert len(data["vertices"]) == 14


def test_census(runner):
    result = runner.invoke(main, ["census", "--n", "3"])
    assert result.exit_code == 0
    assert "2/2" in result.output

    result = runner.invoke(main, ["census", "--n", "6", "--format", "json"])
    data = json.loads(result.output)
    assert data["ordered"]["total"] == 72
    assert data["ordered"]["spanning"] < 72


def test_survey_is_byte_identical(runner):
    args = ["survey", "--p", "2", "--n", "8", "--samples", "100", "--seed", "42"]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args)
    assert first.exit_code == 0
    assert first.output == second.output
    lines = first.output.splitlines()
    assert lines[0] == "p,n,f1,f2,num_cycles,min_len,max_len,mean_len,spanning"
    assert len(lines) == 101


def test_survey_exhaustive_to_file(runner, tmp_path):
    out = tmp_path / "survey.json"
    result = runner.invoke(main, ["survey", "--n", "3", "--format", "json", "--out", str(out)])
    assert result.exit_code == 0
    assert len(json.loads(out.read_text(encoding="utf-8"))) == 2


def test_survey_config_file(runner, tmp_path):
    cfg = tmp_path / "survey.cfg"
    cfg.write_text("n = 7\nmode = sampled\nsamples = 4\nseed = 1\n", encoding="utf-8")
    result = runner.invoke(main, ["survey", "--config", str(cfg), "--samples", "2"])
    assert result.exit_code == 0
    assert len(result.output.splitlines()) == 3


def test_survey_invalid_config(runner):
    result = runner.invoke(main, ["survey", "--mode", "sampled", "--n", "5"])
    assert result.exit_code == 1


def test_guard_from_environment(runner):
    result = runner.invoke(main, ["irreducibles", "--n", "6"], env={"FFCHAIN_GUARD": "16"})
    assert result.exit_code == 1
    assert "guardia" in result.output

    result = runner.invoke(main, ["irreducibles", "--n", "6", "--guard", "64"], env={"FFCHAIN_GUARD": "16"})
    assert result.exit_code == 0


def test_survey_rejects_degree_one(runner):
    result = runner.invoke(main, ["survey", "--n", "1"])
    assert result.exit_code == 1
    assert "n deve essere un intero >= 2" in result.output
    assert result.exception is None or isinstance(result.exception, SystemExit)


def test_schedule_degree_conflicts_are_usage_errors(runner):
    result = runner.invoke(main, ["chain", "--basis", "#11", "--basis", "#19", "--elem", "x", "--k", "2"])
    assert result.exit_code == 2
    result = runner.invoke(main, ["loops", "--n", "3", "--basis", "#19", "--basis", "#25", "--basis", "#31"])
    assert result.exit_code == 2
