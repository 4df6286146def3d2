import io
import json
import threading
from fractions import Fraction

import pytest

from ffchain.base_experiment import format_fraction
from ffchain.errors import ConfigError, GuardExceededError, InternalInvariantError
from ffchain.experiment_config import ExperimentConfig, read_config_file
from ffchain.loop_survey import LoopSurvey, run_loop_survey
from ffchain.pair_survey import PairRecord, PairSurvey, run_pair_survey, spanning_census
from ffchain.utils import build_config, build_experiment, run_experiment


def run_to_text(cfg):
    buffer = io.StringIO()
    records = run_experiment(cfg, stream=buffer)
    return records, buffer.getvalue()


# --- Formattazione ---

@pytest.mark.parametrize(
    "value, places, expected",
    [
        (Fraction(6), 6, "6.000000"),
        (Fraction(13, 3), 6, "4.333333"),
        (Fraction(2, 3), 6, "0.666667"),
        (Fraction(1, 8), 2, "0.13"),
        (Fraction(7, 2), 0, "4"),
        (Fraction(0), 3, "0.000"),
    ],
)
def test_format_fraction(value, places, expected):
    assert format_fraction(value, places) == expected


def test_format_fraction_rejects_negative():
    with pytest.raises(ValueError):
        format_fraction(Fraction(-1, 3))


# --- Configurazione ---

def test_config_defaults_and_parameters():
    cfg = ExperimentConfig()
    assert cfg.p == 2 and cfg.n == 3 and cfg.mode == "exhaustive" and cfg.beta == 2
    assert "work_guard" in cfg.getListOfParameters()
    params = cfg.getParameters()
    params["p"] = 3
    assert cfg.p == 2

    cfg.setParameters({"n": 5, "n_max": 7})
    assert cfg.degrees == [5, 6, 7]
    assert cfg.getParameters()["n"] == 5


def test_config_unknown_parameter():
    cfg = ExperimentConfig()
    with pytest.raises(KeyError, match="Parametri validi"):
        cfg.setParameters({"Kp": 1.0})


def test_config_validation_is_atomic():
    cfg = ExperimentConfig(n=4)
    with pytest.raises(ConfigError):
        cfg.setParameters({"n": 6, "mode": "sampled"})  # manca il seed
    assert cfg.n == 4 and cfg.mode == "exhaustive"


@pytest.mark.parametrize(
    "params",
    [
        {"p": 4},
        {"n": 0},
        {"n": 1},
        {"n": 4, "n_max": 3},
        {"mode": "random"},
        {"format": "xml"},
        {"beta": 1},
        {"workers": 0},
        {"mode": "sampled", "seed": 1},
        {"mode": "sampled", "samples": 0, "seed": 1},
        {"mode": "sampled", "samples": 5, "seed": 2**64},
        {"n": 16},
    ],
)
def test_config_rejects(params):
    with pytest.raises(ConfigError):
        ExperimentConfig(**params)


def test_config_file(tmp_path):
    path = tmp_path / "survey.cfg"
    path.write_text(
        "# indagine campionata\n"
        "p = 2\n"
        "n = 8\n"
        "mode = sampled   # commento\n"
        "samples = 10\n"
        "seed = 42\n"
        "output = none\n",
        encoding="utf-8",
    )
    entries = read_config_file(str(path))
    assert [e.key for e in entries] == ["p", "n", "mode", "samples", "seed", "output"]
    assert entries[1].line == 3

    cfg = ExperimentConfig.from_file(str(path))
    assert (cfg.n, cfg.mode, cfg.samples, cfg.seed, cfg.output) == (8, "sampled", 10, 42, None)

    cfg = ExperimentConfig.from_file(str(path), overrides={"samples": 3, "seed": None})
    assert cfg.samples == 3 and cfg.seed == 42


@pytest.mark.parametrize(
    "content",
    ["p = 2\np = 3\n", "colore = blu\n", "n: 3\n", "n = tre\n"],
)
def test_config_file_errors(tmp_path, content):
    path = tmp_path / "bad.cfg"
    path.write_text(content, encoding="utf-8")
    with pytest.raises(ConfigError):
        ExperimentConfig.from_file(str(path))


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigError):
        read_config_file(str(tmp_path / "missing.cfg"))


# --- PairRecord ---

def test_pair_record_invariants():
    record = PairRecord(p=2, n=4, f1=19, f2=25, cycle_type=(4, 10))
    assert record.num_cycles == 2
    assert record.min_len == 4 and record.max_len == 10
    assert record.mean_len == Fraction(7)
    assert not record.spanning
    with pytest.raises(InternalInvariantError):
        PairRecord(p=2, n=4, f1=19, f2=25, cycle_type=(6, 6))
    with pytest.raises(InternalInvariantError):
        PairRecord(p=2, n=4, f1=19, f2=25, cycle_type=(2, 12))
    with pytest.raises(InternalInvariantError):
        PairRecord(p=2, n=4, f1=19, f2=25, cycle_type=(5, 9))


# --- Indagine sulle coppie ---

def test_pair_survey_degree_three():
    cfg = ExperimentConfig(p=2, n=3)
    records, text = run_to_text(cfg)
    assert [(r.f1, r.f2) for r in records] == [(11, 13), (13, 11)]
    for r in records:
        assert (r.num_cycles, r.min_len, r.max_len, r.mean_len, r.spanning) == (1, 6, 6, 6, True)
    assert text == (
        "p,n,f1,f2,num_cycles,min_len,max_len,mean_len,spanning\n"
        "2,3,#11,#13,1,6,6,6.000000,true\n"
        "2,3,#13,#11,1,6,6,6.000000,true\n"
    )


def test_pair_survey_degree_six():
    records = run_pair_survey(ExperimentConfig(p=2, n=6), stream=io.StringIO())
    assert len(records) == 72
    assert any(r.min_len == 4 for r in records)
    for r in records:
        assert sum(r.cycle_type) == 2**6 - 2
        assert all(k % 2 == 0 and k >= 4 for k in r.cycle_type)
        assert r.spanning == (r.num_cycles == 1)


def test_pair_survey_json():
    cfg = ExperimentConfig(p=2, n=3, format="json")
    _, text = run_to_text(cfg)
    data = json.loads(text)
    assert len(data) == 2
    assert data[0] == {
        "p": 2, "n": 3, "f1": "#11", "f2": "#13", "num_cycles": 1, "min_len": 6,
        "max_len": 6, "mean_len": "6.000000", "spanning": True, "cycle_type": [6],
    }


def test_empty_json_survey_is_valid():
    # su F_2 c'è un solo irriducibile di grado 2: nessuna coppia
    _, text = run_to_text(ExperimentConfig(p=2, n=2, format="json"))
    assert json.loads(text) == []


def test_sampled_survey_needs_two_irreducibles():
    cfg = ExperimentConfig(p=2, n=2, mode="sampled", samples=3, seed=1)
    with pytest.raises(ConfigError):
        run_pair_survey(cfg, stream=io.StringIO())


def test_sampled_survey_is_deterministic():
    cfg = ExperimentConfig(p=2, n=8, mode="sampled", samples=100, seed=42)
    records, first = run_to_text(cfg)
    _, second = run_to_text(ExperimentConfig(p=2, n=8, mode="sampled", samples=100, seed=42))
    assert first == second
    assert len(records) == 100
    assert all(r.f1 != r.f2 for r in records)

    _, other_seed = run_to_text(ExperimentConfig(p=2, n=8, mode="sampled", samples=100, seed=43))
    assert other_seed != first


def test_workers_do_not_change_output():
    _, serial = run_to_text(ExperimentConfig(p=2, n=7, mode="sampled", samples=30, seed=5))
    _, threaded = run_to_text(ExperimentConfig(p=2, n=7, mode="sampled", samples=30, seed=5, workers=4))
    assert serial == threaded


class GatedPairSurvey(PairSurvey):
    """L'ultima unità attende che il primo record sia già stato scritto."""

    def __init__(self, cfg, first_written):
        super().__init__(cfg)
        self.first_written = first_written
        self.streamed = None

    def _work_units(self):
        units = super()._work_units()
        self.last_unit = units[-1]
        return units

    def _run_unit(self, unit):
        if unit == self.last_unit:
            self.streamed = self.first_written.wait(timeout=5)
        return super()._run_unit(unit)


class RecordingStream(io.StringIO):
    def __init__(self, first_written):
        super().__init__()
        self.first_written = first_written

    def write(self, text):
        # le righe dei record contengono "#indice", l'intestazione no
        if "#" in text:
            self.first_written.set()
        return super().write(text)


def test_threaded_survey_streams_records():
    first_written = threading.Event()
    survey = GatedPairSurvey(ExperimentConfig(p=2, n=4, workers=2), first_written)
    records = survey.run(RecordingStream(first_written))
    assert len(records) == 6
    assert survey.streamed is True


def test_sampled_records_belong_to_exhaustive_run():
    exhaustive = {
        (r.f1, r.f2, r.cycle_type)
        for r in run_pair_survey(ExperimentConfig(p=2, n=5), stream=io.StringIO())
    }
    sampled = run_pair_survey(
        ExperimentConfig(p=2, n=5, mode="sampled", samples=25, seed=9), stream=io.StringIO()
    )
    assert all((r.f1, r.f2, r.cycle_type) in exhaustive for r in sampled)


def test_degree_range():
    records = run_pair_survey(ExperimentConfig(p=2, n=3, n_max=4), stream=io.StringIO())
    assert [r.n for r in records] == [3, 3] + [4] * 6


def test_work_guard_counts_ordered_tuples():
    # 9 * 8 coppie rientrano nella guardia, le 9 * 8 * 7 terne no
    ExperimentConfig(p=2, n=6, work_guard=100)
    with pytest.raises(ConfigError):
        ExperimentConfig(p=2, n=6, beta=3, work_guard=100)
    # 56 * 55 * 54 * 53 quadruple: rifiutate prima di costruire le unità
    with pytest.raises(ConfigError):
        ExperimentConfig(p=2, n=9, beta=4)


def test_work_guard_sums_over_degrees():
    # 2 + 6 + 30 coppie per n = 3..5, 72 in più con n = 6
    assert ExperimentConfig(p=2, n=3, n_max=5, work_guard=38).degrees == [3, 4, 5]
    with pytest.raises(ConfigError):
        ExperimentConfig(p=2, n=3, n_max=6, work_guard=100)


def test_degree_one_is_rejected():
    with pytest.raises(ConfigError):
        run_pair_survey(ExperimentConfig(p=2, n=1), stream=io.StringIO())
    with pytest.raises(ConfigError):
        ExperimentConfig(p=3, n=1, beta=3)
    cfg = ExperimentConfig(p=2, n=3)
    with pytest.raises(ConfigError):
        cfg.setParameters({"n": 1})
    assert cfg.n == 3


def test_output_file(tmp_path):
    path = tmp_path / "out.csv"
    run_experiment(ExperimentConfig(p=2, n=3, output=str(path)))
    assert path.read_text(encoding="utf-8").startswith("p,n,f1,f2,")


def test_unwritable_output(tmp_path):
    cfg = ExperimentConfig(p=2, n=3, output=str(tmp_path / "missing" / "out.csv"))
    with pytest.raises(ConfigError):
        run_experiment(cfg)


# --- Censimento ---

def test_spanning_census_degree_three():
    census = spanning_census(2, 3)
    assert census.fraction == 1
    assert (census.spanning, census.total) == (2, 2)
    assert census.unordered == {(11, 13): True}
    assert census.to_dict()["fraction"] == "1.000000"


def test_spanning_census_degree_six():
    census = spanning_census(2, 6)
    assert census.total == 72
    assert 0 <= census.fraction < 1
    assert census.total_unordered == 36
    assert census.spanning == 2 * census.spanning_unordered


def test_spanning_census_without_pairs():
    census = spanning_census(2, 2)
    assert census.total == 0 and census.fraction == 0


def test_spanning_census_guard():
    with pytest.raises(GuardExceededError):
        spanning_census(2, 6, work_guard=10)


# --- Indagine sui loop chiusi ---

def test_loop_survey_degree_four():
    cfg = ExperimentConfig(p=2, n=4, beta=3)
    records, text = run_to_text(cfg)
    assert isinstance(build_experiment(cfg), LoopSurvey)
    assert len(records) == 6
    for r in records:
        assert all(k % 3 == 0 for k in r.histogram)
        assert sum(r.histogram.values()) == 14
        assert sum(k * count for k, count in r.histogram.items()) % 3 == 0
    assert text.splitlines()[0] == "p,n,bases,num_loops,min_len,max_len,achieves_beta,histogram"
    assert text.splitlines()[1].startswith("2,4,#19 #25 #31,")


def test_loop_survey_sampled_is_deterministic():
    cfg = dict(p=2, n=5, beta=3, mode="sampled", samples=5, seed=11)
    first = [r.to_dict() for r in run_loop_survey(ExperimentConfig(**cfg), stream=io.StringIO())]
    second = [r.to_dict() for r in run_loop_survey(ExperimentConfig(**cfg), stream=io.StringIO())]
    assert first == second
    assert all(len(set(r["bases"])) == 3 for r in first)


def test_loop_survey_rejects_too_many_bases():
    with pytest.raises(ConfigError):
        run_loop_survey(ExperimentConfig(p=2, n=4, beta=4), stream=io.StringIO())
    with pytest.raises(ConfigError):
        run_loop_survey(ExperimentConfig(p=2, n=4, beta=2), stream=io.StringIO())


def test_build_experiment_dispatch():
    assert isinstance(build_experiment(build_config(n=3)), PairSurvey)
    assert isinstance(build_experiment(build_config(n=4, beta=3)), LoopSurvey)
