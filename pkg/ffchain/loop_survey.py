import logging
from collections import Counter
from dataclasses import dataclass
from itertools import permutations
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

from .base_experiment import BaseExperiment
from .chain_engine import BasisSchedule, enumerate_closed_loops
from .errors import ConfigError
from .experiment_config import ExperimentConfig
from .irreducible import count_irreducibles, enumerate_irreducibles, random_irreducible
from .polynomial import ElementIndex, IrreduciblePoly

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("p", "n", "bases", "num_loops", "min_len", "max_len", "achieves_beta", "histogram")


@dataclass(frozen=True)
class LoopHistogram:
    """
    Lunghezze dei loop chiusi di uno schedule, su tutti gli elementi
    non costanti presi come partenza in fase 0.

    histogram: lunghezza del loop -> numero di elementi di partenza
    """

    p: int
    n: int
    bases: Tuple[ElementIndex, ...]
    histogram: Dict[int, int]
    num_loops: int

    @property
    def beta(self) -> int:
        return len(self.bases)

    @property
    def achieves_beta(self) -> bool:
        return self.beta in self.histogram

    def csv_row(self) -> List[Any]:
        return [
            self.p,
            self.n,
            " ".join(f"#{b}" for b in self.bases),
            self.num_loops,
            min(self.histogram),
            max(self.histogram),
            "true" if self.achieves_beta else "false",
            ";".join(f"{k}:{v}" for k, v in sorted(self.histogram.items())),
        ]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "bases": [f"#{b}" for b in self.bases],
            "num_loops": self.num_loops,
            "achieves_beta": self.achieves_beta,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
        }


def loop_histogram(schedule: BasisSchedule, guard: Optional[int] = None) -> LoopHistogram:
    census = enumerate_closed_loops(schedule, guard)
    return LoopHistogram(
        p=schedule.p,
        n=schedule.n,
        bases=tuple(f.index for f in schedule.bases),
        histogram=dict(sorted(Counter(census.start_lengths.values()).items())),
        num_loops=len(census.loops),
    )


class LoopSurvey(BaseExperiment):
    """
    Indagine sui loop chiusi con beta >= 3 basi distinte.

    - exhaustive: tutte le beta-uple ordinate di irriducibili distinti
    - sampled: samples schedule casuali (basi ripetute vengono ricampionate)
    """

    def _work_units(self) -> List[Tuple[Any, ...]]:
        cfg = self.config
        units: List[Tuple[Any, ...]] = []
        for n in cfg.degrees:
            available = count_irreducibles(cfg.p, n)
            if cfg.beta > available:
                raise ConfigError(
                    f"beta = {cfg.beta} supera il numero di irriducibili di grado {n} su F_{cfg.p} ({available})"
                )
            if cfg.mode == "exhaustive":
                irreducibles = enumerate_irreducibles(cfg.p, n, cfg.guard)
                units.extend(("schedule", bases) for bases in permutations(irreducibles, cfg.beta))
            else:
                units.extend(("sample", n, i) for i in range(cfg.samples))
        return units

    def _draw_schedule(self, n: int, index: int) -> Tuple[IrreduciblePoly, ...]:
        rng = self._rng_for(n, index)
        bases: List[IrreduciblePoly] = []
        while len(bases) < self.config.beta:
            f = random_irreducible(self.config.p, n, rng)
            if f not in bases:
                bases.append(f)
        return tuple(bases)

    def _run_unit(self, unit: Tuple[Any, ...]) -> LoopHistogram:
        if unit[0] == "schedule":
            bases = unit[1]
        else:
            bases = self._draw_schedule(unit[1], unit[2])
        return loop_histogram(BasisSchedule(bases), self.config.guard)

    def _csv_header(self) -> Sequence[str]:
        return CSV_COLUMNS

    def _csv_row(self, record: LoopHistogram) -> Sequence[Any]:
        return record.csv_row()

    def _json_record(self, record: LoopHistogram) -> dict:
        return record.to_dict()


def run_loop_survey(cfg: ExperimentConfig, stream: Optional[TextIO] = None) -> List[LoopHistogram]:
    """Istogramma delle lunghezze dei loop chiusi per ogni schedule."""
    if cfg.beta < 3:
        raise ConfigError(f"l'indagine sui loop richiede beta >= 3, ricevuto {cfg.beta}")
    return LoopSurvey(cfg).run(stream)
