import logging
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations
from typing import Any, Dict, List, Optional, Sequence, TextIO, Tuple

from .base_experiment import BaseExperiment, format_fraction
from .chain_engine import partition
from .errors import ConfigError, GuardExceededError, InternalInvariantError
from .experiment_config import DEFAULT_WORK_GUARD, ExperimentConfig
from .irreducible import count_irreducibles, enumerate_irreducibles, random_irreducible
from .polynomial import ElementIndex, IrreduciblePoly

logger = logging.getLogger(__name__)

CSV_COLUMNS = ("p", "n", "f1", "f2", "num_cycles", "min_len", "max_len", "mean_len", "spanning")


@dataclass(frozen=True)
class PairRecord:
    """
    Statistiche dei cicli di una coppia ordinata (f1, f2).

    cycle_type: lunghezze dei cicli in ordine di partizione (elemento minimo crescente).
    """

    p: int
    n: int
    f1: ElementIndex
    f2: ElementIndex
    cycle_type: Tuple[int, ...]

    def __post_init__(self) -> None:
        lengths = self.cycle_type
        if sum(lengths) != self.p**self.n - self.p:
            raise InternalInvariantError(f"lunghezze {lengths}: la somma deve essere {self.p**self.n - self.p}")
        if any(k % 2 or k < 4 for k in lengths):
            raise InternalInvariantError(f"lunghezze {lengths}: attese pari e >= 4")

    @property
    def num_cycles(self) -> int:
        return len(self.cycle_type)

    @property
    def min_len(self) -> int:
        return min(self.cycle_type)

    @property
    def max_len(self) -> int:
        return max(self.cycle_type)

    @property
    def mean_len(self) -> Fraction:
        return Fraction(sum(self.cycle_type), len(self.cycle_type))

    @property
    def spanning(self) -> bool:
        return self.num_cycles == 1

    def csv_row(self) -> List[Any]:
        return [
            self.p,
            self.n,
            f"#{self.f1}",
            f"#{self.f2}",
            self.num_cycles,
            self.min_len,
            self.max_len,
            format_fraction(self.mean_len),
            "true" if self.spanning else "false",
        ]

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "f1": f"#{self.f1}",
            "f2": f"#{self.f2}",
            "num_cycles": self.num_cycles,
            "min_len": self.min_len,
            "max_len": self.max_len,
            "mean_len": format_fraction(self.mean_len),
            "spanning": self.spanning,
            "cycle_type": list(self.cycle_type),
        }


def pair_record(f1: IrreduciblePoly, f2: IrreduciblePoly, guard: Optional[int] = None) -> PairRecord:
    part = partition(f1, f2, guard)
    return PairRecord(p=f1.p, n=f1.degree, f1=f1.index, f2=f2.index, cycle_type=part.cycle_lengths)


class PairSurvey(BaseExperiment):
    """
    Indagine sulle coppie ordinate di basi (beta = 2): un PairRecord per coppia.

    - exhaustive: tutte le coppie ordinate f1 != f2 degli irriducibili di grado n
    - sampled: samples coppie casuali; se f1 = f2 si ricampiona f2
    """

    def _work_units(self) -> List[Tuple[Any, ...]]:
        cfg = self.config
        units: List[Tuple[Any, ...]] = []
        for n in cfg.degrees:
            if cfg.mode == "exhaustive":
                irreducibles = enumerate_irreducibles(cfg.p, n, cfg.guard)
                units.extend(("pair", f1, f2) for f1, f2 in permutations(irreducibles, 2))
            elif count_irreducibles(cfg.p, n) < 2:
                raise ConfigError(f"su F_{cfg.p} c'è un solo irriducibile di grado {n}: nessuna coppia da campionare")
            else:
                units.extend(("sample", n, i) for i in range(cfg.samples))
        return units

    def _draw_pair(self, n: int, index: int) -> Tuple[IrreduciblePoly, IrreduciblePoly]:
        rng = self._rng_for(n, index)
        f1 = random_irreducible(self.config.p, n, rng)
        f2 = random_irreducible(self.config.p, n, rng)
        while f2 == f1:
            f2 = random_irreducible(self.config.p, n, rng)
        return f1, f2

    def _run_unit(self, unit: Tuple[Any, ...]) -> PairRecord:
        if unit[0] == "pair":
            f1, f2 = unit[1], unit[2]
        else:
            f1, f2 = self._draw_pair(unit[1], unit[2])
        return pair_record(f1, f2, self.config.guard)

    def _csv_header(self) -> Sequence[str]:
        return CSV_COLUMNS

    def _csv_row(self, record: PairRecord) -> Sequence[Any]:
        return record.csv_row()

    def _json_record(self, record: PairRecord) -> dict:
        return record.to_dict()


def run_pair_survey(cfg: ExperimentConfig, stream: Optional[TextIO] = None) -> List[PairRecord]:
    """Esegue l'indagine sulle coppie e scrive CSV/JSON su stream (o config.output)."""
    return PairSurvey(cfg).run(stream)


@dataclass(frozen=True)
class SpanningCensus:
    """
    Censimento esatto delle coppie con un unico ciclo che copre P(p,n) \\ F_p.

    table: (f1, f2) ordinata -> spanning
    unordered: (min, max) -> spanning ((f1, f2) e (f2, f1) hanno gli stessi cicli, percorsi al contrario)
    """

    p: int
    n: int
    table: Dict[Tuple[ElementIndex, ElementIndex], bool]
    unordered: Dict[Tuple[ElementIndex, ElementIndex], bool]

    @property
    def total(self) -> int:
        return len(self.table)

    @property
    def spanning(self) -> int:
        return sum(self.table.values())

    @property
    def fraction(self) -> Fraction:
        # nessuna coppia (M(p,n) < 2): frazione 0 per convenzione
        return Fraction(self.spanning, self.total) if self.total else Fraction(0)

    @property
    def total_unordered(self) -> int:
        return len(self.unordered)

    @property
    def spanning_unordered(self) -> int:
        return sum(self.unordered.values())

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "ordered": {"spanning": self.spanning, "total": self.total},
            "unordered": {"spanning": self.spanning_unordered, "total": self.total_unordered},
            "fraction": format_fraction(self.fraction),
            "pairs": [
                {"f1": f"#{a}", "f2": f"#{b}", "spanning": s}
                for (a, b), s in sorted(self.table.items())
            ],
        }


def spanning_census(
    p: int,
    n: int,
    guard: Optional[int] = None,
    work_guard: int = DEFAULT_WORK_GUARD,
) -> SpanningCensus:
    irreducibles = enumerate_irreducibles(p, n, guard)
    pairs = list(permutations(irreducibles, 2))
    if len(pairs) > work_guard:
        raise GuardExceededError(f"{len(pairs)} coppie superano work_guard={work_guard}")

    table: Dict[Tuple[ElementIndex, ElementIndex], bool] = {}
    unordered: Dict[Tuple[ElementIndex, ElementIndex], bool] = {}
    for f1, f2 in pairs:
        spans = len(partition(f1, f2, guard).cycles) == 1
        table[(f1.index, f2.index)] = spans
        key = (min(f1.index, f2.index), max(f1.index, f2.index))
        previous = unordered.setdefault(key, spans)
        if previous != spans:
            raise InternalInvariantError(f"la coppia {key} dà risultati diversi nei due ordini")
    logger.info("censimento p=%d n=%d: %d/%d coppie ordinate spanning", p, n, sum(table.values()), len(table))
    return SpanningCensus(p=p, n=n, table=table, unordered=unordered)
