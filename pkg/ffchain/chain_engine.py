"""
Catene di inversi moltiplicativi su basi alternate.

Convenzione sugli indici: al passo i >= 1 si usa la base f_j con
j = ((i - 1) mod beta) + 1, cioè i dispari -> f1, i pari -> f2 per beta = 2.

Lo stato della catena è la coppia (elemento, fase = i mod beta). Ogni passo è
una biiezione sugli stati, quindi la sequenza degli stati è puramente
periodica: il primo stato ripetuto è sempre (a_0, 0).
"""

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    CharacteristicMismatchError,
    ConstantElementError,
    DegreeError,
    DuplicateBasisError,
    FFChainError,
    InternalInvariantError,
    ZeroInverseError,
)
from .irreducible import inverse_table
from .polynomial import ElementIndex, IrreduciblePoly, Poly, check_guard, format_poly, inv

logger = logging.getLogger(__name__)


# --- Tipi ---

@dataclass(frozen=True)
class BasisSchedule:
    """Sequenza ordinata di basi (f1, ..., f_beta), tutte di grado n sullo stesso p."""

    bases: Tuple[IrreduciblePoly, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "bases", tuple(self.bases))
        if not self.bases:
            raise FFChainError("serve almeno una base")
        first = self.bases[0]
        for f in self.bases[1:]:
            if f.p != first.p:
                raise CharacteristicMismatchError(
                    f"basi su caratteristiche diverse: {first.p} e {f.p}"
                )
            if f.degree != first.degree:
                raise DegreeError(
                    f"basi di grado diverso: {first} (grado {first.degree}) e {f} (grado {f.degree})"
                )

    @classmethod
    def of(cls, *bases: IrreduciblePoly) -> "BasisSchedule":
        return cls(tuple(bases))

    @property
    def beta(self) -> int:
        return len(self.bases)

    @property
    def p(self) -> int:
        return self.bases[0].p

    @property
    def n(self) -> int:
        return self.bases[0].degree

    @property
    def is_distinct(self) -> bool:
        return len(set(self.bases)) == len(self.bases)

    def require_distinct(self) -> None:
        if not self.is_distinct:
            raise DuplicateBasisError(
                "le basi devono essere a due a due distinte: "
                + ", ".join(format_poly(f.poly) for f in self.bases)
            )

    def basis_for_step(self, i: int) -> IrreduciblePoly:
        if i < 1:
            raise ValueError(f"il passo deve essere >= 1, ricevuto {i}")
        return self.bases[(i - 1) % self.beta]

    def to_indexed(self) -> List[str]:
        return [format_poly(f.poly, "indexed") for f in self.bases]


@dataclass(frozen=True)
class Chain:
    start: Poly
    schedule: BasisSchedule
    elements: Tuple[Poly, ...]

    @property
    def k(self) -> int:
        return len(self.elements) - 1

    def to_dict(self) -> dict:
        return {
            "p": self.schedule.p,
            "n": self.schedule.n,
            "bases": self.schedule.to_indexed(),
            "start": format_poly(self.start, "indexed"),
            "elements": [format_poly(a, "indexed") for a in self.elements],
        }


@dataclass(frozen=True)
class Cycle:
    """Ciclo alternato f1/f2 di lunghezza pari >= 4, in orientamento canonico."""

    elements: Tuple[Poly, ...]
    pair: Tuple[IrreduciblePoly, IrreduciblePoly]

    def __post_init__(self) -> None:
        k = len(self.elements)
        if k < 4 or k % 2:
            raise InternalInvariantError(f"ciclo di lunghezza {k}: atteso pari e >= 4")

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def indices(self) -> Tuple[ElementIndex, ...]:
        return tuple(a.index for a in self.elements)

    def to_dict(self) -> dict:
        return {
            "len": len(self.elements),
            "elements": [format_poly(a, "indexed") for a in self.elements],
        }


@dataclass(frozen=True)
class CyclePartition:
    pair: Tuple[IrreduciblePoly, IrreduciblePoly]
    cycles: Tuple[Cycle, ...]

    @property
    def covered(self) -> int:
        return sum(len(c) for c in self.cycles)

    @property
    def cycle_lengths(self) -> Tuple[int, ...]:
        return tuple(len(c) for c in self.cycles)

    def to_dict(self) -> dict:
        return {
            "pair": [format_poly(f.poly, "indexed") for f in self.pair],
            "cycles": [c.to_dict() for c in self.cycles],
            "covered": self.covered,
        }


@dataclass(frozen=True)
class ClosedLoop:
    """
    Loop chiuso (a_0, ..., a_k) con a_k = a_0, k multiplo di beta e minimo.
    Gli elementi possono ripetersi all'interno del loop.
    """

    schedule: BasisSchedule
    elements: Tuple[Poly, ...]

    @property
    def k(self) -> int:
        return len(self.elements) - 1

    @property
    def multiplicities(self) -> Dict[Poly, int]:
        return dict(Counter(self.elements[:-1]))

    @property
    def visit_labels(self) -> Dict[Poly, Tuple[int, ...]]:
        """Posizioni i (0 <= i < k) in cui ogni elemento è visitato."""
        labels: Dict[Poly, List[int]] = {}
        for i, a in enumerate(self.elements[:-1]):
            labels.setdefault(a, []).append(i)
        return {a: tuple(pos) for a, pos in labels.items()}

    def to_dict(self) -> dict:
        repeated = {
            format_poly(a, "indexed"): m
            for a, m in sorted(self.multiplicities.items(), key=lambda item: item[0].index)
            if m > 1
        }
        return {
            "bases": self.schedule.to_indexed(),
            "k": self.k,
            "elements": [format_poly(a, "indexed") for a in self.elements],
            "multiplicities": repeated,
        }


@dataclass(frozen=True)
class LoopCensus:
    """
    Risultato di enumerate_closed_loops.

    membership: elemento -> ((loop_id, molteplicità nel loop), ...)
    start_lengths: elemento -> lunghezza del loop che parte da (elemento, fase 0)

    Con beta = 2 i due versi di percorrenza di un ciclo sono un solo loop:
    state_coverage vale allora p^n - p invece di beta * (p^n - p).
    """

    schedule: BasisSchedule
    loops: Tuple[ClosedLoop, ...]
    membership: Dict[ElementIndex, Tuple[Tuple[int, int], ...]]
    start_lengths: Dict[ElementIndex, int]

    @property
    def state_coverage(self) -> int:
        return sum(loop.k for loop in self.loops)

    def to_dict(self) -> dict:
        return {
            "bases": self.schedule.to_indexed(),
            "loops": [loop.to_dict() for loop in self.loops],
            "membership": {
                f"#{e}": [{"loop": loop_id, "multiplicity": m} for loop_id, m in entries]
                for e, entries in sorted(self.membership.items())
            },
            "state_coverage": self.state_coverage,
        }


# --- Validazioni ---

def _check_element(a: Poly, schedule: BasisSchedule) -> None:
    if a.p != schedule.p:
        raise CharacteristicMismatchError(
            f"l'elemento {a} è su F_{a.p}, le basi su F_{schedule.p}"
        )
    if a.degree >= schedule.n:
        raise DegreeError(f"{a} ha grado {a.degree}, deve essere < {schedule.n}")
    if a.is_zero:
        raise ZeroInverseError("la catena non può partire da 0")


def _check_non_constant(a: Poly) -> None:
    if a.is_constant:
        raise ConstantElementError(
            f"{a} è costante: cicli e loop chiusi richiedono grado >= 1"
        )


def _pair_schedule(f1: IrreduciblePoly, f2: IrreduciblePoly) -> BasisSchedule:
    schedule = BasisSchedule.of(f1, f2)
    if f1 == f2:
        raise DuplicateBasisError(
            f"f1 = f2 = {f1}: servono due basi distinte (il 2-loop degenere è escluso)"
        )
    return schedule


# --- Camminate ---

def _walk_pair(a: Poly, f1: IrreduciblePoly, f2: IrreduciblePoly) -> List[Poly]:
    """Elementi distinti del ciclo di a, partendo da a con il primo passo via f1."""
    p, n = a.p, f1.degree
    cap = p**n - p
    elements = [a]
    current = a
    step = 0
    while True:
        step += 1
        current = inv(current, f1 if step % 2 else f2)
        if current == a:
            break
        elements.append(current)
        if step > cap:
            raise InternalInvariantError(f"il ciclo di {a} supera {cap} passi")
    return elements


def _walk_pair_table(start: int, t1: Sequence[int], t2: Sequence[int]) -> List[int]:
    elements = [start]
    current = t1[start]
    use_first = False
    while current != start:
        elements.append(current)
        current = t1[current] if use_first else t2[current]
        use_first = not use_first
    return elements


# --- Operazioni ---

def k_chain(a: Poly, schedule: BasisSchedule, k: int) -> Chain:
    """
    k-catena di a: a_0 = a, a_i = inv(a_{i-1}, f_j) con j = ((i-1) mod beta) + 1.

    Per a costante la catena alterna a e a^-1.
    """
    _check_element(a, schedule)
    if k < 0:
        raise ValueError(f"k deve essere >= 0, ricevuto {k}")
    elements = [a]
    current = a
    for i in range(1, k + 1):
        current = inv(current, schedule.basis_for_step(i))
        elements.append(current)
    return Chain(start=a, schedule=schedule, elements=tuple(elements))


def find_cycle(a: Poly, f1: IrreduciblePoly, f2: IrreduciblePoly) -> Cycle:
    """
    Ciclo che contiene a rispetto a (f1, f2), in orientamento canonico:
    parte dall'elemento di ElementIndex minimo e il primo passo è verso il suo f1-inverso.
    """
    schedule = _pair_schedule(f1, f2)
    _check_element(a, schedule)
    _check_non_constant(a)
    raw = _walk_pair(a, f1, f2)
    smallest = min(raw, key=lambda e: e.index)
    canonical = raw if smallest == a else _walk_pair(smallest, f1, f2)
    return Cycle(elements=tuple(canonical), pair=(f1, f2))


def partition(
    f1: IrreduciblePoly,
    f2: IrreduciblePoly,
    guard: Optional[int] = None,
) -> CyclePartition:
    """
    Partizione di P(p,n) \\ F_p nei cicli indotti da (f1, f2), ordinati per
    ElementIndex minimo; ogni ciclo è in orientamento canonico.
    """
    _pair_schedule(f1, f2)
    p, n = f1.p, f1.degree
    check_guard(p**n, guard, "partizione in cicli")
    t1 = inverse_table(f1, guard)
    t2 = inverse_table(f2, guard)

    polys = [Poly.from_index(i, p) for i in range(p**n)]
    visited = [False] * (p**n)
    cycles = []
    for start in range(p, p**n):
        if visited[start]:
            continue
        # start è il minimo non visitato, quindi il minimo del suo ciclo
        walk = _walk_pair_table(start, t1, t2)
        for e in walk:
            visited[e] = True
        cycles.append(Cycle(elements=tuple(polys[e] for e in walk), pair=(f1, f2)))

    result = CyclePartition(pair=(f1, f2), cycles=tuple(cycles))
    if result.covered != p**n - p:
        raise InternalInvariantError(
            f"la partizione copre {result.covered} elementi invece di {p**n - p}"
        )
    logger.debug("partizione %s / %s: %d cicli", f1, f2, len(cycles))
    return result


def reverse_consistency_check(a: Poly, f1: IrreduciblePoly, f2: IrreduciblePoly) -> bool:
    """
    Vero se la catena di a rispetto a (f2, f1) è l'inversa di quella rispetto a (f1, f2):
    b_i = a_{(k - i) mod k} per ogni i.
    """
    schedule = _pair_schedule(f1, f2)
    _check_element(a, schedule)
    _check_non_constant(a)
    forward = _walk_pair(a, f1, f2)
    backward = _walk_pair(a, f2, f1)
    k = len(forward)
    if len(backward) != k:
        return False
    return all(backward[i] == forward[(k - i) % k] for i in range(k))


def _require_loop_schedule(schedule: BasisSchedule) -> None:
    if schedule.beta < 2:
        raise FFChainError(f"un loop chiuso richiede beta >= 2, ricevuto {schedule.beta}")
    schedule.require_distinct()


def find_closed_loop(a: Poly, schedule: BasisSchedule) -> ClosedLoop:
    """
    Loop chiuso di a: minimo k con k = 0 (mod beta) e a_k = a_0.

    È il periodo della sequenza degli stati (elemento, fase); il limite
    beta * (p^n - p) non può essere superato se l'implementazione è corretta.
    """
    _require_loop_schedule(schedule)
    _check_element(a, schedule)
    _check_non_constant(a)

    beta = schedule.beta
    cap = beta * (schedule.p**schedule.n - schedule.p)
    elements = [a]
    current = a
    i = 0
    while True:
        i += 1
        current = inv(current, schedule.basis_for_step(i))
        elements.append(current)
        if i % beta == 0 and current == a:
            break
        if i >= cap:
            raise InternalInvariantError(
                f"il loop di {a} non si chiude entro {cap} passi"
            )
    return ClosedLoop(schedule=schedule, elements=tuple(elements))


def enumerate_closed_loops(schedule: BasisSchedule, guard: Optional[int] = None) -> LoopCensus:
    """
    Loop chiusi di tutti gli elementi non costanti in fase 0, deduplicati per
    rotazione della sequenza degli stati (due loop coincidono se condividono uno stato).

    Con beta = 2 l'orbita che parte da un elemento in posizione dispari è lo
    stesso ciclo percorso al contrario e viene fusa nel loop diretto: i loop
    coincidono con i cicli di partition(f1, f2), nello stesso ordine.
    """
    _require_loop_schedule(schedule)
    p, n, beta = schedule.p, schedule.n, schedule.beta
    size = p**n
    check_guard(size, guard, "enumerazione dei loop chiusi")
    tables = [inverse_table(f, guard) for f in schedule.bases]
    polys = [Poly.from_index(i, p) for i in range(size)]
    cap = beta * (size - p)

    loops: List[ClosedLoop] = []
    membership: Dict[ElementIndex, List[Tuple[int, int]]] = {}
    start_lengths: Dict[ElementIndex, int] = {}

    for start in range(p, size):
        if start in start_lengths:
            continue
        walk = [start]
        phase_zero = [start]
        current = start
        i = 0
        while True:
            current = tables[i % beta][current]
            i += 1
            walk.append(current)
            if i % beta == 0:
                if current == start:
                    break
                phase_zero.append(current)
            if i >= cap:
                raise InternalInvariantError(f"il loop di #{start} non si chiude entro {cap} passi")

        k = len(walk) - 1
        if beta == 2:
            phase_zero = walk[:-1]
        for e in phase_zero:
            start_lengths[ElementIndex(e)] = k
        loop_id = len(loops)
        for e, m in sorted(Counter(walk[:-1]).items()):
            membership.setdefault(ElementIndex(e), []).append((loop_id, m))
        loops.append(ClosedLoop(schedule=schedule, elements=tuple(polys[e] for e in walk)))

    expected = size - p if beta == 2 else beta * (size - p)
    if sum(loop.k for loop in loops) != expected:
        raise InternalInvariantError("i loop non coprono tutti gli stati (elemento, fase)")
    logger.debug("schedule %s: %d loop chiusi", schedule.to_indexed(), len(loops))
    return LoopCensus(
        schedule=schedule,
        loops=tuple(loops),
        membership={e: tuple(entries) for e, entries in membership.items()},
        start_lengths=start_lengths,
    )
