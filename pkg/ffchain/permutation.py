"""
Permutazioni di S_q (q = p^n) indotte dai cicli di una coppia di basi.

Fissato un orientamento per ogni ciclo, i cicli orientati sono la
decomposizione in cicli di sigma; le costanti c vanno in c^-1 mod p e 0 in se stesso.
"""

import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from .chain_engine import partition
from .errors import InternalInvariantError, OrientationError
from .polynomial import IrreduciblePoly

logger = logging.getLogger(__name__)

Orientation = Union[str, Sequence[Union[int, bool]]]


def decompose_cycles(mapping: Sequence[int]) -> Tuple[Tuple[int, ...], ...]:
    """
    Cicli non banali (lunghezza >= 2) di una permutazione di [0, N),
    ognuno a partire dal suo elemento minimo, ordinati per minimo.
    """
    seen = set()
    cycles = []
    for i in range(len(mapping)):
        if i in seen:
            continue
        cycle = []
        j = i
        while j not in seen:
            seen.add(j)
            cycle.append(j)
            j = int(mapping[j])
        if len(cycle) >= 2:
            cycles.append(tuple(cycle))
    return tuple(cycles)


@dataclass(frozen=True, eq=False)
class Permutation:
    p: int
    n: int
    mapping: np.ndarray
    cycle_decomposition: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        mapping = np.array(self.mapping, dtype=np.int64)
        mapping.setflags(write=False)
        object.__setattr__(self, "mapping", mapping)

    def __call__(self, index: int) -> int:
        return int(self.mapping[index])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.p == other.p and self.n == other.n and np.array_equal(self.mapping, other.mapping)

    def __hash__(self) -> int:
        return hash((self.p, self.n, self.mapping.tobytes()))

    @property
    def size(self) -> int:
        return int(self.mapping.shape[0])

    @property
    def is_bijection(self) -> bool:
        return bool(np.array_equal(np.sort(self.mapping), np.arange(self.size)))

    @property
    def fixed_points(self) -> Tuple[int, ...]:
        return tuple(int(i) for i in np.flatnonzero(self.mapping == np.arange(self.size)))

    @property
    def cycle_type(self) -> Tuple[int, ...]:
        return tuple(sorted((len(c) for c in self.cycle_decomposition), reverse=True))

    def to_dict(self) -> dict:
        return {
            "mapping": [int(v) for v in self.mapping],
            "cycles": [list(c) for c in self.cycle_decomposition],
            "fixed_points": list(self.fixed_points),
        }


def _orientation_bits(orientation: Orientation, count: int) -> Tuple[bool, ...]:
    if isinstance(orientation, str):
        if orientation == "canonical":
            return (False,) * count
        if not set(orientation) <= {"0", "1"}:
            raise OrientationError(
                f"orientamento {orientation!r}: usare 'canonical' o una stringa di bit"
            )
        bits = tuple(ch == "1" for ch in orientation)
    else:
        bits = []
        for b in orientation:
            if b not in (0, 1):
                raise OrientationError(f"bit di orientamento non valido: {b!r}")
            bits.append(bool(b))
        bits = tuple(bits)
    if len(bits) != count:
        raise OrientationError(
            f"il vettore di orientamento ha {len(bits)} bit, i cicli sono {count}"
        )
    return bits


def build_permutation(
    f1: IrreduciblePoly,
    f2: IrreduciblePoly,
    orientation: Orientation = "canonical",
    guard: Optional[int] = None,
) -> Permutation:
    """
    Costruisce sigma da (f1, f2).

    orientation: "canonical" (l'elemento minimo di ogni ciclo va nel suo f1-inverso)
                 oppure un bit per ciclo, nell'ordine della partizione:
                 1 = percorre il ciclo canonico al contrario.
    """
    part = partition(f1, f2, guard)
    bits = _orientation_bits(orientation, len(part.cycles))
    p, n = f1.p, f1.degree

    mapping = np.arange(p**n, dtype=np.int64)
    for c in range(1, p):
        mapping[c] = pow(c, -1, p)
    for cycle, reverse in zip(part.cycles, bits):
        order = list(cycle.indices)
        if reverse:
            order = [order[0]] + order[:0:-1]
        k = len(order)
        for i, e in enumerate(order):
            mapping[e] = order[(i + 1) % k]

    sigma = Permutation(p=p, n=n, mapping=mapping, cycle_decomposition=decompose_cycles(mapping))
    if not sigma.is_bijection:
        raise InternalInvariantError("la permutazione costruita non è una biiezione")
    logger.debug("permutazione %s / %s: tipo di ciclo %s", f1, f2, sigma.cycle_type)
    return sigma
