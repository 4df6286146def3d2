"""
Polinomi irriducibili su F_p: test di Rabin, enumerazione, conteggio
(polinomio necklace), campionamento casuale e tabelle degli inversi.
"""

import logging
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
from sympy import divisors, mobius, primefactors

from .errors import DegreeError, NotIrreducibleError, NotMonicError
from .polynomial import (
    ElementIndex,
    IrreduciblePoly,
    Poly,
    as_prime,
    check_guard,
    format_poly,
    inv,
    poly_gcd,
    poly_mod,
    pow_mod,
    resolve_guard,
    sub,
)

logger = logging.getLogger(__name__)


def _check_basis_shape(f: Poly) -> int:
    if f.degree < 1:
        raise DegreeError(f"{f} è costante: serve grado >= 1")
    if not f.is_monic:
        raise NotMonicError(f"{f} non è monico")
    return int(f.degree)


def is_irreducible(f: Poly) -> bool:
    """
    Criterio di Rabin.

    f monico di grado n è irriducibile se e solo se
        - X^(p^n) = X  (mod f)
        - gcd(X^(p^(n/l)) - X, f) = 1 per ogni primo l che divide n.
    Le potenze X^(p^k) si ottengono applicando k volte h -> h^p mod f.
    """
    n = _check_basis_shape(f)
    if n == 1:
        return True
    if f.coeffs[0] == 0:
        # X divide f
        return False

    p = f.p
    x = Poly.x(p)
    checkpoints = {n // ell for ell in primefactors(n)}
    h = x
    for k in range(1, n + 1):
        h = pow_mod(h, p, f)
        if k in checkpoints and poly_gcd(sub(h, x), f).degree != 0:
            return False
    return h == x


def trial_division_factor(f: Poly, guard: Optional[int] = None) -> Optional[Poly]:
    """
    Restituisce il più piccolo fattore monico non banale di f (per ElementIndex),
    oppure None se f è irriducibile. Scandisce i monici di grado 1..n//2.
    """
    n = _check_basis_shape(f)
    p = f.p
    check_guard(p ** (n // 2), guard, "divisione per tentativi")
    for d in range(1, n // 2 + 1):
        for index in range(p**d, 2 * p**d):
            g = Poly.from_index(index, p)
            if poly_mod(f, g).is_zero:
                return g
    return None


def make_irreducible(poly: Poly, guard: Optional[int] = None) -> IrreduciblePoly:
    """
    Valida un input utente come base: monico, grado >= 1, irriducibile.

    Se il polinomio è riducibile e p^(n//2) rientra nella guardia, il messaggio
    (e l'attributo factor dell'eccezione) riporta un fattore non banale.
    """
    n = _check_basis_shape(poly)
    if is_irreducible(poly):
        return IrreduciblePoly(poly)

    factor = None
    if poly.p ** (n // 2) <= resolve_guard(guard):
        factor = trial_division_factor(poly, guard)
    message = f"{format_poly(poly)} non è irriducibile"
    if factor is not None:
        message += f" (fattore {format_poly(factor)})"
    raise NotIrreducibleError(message, factor=factor)


@lru_cache(maxsize=64)
def _enumerate(p: int, n: int) -> Tuple[IrreduciblePoly, ...]:
    found = []
    base = p**n
    for low in range(base):
        if n > 1 and low % p == 0:
            continue
        poly = Poly.from_index(base + low, p)
        if is_irreducible(poly):
            found.append(IrreduciblePoly(poly))
    logger.debug("enumerati %d irriducibili per p=%d, n=%d", len(found), p, n)
    return tuple(found)


def enumerate_irreducibles(p: int, n: int, guard: Optional[int] = None) -> List[IrreduciblePoly]:
    """
    Tutti i monici irriducibili di grado n su F_p, in ordine crescente di ElementIndex.
    """
    as_prime(p)
    if n < 1:
        raise DegreeError(f"n deve essere >= 1, ricevuto {n}")
    check_guard(p**n, guard, f"enumerazione dei monici di grado {n} su F_{p}")
    return list(_enumerate(p, n))


def count_irreducibles(p: int, n: int) -> int:
    """M(p, n) = (1/n) * sum_{d | n} mu(d) * p^(n/d)."""
    as_prime(p)
    if n < 1:
        raise DegreeError(f"n deve essere >= 1, ricevuto {n}")
    total = sum(int(mobius(d)) * p ** (n // d) for d in divisors(n))
    return total // n


def random_irreducible(p: int, n: int, rng: np.random.Generator) -> IrreduciblePoly:
    """
    Campionamento per rigetto: monico uniforme di grado n, ripetuto fino a
    trovarne uno irriducibile. Uniforme sui monici irriducibili e
    deterministico dato lo stato di rng.
    """
    as_prime(p)
    if n < 1:
        raise DegreeError(f"n deve essere >= 1, ricevuto {n}")
    attempts = 0
    while True:
        attempts += 1
        low = [int(c) for c in rng.integers(0, p, size=n)]
        poly = Poly(tuple(low) + (1,), p)
        if is_irreducible(poly):
            logger.debug("irriducibile casuale %s dopo %d tentativi", poly, attempts)
            return IrreduciblePoly(poly)


@lru_cache(maxsize=256)
def _inverse_table(f: IrreduciblePoly) -> Tuple[ElementIndex, ...]:
    p, n = f.p, f.degree
    size = p**n
    table = [0] * size
    for index in range(1, size):
        if table[index]:
            continue
        b = inv(Poly.from_index(index, p), f).index
        table[index] = b
        table[b] = index
    return tuple(ElementIndex(v) for v in table)


def inverse_table(f: IrreduciblePoly, guard: Optional[int] = None) -> Tuple[ElementIndex, ...]:
    """Tabella ElementIndex -> ElementIndex di inv(., f), con 0 -> 0."""
    check_guard(f.p ** f.degree, guard, f"tabella degli inversi per {f}")
    return _inverse_table(f)
