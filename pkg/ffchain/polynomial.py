"""
Aritmetica esatta su F_p[X].

Un polinomio è un valore immutabile (Poly) con coefficienti little-endian:
coeffs[i] è il coefficiente di X^i. La forma canonica non ha zeri in coda;
il polinomio nullo è la tupla vuota e ha grado NEG_INF (mai -1).

Codifica ElementIndex: index = sum(coeffs[i] * p**i), biunivoca con i
polinomi di grado < n per index in [0, p**n).
"""

import logging
import math
import os
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, NewType, Optional, Sequence, Tuple, Union

from sympy import isprime

from .errors import (
    CharacteristicMismatchError,
    DegreeError,
    GuardExceededError,
    NotIrreducibleError,
    NotMonicError,
    NotPrimeError,
    PolyParseError,
    ZeroInverseError,
)

logger = logging.getLogger(__name__)

Prime = NewType("Prime", int)
ElementIndex = NewType("ElementIndex", int)
Degree = Union[int, float]

# Grado del polinomio nullo
NEG_INF: float = -math.inf

DEFAULT_GUARD = 2**20
ORACLE_GUARD = 2**16
GUARD_ENV_VAR = "FFCHAIN_GUARD"

Coeffs = Tuple[int, ...]


# --- Primi e guardie ---

@lru_cache(maxsize=None)
def as_prime(value: int) -> Prime:
    """
    Valida la caratteristica p e la restituisce come Prime.

    Solleva NotPrimeError se value non è un intero primo >= 2.
    """
    if isinstance(value, bool) or not isinstance(value, int):
        raise NotPrimeError(f"p deve essere un intero, ricevuto {value!r}")
    if value < 2 or not isprime(value):
        raise NotPrimeError(f"p = {value} non è primo")
    return Prime(value)


def resolve_guard(guard: Optional[int] = None) -> int:
    """
    Restituisce la guardia di enumerazione effettiva.

    Priorità: argomento esplicito > variabile d'ambiente FFCHAIN_GUARD > DEFAULT_GUARD.
    """
    if guard is not None:
        value = guard
    else:
        env = os.environ.get(GUARD_ENV_VAR)
        if env is None or env.strip() == "":
            return DEFAULT_GUARD
        try:
            value = int(env)
        except ValueError:
            raise GuardExceededError(
                f"{GUARD_ENV_VAR}={env!r} non è un intero valido"
            ) from None
    if value < 1:
        raise GuardExceededError(f"la guardia deve essere >= 1, ricevuto {value}")
    return value


def check_guard(size: int, guard: Optional[int], what: str) -> None:
    """Solleva GuardExceededError se size supera la guardia risolta."""
    limit = resolve_guard(guard)
    if size > limit:
        raise GuardExceededError(
            f"{what}: {size} elementi superano la guardia di enumerazione {limit}"
        )


# --- Helper sui coefficienti (tuple canoniche) ---

def _strip(coeffs: Sequence[int]) -> Coeffs:
    end = len(coeffs)
    while end and coeffs[end - 1] == 0:
        end -= 1
    return tuple(coeffs[:end])


def _add_coeffs(a: Coeffs, b: Coeffs, p: int) -> Coeffs:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _strip(out)


def _sub_coeffs(a: Coeffs, b: Coeffs, p: int) -> Coeffs:
    size = max(len(a), len(b))
    out = [0] * size
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _strip(out)


def _mul_coeffs(a: Coeffs, b: Coeffs, p: int) -> Coeffs:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return _strip([c % p for c in out])


def _divmod_coeffs(a: Coeffs, b: Coeffs, p: int) -> Tuple[Coeffs, Coeffs]:
    # b non nullo
    db = len(b) - 1
    lead_inv = 1 if b[-1] == 1 else pow(b[-1], -1, p)
    r = list(a)
    q = [0] * max(len(a) - db, 0)
    for k in range(len(a) - 1 - db, -1, -1):
        c = r[k + db] * lead_inv % p
        q[k] = c
        if c:
            for j, bj in enumerate(b):
                r[k + j] = (r[k + j] - c * bj) % p
    return _strip(q), _strip(r[:db])


def _mod_coeffs(a: Coeffs, m: Coeffs, p: int) -> Coeffs:
    if len(a) < len(m):
        return a
    return _divmod_coeffs(a, m, p)[1]


# --- Tipi ---

@dataclass(frozen=True)
class Poly:
    """
    Polinomio su F_p in forma canonica.

    Usare Poly.from_coeffs(...) per costruire da coefficienti arbitrari
    (riduzione mod p e rimozione degli zeri in coda); il costruttore diretto
    accetta solo tuple già canoniche.
    """

    coeffs: Coeffs
    p: int

    def __post_init__(self) -> None:
        as_prime(self.p)
        if not isinstance(self.coeffs, tuple):
            object.__setattr__(self, "coeffs", tuple(self.coeffs))
        for c in self.coeffs:
            if not 0 <= c < self.p:
                raise PolyParseError(f"coefficiente {c} fuori da [0, {self.p})")
        if self.coeffs and self.coeffs[-1] == 0:
            raise PolyParseError("forma non canonica: zero in coda ai coefficienti")

    # --- costruttori ---

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], p: int) -> "Poly":
        as_prime(p)
        return cls(_strip([int(c) % p for c in coeffs]), p)

    @classmethod
    def zero(cls, p: int) -> "Poly":
        return cls((), p)

    @classmethod
    def constant(cls, c: int, p: int) -> "Poly":
        return cls.from_coeffs([c], p)

    @classmethod
    def x(cls, p: int) -> "Poly":
        return cls((0, 1), p)

    @classmethod
    def from_index(cls, index: int, p: int) -> "Poly":
        """Decodifica un ElementIndex (cifre in base p, little-endian)."""
        if index < 0:
            raise PolyParseError(f"ElementIndex negativo: {index}")
        as_prime(p)
        digits: List[int] = []
        while index:
            index, d = divmod(index, p)
            digits.append(d)
        return cls(tuple(digits), p)

    # --- proprietà ---

    @property
    def degree(self) -> Degree:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def index(self) -> ElementIndex:
        value = 0
        for c in reversed(self.coeffs):
            value = value * self.p + c
        return ElementIndex(value)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def leading_coefficient(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_monic(self) -> bool:
        return self.leading_coefficient == 1

    def __str__(self) -> str:
        return format_poly(self)


@dataclass(frozen=True)
class IrreduciblePoly:
    """
    Polinomio monico irriducibile di grado n >= 1, usato come base.

    Il costruttore controlla solo monicità e grado; l'irriducibilità è
    garantita da make_irreducible() (input utente) o dall'enumerazione.
    """

    poly: Poly

    def __post_init__(self) -> None:
        if self.poly.degree < 1:
            raise DegreeError(f"una base deve avere grado >= 1, ricevuto {self.poly}")
        if not self.poly.is_monic:
            raise NotMonicError(f"la base {self.poly} non è monica")

    @property
    def degree(self) -> int:
        return int(self.poly.degree)

    @property
    def p(self) -> int:
        return self.poly.p

    @property
    def index(self) -> ElementIndex:
        return self.poly.index

    def __str__(self) -> str:
        return format_poly(self.poly)


# --- Operazioni ---

def _check_same_p(a: Poly, b: Poly) -> None:
    if a.p != b.p:
        raise CharacteristicMismatchError(
            f"caratteristiche diverse: {a.p} e {b.p}"
        )


def add(a: Poly, b: Poly) -> Poly:
    _check_same_p(a, b)
    return Poly(_add_coeffs(a.coeffs, b.coeffs, a.p), a.p)


def sub(a: Poly, b: Poly) -> Poly:
    _check_same_p(a, b)
    return Poly(_sub_coeffs(a.coeffs, b.coeffs, a.p), a.p)


def neg(a: Poly) -> Poly:
    return Poly(_sub_coeffs((), a.coeffs, a.p), a.p)


def poly_mul(a: Poly, b: Poly) -> Poly:
    """Prodotto in F_p[X] senza riduzione."""
    _check_same_p(a, b)
    return Poly(_mul_coeffs(a.coeffs, b.coeffs, a.p), a.p)


def poly_divmod(a: Poly, b: Poly) -> Tuple[Poly, Poly]:
    _check_same_p(a, b)
    if b.is_zero:
        raise ZeroDivisionError("divisione per il polinomio nullo")
    q, r = _divmod_coeffs(a.coeffs, b.coeffs, a.p)
    return Poly(q, a.p), Poly(r, a.p)


def poly_mod(a: Poly, m: Poly) -> Poly:
    return poly_divmod(a, m)[1]


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """MCD monico (il nullo se a = b = 0)."""
    _check_same_p(a, b)
    p = a.p
    r0, r1 = a.coeffs, b.coeffs
    while r1:
        r0, r1 = r1, _divmod_coeffs(r0, r1, p)[1]
    if not r0:
        return Poly((), p)
    lead_inv = pow(r0[-1], -1, p)
    return Poly(tuple(c * lead_inv % p for c in r0), p)


def _reduced_operand(a: Poly, f: IrreduciblePoly, name: str) -> None:
    _check_same_p(a, f.poly)
    if a.degree >= f.degree:
        raise DegreeError(
            f"{name} = {a} ha grado {a.degree}, deve essere < {f.degree}"
        )


def mul_mod(a: Poly, b: Poly, f: IrreduciblePoly) -> Poly:
    """(a * b) mod f, con deg(a), deg(b) < deg(f)."""
    _reduced_operand(a, f, "a")
    _reduced_operand(b, f, "b")
    p = a.p
    return Poly(_mod_coeffs(_mul_coeffs(a.coeffs, b.coeffs, p), f.poly.coeffs, p), p)


def pow_mod(a: Poly, e: int, m: Poly) -> Poly:
    """a**e mod m per quadrati ripetuti (e >= 0)."""
    _check_same_p(a, m)
    if e < 0:
        raise ValueError("esponente negativo")
    if m.is_zero:
        raise ZeroDivisionError("modulo nullo")
    p = a.p
    mod = m.coeffs
    result: Coeffs = _mod_coeffs((1,), mod, p)
    base = _mod_coeffs(a.coeffs, mod, p)
    while e:
        if e & 1:
            result = _mod_coeffs(_mul_coeffs(result, base, p), mod, p)
        e >>= 1
        if e:
            base = _mod_coeffs(_mul_coeffs(base, base, p), mod, p)
    return Poly(result, p)


def inv(a: Poly, f: IrreduciblePoly) -> Poly:
    """
    Inverso moltiplicativo di a modulo f (algoritmo di Euclide esteso su F_p[X]).

    Invarianti: mul_mod(a, inv(a, f), f) == 1 e inv(inv(a, f), f) == a.
    """
    _reduced_operand(a, f, "a")
    if a.is_zero:
        raise ZeroInverseError("lo zero non ha inverso moltiplicativo")
    p = a.p
    r0, r1 = f.poly.coeffs, a.coeffs
    s0: Coeffs = ()
    s1: Coeffs = (1,)
    while r1:
        q, r = _divmod_coeffs(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _sub_coeffs(s0, _mul_coeffs(q, s1, p), p)
    if len(r0) != 1:
        # Solo se f è stato costruito senza passare da make_irreducible
        raise NotIrreducibleError(f"{a} non è invertibile modulo {f}: la base non è irriducibile")
    scale = pow(r0[0], -1, p)
    return Poly(tuple(c * scale % p for c in s0), p)


def inv_oracle(a: Poly, f: IrreduciblePoly, guard: int = ORACLE_GUARD) -> Poly:
    """
    Inverso per ricerca esaustiva: scandisce tutti i b non nulli di grado < n.

    Serve come oracolo indipendente per inv(); la guardia limita p**n.
    """
    _reduced_operand(a, f, "a")
    if a.is_zero:
        raise ZeroInverseError("lo zero non ha inverso moltiplicativo")
    p, n = a.p, f.degree
    size = p**n
    if size > guard:
        raise GuardExceededError(
            f"inv_oracle: p^n = {size} supera la guardia {guard}"
        )
    for index in range(1, size):
        b = Poly.from_index(index, p)
        if mul_mod(a, b, f).coeffs == (1,):
            return b
    raise NotIrreducibleError(f"{a} non ha inverso modulo {f}")


# --- Formati testuali ---

_TERM_RE = re.compile(r"^(?:(\d+)\*?)?(?:([xX])(?:\^(\d+))?)?$")


def parse_poly(text: str, p: int) -> Poly:
    """
    Interpreta un letterale polinomiale.

    Formati accettati:
        - simbolico: "x^3+x+1", termini in qualunque ordine, "c*x^k" per p > 2
        - indicizzato: "#11" (ElementIndex decimale)
    """
    as_prime(p)
    if not isinstance(text, str):
        raise PolyParseError(f"letterale non valido: {text!r}")
    s = "".join(text.split())
    if not s:
        raise PolyParseError("letterale vuoto")

    if s.startswith("#"):
        digits = s[1:]
        if not digits.isdigit():
            raise PolyParseError(f"indice non valido: {text!r}")
        return Poly.from_index(int(digits), p)

    coeffs: dict = {}
    for term in s.split("+"):
        match = _TERM_RE.match(term)
        if not term or match is None or (match.group(1) is None and match.group(2) is None):
            raise PolyParseError(f"termine non valido {term!r} in {text!r}")
        c_text, var, e_text = match.groups()
        c = int(c_text) if c_text is not None else 1
        if c >= p:
            raise PolyParseError(f"coefficiente {c} fuori da [0, {p}) in {text!r}")
        if var is None:
            exponent = 0
        else:
            exponent = int(e_text) if e_text is not None else 1
        coeffs[exponent] = (coeffs.get(exponent, 0) + c) % p

    top = max(coeffs)
    return Poly(_strip([coeffs.get(i, 0) for i in range(top + 1)]), p)


def format_poly(poly: Poly, style: str = "symbolic") -> str:
    """Rende il polinomio in forma "symbolic" (x^2+x+1) o "indexed" (#7)."""
    if style == "indexed":
        return f"#{poly.index}"
    if style != "symbolic":
        raise ValueError(f"stile sconosciuto: {style!r}")
    if poly.is_zero:
        return "0"
    terms = []
    for exponent in range(len(poly.coeffs) - 1, -1, -1):
        c = poly.coeffs[exponent]
        if c == 0:
            continue
        if exponent == 0:
            terms.append(str(c))
            continue
        monomial = "x" if exponent == 1 else f"x^{exponent}"
        terms.append(monomial if c == 1 else f"{c}*{monomial}")
    return "+".join(terms)


def digit_label(poly: Poly, n: int) -> str:
    """Cifre b_{n-1}...b_0; separate da '.' se p > 10."""
    digits = [poly.coeffs[i] if i < len(poly.coeffs) else 0 for i in range(n - 1, -1, -1)]
    if poly.p <= 10:
        return "".join(str(d) for d in digits)
    return ".".join(str(d) for d in digits)
