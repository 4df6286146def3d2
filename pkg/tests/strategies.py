from hypothesis import strategies as st

from ffchain.irreducible import enumerate_irreducibles
from ffchain.polynomial import Poly


def fields(max_size: int = 2**8):
    """(p, n) con p^n <= max_size."""
    pairs = [(p, n) for p in (2, 3, 5) for n in range(1, 13) if p**n <= max_size]
    return st.sampled_from(pairs)


@st.composite
def basis_and_element(draw, max_size: int = 2**8, nonzero: bool = True):
    """Una base irriducibile e un elemento ridotto (non nullo di default)."""
    p, n = draw(fields(max_size))
    f = draw(st.sampled_from(enumerate_irreducibles(p, n)))
    low = 1 if nonzero else 0
    a = Poly.from_index(draw(st.integers(min_value=low, max_value=p**n - 1)), p)
    return f, a


@st.composite
def elements(draw, p: int, n: int):
    return Poly.from_index(draw(st.integers(min_value=0, max_value=p**n - 1)), p)


@st.composite
def distinct_pairs(draw, max_size: int = 2**7):
    """Coppia (f1, f2) di irriducibili distinti di grado n >= 2."""
    candidates = [
        (p, n) for p in (2, 3, 5) for n in range(2, 8)
        if p**n <= max_size and len(enumerate_irreducibles(p, n)) >= 2
    ]
    p, n = draw(st.sampled_from(candidates))
    f1, f2 = draw(st.permutations(enumerate_irreducibles(p, n)))[:2]
    return f1, f2
