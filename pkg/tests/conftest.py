import pytest

from ffchain.utils import build_basis


@pytest.fixture
def f8_pair():
    return build_basis("x^3+x+1", 2), build_basis("x^3+x^2+1", 2)


@pytest.fixture
def f16_bases():
    return tuple(build_basis(t, 2) for t in ("x^4+x+1", "x^4+x^3+1", "x^4+x^3+x^2+x+1"))
