import numpy as np
import pytest

from src.exterior import Form
from src.lie_core import InvariantPolynomial, abelian, sl2, sl3
from src.roots import RootSystemType
from src.wonderful import RootSystemData, WonderfulAlgebra


@pytest.fixture(scope="session")
def g_sl2():
    return sl2()


@pytest.fixture(scope="session")
def g_sl3():
    return sl3()


@pytest.fixture(scope="session")
def g_abelian():
    return abelian(2)


@pytest.fixture
def det(g_sl2):
    return InvariantPolynomial.parse("-x^2 - y*z", g_sl2)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def random_form(rng):
    """Factory for random integer forms of one degree on ``slot_count`` copies."""

    def build(space_dim, degree, slot_count=1, terms=3):
        n = space_dim * slot_count
        monomials = [tuple(sorted(rng.choice(n, size=degree, replace=False).tolist())) for _ in range(terms)]
        return Form(space_dim, slot_count, {m: int(rng.integers(-3, 4)) for m in monomials})

    return build


@pytest.fixture(scope="session")
def a1():
    return WonderfulAlgebra(RootSystemData.from_type("A1"))


@pytest.fixture(scope="session")
def a2():
    return WonderfulAlgebra(RootSystemData.from_type("A2"))


@pytest.fixture(params=RootSystemType.available())
def root_system(request):
    return RootSystemData.from_type(request.param)
