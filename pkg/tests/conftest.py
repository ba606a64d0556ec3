import pytest

from qmbmw import qma
from qmbmw.rmatrix import make_standard_r
from qmbmw.scalars import RationalField
from qmbmw.twistmaps import make_pair

Q_TEXT = "7/5"


@pytest.fixture(scope="session")
def rational_field():
    return RationalField()


@pytest.fixture(scope="session")
def bmw_so3(rational_field):
    f = rational_field
    return make_standard_r("orthogonal", 3, f.parse(Q_TEXT), f)


@pytest.fixture(scope="session")
def bmw_sp4(rational_field):
    f = rational_field
    return make_standard_r("symplectic", 4, f.parse(Q_TEXT), f)


@pytest.fixture(scope="session")
def pair_so3_p(bmw_so3):
    return make_pair(bmw_so3, bmw_so3.P, "P")


@pytest.fixture(scope="session")
def pair_so3_r(bmw_so3):
    return make_pair(bmw_so3, bmw_so3.R, "R")


@pytest.fixture(scope="session")
def pair_sp4_p(bmw_sp4):
    return make_pair(bmw_sp4, bmw_sp4.P, "P")


@pytest.fixture(scope="session")
def reducer_so3_p(pair_so3_p):
    return qma.build_reducer(pair_so3_p, 3)


@pytest.fixture(scope="session")
def reducer_so3_r(pair_so3_r):
    return qma.build_reducer(pair_so3_r, 3)
