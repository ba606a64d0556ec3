import numpy as np
import pytest

from qmbmw.rmatrix import (RMatrixError, make_bmw, make_standard_r,
                           verify_bmw_type, verify_k_identities)
from qmbmw.scalars import PRIMES, PrimeField, RationalField
from qmbmw.tensorops import TensorOperator


def _floats(op):
    n = op.dim ** op.legs
    m = np.zeros((n, n))
    for (r, c), v in op.data.items():
        m[r, c] = float(v)
    return m


@pytest.mark.parametrize("fixture,mult", [
    ("bmw_so3", {"q": 5, "-1/q": 3, "mu": 1}),
    ("bmw_sp4", {"q": 10, "-1/q": 5, "mu": 1}),
])
def test_braid_spectrum_float_oracle(fixture, mult, request):
    # numeric eigenvalues of the braid operator: q, -1/q and mu with the
    # expected multiplicities; mu fixed by the family
    bmw = request.getfixturevalue(fixture)
    q = float(bmw.params.q)
    mu = float(bmw.params.mu)
    if fixture == "bmw_so3":
        assert mu == pytest.approx(q ** (-2))
    else:
        assert mu == pytest.approx(-q ** (-5))
    eig = np.linalg.eigvals(_floats(bmw.R))
    assert np.max(np.abs(eig.imag)) < 1e-9
    for val, want in ((q, mult["q"]), (-1 / q, mult["-1/q"]), (mu, mult["mu"])):
        got = int(np.sum(np.abs(eig.real - val) < 1e-8))
        assert got == want, (val, got, want)


def test_cubic_minimal_polynomial(bmw_so3, bmw_sp4):
    for bmw in (bmw_so3, bmw_sp4):
        one = bmw.field.one
        ident = TensorOperator.identity(bmw.dim, 2, one)
        q, mu = bmw.params.q, bmw.params.mu
        prod = (bmw.R - ident.scale(q)) \
            * (bmw.R + ident.scale(1 / q)) \
            * (bmw.R - ident.scale(mu))
        assert prod.is_zero()


def test_weighted_trace_frozen_values(bmw_so3, bmw_sp4, rational_field):
    # hand-computed mu * eta at q = 7/5
    f = rational_field
    for bmw, num, den in ((bmw_so3, 545, 343),
                          (bmw_sp4, 49311380, 40353607)):
        ident = TensorOperator.identity(bmw.dim, 1, f.one)
        tr = ident.weighted_trace([1], bmw.D).scalar()
        assert tr == f.from_ratio(num, den)
        assert tr == bmw.params.mu * bmw.params.eta


def test_suites_pass(bmw_so3, bmw_sp4):
    for bmw in (bmw_so3, bmw_sp4):
        suite = verify_bmw_type(bmw)
        assert suite.ok(), suite.failures
        assert not any(r.status == "skipped" for r in suite.records)
        suite = verify_k_identities(bmw, 2)
        assert suite.ok(), suite.failures


def test_import_round_trip(bmw_so3, rational_field):
    rebuilt = make_bmw(bmw_so3.R, bmw_so3.params.q, rational_field)
    assert rebuilt.params.mu == bmw_so3.params.mu
    assert rebuilt.K == bmw_so3.K
    assert rebuilt.D == bmw_so3.D
    assert verify_bmw_type(rebuilt).ok()


def test_modular_instance_agrees(bmw_so3):
    f = PrimeField(PRIMES[0])
    bmw = make_standard_r("orthogonal", 3, f.parse("7/5"), f)
    assert verify_bmw_type(bmw).ok()
    # the mod-p image of every R entry matches the rational instance
    for key, v in bmw_so3.R.data.items():
        assert bmw.R.data[key] == f.from_ratio(v.numerator, v.denominator)


def test_fault_injection_is_detected(bmw_so3, rational_field):
    f = rational_field
    bad = bmw_so3.R + TensorOperator(3, 2, {(0, 1): f.from_int(1)})
    with pytest.raises(RMatrixError):
        bmw = make_bmw(bad, bmw_so3.params.q, f)
        suite = verify_bmw_type(bmw)
        if suite.failures:
            raise RMatrixError("caught by the suite instead")


def test_family_guards(rational_field):
    f = rational_field
    q = f.parse("7/5")
    with pytest.raises(RMatrixError):
        make_standard_r("unitary", 3, q, f)
    with pytest.raises(RMatrixError):
        make_standard_r("symplectic", 3, q, f)
