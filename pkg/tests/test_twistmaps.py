import random
from fractions import Fraction

import pytest

from qmbmw.tensorops import TensorOperator
from qmbmw.twistmaps import (MatrixLinearMap, NotCompatible, make_pair,
                             map_phi, map_theta, map_xi, operator_g,
                             random_matrix, twist, verify_twist_calculus)


def test_operator_g_self_consistent(pair_so3_p, pair_so3_r, pair_sp4_p):
    for pair in (pair_so3_p, pair_so3_r, pair_sp4_p):
        g, ginv = operator_g(pair)
        ident = TensorOperator.identity(pair.dim, 1, pair.field.one)
        assert g * ginv == ident
        # twist exists and satisfies its own consistency assertions
        rf = twist(pair)
        assert rf.R.dim == pair.dim


def test_twist_of_flip_swaps_slots(pair_so3_p, bmw_so3):
    # twisting by the flip conjugates both slots of the braid operator
    assert twist(pair_so3_p).R == bmw_so3.R.swap_slots()


def test_incompatible_f_rejected(bmw_so3, rational_field):
    f = rational_field
    bad = TensorOperator.identity(3, 2, f.one) + \
        TensorOperator(3, 2, {(0, 1): f.from_int(1)})
    with pytest.raises(NotCompatible):
        pair = make_pair(bmw_so3, bad, "bad")
        twist(pair)
        operator_g(pair)


def test_matrix_linear_map_algebra(rational_field):
    f = rational_field
    n = 3
    a = TensorOperator(n, 1, {(i, (i + 1) % n): f.from_ratio(i + 2, 3)
                              for i in range(n)})
    b = TensorOperator(n, 1, {(i, i): f.from_ratio(1, i + 1)
                              for i in range(n)})
    conj = MatrixLinearMap.conjugation(a, b, f)
    rng = random.Random(4)
    m = random_matrix(rng, f, n)
    assert conj.apply(m) == a * m * b
    # from_formula tabulates the same map
    tab = MatrixLinearMap.from_formula(n, f, lambda u: a * u * b)
    assert tab == conj
    assert conj.compose(conj).apply(m) == a * a * m * b * b
    ident = TensorOperator.identity(n, 1, f.one)
    assert MatrixLinearMap.conjugation(ident, ident, f).is_identity()
    # apply_entries agrees with apply on scalar-matrix entries
    got = conj.apply_entries({k: TensorOperator(n, 0, {(0, 0): v})
                              for k, v in m.data.items()})
    want = conj.apply(m)
    for k, v in got.items():
        assert v.scalar() == want.data.get(k, 0)


def test_named_maps_invert(pair_so3_r):
    pair = pair_so3_r
    rng = random.Random(7)
    m = random_matrix(rng, pair.field, pair.dim)
    for mk in (map_phi, map_xi, map_theta):
        t = mk(pair)
        assert t.inverse is not None
        assert t.inverse.apply(t.apply(m)) == m
        assert t.compose(t.inverse).is_identity()


def test_twist_suites_pass(pair_so3_p, pair_so3_r, pair_sp4_p):
    for pair in (pair_so3_p, pair_so3_r, pair_sp4_p):
        suite = verify_twist_calculus(pair, random.Random(0), samples=3)
        assert suite.ok(), suite.failures


def test_twist_suite_is_seeded(pair_so3_p):
    a = verify_twist_calculus(pair_so3_p, random.Random(5), samples=2)
    b = verify_twist_calculus(pair_so3_p, random.Random(5), samples=2)
    assert [(r.check, r.status) for r in a.records] == \
        [(r.check, r.status) for r in b.records]
