import random

import pytest
import sympy

from qmbmw import qma
from qmbmw.qma import (DegreeOverflow, IdealReducer, QmaElement, QmaError,
                       QmaMatrix)
from qmbmw.rmatrix import make_standard_r
from qmbmw.scalars import PRIMES, PrimeField
from qmbmw.twistmaps import make_pair


def _sym(v):
    return sympy.Rational(int(v.numerator), int(v.denominator))


def _labeled_scalar(op):
    n = op.dim ** op.legs
    return {(r, c): {(): _sym(v)} for (r, c), v in op.data.items()}


def _lmul(a, b):
    # compose labeled matrices, concatenating labels left factor first
    brows = {}
    for (r, c), d in b.items():
        brows.setdefault(r, []).append((c, d))
    out = {}
    for (r, c), da in a.items():
        for c2, db in brows.get(c, []):
            dst = out.setdefault((r, c2), {})
            for la, va in da.items():
                for lb, vb in db.items():
                    key = la + lb
                    dst[key] = dst.get(key, 0) + va * vb
    return out


def exchange_relation_matrix(pair):
    """Independent coefficient matrix of the quadratic exchange relations,
    built with plain dense sympy arithmetic."""
    bmw = pair.bmw
    n = bmw.dim
    nsq = n * n
    copy1 = {}
    for a in range(n):
        for b in range(n):
            for s in range(n):
                copy1[(a * n + s, b * n + s)] = {(a * n + b,): sympy.Integer(1)}
    copy2 = _lmul(_labeled_scalar(pair.F),
                  _lmul(copy1, _labeled_scalar(pair.Finv)))
    p12 = _lmul(copy1, copy2)
    rl = _labeled_scalar(bmw.R)
    lhs = _lmul(rl, p12)
    rhs = _lmul(p12, rl)
    for key, d in rhs.items():
        dst = lhs.setdefault(key, {})
        for lab, v in d.items():
            dst[lab] = dst.get(lab, 0) - v
    rows = []
    for key in sorted(lhs):
        row = [sympy.Integer(0)] * (nsq * nsq)
        for (x, y), v in lhs[key].items():
            row[x * nsq + y] = v
        rows.append(row)
    return sympy.Matrix(rows)


def test_degree2_dimension_against_rank_oracle(pair_so3_p, reducer_so3_p):
    m = exchange_relation_matrix(pair_so3_p)
    dim2 = 81 - m.rank()
    assert reducer_so3_p.dims[2] == dim2 == 35
    # spectral resolution of the quadratic component
    assert dim2 == 3 ** 2 + 5 ** 2 + 1 ** 2


def test_degree2_dimension_twisted_f(pair_so3_r, reducer_so3_r):
    m = exchange_relation_matrix(pair_so3_r)
    assert reducer_so3_r.dims[2] == 81 - m.rank()
    assert reducer_so3_r.dims == [1, 9, 35, 84]


def _random_element(rng, field, degree, nsq, terms=6):
    coeffs = {}
    for _ in range(terms):
        label = tuple(rng.randrange(nsq) for _ in range(degree))
        coeffs[label] = field.from_ratio(rng.randint(-9, 9), rng.randint(1, 5))
    return QmaElement(degree, coeffs)


def test_reducer_is_linear_idempotent_projection(pair_so3_p, reducer_so3_p):
    red = reducer_so3_p
    field = pair_so3_p.field
    rng = random.Random(13)
    for degree in (2, 3):
        x = _random_element(rng, field, degree, 9)
        y = _random_element(rng, field, degree, 9)
        rx = red.reduce(x)
        assert red.reduce(rx) == rx
        assert red.reduce(x + y) == rx + red.reduce(y)
        assert red.reduce(x.scale(field.from_int(7))) == rx.scale(field.from_int(7))
    # degrees 0 and 1 pass through unchanged
    unit = QmaElement.from_scalar(field.one)
    assert red.reduce(unit) == unit


def test_relations_and_their_multiples_vanish(pair_so3_p, reducer_so3_p):
    red = reducer_so3_p
    field = pair_so3_p.field
    rng = random.Random(3)
    for rel in red.relations[:10]:
        assert red.reduce(rel).is_zero()
        left = _random_element(rng, field, 1, 9, terms=3)
        assert red.reduce(left * rel).is_zero()
        assert red.reduce(rel * left).is_zero()


def test_reducer_guards(pair_so3_p, reducer_so3_p):
    rng = random.Random(1)
    x = _random_element(rng, pair_so3_p.field, 4, 9)
    with pytest.raises(DegreeOverflow):
        reducer_so3_p.reduce(x)
    with pytest.raises(QmaError):
        IdealReducer(pair_so3_p, 4)  # rational degree 4 is refused
    with pytest.raises(QmaError):
        IdealReducer(pair_so3_p, 1)
    with pytest.raises(QmaError):
        IdealReducer(pair_so3_p, 5)


def test_modular_dimensions_agree(reducer_so3_p):
    f = PrimeField(PRIMES[0])
    bmw = make_standard_r("orthogonal", 3, f.parse("7/5"), f)
    pair = make_pair(bmw, bmw.P, "P")
    red = qma.build_reducer(pair, 3)
    assert red.dims == reducer_so3_p.dims == [1, 9, 35, 84]
    mod4 = IdealReducer(pair, 4)
    assert mod4.dims == [1, 9, 35, 84, 165]


def test_element_and_matrix_algebra(pair_so3_p):
    field = pair_so3_p.field
    rng = random.Random(2)
    x = _random_element(rng, field, 1, 9)
    y = _random_element(rng, field, 2, 9)
    assert (x * y).degree == 3
    assert x + x == x.scale(field.from_int(2))
    assert (x - x).is_zero()
    ident = QmaMatrix.identity(3, field)
    m = qma.generator_matrix(qma.build_reducer(pair_so3_p, 2))
    assert ident.matmul(m) == m.matmul(ident)
    assert (m - m).is_zero()
    assert m.trace_r(pair_so3_p.bmw).degree == 1


def test_characteristic_elements_are_cached(reducer_so3_p):
    g1 = qma.contraction2(reducer_so3_p)
    g2 = qma.contraction2(reducer_so3_p)
    assert g1 is g2
    p1 = qma.power_sum(1, reducer_so3_p)
    a1 = qma.elem_sym(1, reducer_so3_p)
    s1 = qma.compl_sym(1, reducer_so3_p)
    assert p1 == a1 == s1
