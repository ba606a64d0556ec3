"""End-to-end acceptance checks with wall-clock budgets.

All arithmetic is exact; every identity is checked with tolerance zero.
Each test asserts both correctness and its time budget.
"""

import json
import random
import time

import pytest

from qmbmw import cli, qma
from qmbmw.bmwrep import (antisymmetrizer, symmetrizer, verify_appendices,
                          verify_morphisms, verify_proposition22)
from qmbmw.linalg import operator_rank
from qmbmw.rmatrix import (make_standard_r, verify_bmw_type,
                           verify_k_identities)
from qmbmw.scalars import PRIMES, PrimeField, RationalField, sample_q
from qmbmw.tensorops import load_json
from qmbmw.twistmaps import make_pair, verify_twist_calculus

from test_qma import exchange_relation_matrix

# mu = -q^(-5) coincides with the order-4 antisymmetrizer exclusion for the
# symplectic family at every q, so its admissible sampling caps at order 3
FAMILIES = [("orthogonal", 3, -2, 1, 4), ("symplectic", 4, -5, -1, 3)]


def _checks(suite):
    return {r.check for r in suite.records}


@pytest.mark.parametrize("family,dim,exp,sign,order", FAMILIES)
def test_criterion1_randomized_construction(family, dim, exp, sign, order):
    # five seeded admissible parameter points per family, under 10 s each
    f = RationalField()
    for seed in range(5):
        params = sample_q(random.Random(seed), f, exp, sign, order)
        t0 = time.monotonic()
        bmw = make_standard_r(family, dim, params.q, f)
        assert bmw.params.q == params.q
        assert bmw.params.mu == params.mu
        s1 = verify_bmw_type(bmw)
        s2 = verify_k_identities(bmw, 3)
        dt = time.monotonic() - t0
        assert s1.ok(), (seed, s1.failures)
        assert s2.ok(), (seed, s2.failures)
        assert dt < 10.0, (seed, dt)


def test_criterion2_idempotents_and_morphisms(bmw_so3, bmw_sp4):
    for bmw in (bmw_so3, bmw_sp4):
        t0 = time.monotonic()
        s1 = verify_proposition22(bmw, 4)
        s2 = verify_morphisms(bmw, 3)
        dt = time.monotonic() - t0
        assert s1.ok(), s1.failures
        assert s2.ok(), s2.failures
        assert dt < 60.0, dt


def test_criterion3_appendix_identities(bmw_so3, bmw_sp4):
    for bmw in (bmw_so3, bmw_sp4):
        t0 = time.monotonic()
        suite = verify_appendices(bmw, 2, primitivity_max_len=4)
        dt = time.monotonic() - t0
        assert suite.ok(), suite.failures
        assert dt < 300.0, dt


def test_criterion4_twist_calculus(bmw_so3, bmw_sp4):
    for bmw in (bmw_so3, bmw_sp4):
        t0 = time.monotonic()
        for choice in ("P", "R"):
            F = bmw.P if choice == "P" else bmw.R
            pair = make_pair(bmw, F, choice)
            suite = verify_twist_calculus(pair, random.Random(0), samples=5)
            assert suite.ok(), (choice, suite.failures)
        dt = time.monotonic() - t0
        assert dt < 60.0, dt


def test_criterion5_quadratic_dimension(bmw_so3, pair_so3_p, pair_so3_r,
                                        reducer_so3_p, reducer_so3_r):
    # flip choice: the dimension is the sum of squared spectral block ranks
    ra = operator_rank(antisymmetrizer(2, bmw_so3, 2))
    rs = operator_rank(symmetrizer(2, bmw_so3, 2))
    assert reducer_so3_p.dims[2] == ra * ra + rs * rs + 1 == 35
    # braid choice: checked against an independent exact rank computation
    m = exchange_relation_matrix(pair_so3_r)
    assert reducer_so3_r.dims[2] == 81 - m.rank()


def test_criterion6_newton_wronski_rational(pair_so3_p, pair_so3_r,
                                            reducer_so3_p, reducer_so3_r):
    t0 = time.monotonic()
    for pair, red in ((pair_so3_p, reducer_so3_p), (pair_so3_r, reducer_so3_r)):
        suite = qma.verify_newton_wronski(pair, red, 3)
        assert suite.ok(), (pair.label, suite.failures)
        names = _checks(suite)
        for n in (1, 2, 3):
            assert "newton-antisym-%d" % n in names
            assert "newton-sym-%d" % n in names
            assert "wronski-%d" % n in names
        # the iteratively derived symmetric functions are cross-checked
        for n in (2, 3):
            assert "derived-elem-sym-%d" % n in names
            assert "derived-compl-sym-%d" % n in names
        assert "newton-closed-form-2" in names
        assert "wronski-closed-form-2" in names
    dt = time.monotonic() - t0
    assert dt < 600.0, dt


def test_criterion6_newton_wronski_modular_order4():
    # order 4 under two independent primes; statuses must agree exactly
    t0 = time.monotonic()
    outcomes = []
    for p in PRIMES[:2]:
        f = PrimeField(p)
        bmw = make_standard_r("orthogonal", 3, f.parse("7/5"), f)
        pair = make_pair(bmw, bmw.P, "P")
        red = qma.build_reducer(pair, 4)
        assert red.dims == [1, 9, 35, 84, 165]
        suite = qma.verify_newton_wronski(pair, red, 4)
        assert suite.ok(), (p, suite.failures)
        assert "newton-antisym-4" in _checks(suite)
        outcomes.append([(r.check, r.status) for r in suite.records])
    assert outcomes[0] == outcomes[1]
    dt = time.monotonic() - t0
    assert dt < 7200.0, dt


def test_criterion7_descendant_recursions(pair_so3_p, pair_so3_r,
                                          reducer_so3_p, reducer_so3_r):
    for pair, red in ((pair_so3_p, reducer_so3_p), (pair_so3_r, reducer_so3_r)):
        suite = qma.verify_lemma51(pair, red)
        assert suite.ok(), (pair.label, suite.failures)
        names = _checks(suite)
        # both recursions at every order that fits in degree 3, with the
        # companion traced forms
        for m in range(0, 3):
            for i in range(0, 3 - m + 1):
                if m + i <= 3 and i >= 1:
                    assert "recursion-a-m%d-i%d" % (m, i) in names
                    assert "trace-recursion-a-m%d-i%d" % (m, i) in names
        for m in range(0, 2):
            for i in range(0, 2 - m):
                assert "recursion-b-m%d-i%d" % (m, i) in names
                assert "trace-recursion-b-m%d-i%d" % (m, i) in names
        assert "boundary-a-start" in names and "boundary-b-unit" in names


def test_criterion8_inversion_identities(pair_so3_p, pair_so3_r,
                                         reducer_so3_p, reducer_so3_r):
    for pair, red in ((pair_so3_p, reducer_so3_p), (pair_so3_r, reducer_so3_r)):
        suite = qma.verify_inversion_identities(pair, red)
        assert suite.ok(), (pair.label, suite.failures)
        names = _checks(suite)
        assert {"composition-xi-theta", "composition-theta-xi",
                "matrix-inverse-contraction",
                "contraction-exchange"} <= names


def test_criterion9_determinism_and_round_trip(tmp_path, bmw_so3,
                                               rational_field):
    argv = ["verify", "--suite", "twist", "--suite", "qma",
            "--max-degree", "2", "--f-matrix", "R", "--seed", "3"]
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert cli.main(argv + ["--out", str(a)]) == 0
    assert cli.main(argv + ["--out", str(b)]) == 0

    def strip(path):
        out = []
        for line in path.read_text().splitlines():
            doc = json.loads(line)
            doc.pop("elapsedMs", None)
            out.append(json.dumps(doc, sort_keys=True))
        return out

    assert strip(a) == strip(b)
    # dumped operators re-import bit-exactly and verify clean
    rpath = tmp_path / "r.json"
    assert cli.main(["dump", "--operator", "R", "--out", str(rpath)]) == 0
    assert load_json(str(rpath), rational_field) == bmw_so3.R
    out = tmp_path / "imported.json"
    assert cli.main(["verify", "--suite", "rmatrix", "--family", "import",
                     "--r-matrix", str(rpath), "--q", "7/5",
                     "--out", str(out)]) == 0
    summary = json.loads(out.read_text().splitlines()[-1])["summary"]
    assert summary["counts"]["fail"] == 0
