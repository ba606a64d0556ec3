import pytest

from qmbmw.bmwrep import (antisymmetrizer, contractor, kappa, represent,
                          reverse_word, sigma, shift_word, symmetrizer,
                          verify_appendices, verify_morphisms,
                          verify_proposition22, word_inverse)
from qmbmw.linalg import operator_rank
from qmbmw.rmatrix import make_standard_r
from qmbmw.scalars import InadmissibleParameters
from qmbmw.tensorops import TensorOperator


def test_braid_and_tangle_relations(bmw_so3):
    bmw = bmw_so3
    lhs = represent(sigma(1) + sigma(2) + sigma(1), bmw, 3)
    rhs = represent(sigma(2) + sigma(1) + sigma(2), bmw, 3)
    assert lhs == rhs
    ident = TensorOperator.identity(3, 3, bmw.field.one)
    w = sigma(2) + sigma(1, -1) + sigma(2)
    assert represent(w + word_inverse(w), bmw, 3) == ident
    assert represent(word_inverse(w), bmw, 3) == represent(
        sigma(2, -1) + sigma(1) + sigma(2, -1), bmw, 3)
    # distant generators commute
    assert represent(sigma(1) + sigma(3), bmw, 4) == \
        represent(sigma(3) + sigma(1), bmw, 4)


def test_kappa_relations(bmw_so3):
    bmw = bmw_so3
    mu, eta = bmw.params.mu, bmw.params.eta
    k = represent(kappa(1), bmw, 2)
    assert k * k == k.scale(eta)
    assert represent(sigma(1) + kappa(1), bmw, 2) == k.scale(mu)
    assert represent(kappa(1) + sigma(1), bmw, 2) == k.scale(mu)


def test_word_helpers(bmw_so3):
    bmw = bmw_so3
    w = sigma(1) + kappa(2) + sigma(1, -1)
    # shifting a word embeds the represented operator one leg higher
    assert represent(shift_word(w, 1), bmw, 4) == \
        represent(w, bmw, 3).embed_block(1, 4)
    assert reverse_word(reverse_word(w)) == w
    assert word_inverse(word_inverse(sigma(2) + sigma(1))) == sigma(2) + sigma(1)


def test_idempotents_and_resolution(bmw_so3, bmw_sp4):
    for bmw in (bmw_so3, bmw_sp4):
        eta = bmw.params.eta
        for order in (2, 3):
            a = antisymmetrizer(order, bmw, order)
            s = symmetrizer(order, bmw, order)
            assert a * a == a
            assert s * s == s
        a2 = antisymmetrizer(2, bmw, 2)
        s2 = symmetrizer(2, bmw, 2)
        assert (a2 * s2).is_zero() and (s2 * a2).is_zero()
        k = represent(kappa(1), bmw, 2)
        ident = TensorOperator.identity(bmw.dim, 2, bmw.field.one)
        assert a2 + s2 + k.scale(1 / eta) == ident


# representation-theoretic dimensions of the isotypic images
@pytest.mark.parametrize("fixture,order,ranks", [
    ("bmw_so3", 2, (3, 5)), ("bmw_so3", 3, (1, 7)),
    ("bmw_sp4", 2, (5, 10)), ("bmw_sp4", 3, (0, 20)),
])
def test_idempotent_ranks(fixture, order, ranks, request):
    bmw = request.getfixturevalue(fixture)
    assert operator_rank(antisymmetrizer(order, bmw, order)) == ranks[0]
    assert operator_rank(symmetrizer(order, bmw, order)) == ranks[1]


def test_contractor_basics(bmw_so3):
    bmw = bmw_so3
    c2 = contractor(2, bmw, 2)
    assert c2 == represent(kappa(1), bmw, 2).scale(1 / bmw.params.eta)
    assert c2 * c2 == c2
    c4 = contractor(4, bmw, 4)
    assert operator_rank(c4) == 1


def test_inadmissible_point_raises(rational_field):
    f = rational_field
    bmw = make_standard_r("symplectic", 2, f.parse("7/5"), f)
    antisymmetrizer(2, bmw, 2)
    with pytest.raises(InadmissibleParameters):
        antisymmetrizer(3, bmw, 3)


def test_suites_pass(bmw_so3, bmw_sp4):
    for bmw in (bmw_so3, bmw_sp4):
        for suite in (verify_proposition22(bmw, 3),
                      verify_morphisms(bmw, 2),
                      verify_appendices(bmw, 1, primitivity_max_len=2)):
            assert suite.ok(), suite.failures
