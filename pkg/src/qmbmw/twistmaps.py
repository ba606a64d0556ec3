"""Compatible pairs, twisted R-matrices, the operator G, and the entrywise
linear maps phi, xi, theta used for quantum matrix products and inversion."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .linalg import SingularMatrix, invert_dense
from .report import Suite
from .rmatrix import cd_matrices, make_bmw, operator_inverse, skew_inverse
from .scalars import random_rational
from .tensorops import TensorOperator


class NotCompatible(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class FNotStrict(ValueError):
    pass


@dataclass
class CompatiblePair:
    """A BMW-type R together with a strict skew invertible twisting F
    satisfying both twist relations."""

    bmw: object
    F: TensorOperator
    Finv: TensorOperator
    psiF: TensorOperator
    CF: TensorOperator
    DF: TensorOperator
    psiFinv: TensorOperator
    CFinv: TensorOperator
    DFinv: TensorOperator
    label: str = "P"
    cache: dict = dc_field(default_factory=dict, repr=False, compare=False)

    @property
    def field(self):
        return self.bmw.field

    @property
    def dim(self):
        return self.bmw.dim


def _witness(op, k=3):
    out = []
    for rd, cd, v in sorted(op.entries())[:k]:
        out.append({"row": [i + 1 for i in rd], "col": [j + 1 for j in cd]})
    return out


def make_pair(bmw, F, label="F"):
    """Verify the twist relations and F's strict skew invertibility."""
    field = bmw.field
    n3 = 3
    R1 = bmw.R.embed_at(1, n3)
    R2 = bmw.R.embed_at(2, n3)
    F1 = F.embed_at(1, n3)
    F2 = F.embed_at(2, n3)
    d = R1 * F2 * F1 - F2 * F1 * R2
    if not d.is_zero():
        raise NotCompatible("first twist relation fails", _witness(d))
    d = R2 * F1 * F2 - F1 * F2 * R1
    if not d.is_zero():
        raise NotCompatible("second twist relation fails", _witness(d))
    d = F1 * F2 * F1 - F2 * F1 * F2
    if not d.is_zero():
        raise NotCompatible("F fails the Yang-Baxter equation", _witness(d))
    try:
        Finv = operator_inverse(F, field)
        psiF = skew_inverse(F, field)
        CF, DF, strict = cd_matrices(F, psiF, field)
        if not strict:
            raise SingularMatrix("C_F or D_F singular")
        psiFinv = skew_inverse(Finv, field)
        CFinv, DFinv, strict = cd_matrices(Finv, psiFinv, field)
        if not strict:
            raise SingularMatrix("C or D of F^-1 singular")
    except (SingularMatrix, ValueError) as exc:
        raise FNotStrict("F is not strict skew invertible: %s" % exc)
    return CompatiblePair(bmw, F, Finv, psiF, CF, DF, psiFinv, CFinv,
                          DFinv, label)


def _inv1(op, field):
    """Inverse of a 1-leg operator."""
    inv = invert_dense(op.dense(field.zero), field.zero, field.one)
    data = {}
    for i, row in enumerate(inv):
        for j, v in enumerate(row):
            if v:
                data[(i, j)] = v
    return TensorOperator(op.dim, 1, data)


def twist(pair):
    """R_f = F^-1 R F as a fully verified BMW-type R-matrix; also asserts
    the twisted C/D formulas, the double-twist relation and the commutant
    relation."""
    Rf = pair.cache.get("Rf")
    if Rf is not None:
        return Rf
    bmw = pair.bmw
    field = pair.field
    op = pair.Finv * bmw.R * pair.F
    Rf = make_bmw(op, bmw.params.q, field, bmw.params.max_order,
                  label=bmw.label + "-twist-" + pair.label)
    # {R_f, F} stays compatible
    make_pair(Rf, pair.F, pair.label)
    if Rf.C != pair.CFinv * bmw.D * pair.CF:
        raise NotCompatible("twisted C formula fails")
    if Rf.D != pair.DFinv * bmw.C * pair.DF:
        raise NotCompatible("twisted D formula fails")
    # twist of the twist, conjugated back by C_F resp. D_F
    Rff = pair.Finv * Rf.R * pair.F
    for W, name in ((pair.DF, "D"), (pair.CF, "C")):
        W1 = W.embed_block(0, 2)
        W2 = W.embed_block(1, 2)
        if W1 * W2 * Rff != bmw.R * W1 * W2:
            raise NotCompatible("double twist %s-conjugation fails" % name)
    J = _inv1(pair.CF, field) * pair.DF
    J12 = J.embed_block(0, 2) * J.embed_block(1, 2)
    if bmw.R * J12 != J12 * bmw.R:
        raise NotCompatible("commutant relation fails")
    pair.cache["Rf"] = Rf
    return Rf


def operator_g(pair):
    """G and G^-1 for a compatible pair; all defining relations are
    asserted before returning."""
    got = pair.cache.get("G")
    if got is not None:
        return got
    bmw = pair.bmw
    field = pair.field
    K2 = bmw.K.embed_at(2, 3)
    F1i = pair.Finv.embed_at(1, 3)
    F2i = pair.Finv.embed_at(2, 3)
    F1 = pair.F.embed_at(1, 3)
    F2 = pair.F.embed_at(2, 3)
    G = (K2 * F1i * F2i).partial_trace([2, 3])
    Ginv = (F2 * F1 * K2).partial_trace([2, 3])
    ident = TensorOperator.identity(bmw.dim, 1, field.one)
    checks = []
    if G * Ginv != ident or Ginv * G != ident:
        checks.append("inverse")
    G1 = G.embed_block(0, 2)
    G2 = G.embed_block(1, 2)
    if bmw.R * G1 * G2 != G1 * G2 * bmw.R:
        checks.append("commutation with R")
    for Fe, nm in ((pair.F, "F"), (pair.Finv, "F^-1")):
        if Fe * G1 != G2 * Fe:
            checks.append("exchange with " + nm)
    for W, nm in ((bmw.D, "D_R"), (pair.CF, "C_F"), (pair.DF, "D_F"),
                  (bmw.E, "E")):
        if G * W != W * G:
            checks.append("commutator with " + nm)
    for W, nm in ((pair.CF, "C_F"), (pair.DF, "D_F")):
        if W * bmw.E != bmw.E * W:
            checks.append("commutator of %s with E" % nm)
    alt = pair.CF * (pair.Finv * bmw.K).partial_trace([2])
    if alt != G:
        checks.append("alternative form of G")
    alt = (bmw.K * pair.F).partial_trace([2]) * _inv1(pair.DF, field)
    if alt != Ginv:
        checks.append("alternative form of G^-1")
    if checks:
        raise NotCompatible("operator G fails: " + ", ".join(checks))
    pair.cache["G"] = (G, Ginv)
    return G, Ginv


class MatrixLinearMap:
    """Entrywise-linear map on N x N matrices, stored as a coefficient
    table rows[(a,b)][(c,d)]: (TM)[a,b] = sum rows[(a,b)][(c,d)] M[c,d].

    The coefficients are scalars, so the same map acts on scalar matrices
    and on matrices with entries in any module."""

    __slots__ = ("n", "field", "rows", "inverse")

    def __init__(self, n, field, rows, inverse=None):
        self.n = n
        self.field = field
        self.rows = rows
        self.inverse = inverse

    @classmethod
    def from_formula(cls, n, field, formula):
        """Tabulate by applying `formula` to the matrix units."""
        rows = {}
        for c in range(n):
            for d in range(n):
                unit = TensorOperator(n, 1, {(c, d): field.one})
                out = formula(unit)
                for key, v in out.data.items():
                    rows.setdefault(key, {})[(c, d)] = v
        return cls(n, field, rows)

    @classmethod
    def conjugation(cls, a_op, b_op, field):
        """M -> A M B."""
        n = a_op.dim
        rows = {}
        for (i, c), av in a_op.data.items():
            for (d, j), bv in b_op.data.items():
                v = av * bv
                if v:
                    rows.setdefault((i, j), {})[(c, d)] = v
        return cls(n, field, rows)

    def apply(self, op):
        """Apply to a 1-leg TensorOperator."""
        data = {}
        for key, row in self.rows.items():
            s = None
            for src, coeff in row.items():
                v = op.data.get(src)
                if v is not None:
                    t = coeff * v
                    s = t if s is None else s + t
            if s:
                data[key] = s
        return TensorOperator(self.n, 1, data)

    def apply_entries(self, entries):
        """Apply to a dict (c,d) -> module element with .scale and +."""
        out = {}
        for key, row in self.rows.items():
            s = None
            for src, coeff in row.items():
                v = entries.get(src)
                if v is None:
                    continue
                t = v.scale(coeff)
                s = t if s is None else s + t
            if s is not None:
                out[key] = s
        return out

    def compose(self, other):
        """self after other."""
        rows = {}
        for key, row in self.rows.items():
            acc = {}
            for mid, c1 in row.items():
                inner = other.rows.get(mid)
                if not inner:
                    continue
                for src, c2 in inner.items():
                    v = c1 * c2
                    s = acc.get(src)
                    s = v if s is None else s + v
                    if s:
                        acc[src] = s
                    else:
                        acc.pop(src, None)
            if acc:
                rows[key] = acc
        return MatrixLinearMap(self.n, self.field, rows)

    def __eq__(self, other):
        if not isinstance(other, MatrixLinearMap):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def is_identity(self):
        one = self.field.one
        for key, row in self.rows.items():
            if row != {key: one}:
                return False
        return len(self.rows) == self.n * self.n


def _rf_weight(pair):
    Rf = twist(pair)
    return Rf.D


def _map_from_sandwich(pair, left, mid, right, weight, scale=None):
    """M -> scale * tr_(2)(weight_2 left M_1 mid right) tabulated over the
    matrix units; left/mid/right are 2-leg operators."""
    n = pair.dim
    field = pair.field

    def formula(unit):
        x = left * unit.embed_block(0, 2) * mid
        if right is not None:
            x = x * right
        out = x.weighted_trace([2], weight)
        return out if scale is None else out.scale(scale)

    return MatrixLinearMap.from_formula(n, field, formula)


def map_phi(pair):
    """phi(M) = Tr_R_(2)(F M_1 F^-1 R); inverse attached and verified."""
    got = pair.cache.get("phi")
    if got is not None:
        return got
    bmw = pair.bmw
    mu = bmw.params.mu
    phi = _map_from_sandwich(pair, pair.F, pair.Finv, bmw.R, bmw.D)
    Rf = twist(pair)
    phi_inv = _map_from_sandwich(pair, pair.Finv, bmw.Rinv, pair.F,
                                 Rf.D, 1 / mu ** 2)
    if not phi.compose(phi_inv).is_identity() or \
            not phi_inv.compose(phi).is_identity():
        raise NotCompatible("phi inverse formula fails")
    phi.inverse = phi_inv
    phi_inv.inverse = phi
    pair.cache["phi"] = phi
    return phi


def map_xi(pair):
    """xi(M) = Tr_R_(2)(F M_1 F^-1 K); inverse attached and verified."""
    got = pair.cache.get("xi")
    if got is not None:
        return got
    bmw = pair.bmw
    mu = bmw.params.mu
    xi = _map_from_sandwich(pair, pair.F, pair.Finv * bmw.K, None, bmw.D)
    Rf = twist(pair)
    xi_inv = _map_from_sandwich(pair, pair.Finv, bmw.K * pair.F, None,
                                Rf.D, 1 / mu ** 2)
    if not xi.compose(xi_inv).is_identity() or \
            not xi_inv.compose(xi).is_identity():
        raise NotCompatible("xi inverse formula fails")
    xi.inverse = xi_inv
    xi_inv.inverse = xi
    pair.cache["xi"] = xi
    return xi


def map_theta(pair):
    """theta(M) = mu^-2 Tr_R_(2)(K F M_1 F^-1); the mirror partner of xi."""
    got = pair.cache.get("theta")
    if got is not None:
        return got
    bmw = pair.bmw
    mu = bmw.params.mu
    theta = _map_from_sandwich(pair, bmw.K * pair.F, pair.Finv, None,
                               bmw.D, 1 / mu ** 2)
    Rf = twist(pair)
    theta_inv = _map_from_sandwich(pair, pair.Finv * bmw.K, pair.F, None,
                                   Rf.D)
    if not theta.compose(theta_inv).is_identity() or \
            not theta_inv.compose(theta).is_identity():
        raise NotCompatible("theta inverse formula fails")
    theta.inverse = theta_inv
    theta_inv.inverse = theta
    pair.cache["theta"] = theta
    return theta


def random_matrix(rng, field, n):
    data = {}
    for i in range(n):
        for j in range(n):
            data[(i, j)] = random_rational(rng, field)
    return TensorOperator(n, 1, data)


def verify_twist_calculus(pair, rng, samples=5):
    """Full twisted-pair calculus: alternative expressions for R_f and its
    skew inverse, trace transformation lemmas, C/D exchange relations, the
    operator G and the maps phi/xi/theta."""
    bmw = pair.bmw
    field = pair.field
    n = pair.dim
    mu = bmw.params.mu
    suite = Suite("twist", {"label": bmw.label, "fMatrix": pair.label},
                  field.serialize)

    try:
        Rf = twist(pair)
        suite.true("twisted-r-construction", True)
    except Exception as exc:
        suite.true("twisted-r-construction", False, [{"reason": str(exc)}])
        return suite

    suite.equal("twisted-c-formula", Rf.C, pair.CFinv * bmw.D * pair.CF)
    suite.equal("twisted-d-formula", Rf.D, pair.DFinv * bmw.C * pair.DF)

    # finite expression for R_f on four legs
    F32i = pair.Finv.swap_slots().embed_pair(2, 3, 4)
    C3 = pair.CFinv.embed_block(2, 4)
    R34 = bmw.R.embed_at(3, 4)
    D4 = pair.DF.embed_block(3, 4)
    F14 = pair.F.embed_pair(1, 4, 4)
    suite.equal("twisted-r-trace-formula",
                (F32i * C3 * R34 * D4 * F14).partial_trace([3, 4]), Rf.R)

    # skew inverse of R_f, two expressions
    F23i = pair.Finv.embed_at(2, 4)
    Psi34 = bmw.psiR.embed_at(3, 4)
    F41 = pair.F.swap_slots().embed_pair(1, 4, 4)
    inner = (F23i * Psi34 * F41).partial_trace([3, 4])
    expr = pair.CFinv.embed_block(1, 2) * inner * pair.DF.embed_block(0, 2)
    suite.equal("twisted-skew-inverse-trace-formula", expr, Rf.psiR)
    F21 = pair.F.swap_slots()
    F21i = pair.Finv.swap_slots()
    expr = pair.CFinv.embed_block(1, 2) * F21 * pair.DFinv.embed_block(1, 2) \
        * bmw.psiR * pair.CF.embed_block(0, 2) * F21i * pair.DF.embed_block(0, 2)
    suite.equal("twisted-skew-inverse-product-formula", expr, Rf.psiR)

    # trace transformation lemma for random M, both signs
    for s in range(samples):
        M = random_matrix(rng, field, n)
        M2 = M.embed_block(1, 2)
        M1 = M.embed_block(0, 2)
        tC = (bmw.C * M).partial_trace([1]).scalar()
        tD = (bmw.D * M).partial_trace([1]).scalar()
        ident = TensorOperator.identity(n, 1, field.one)
        for Fe, Fei, nm in ((pair.F, pair.Finv, "plus"),
                            (pair.Finv, pair.F, "minus")):
            lhs = (bmw.C.embed_block(0, 2) * Fe * M2 * Fei).partial_trace([1])
            suite.equal("trace-transform-c-%s-%d" % (nm, s), lhs, ident.scale(tC))
            lhs = (bmw.D.embed_block(1, 2) * Fei * M1 * Fe).partial_trace([2])
            suite.equal("trace-transform-d-%s-%d" % (nm, s), lhs, ident.scale(tD))

    # skew inverse of F against C/D of R
    C1, C2 = bmw.C.embed_block(0, 2), bmw.C.embed_block(1, 2)
    D1, D2 = bmw.D.embed_block(0, 2), bmw.D.embed_block(1, 2)
    suite.equal("f-skew-inverse-c-left", C1 * pair.psiF, F21i * C2)
    suite.equal("f-skew-inverse-c-right", pair.psiF * C1, C2 * F21i)
    suite.equal("f-skew-inverse-d-left", pair.psiF * D2, D1 * F21i)
    suite.equal("f-skew-inverse-d-right", D2 * pair.psiF, F21i * D1)

    # exchange relations through F for X = R, Y = R_f
    CY1, CY2 = Rf.C.embed_block(0, 2), Rf.C.embed_block(1, 2)
    DY1, DY2 = Rf.D.embed_block(0, 2), Rf.D.embed_block(1, 2)
    suite.equal("f-exchange-cc", pair.F * C1 * CY2, CY1 * C2 * pair.F)
    suite.equal("f-exchange-dd", pair.F * D1 * DY2, DY1 * D2 * pair.F)
    CD = bmw.C * Rf.D
    DC = Rf.D * bmw.C
    suite.equal("f-exchange-cd", pair.F * CD.embed_block(1, 2),
                CD.embed_block(0, 2) * pair.F)
    suite.equal("f-exchange-dc", pair.F * DC.embed_block(0, 2),
                DC.embed_block(1, 2) * pair.F)
    suite.equal("f-trace-c", (C1 * pair.Finv).partial_trace([1]),
                bmw.C * pair.DF)
    suite.equal("f-trace-c-commuted", bmw.C * pair.DF, pair.DF * bmw.C)
    suite.equal("f-trace-d", (D2 * pair.Finv).partial_trace([2]),
                pair.CF * bmw.D)
    suite.equal("f-trace-d-commuted", pair.CF * bmw.D, bmw.D * pair.CF)

    # inverse operators: C and D of the inverse R-matrix
    for X, Xi, CX, DX, nm in ((bmw.R, bmw.Rinv, bmw.C, bmw.D, "r"),
                              (pair.F, pair.Finv, pair.CF, pair.DF, "f")):
        psi = skew_inverse(Xi, field)
        Ci, Di, _ = cd_matrices(Xi, psi, field)
        suite.equal("inverse-%s-c" % nm, Ci, _inv1(DX, field))
        suite.equal("inverse-%s-d" % nm, Di, _inv1(CX, field))
    suite.equal("c-commute", bmw.C * pair.CF, pair.CF * bmw.C)
    suite.equal("d-commute", bmw.D * pair.DF, pair.DF * bmw.D)

    try:
        G, Ginv = operator_g(pair)
        suite.true("operator-g-relations", True)
    except Exception as exc:
        suite.true("operator-g-relations", False, [{"reason": str(exc)}])
        return suite
    if pair.F == bmw.P:
        suite.equal("operator-g-is-e-for-permutation", G, bmw.E)

    try:
        phi = map_phi(pair)
        xi = map_xi(pair)
        theta = map_theta(pair)
        suite.true("map-inverses", True)
    except Exception as exc:
        suite.true("map-inverses", False, [{"reason": str(exc)}])
        return suite

    ident = TensorOperator.identity(n, 1, field.one)
    suite.equal("phi-of-identity", phi.apply(ident), ident)
    suite.equal("xi-of-identity", xi.apply(ident), ident.scale(mu))
    adg = MatrixLinearMap.conjugation(Ginv, G, field)
    suite.true("xi-theta-composition", xi.compose(theta) == adg
               and theta.compose(xi) == adg)

    # trace transport under phi and xi
    for s in range(samples):
        M = random_matrix(rng, field, n)
        trR = (bmw.D * M).partial_trace([1]).scalar()
        suite.true("phi-trace-transport-%d" % s,
                   (Rf.D * phi.apply(M)).partial_trace([1]).scalar() == trR)
        suite.true("xi-trace-transport-%d" % s,
                   (Rf.D * xi.apply(M)).partial_trace([1]).scalar() == mu * trR)

    # inverse of phi written with D of R_f^-1 instead of mu^-2 D_Rf
    psi = skew_inverse(Rf.Rinv, field)
    _, Dfi, _ = cd_matrices(Rf.Rinv, psi, field)
    alt = _map_from_sandwich(pair, pair.Finv, bmw.Rinv, pair.F, Dfi)
    suite.true("phi-inverse-variant", alt == phi.inverse)
    return suite
