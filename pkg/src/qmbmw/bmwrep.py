"""R-matrix representations of braid-algebra elements: words, baxterized
combinations, antisymmetrizers, symmetrizers, contractors and their
verification suites.

A word is a tuple of letters ("s", i, +-1) or ("k", i) acting on legs
(i, i+1); formal Scalar-linear combinations are dicts word -> Scalar.
"""

from __future__ import annotations

from .report import Suite
from .scalars import InadmissibleParameters, check_admissible, q_number
from .tensorops import TensorOperator


class WordError(ValueError):
    pass


class SpectralPole(ValueError):
    pass


def sigma(i, e=1):
    if e not in (1, -1):
        raise WordError("exponent must be +-1")
    return (("s", i, e),)


def kappa(i):
    return (("k", i),)


def word_inverse(w):
    letters = []
    for let in reversed(w):
        if let[0] != "s":
            raise WordError("kappa letters are not invertible")
        letters.append(("s", let[1], -let[2]))
    return tuple(letters)


def reverse_word(w):
    """The antiautomorphism: letters reversed, each letter fixed."""
    return tuple(reversed(w))


def shift_word(w, k):
    """The shift monomorphism sigma_i -> sigma_{i+k}."""
    out = []
    for let in w:
        if let[0] == "s":
            out.append(("s", let[1] + k, let[2]))
        else:
            out.append(("k", let[1] + k))
    return tuple(out)


def shift_sum(ws, k):
    return {shift_word(w, k): c for w, c in ws.items()}


def tau_word(n):
    """tau(1) = 1, tau(j+1) = tau(j) sigma_j sigma_{j-1} ... sigma_1."""
    w = ()
    for j in range(1, n):
        w = w + tuple(("s", i, 1) for i in range(j, 0, -1))
    return w


def generator_image(bmw, letter, n):
    key = ("gen", letter, n)
    op = bmw.cache.get(key)
    if op is None:
        kind = letter[0]
        i = letter[1]
        if not (1 <= i <= n - 1):
            raise WordError("leg %d out of range for n=%d" % (i, n))
        if kind == "s":
            base = bmw.R if letter[2] == 1 else bmw.Rinv
        else:
            base = bmw.K
        op = base.embed_at(i, n)
        bmw.cache[key] = op
    return op


def represent(w, bmw, n):
    """rho_R of a word or of a formal combination {word: Scalar}."""
    if isinstance(w, dict):
        acc = TensorOperator.zero(bmw.dim, n)
        for word, c in w.items():
            acc = acc + represent(word, bmw, n).scale(c)
        return acc
    op = TensorOperator.identity(bmw.dim, n, bmw.field.one)
    for letter in w:
        op = op * generator_image(bmw, letter, n)
    return op


def baxterized(i, eps, x, params):
    """1 + (x-1)/(q-q^-1) sigma_i + (x-1)/(a x+1) kappa_i with
    a = -eps q^-eps / mu; formal combination."""
    q, mu = params.q, params.mu
    alpha = -eps * q ** (-eps) / mu
    denom = alpha * x + 1
    if not denom:
        raise SpectralPole("spectral parameter hits the pole of kappa term")
    return {
        (): params.field.one,
        sigma(i): (x - 1) / (q - 1 / q),
        kappa(i): (x - 1) / denom,
    }


def _bax_op(bmw, i, eps, x, n):
    """Operator image of the baxterized element on V^(x n)."""
    coeffs = baxterized(i, eps, x, bmw.params)
    ident = TensorOperator.identity(bmw.dim, n, bmw.field.one)
    out = ident.scale(coeffs[()])
    out = out + generator_image(bmw, ("s", i, 1), n).scale(coeffs[sigma(i)])
    out = out + generator_image(bmw, ("k", i), n).scale(coeffs[kappa(i)])
    return out


def _mul(x, y, rev):
    return (y * x) if rev else (x * y)


def _idempotent(bmw, order, side, variant=0, rev=False):
    """rho_R of a^(order) (side 'antisym') or s^(order) (side 'sym') on
    V^(x order); variant 0/1 are the two recursion forms, rev reverses
    every composition (the antiautomorphism check)."""
    key = ("idem", order, side, variant, rev)
    op = bmw.cache.get(key)
    if op is not None:
        return op
    verdict = check_admissible(bmw.params, order, side)
    if not verdict:
        raise InadmissibleParameters("%s order %d: %s" % (side, order, verdict.constraint))
    q = bmw.params.q
    if order == 1:
        op = TensorOperator.identity(bmw.dim, 1, bmw.field.one)
    else:
        i = order - 1
        prev = _idempotent(bmw, i, side, variant, rev)
        if side == "antisym":
            coeff = q ** i / q_number(i + 1, bmw.params)
            eps, x = -1, q ** (-2 * i)
        else:
            coeff = q ** (-i) / q_number(i + 1, bmw.params)
            eps, x = 1, q ** (2 * i)
        if variant == 0:
            a = prev.embed_block(0, order)
            mid = _bax_op(bmw, i, eps, x, order)
        else:
            a = prev.embed_block(1, order)
            mid = _bax_op(bmw, 1, eps, x, order)
        op = _mul(_mul(a, mid, rev), a, rev).scale(coeff)
    bmw.cache[key] = op
    return op


def antisymmetrizer(i, bmw, n):
    """rho_R(a^(i)) on legs 1..i of V^(x n); both recursion variants are
    computed and asserted equal."""
    return _embedded_idem(bmw, i, "antisym", n)


def symmetrizer(i, bmw, n):
    return _embedded_idem(bmw, i, "sym", n)


def _embedded_idem(bmw, i, side, n):
    if i > n:
        raise WordError("order exceeds leg count")
    op = _idempotent(bmw, i, side, 0)
    if _idempotent(bmw, i, side, 1) != op:
        raise AssertionError("the two %s recursion variants disagree" % side)
    return op.embed_block(0, n) if n > i else op


def _contractor(bmw, two_i, rev=False):
    key = ("contr", two_i, rev)
    op = bmw.cache.get(key)
    if op is not None:
        return op
    if two_i < 0 or two_i % 2:
        raise WordError("contractor order must be even and nonnegative")
    if two_i == 0:
        op = TensorOperator.identity(bmw.dim, 0, bmw.field.one)
    elif two_i == 2:
        op = bmw.K.scale(1 / bmw.params.eta)
    else:
        m = two_i
        prev = _contractor(bmw, m - 2, rev).embed_block(1, m)
        kk = _mul(generator_image(bmw, ("k", 1), m),
                  generator_image(bmw, ("k", m - 1), m), rev)
        op = _mul(_mul(prev, kk, rev), prev, rev)
    bmw.cache[key] = op
    return op


def _contractor_chain(bmw, two_i):
    """Alternative chain form: eta^-1 c^(2i-2)^1 (kappa_{2i-1}..kappa_{i+1})
    (kappa_1..kappa_i)."""
    if two_i <= 2:
        return _contractor(bmw, two_i)
    m = two_i
    i = m // 2
    op = _contractor(bmw, m - 2).embed_block(1, m)
    for j in range(m - 1, i, -1):
        op = op * generator_image(bmw, ("k", j), m)
    for j in range(1, i + 1):
        op = op * generator_image(bmw, ("k", j), m)
    return op.scale(1 / bmw.params.eta)


def contractor(two_i, bmw, n):
    """rho_R(c^(2i)) on legs 1..2i of V^(x n); the iterated and chain
    definitions are computed and asserted equal."""
    if two_i > n:
        raise WordError("order exceeds leg count")
    op = _contractor(bmw, two_i)
    if _contractor_chain(bmw, two_i) != op:
        raise AssertionError("contractor chain form disagrees")
    return op.embed_block(0, n) if n > two_i else op


# -- verification suites ----------------------------------------------


def verify_proposition22(bmw, n_max):
    """Idempotent calculus: eigen-relations, absorptions, orthogonality,
    the divide identity, contractor relations and centrality."""
    field = bmw.field
    q, mu = bmw.params.q, bmw.params.mu
    suite = Suite("idempotents", {"label": bmw.label, "nMax": n_max},
                  field.serialize)

    for side, name, eig in (("antisym", "a", -1 / q), ("sym", "s", q)):
        for n in range(2, n_max + 1):
            label = "%s%d" % (name, n)
            verdict = check_admissible(bmw.params, n, side)
            if not verdict:
                suite.skipped(label + "-all", verdict.constraint)
                continue
            idem = _embedded_idem(bmw, n, side, n)
            suite.true(label + "-recursion-variants-agree", True)
            suite.equal(label + "-idempotent", idem * idem, idem)
            for i in range(1, n):
                si = generator_image(bmw, ("s", i, 1), n)
                suite.equal(label + "-eigen-right-%d" % i, idem * si, idem.scale(eig))
                suite.equal(label + "-eigen-left-%d" % i, si * idem, idem.scale(eig))
            for m in range(1, n + 1):
                for i in range(0, n - m + 1):
                    if m == n and i == 0:
                        continue
                    inner = _idempotent(bmw, m, side).embed_block(i, n)
                    suite.equal(label + "-absorb-%d-up-%d" % (m, i), idem * inner, idem)
                    suite.equal(label + "-absorb-left-%d-up-%d" % (m, i), inner * idem, idem)
            if side == "antisym":
                for i in range(1, n):
                    bax = _bax_op(bmw, i, -1, q * q, n)
                    suite.zero(label + "-divide-right-%d" % i, idem * bax)
                    suite.zero(label + "-divide-left-%d" % i, bax * idem)
            for i in range(1, n):
                for gen in (("s", i, 1), ("s", i, -1), ("k", i)):
                    g = generator_image(bmw, gen, n)
                    suite.equal(label + "-central-%s%d" % (gen[0], i), idem * g, g * idem)

    # orthogonality a x s, both idempotents starting at leg 1
    for n in range(2, n_max + 1):
        for m in range(2, n_max + 1):
            legs = max(n, m)
            if not (check_admissible(bmw.params, n, "antisym")
                    and check_admissible(bmw.params, m, "sym")):
                suite.skipped("a%d-s%d-orthogonal" % (n, m), "inadmissible order")
                continue
            a = _embedded_idem(bmw, n, "antisym", legs)
            s = _embedded_idem(bmw, m, "sym", legs)
            suite.zero("a%d-s%d-orthogonal" % (n, m), a * s)
            suite.zero("s%d-a%d-orthogonal" % (m, n), s * a)

    # contractors
    for two_n in range(2, n_max + 1, 2):
        n = two_n // 2
        c = contractor(two_n, bmw, two_n)
        label = "c%d" % two_n
        suite.equal(label + "-idempotent", c * c, c)
        for i in range(1, n + 1):
            inner = _contractor(bmw, 2 * i).embed_block(n - i, two_n)
            suite.equal(label + "-absorb-c%d" % (2 * i), c * inner, c)
            suite.equal(label + "-absorb-left-c%d" % (2 * i), inner * c, c)
        for i in range(1, n):
            si = generator_image(bmw, ("s", i, 1), two_n)
            sm = generator_image(bmw, ("s", two_n - i, 1), two_n)
            suite.equal(label + "-mirror-right-%d" % i, c * si, c * sm)
            suite.equal(label + "-mirror-left-%d" % i, si * c, sm * c)
        sn = generator_image(bmw, ("s", n, 1), two_n)
        suite.equal(label + "-middle-right", c * sn, c.scale(mu))
        suite.equal(label + "-middle-left", sn * c, c.scale(mu))
        for m in range(n + 1, two_n + 1):
            for side, nm in (("antisym", "a"), ("sym", "s")):
                if not check_admissible(bmw.params, m, side):
                    suite.skipped(label + "-%s%d-orthogonal" % (nm, m), "inadmissible order")
                    continue
                x = _embedded_idem(bmw, m, side, two_n)
                suite.zero(label + "-%s%d-orthogonal" % (nm, m), c * x)
                suite.zero(label + "-%s%d-orthogonal-left" % (nm, m), x * c)
    return suite


def verify_morphisms(bmw, n_max):
    """The q -> -1/q evaluation of the antisymmetrizer recursion equals the
    symmetrizer, longest-element conjugation invariance, and invariance of
    the idempotents under reversal of all products."""
    from .scalars import AlgebraParams

    field = bmw.field
    suite = Suite("morphisms", {"label": bmw.label, "nMax": n_max},
                  field.serialize)
    params = bmw.params
    try:
        flipped = AlgebraParams(field, -1 / params.q, params.mu, params.max_order)
    except Exception:
        flipped = None

    for n in range(2, n_max + 1):
        if not (check_admissible(params, n, "antisym")
                and check_admissible(params, n, "sym")):
            suite.skipped("swap-a%d-is-s%d" % (n, n), "inadmissible order")
            continue
        if flipped is None:
            suite.skipped("swap-a%d-is-s%d" % (n, n), "flipped q inadmissible")
        else:
            # evaluate the a-recursion with parameters (-1/q, mu); the same
            # R-matrix represents both parameter sets
            shadow = type(bmw)(bmw.R, bmw.Rinv, bmw.K, bmw.psiR, bmw.C,
                               bmw.D, bmw.E, bmw.Einv, bmw.P, flipped,
                               field, bmw.strict, bmw.label + "-flipped")
            img = _idempotent(shadow, n, "antisym")
            suite.equal("swap-a%d-is-s%d" % (n, n), img, _idempotent(bmw, n, "sym"))

        tau = represent(tau_word(n), bmw, n)
        tau_inv = represent(word_inverse(tau_word(n)), bmw, n)
        for side, nm in (("antisym", "a"), ("sym", "s")):
            idem = _idempotent(bmw, n, side)
            suite.equal("tau-conjugation-%s%d" % (nm, n), tau * idem * tau_inv, idem)
        for side, nm in (("antisym", "a"), ("sym", "s")):
            suite.equal("reversal-%s%d" % (nm, n),
                        _idempotent(bmw, n, side, rev=True), _idempotent(bmw, n, side))
    for two_n in range(2, n_max + 1, 2):
        suite.equal("reversal-c%d" % two_n,
                    _contractor(bmw, two_n, rev=True), _contractor(bmw, two_n))
    return suite


def _sigma_prime(bmw, i, n):
    lam = bmw.params.q - 1 / bmw.params.q
    return generator_image(bmw, ("s", i, 1), n) - \
        TensorOperator.identity(bmw.dim, n, bmw.field.one).scale(lam)


def verify_appendices(bmw, j_max, primitivity_max_len=4):
    """Higher-contractor identities and the sampled primitivity property."""
    field = bmw.field
    eta, mu = bmw.params.eta, bmw.params.mu
    suite = Suite("appendix", {"label": bmw.label, "jMax": j_max},
                  field.serialize)

    for j in range(1, j_max + 1):
        m = 2 * j
        n = m + 1
        c = contractor(m, bmw, n)
        label = "c%d" % m
        s_last = generator_image(bmw, ("s", m, 1), n)
        k_last = generator_image(bmw, ("k", m), n)
        suite.equal(label + "-sigma-sandwich", c * s_last * c, c.scale(1 / (eta * mu)))
        suite.equal(label + "-kappa-sandwich", c * k_last * c, c.scale(1 / eta))
        inner = _contractor(bmw, m - 2).embed_block(1, n)
        suite.equal(label + "-kappa-outer", k_last * c * k_last,
                    (k_last * inner).scale(1 / eta))
        for k in range(1, j + 1):
            w = tuple(("s", i, 1) for i in range(j + k, m + 1))
            suite.equal(label + "-sigma-string-upper-%d" % k,
                        c * represent(w, bmw, n) * c,
                        c.scale((1 / (eta * mu)) ** (j + 1 - k)))
        for k in range(0, j):
            w = tuple(("s", i, 1) for i in range(j - k, m + 1))
            suite.equal(label + "-sigma-string-lower-%d" % k,
                        c * represent(w, bmw, n) * c,
                        c.scale(eta ** (-j) * mu ** (-(j - 1 - k))))
        cup = _contractor(bmw, m).embed_block(1, n)
        winv = tuple(("s", i, -1) for i in range(m, 0, -1))
        suite.equal(label + "-shifted-product",
                    c * cup, (c * represent(winv, bmw, n)).scale(eta ** (-j)))
        lhs = cup
        for i in range(1, j + 1):
            lhs = _sigma_prime(bmw, i, n) * lhs
        for i in range(1, j + 1):
            lhs = lhs * _sigma_prime(bmw, i, n)
        rhs = c
        for i in range(m, j, -1):
            rhs = _sigma_prime(bmw, i, n) * rhs
        for i in range(m, j, -1):
            rhs = rhs * _sigma_prime(bmw, i, n)
        suite.equal(label + "-shifted-conjugation", lhs, rhs)
        suite.equal(label + "-shifted-sandwich", cup * c * cup, cup.scale(eta ** (-m)))
        for k in range(0, j + 1):
            w = shift_word(tau_word(2 * k), j - k)
            suite.equal(label + "-longest-element-%d" % k,
                        c * represent(w, bmw, n), c.scale(mu ** k))
        if 2 * j + 2 <= 2 * j_max + 2:
            nn = m + 2
            c2 = contractor(m + 2, bmw, nn)
            cc = _contractor(bmw, m).embed_block(0, nn)
            suite.equal("c%d-odd-longest-element" % (m + 2),
                        c2 * represent(tau_word(m + 1), bmw, nn),
                        (c2 * cc).scale((eta * mu) ** j))

    suite.records.append(_primitivity_check(bmw, primitivity_max_len))
    return suite


def _rank_factor(op, field):
    """Factor an idempotent as op = U W with W U = I_r: U is a list of r
    independent columns of op (as dicts row -> scalar), W is r rows solved
    from op = U W."""
    from .linalg import SparseEchelon, invert_dense

    cols = {}
    for (r, c), v in op.data.items():
        cols.setdefault(c, {})[r] = v
    ech = SparseEchelon()
    ucols, pivots = [], []
    for c in sorted(cols):
        vec = dict(cols[c])
        if ech.insert(vec):
            ucols.append(cols[c])
            pivots.append(c)
    r = len(ucols)
    rows_used = []
    row_ech = SparseEchelon()
    for row in sorted({ri for col in ucols for ri in col}):
        vec = {k: col.get(row, field.zero) for k, col in enumerate(ucols)}
        vec = {k: v for k, v in vec.items() if v}
        if row_ech.insert(vec):
            rows_used.append(row)
        if len(rows_used) == r:
            break
    sub = [[ucols[k].get(ri, field.zero) for k in range(r)] for ri in rows_used]
    inv = invert_dense(sub, field.zero, field.one)
    # W = inv * op[rows_used, :]
    w_rows = [dict() for _ in range(r)]
    for j, ri in enumerate(rows_used):
        for (rr, cc), v in op.data.items():
            if rr != ri:
                continue
            for k in range(r):
                f = inv[k][j]
                if f:
                    s = w_rows[k].get(cc, field.zero) + f * v
                    if s:
                        w_rows[k][cc] = s
                    else:
                        w_rows[k].pop(cc, None)
    return ucols, w_rows


def _primitivity_check(bmw, max_len):
    """Sampled primitivity: c rho(w) c lies in span{c} for every word w of
    length <= max_len over the generator images of W_5 (c = c^(4), 5 legs).

    Uses a rank factorization c = U W, W U = I: membership in span{c} is
    equivalent to the small matrix W rho(w) U being scalar."""
    import time

    t0 = time.monotonic()
    from .report import CheckRecord

    field = bmw.field
    n = 5
    c = contractor(4, bmw, n)
    ucols, w_rows = _rank_factor(c, field)
    r = len(ucols)
    gens = []
    for i in range(1, n):
        for letter in (("s", i, 1), ("s", i, -1), ("k", i)):
            g = generator_image(bmw, letter, n)
            by_row = {}
            for (rr, cc), v in g.data.items():
                by_row.setdefault(rr, []).append((cc, v))
            gens.append(by_row)

    def step(rows, g_rows):
        out = []
        for row in rows:
            acc = {}
            for cc, v in row.items():
                for c2, gv in g_rows.get(cc, ()):
                    s = acc.get(c2, field.zero) + v * gv
                    if s:
                        acc[c2] = s
                    else:
                        acc.pop(c2, None)
            out.append(acc)
        return out

    def scalar_defect(rows):
        # W rho(w) U must be t * identity
        m = [[field.zero] * r for _ in range(r)]
        for k in range(r):
            for cc, v in rows[k].items():
                for l in range(r):
                    uv = ucols[l].get(cc)
                    if uv:
                        m[k][l] = m[k][l] + v * uv
        t = m[0][0]
        for k in range(r):
            for l in range(r):
                want = t if k == l else field.zero
                if m[k][l] != want:
                    return (k, l)
        return None

    bad = []
    checked = 0
    stack = [(w_rows, 0)]
    while stack:
        rows, depth = stack.pop()
        checked += 1
        defect = scalar_defect(rows)
        if defect is not None:
            bad.append({"depth": depth, "entry": list(defect)})
            if len(bad) >= 3:
                break
        if depth < max_len:
            for g in gens:
                stack.append((step(rows, g), depth + 1))
    status = "pass" if not bad else "fail"
    return CheckRecord("appendix", "primitivity-span-membership",
                       {"label": bmw.label, "words": checked}, status,
                       bad or None, (time.monotonic() - t0) * 1000.0)
