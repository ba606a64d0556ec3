"""Exact coefficient fields and (q, mu) parameter bookkeeping.

Two interchangeable backends: arbitrary-precision rationals (gmpy2.mpq,
falling back to fractions.Fraction) and prime fields GF(p) with q
specialized to a residue.  Scalar values support the usual arithmetic
operators; every equality test is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

try:
    from gmpy2 import mpq as _ratio
except ImportError:  # pragma: no cover - gmpy2 is a hard dependency
    _ratio = Fraction


class ScalarError(ValueError):
    pass


class InadmissibleParameters(ScalarError):
    pass


class ModInt:
    """Element of GF(p); immutable, hashable, canonical residue in [0, p)."""

    __slots__ = ("r", "p")

    def __init__(self, r, p):
        object.__setattr__(self, "r", r % p)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("ModInt is immutable")

    def _lift(self, other):
        if isinstance(other, ModInt):
            if other.p != self.p:
                raise ScalarError("mixed moduli")
            return other.r
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        r = self._lift(other)
        if r is NotImplemented:
            return NotImplemented
        return ModInt(self.r + r, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        r = self._lift(other)
        if r is NotImplemented:
            return NotImplemented
        return ModInt(self.r - r, self.p)

    def __rsub__(self, other):
        r = self._lift(other)
        if r is NotImplemented:
            return NotImplemented
        return ModInt(r - self.r, self.p)

    def __mul__(self, other):
        r = self._lift(other)
        if r is NotImplemented:
            return NotImplemented
        return ModInt(self.r * r, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        r = self._lift(other)
        if r is NotImplemented:
            return NotImplemented
        if r == 0:
            raise PrimeUnlucky("division by zero residue")
        return ModInt(self.r * pow(r, self.p - 2, self.p), self.p)

    def __rtruediv__(self, other):
        r = self._lift(other)
        if r is NotImplemented:
            return NotImplemented
        if self.r == 0:
            raise PrimeUnlucky("division by zero residue")
        return ModInt(r * pow(self.r, self.p - 2, self.p), self.p)

    def __pow__(self, n):
        if n < 0:
            if self.r == 0:
                raise PrimeUnlucky("inverting zero residue")
            return ModInt(pow(pow(self.r, self.p - 2, self.p), -n, self.p), self.p)
        return ModInt(pow(self.r, n, self.p), self.p)

    def __neg__(self):
        return ModInt(-self.r, self.p)

    def __eq__(self, other):
        if isinstance(other, ModInt):
            return self.p == other.p and self.r == other.r
        if isinstance(other, int):
            return self.r == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.r, self.p))

    def __bool__(self):
        return self.r != 0

    def __repr__(self):
        return "%d mod %d" % (self.r, self.p)


class PrimeUnlucky(ScalarError):
    """The chosen prime divides a quantity that must be invertible."""


class RationalField:
    name = "rational"

    def __init__(self):
        self.zero = _ratio(0)
        self.one = _ratio(1)

    def from_int(self, n):
        return _ratio(n)

    def from_ratio(self, num, den):
        if den == 0:
            raise ScalarError("zero denominator")
        return _ratio(num, den)

    def parse(self, text):
        text = text.strip()
        if "/" in text:
            num, den = text.split("/")
            return self.from_ratio(int(num), int(den))
        return _ratio(int(text))

    def serialize(self, x):
        return "%d/%d" % (x.numerator, x.denominator)

    def __repr__(self):
        return "RationalField()"


class PrimeField:
    name = "modular"

    def __init__(self, p):
        self.p = p
        self.zero = ModInt(0, p)
        self.one = ModInt(1, p)

    def from_int(self, n):
        return ModInt(n, self.p)

    def from_ratio(self, num, den):
        if den % self.p == 0:
            raise PrimeUnlucky("denominator divisible by %d" % self.p)
        return ModInt(num, self.p) / ModInt(den, self.p)

    def parse(self, text):
        text = text.strip()
        if "mod" in text:
            r, p = text.split("mod")
            if int(p) != self.p:
                raise ScalarError("modulus mismatch")
            return ModInt(int(r), self.p)
        if "/" in text:
            num, den = text.split("/")
            return self.from_ratio(int(num), int(den))
        return ModInt(int(text), self.p)

    def serialize(self, x):
        return "%d mod %d" % (x.r, x.p)

    def __repr__(self):
        return "PrimeField(%d)" % self.p


# Deterministic supply of primes > 2^31 (and < 2^31.5, so a product of two
# residues always fits in a signed 64-bit integer).
PRIMES = [
    2147483659,
    2147483693,
    2147483713,
    2147483743,
    2147483777,
    2147483783,
    2147483813,
    2147483857,
]


@dataclass(frozen=True)
class AlgebraParams:
    """The pair (q, mu) with the derived eta and the largest order in use.

    Constraints: q not in {0, 1, -1}; mu not in {0, q, -1/q};
    eta = (q - mu)(1/q + mu) / (mu (q - 1/q)).
    """

    field: object
    q: object
    mu: object
    max_order: int = 4

    def __post_init__(self):
        one = self.field.one
        if not self.q or self.q == one or self.q == -one:
            raise ScalarError("q must avoid {0, 1, -1}")
        if not self.mu or self.mu == self.q or self.mu == -one / self.q:
            raise ScalarError("mu must avoid {0, q, -1/q}")
        if self.max_order < 1:
            raise ScalarError("max_order must be positive")

    @property
    def eta(self):
        q, mu = self.q, self.mu
        return (q - mu) * (1 / q + mu) / (mu * (q - 1 / q))


def q_number(i, params):
    """(q^i - q^-i) / (q - q^-1)."""
    q = params.q
    return (q ** i - q ** (-i)) / (q - 1 / q)


@dataclass(frozen=True)
class Admissibility:
    ok: bool
    j: int | None = None
    constraint: str | None = None

    def __bool__(self):
        return self.ok


def check_admissible(params, n, side="both"):
    """First violated order-j constraint up to n, or a passing verdict.

    For each j in 2..n: the q-number j_q must be nonzero; on the
    antisymmetrizer side mu != -q^(3-2j); on the symmetrizer side
    mu != q^(2j-3).
    """
    if side not in ("antisym", "sym", "both"):
        raise ScalarError("unknown side %r" % side)
    q, mu = params.q, params.mu
    for j in range(2, n + 1):
        if not q_number(j, params):
            return Admissibility(False, j, "q-number %d_q = 0" % j)
        if side in ("antisym", "both") and mu == -(q ** (3 - 2 * j)):
            return Admissibility(False, j, "mu = -q^(%d)" % (3 - 2 * j))
        if side in ("sym", "both") and mu == q ** (2 * j - 3):
            return Admissibility(False, j, "mu = q^(%d)" % (2 * j - 3))
    return Admissibility(True)


def random_rational(rng, field, lo=2, hi=9):
    """Small random positive non-unit rational, seeded by rng."""
    while True:
        num = rng.randrange(lo, hi + 1)
        den = rng.randrange(lo, hi + 1)
        if num != den:
            return field.from_ratio(num, den)


def sample_q(rng, field, mu_exponent, mu_sign, max_order, lo=2, hi=9):
    """Rejection-sample q such that (q, mu = mu_sign * q^mu_exponent) is an
    admissible parameter pair up to max_order."""
    while True:
        q = random_rational(rng, field, lo, hi)
        mu = mu_sign * q ** mu_exponent
        try:
            params = AlgebraParams(field, q, mu, max_order)
        except ScalarError:
            continue
        if check_admissible(params, max_order):
            return params
