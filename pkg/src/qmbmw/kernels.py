"""Mod-p echelon kernels: compiled core with a pure-Python fallback.

The row-reduction inner loop dominates degree-4 modular runs, so it is
compiled (qmbmw._modred, Cython).  When the extension is unavailable a
vectorized numpy implementation is selected at import time; both produce
bit-identical results (same pivot order, canonical residues in [0, p)).
"""

from __future__ import annotations

import numpy as np

from .scalars import PrimeUnlucky

try:
    from ._modred import reduce_rows as _reduce_rows

    BACKEND = "cython"
except ImportError:  # pragma: no cover - depends on build environment
    _reduce_rows = None
    BACKEND = "python"


def _reduce_rows_py(basis, pivots, rank, vec, p):
    for k in range(rank):
        f = vec[pivots[k]]
        if f:
            vec -= f * basis[k]
            vec %= p


if _reduce_rows is None:
    _reduce_rows = _reduce_rows_py


def reduce_against(basis, pivots, rank, vec, p, impl=None):
    """In-place reduction of vec by the first `rank` stored rows."""
    (impl or _reduce_rows)(basis, pivots, rank, vec, p)


class ModEchelon:
    """Incremental echelon basis over GF(p) on dense int64 vectors.

    Insertion-order pivots, exactly like linalg.SparseEchelon; reduce()
    returns the unique normal form with all pivot coordinates killed.
    """

    def __init__(self, ncols, p, impl=None):
        self.ncols = ncols
        self.p = p
        self._impl = impl or _reduce_rows
        cap = 64
        self.basis = np.zeros((cap, ncols), dtype=np.int64)
        self.pivots = np.zeros(cap, dtype=np.int64)
        self.rank = 0

    def _grow(self):
        cap = self.basis.shape[0]
        if self.rank < cap:
            return
        basis = np.zeros((2 * cap, self.ncols), dtype=np.int64)
        basis[:cap] = self.basis
        pivots = np.zeros(2 * cap, dtype=np.int64)
        pivots[:cap] = self.pivots
        self.basis = basis
        self.pivots = pivots

    def reduce(self, vec):
        v = np.asarray(vec, dtype=np.int64) % self.p
        v = np.ascontiguousarray(v)
        self._impl(self.basis, self.pivots, self.rank, v, self.p)
        return v

    def insert(self, vec):
        v = self.reduce(vec)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        piv = int(nz[0])
        inv = pow(int(v[piv]), self.p - 2, self.p)
        v = v * inv % self.p
        self._grow()
        self.basis[self.rank] = v
        self.pivots[self.rank] = piv
        self.rank += 1
        return True

    def check_pivot_luck(self, value):
        """Raise PrimeUnlucky if a required quantity vanished mod p."""
        if value % self.p == 0:
            raise PrimeUnlucky("prime %d divides a required pivot" % self.p)
