"""Exact dense and sparse Gaussian elimination over any exact field.

Dense routines work on lists of lists of Scalars (small matrices: inverses
of N^2 x N^2 operators).  SparseEchelon maintains an incremental echelon
basis with insertion-order pivots; it backs the rational ideal reducer and
all exact rank computations.
"""

from __future__ import annotations


class SingularMatrix(ValueError):
    pass


def invert_dense(rows, zero, one):
    """Gauss-Jordan inverse; raises SingularMatrix if not invertible."""
    n = len(rows)
    a = [list(r) for r in rows]
    inv = [[one if i == j else zero for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            raise SingularMatrix("singular at column %d" % col)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            inv[col], inv[piv] = inv[piv], inv[col]
        d = a[col][col]
        if d != one:
            a[col] = [x / d for x in a[col]]
            inv[col] = [x / d for x in inv[col]]
        for r in range(n):
            if r == col:
                continue
            f = a[r][col]
            if not f:
                continue
            arow, pcol = a[r], a[col]
            a[r] = [x - f * y for x, y in zip(arow, pcol)]
            irow, picol = inv[r], inv[col]
            inv[r] = [x - f * y for x, y in zip(irow, picol)]
    return inv


def rank_dense(rows):
    """Rank by forward elimination; does not modify the input."""
    a = [list(r) for r in rows]
    n_rows = len(a)
    if n_rows == 0:
        return 0
    n_cols = len(a[0])
    rank = 0
    for col in range(n_cols):
        piv = None
        for r in range(rank, n_rows):
            if a[r][col]:
                piv = r
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        d = a[rank][col]
        for r in range(rank + 1, n_rows):
            f = a[r][col]
            if not f:
                continue
            f = f / d
            prow = a[rank]
            a[r] = [x - f * y for x, y in zip(a[r], prow)]
        rank += 1
        if rank == n_rows:
            break
    return rank


def operator_rank(op):
    """Exact rank of a TensorOperator."""
    if not op.data:
        return 0
    ech = SparseEchelon()
    rows = {}
    for (r, c), v in op.data.items():
        rows.setdefault(r, {})[c] = v
    for r in sorted(rows):
        ech.insert(rows[r])
    return ech.rank


class SparseEchelon:
    """Incremental echelon basis of sparse vectors (dict index -> Scalar).

    Each inserted row is fully reduced against the rows already stored and,
    if nonzero, normalized at its least nonzero index, which becomes its
    pivot.  Stored rows are triangular with respect to (insertion order,
    pivot), so reduce() kills every pivot coordinate and yields a unique
    normal form.
    """

    def __init__(self):
        self.rows = []      # list of (pivot, dict)
        self.pivots = set()

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, vec):
        """Normal form of a sparse vector modulo the stored span."""
        v = dict(vec)
        for piv, row in self.rows:
            f = v.pop(piv, None)
            if not f:
                continue
            for c, x in row.items():
                s = v.get(c)
                if s is None:
                    v[c] = -f * x
                else:
                    s = s - f * x
                    if s:
                        v[c] = s
                    else:
                        del v[c]
        return v

    def insert(self, vec):
        """Reduce and, if independent, add to the basis; True if added."""
        v = self.reduce(vec)
        if not v:
            return False
        piv = min(v)
        d = v[piv]
        row = {c: x / d for c, x in v.items()}
        del row[piv]
        self.rows.append((piv, row))
        self.pivots.add(piv)
        return True
