"""Sparse operator algebra on tensor powers of V.

Operators are stored as dicts keyed by flattened (row, col) index pairs;
flattening is row-major with leg 1 most significant.  Indices are 0-based
internally and 1-based in the JSON interchange format.
"""

from __future__ import annotations

import json


class LegError(ValueError):
    pass


class TensorOperator:
    __slots__ = ("dim", "legs", "data")

    def __init__(self, dim, legs, data=None, prune=True):
        self.dim = dim
        self.legs = legs
        if data is None:
            data = {}
        elif prune:
            data = {k: v for k, v in data.items() if v}
        self.data = data

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(dim, legs):
        return TensorOperator(dim, legs, {})

    @staticmethod
    def identity(dim, legs, one):
        n = dim ** legs
        return TensorOperator(dim, legs, {(i, i): one for i in range(n)}, prune=False)

    @staticmethod
    def permutation(dim, one):
        data = {}
        for a in range(dim):
            for b in range(dim):
                data[(a * dim + b, b * dim + a)] = one
        return TensorOperator(dim, 2, data, prune=False)

    # -- basic arithmetic ---------------------------------------------

    def _check_shape(self, other):
        if self.dim != other.dim or self.legs != other.legs:
            raise LegError("shape mismatch")

    def __add__(self, other):
        self._check_shape(other)
        data = dict(self.data)
        for k, v in other.data.items():
            s = data.get(k)
            if s is None:
                data[k] = v
            else:
                s = s + v
                if s:
                    data[k] = s
                else:
                    del data[k]
        return TensorOperator(self.dim, self.legs, data, prune=False)

    def __sub__(self, other):
        self._check_shape(other)
        data = dict(self.data)
        for k, v in other.data.items():
            s = data.get(k)
            if s is None:
                data[k] = -v
            else:
                s = s - v
                if s:
                    data[k] = s
                else:
                    del data[k]
        return TensorOperator(self.dim, self.legs, data, prune=False)

    def __neg__(self):
        return TensorOperator(self.dim, self.legs, {k: -v for k, v in self.data.items()}, prune=False)

    def scale(self, c):
        if not c:
            return TensorOperator.zero(self.dim, self.legs)
        return TensorOperator(self.dim, self.legs, {k: c * v for k, v in self.data.items()}, prune=False)

    def __mul__(self, other):
        """Operator composition self∘other (matrix product)."""
        self._check_shape(other)
        rows = {}
        for (r, c), v in other.data.items():
            rows.setdefault(r, []).append((c, v))
        data = {}
        for (r, c), v in self.data.items():
            hit = rows.get(c)
            if hit is None:
                continue
            for c2, v2 in hit:
                key = (r, c2)
                s = data.get(key)
                if s is None:
                    data[key] = v * v2
                else:
                    data[key] = s + v * v2
        return TensorOperator(self.dim, self.legs, data)

    def __eq__(self, other):
        if not isinstance(other, TensorOperator):
            return NotImplemented
        return self.dim == other.dim and self.legs == other.legs and self.data == other.data

    def __hash__(self):
        return hash((self.dim, self.legs, frozenset(self.data.items())))

    def is_zero(self):
        return not self.data

    def nnz(self):
        return len(self.data)

    def scalar(self):
        """Value of a 0-leg operator."""
        if self.legs != 0:
            raise LegError("not a 0-leg operator")
        return self.data.get((0, 0), 0)

    # -- index bookkeeping --------------------------------------------

    def _digits(self, flat):
        out = [0] * self.legs
        for i in range(self.legs - 1, -1, -1):
            out[i] = flat % self.dim
            flat //= self.dim
        return tuple(out)

    def entries(self):
        """Iterate (row digits, col digits, value)."""
        for (r, c), v in self.data.items():
            yield self._digits(r), self._digits(c), v

    # -- leg operations -----------------------------------------------

    def embed_pair(self, m, r, n):
        """This 2-leg operator acting on legs (m, r) of n legs, 1-based, m < r."""
        if self.legs != 2:
            raise LegError("embed expects a 2-leg operator")
        if not (1 <= m < r <= n):
            raise LegError("legs (%d, %d) out of range for n=%d" % (m, r, n))
        dim = self.dim
        sm = dim ** (n - m)
        sr = dim ** (n - r)
        # enumerate the identity digits once and add the embedded offsets
        rest = [i for i in range(n) if i not in (m - 1, r - 1)]
        strides = [dim ** (n - 1 - i) for i in rest]
        bases = [0]
        for s in strides:
            bases = [b + d * s for b in bases for d in range(dim)]
        data = {}
        for (rr, cc), v in self.data.items():
            r1, r2 = divmod(rr, dim)
            c1, c2 = divmod(cc, dim)
            ro = r1 * sm + r2 * sr
            co = c1 * sm + c2 * sr
            for b in bases:
                data[(ro + b, co + b)] = v
        return TensorOperator(dim, n, data, prune=False)

    def embed_at(self, m, n):
        """This 2-leg operator acting on adjacent legs (m, m+1) of n legs."""
        if not (1 <= m <= n - 1):
            raise LegError("leg %d out of range for n=%d" % (m, n))
        return self.embed_pair(m, m + 1, n)

    def embed_block(self, offset, n):
        """This k-leg operator acting on legs offset+1 .. offset+k of n legs."""
        k = self.legs
        if offset < 0 or offset + k > n:
            raise LegError("block out of range")
        dim = self.dim
        shift = dim ** (n - offset - k)
        pre = [i for i in range(offset)]
        post = [i for i in range(offset + k, n)]
        strides = [dim ** (n - 1 - i) for i in pre + post]
        bases = [0]
        for s in strides:
            bases = [b + d * s for b in bases for d in range(dim)]
        data = {}
        for (rr, cc), v in self.data.items():
            ro = rr * shift
            co = cc * shift
            for b in bases:
                data[(ro + b, co + b)] = v
        return TensorOperator(dim, n, data, prune=False)

    def swap_slots(self):
        """For a 2-leg operator X, return X_{21} = P X P."""
        if self.legs != 2:
            raise LegError("swap expects a 2-leg operator")
        dim = self.dim
        data = {}
        for (rr, cc), v in self.data.items():
            r1, r2 = divmod(rr, dim)
            c1, c2 = divmod(cc, dim)
            data[(r2 * dim + r1, c2 * dim + c1)] = v
        return TensorOperator(dim, 2, data, prune=False)

    def partial_trace(self, leg_set):
        """Ordinary trace over the 1-based legs in leg_set."""
        return self.weighted_trace(leg_set, None)

    def weighted_trace(self, leg_set, weight):
        """Trace over leg_set with a 1-leg weight inserted on each traced leg.

        For weight W the traced entry picks up a factor W[col_digit, row_digit]
        per traced leg (equivalent to tracing W_k X over leg k); weight None
        means the ordinary partial trace.
        """
        legs = sorted(set(leg_set))
        if not legs or legs[0] < 1 or legs[-1] > self.legs:
            raise LegError("bad trace leg set")
        wdata = None
        if weight is not None:
            if weight.legs != 1 or weight.dim != self.dim:
                raise LegError("weight must be a 1-leg operator on V")
            wdata = weight.data
        dim = self.dim
        n = self.legs
        keep = [i for i in range(n) if (i + 1) not in legs]
        traced = [i for i in range(n) if (i + 1) in legs]
        out_legs = len(keep)
        data = {}
        for (rr, cc), v in self.data.items():
            rd = self._digits(rr)
            cd = self._digits(cc)
            if wdata is None:
                if any(rd[i] != cd[i] for i in traced):
                    continue
            else:
                for i in traced:
                    w = wdata.get((cd[i], rd[i]))
                    if w is None:
                        v = None
                        break
                    v = v * w
                if v is None:
                    continue
            ro = 0
            co = 0
            for i in keep:
                ro = ro * dim + rd[i]
                co = co * dim + cd[i]
            key = (ro, co)
            s = data.get(key)
            data[key] = v if s is None else s + v
        return TensorOperator(dim, out_legs, data)

    # -- dense conversion and serialization ---------------------------

    def dense(self, zero):
        n = self.dim ** self.legs
        rows = [[zero] * n for _ in range(n)]
        for (r, c), v in self.data.items():
            rows[r][c] = v
        return rows

    def to_json(self, field):
        entries = []
        for rd, cd, v in sorted(self.entries()):
            entries.append({
                "row": [i + 1 for i in rd],
                "col": [j + 1 for j in cd],
                "value": field.serialize(v),
            })
        return {"dimV": self.dim, "legs": self.legs, "entries": entries}

    @staticmethod
    def from_json(doc, field):
        dim = doc["dimV"]
        legs = doc["legs"]
        data = {}
        for e in doc["entries"]:
            r = 0
            c = 0
            for i in e["row"]:
                if not (1 <= i <= dim):
                    raise LegError("index out of range in JSON entry")
                r = r * dim + (i - 1)
            for j in e["col"]:
                if not (1 <= j <= dim):
                    raise LegError("index out of range in JSON entry")
                c = c * dim + (j - 1)
            data[(r, c)] = field.parse(e["value"])
        return TensorOperator(dim, legs, data)


def dump_json(op, field, path):
    with open(path, "w") as fh:
        json.dump(op.to_json(field), fh, indent=1)


def load_json(path, field):
    with open(path) as fh:
        return TensorOperator.from_json(json.load(fh), field)
