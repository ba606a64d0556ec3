# Mod-p row reduction kernel.  Semantics must stay bit-identical to the
# numpy fallback in qmbmw.kernels: same pivot order, canonical residues.

def reduce_rows(long long[:, ::1] basis, long long[::1] pivots,
                Py_ssize_t rank, long long[::1] vec, long long p):
    cdef Py_ssize_t k, j, n = vec.shape[0]
    cdef long long f, x
    for k in range(rank):
        f = vec[pivots[k]]
        if f == 0:
            continue
        for j in range(n):
            x = vec[j] - f * basis[k, j]
            x = x % p
            if x < 0:
                x += p
            vec[j] = x
