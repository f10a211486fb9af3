"""Pure-Python F_p elimination kernel (fallback backend)."""


def fp_rank_csr(indptr, indices, data, dim, p):
    """Rank over F_p of the vectors stored in CSR form.

    Vector k occupies indices[indptr[k]:indptr[k+1]] with matching data.
    Each incoming vector is reduced against stored pivots by its leading
    index until its leading index is new or it vanishes.
    """
    pivots = {}
    n = len(indptr) - 1
    for k in range(n):
        r = {}
        for pos in range(indptr[k], indptr[k + 1]):
            v = data[pos] % p
            if v:
                j = indices[pos]
                nv = (r.get(j, 0) + v) % p
                if nv:
                    r[j] = nv
                else:
                    del r[j]
        while r:
            lead = min(r)
            prow = pivots.get(lead)
            if prow is None:
                inv = pow(r[lead], p - 2, p)
                pivots[lead] = {j: v * inv % p for j, v in r.items()}
                break
            f = r[lead]
            for j, v in prow.items():
                nv = (r.get(j, 0) - f * v) % p
                if nv:
                    r[j] = nv
                else:
                    r.pop(j, None)
    return len(pivots)
