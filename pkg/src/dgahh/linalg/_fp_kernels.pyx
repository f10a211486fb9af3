# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled F_p elimination kernel.

Same contract as the pure-Python fallback: rank of a list of sparse
vectors in CSR form. Pivot rows are kept sparse; the vector being reduced
lives in a dense scratch array so each elimination step is a plain loop.
"""
from libc.stdlib cimport malloc, calloc, free
from libc.stdint cimport int64_t


cdef inline int64_t _inv(int64_t a, int64_t p):
    cdef int64_t result = 1, base = a % p, e = p - 2
    while e > 0:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def fp_rank_csr(const int64_t[:] indptr, const int64_t[:] indices,
                const int64_t[:] data, Py_ssize_t dim, int64_t p):
    cdef Py_ssize_t n = indptr.shape[0] - 1
    if n <= 0 or dim <= 0:
        return 0
    cdef int64_t* work = <int64_t*> calloc(dim, sizeof(int64_t))
    # pivot storage: for column c, pivot row entries in piv_idx[c], piv_val[c]
    cdef int64_t** piv_idx = <int64_t**> calloc(dim, sizeof(int64_t*))
    cdef int64_t** piv_val = <int64_t**> calloc(dim, sizeof(int64_t*))
    cdef Py_ssize_t* piv_len = <Py_ssize_t*> calloc(dim, sizeof(Py_ssize_t))
    if work == NULL or piv_idx == NULL or piv_val == NULL or piv_len == NULL:
        free(work); free(piv_idx); free(piv_val); free(piv_len)
        raise MemoryError()
    cdef Py_ssize_t k, pos, j, lead, top, cnt, q
    cdef int64_t v, f, inv
    cdef Py_ssize_t rank = 0
    cdef int64_t* pi
    cdef int64_t* pv
    try:
        for k in range(n):
            lead = dim
            top = -1
            for pos in range(indptr[k], indptr[k + 1]):
                j = indices[pos]
                v = data[pos] % p
                if v < 0:
                    v += p
                work[j] = (work[j] + v) % p
                if j < lead:
                    lead = j
                if j > top:
                    top = j
            while lead <= top and work[lead] == 0:
                lead += 1
            while lead <= top:
                if piv_len[lead] == 0:
                    break
                f = work[lead]
                pi = piv_idx[lead]
                pv = piv_val[lead]
                for q in range(piv_len[lead]):
                    j = pi[q]
                    work[j] = (work[j] - f * pv[q]) % p
                    if work[j] < 0:
                        work[j] += p
                    if j > top:
                        top = j
                while lead <= top and work[lead] == 0:
                    lead += 1
            if lead <= top:
                cnt = 0
                for j in range(lead, top + 1):
                    if work[j] != 0:
                        cnt += 1
                pi = <int64_t*> malloc(cnt * sizeof(int64_t))
                pv = <int64_t*> malloc(cnt * sizeof(int64_t))
                if pi == NULL or pv == NULL:
                    free(pi); free(pv)
                    raise MemoryError()
                inv = _inv(work[lead], p)
                q = 0
                for j in range(lead, top + 1):
                    if work[j] != 0:
                        pi[q] = j
                        pv[q] = work[j] * inv % p
                        q += 1
                        work[j] = 0
                piv_idx[lead] = pi
                piv_val[lead] = pv
                piv_len[lead] = cnt
                rank += 1
        return rank
    finally:
        for j in range(dim):
            if piv_len[j]:
                free(piv_idx[j])
                free(piv_val[j])
        free(work); free(piv_idx); free(piv_val); free(piv_len)
