"""Smith normal form over Euclidean rings (Z, F_p[u], and fields)."""
from __future__ import annotations

from dataclasses import dataclass

from .matrix import ExactMatrix
from .rings import Ring


@dataclass
class SmithForm:
    """left @ M @ right == diag, with left_inv/right_inv the inverses.

    ``factors`` are the nonzero diagonal entries, normalised (positive over
    Z, monic over F_p[u], 1 over a field); each divides the next.
    """

    diag: ExactMatrix
    left: ExactMatrix
    right: ExactMatrix
    left_inv: ExactMatrix
    right_inv: ExactMatrix
    factors: list

    @property
    def rank(self):
        return len(self.factors)


def _identity(R, n):
    return [[R.one() if i == j else R.zero() for j in range(n)] for i in range(n)]


def smith_normal_form(m: ExactMatrix) -> SmithForm:
    R: Ring = m.ring
    nr, nc = m.nrows, m.ncols
    A = m.to_dense()
    U, Ui = _identity(R, nr), _identity(R, nr)
    V, Vi = _identity(R, nc), _identity(R, nc)

    # elementary operations, each applied to A and mirrored on the transforms
    def row_addmul(dst, src, c):  # row_dst += c * row_src
        for j in range(nc):
            if not R.is_zero(A[src][j]):
                A[dst][j] = R.add(A[dst][j], R.mul(c, A[src][j]))
        for j in range(nr):
            U[dst][j] = R.add(U[dst][j], R.mul(c, U[src][j]))
        for i in range(nr):  # inverse: col_src -= c * col_dst
            Ui[i][src] = R.sub(Ui[i][src], R.mul(c, Ui[i][dst]))

    def col_addmul(dst, src, c):  # col_dst += c * col_src
        for i in range(nr):
            if not R.is_zero(A[i][src]):
                A[i][dst] = R.add(A[i][dst], R.mul(c, A[i][src]))
        for i in range(nc):
            V[i][dst] = R.add(V[i][dst], R.mul(c, V[i][src]))
        for j in range(nc):  # inverse: row_src -= c * row_dst
            Vi[src][j] = R.sub(Vi[src][j], R.mul(c, Vi[dst][j]))

    def row_swap(a, b):
        if a != b:
            A[a], A[b] = A[b], A[a]
            U[a], U[b] = U[b], U[a]
            for row in Ui:
                row[a], row[b] = row[b], row[a]

    def col_swap(a, b):
        if a != b:
            for row in A:
                row[a], row[b] = row[b], row[a]
            for row in V:
                row[a], row[b] = row[b], row[a]
            Vi[a], Vi[b] = Vi[b], Vi[a]

    def row_scale(a, unit, unit_inv):
        A[a] = [R.mul(unit, x) for x in A[a]]
        U[a] = [R.mul(unit, x) for x in U[a]]
        for row in Ui:
            row[a] = R.mul(row[a], unit_inv)

    t = 0
    while t < min(nr, nc):
        # smallest-norm nonzero entry of the trailing block
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if not R.is_zero(A[i][j]):
                    nm = R.norm(A[i][j])
                    if best is None or nm < best[0]:
                        best = (nm, i, j)
        if best is None:
            break
        _, i0, j0 = best
        row_swap(t, i0)
        col_swap(t, j0)
        while True:
            piv = A[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if not R.is_zero(A[i][t]):
                    q, r = R.divmod(A[i][t], piv)
                    row_addmul(i, t, R.neg(q))
                    if not R.is_zero(r):
                        dirty = True
            for j in range(t + 1, nc):
                if not R.is_zero(A[t][j]):
                    q, r = R.divmod(A[t][j], piv)
                    col_addmul(j, t, R.neg(q))
                    if not R.is_zero(r):
                        dirty = True
            if not dirty:
                # enforce the divisibility chain on the trailing block
                bad = None
                for i in range(t + 1, nr):
                    for j in range(t + 1, nc):
                        if not R.is_zero(A[i][j]) and not R.is_zero(R.divmod(A[i][j], piv)[1]):
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                row_addmul(t, bad, R.one())
                continue
            # move the new smallest entry of row/col t into the pivot slot
            best = (R.norm(piv), t, t)
            for i in range(t + 1, nr):
                if not R.is_zero(A[i][t]) and R.norm(A[i][t]) < best[0]:
                    best = (R.norm(A[i][t]), i, t)
            for j in range(t + 1, nc):
                if not R.is_zero(A[t][j]) and R.norm(A[t][j]) < best[0]:
                    best = (R.norm(A[t][j]), t, j)
            row_swap(t, best[1])
            col_swap(t, best[2])
        canon, unit = R.normalize(A[t][t])
        if canon != A[t][t]:
            row_scale(t, unit, _unit_inverse(R, unit))
        t += 1

    factors = [A[i][i] for i in range(min(nr, nc)) if not R.is_zero(A[i][i])]
    return SmithForm(
        diag=ExactMatrix.from_dense(R, A) if nr and nc else ExactMatrix.zeros(R, nr, nc),
        left=ExactMatrix.from_dense(R, U) if nr else ExactMatrix.zeros(R, 0, 0),
        right=ExactMatrix.from_dense(R, V) if nc else ExactMatrix.zeros(R, 0, 0),
        left_inv=ExactMatrix.from_dense(R, Ui) if nr else ExactMatrix.zeros(R, 0, 0),
        right_inv=ExactMatrix.from_dense(R, Vi) if nc else ExactMatrix.zeros(R, 0, 0),
        factors=factors,
    )


def _unit_inverse(R, unit):
    if R.kind == "Z":
        return unit
    if R.kind == "Fp":
        return R.inv(unit)
    return (pow(unit[0], R.p - 2, R.p),)


def invariant_factors(m: ExactMatrix) -> list:
    return smith_normal_form(m).factors
