"""Homology of finite chain complexes over Z, F_p and F_p[u]."""
from __future__ import annotations

from dataclasses import dataclass, field

from .matrix import ExactMatrix, rank
from .rings import Ring, _is_prime
from .snf import smith_normal_form


class InvalidComplexError(ValueError):
    def __init__(self, degree, message=None):
        self.degree = degree
        super().__init__(message or f"d∘d != 0 at degree {degree}")


@dataclass
class ChainComplex:
    """Chain complex with differentials d_n : C_n -> C_{n-1}.

    ``diffs[n]`` has shape (dims[n-1], dims[n]); missing maps are zero.
    """

    ring: Ring
    dims: dict
    diffs: dict = field(default_factory=dict)

    def dim(self, n):
        return self.dims.get(n, 0)

    def d(self, n) -> ExactMatrix:
        m = self.diffs.get(n)
        if m is None:
            return ExactMatrix.zeros(self.ring, self.dim(n - 1), self.dim(n))
        if m.shape != (self.dim(n - 1), self.dim(n)):
            raise ValueError(f"d_{n} has shape {m.shape}, expected {(self.dim(n - 1), self.dim(n))}")
        return m

    def degrees(self):
        return sorted(n for n, k in self.dims.items() if k)

    def check(self, degrees=None):
        for n in degrees if degrees is not None else self.degrees():
            if not (self.d(n) @ self.d(n + 1)).is_zero():
                raise InvalidComplexError(n)


@dataclass(frozen=True)
class HomologyGroup:
    """Finitely generated module R^free_rank + sum of R/(f) over torsion."""

    ring: Ring
    free_rank: int
    torsion: tuple = ()

    @property
    def dim(self):
        """Number of cyclic summands.

        For elementary p-torsion or a field this is the F_p-dimension.
        """
        return self.free_rank + len(self.torsion)

    def is_zero(self):
        return self.dim == 0

    def __str__(self):
        R = self.ring
        parts = []
        if self.free_rank:
            base = {"Z": "Z", "Fp": f"F_{getattr(R, 'p', '')}", "FpPoly": f"F_{getattr(R, 'p', '')}[u]"}[R.kind]
            parts.append(base if self.free_rank == 1 else f"{base}^{self.free_rank}")
        for f in self.torsion:
            if R.kind == "Z":
                parts.append(f"F_{f}" if _is_prime(f) else f"Z/{f}")
            else:
                parts.append(f"F_{R.p}" if f == (0, 1) else f"F_{R.p}[u]/({R.fmt(f)})")
        return " + ".join(parts) if parts else "0"


def homology_of_complex(cx: ChainComplex, degrees=None) -> dict:
    """Homology in each requested degree; raises InvalidComplexError if d∘d != 0."""
    degs = list(degrees) if degrees is not None else cx.degrees()
    cx.check(degs)
    out = {}
    R = cx.ring
    for n in degs:
        dn, dn1 = cx.d(n), cx.d(n + 1)
        if R.is_field:
            r_out, r_in = rank(dn), rank(dn1)
            out[n] = HomologyGroup(R, cx.dim(n) - r_out - r_in)
        else:
            r_out = smith_normal_form(dn).rank
            fac = smith_normal_form(dn1).factors
            tors = tuple(f for f in fac if not R.is_unit(f))
            out[n] = HomologyGroup(R, cx.dim(n) - r_out - len(fac), tors)
    return out


@dataclass
class Subquotient:
    """ker(d_out) / im(d_in) with chosen cycle representatives.

    ``generators[i]`` is a dense cycle vector whose class has order
    ``orders[i]`` (ring zero meaning free). ``coords`` maps a cycle to its
    coordinates in these generators, reduced modulo the orders.
    """

    ring: Ring
    dim: int
    generators: list
    orders: list
    _proj: list  # rows mapping a vector to kernel coordinates
    _change: list  # rows of the second change of basis, one per generator

    def group(self) -> HomologyGroup:
        R = self.ring
        free = sum(1 for o in self.orders if R.is_zero(o))
        return HomologyGroup(R, free, tuple(o for o in self.orders if not R.is_zero(o)))

    def coords(self, z: list) -> list:
        R = self.ring
        w = [_dot(R, row, z) for row in self._proj]
        out = []
        for row, o in zip(self._change, self.orders):
            c = _dot(R, row, w)
            if not R.is_zero(o):
                c = R.divmod(c, o)[1]
            out.append(c)
        return out


def _dot(R, a, b):
    acc = R.zero()
    for x, y in zip(a, b):
        if not R.is_zero(x) and not R.is_zero(y):
            acc = R.add(acc, R.mul(x, y))
    return acc


def subquotient(d_out: ExactMatrix, d_in: ExactMatrix) -> Subquotient:
    """Present ker(d_out)/im(d_in) for d_out: C -> C', d_in: C'' -> C."""
    R = d_out.ring
    n = d_out.ncols
    if d_in.nrows != n:
        raise ValueError("shape mismatch between incoming and outgoing maps")
    s1 = smith_normal_form(d_out)
    r = s1.rank
    V = s1.right.to_dense() if n else []
    Vinv = s1.right_inv.to_dense() if n else []
    kbasis = [[V[i][j] for i in range(n)] for j in range(r, n)]  # kernel columns
    proj = [Vinv[j] for j in range(r, n)]
    k = len(kbasis)
    # incoming boundaries in kernel coordinates
    din = d_in.to_dense()
    A = [[_dot(R, proj[a], [din[i][c] for i in range(n)]) for c in range(d_in.ncols)] for a in range(k)]
    if k == 0:
        return Subquotient(R, n, [], [], proj, [])
    s2 = smith_normal_form(ExactMatrix.from_dense(R, A) if d_in.ncols else ExactMatrix.zeros(R, k, 0))
    U2 = s2.left.to_dense()
    U2inv = s2.left_inv.to_dense()
    gens, orders, change = [], [], []
    for i in range(k):
        if i < len(s2.factors):
            f = s2.factors[i]
            if R.is_unit(f):
                continue
            order = f
        else:
            order = R.zero()
        g = [R.zero()] * n
        for l in range(k):
            c = U2inv[l][i]
            if not R.is_zero(c):
                for t in range(n):
                    if not R.is_zero(kbasis[l][t]):
                        g[t] = R.add(g[t], R.mul(c, kbasis[l][t]))
        gens.append(g)
        orders.append(order)
        change.append(U2[i])
    return Subquotient(R, n, gens, orders, proj, change)
