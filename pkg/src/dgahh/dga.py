"""Finite differential graded algebras with explicit bases.

Grading is homological: the differential lowers degree by one. Sign
conventions:

* Leibniz: d(ab) = d(a) b + (-1)^|a| a d(b)
* tensor differential: d(a⊗b) = da⊗b + (-1)^|a| a⊗db
* tensor product: (a⊗b)(a'⊗b') = (-1)^(|b||a'|) aa'⊗bb'

Everything outside the degree range [lo, hi] is zero, including products
that would land there.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product as iproduct

from .graded import GradedAlgebraPresentation, enumerate_basis, format_monomial, multiply_monomials
from .linalg import (ZZ, ChainComplex, ExactMatrix, HomologyGroup, PolyRing, PrimeField, Ring,
                     homology_of_complex, ring_from_json, ring_to_json, smith_normal_form, subquotient)
from .linalg.rings import _is_prime


class DgaError(ValueError):
    pass


class UnsupportedHomologyError(DgaError):
    pass


class TruncationError(DgaError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str  # "shape", "d_squared", "leibniz", "associativity", "unit", "weight"
    witness: tuple  # basis labels involved
    detail: str = ""

    def __str__(self):
        return f"{self.kind} at {', '.join(self.witness)}: {self.detail}"


@dataclass
class Dga:
    """A DGA with finitely many basis elements per degree.

    ``diff[n]`` is d_n with shape (dim(n-1), dim(n)). ``mult`` maps a pair of
    basis elements ((deg_a, i), (deg_b, j)) to a sparse vector {k: coeff} in
    degree deg_a + deg_b; absent pairs multiply to zero. ``unit`` is a sparse
    vector in degree 0, which need not be a single basis element.
    """

    ring: Ring
    lo: int
    hi: int
    labels: dict
    diff: dict = field(default_factory=dict)
    mult: dict = field(default_factory=dict)
    unit: dict = field(default_factory=dict)
    name: str = ""
    # optional multigrading preserved by d and the product (used to split
    # bar complexes into blocks); one tuple per basis element
    weights: dict | None = None
    # the DGA models its intended object only through this degree
    exact_through: int | None = None

    def dim(self, n) -> int:
        return len(self.labels.get(n, ())) if self.lo <= n <= self.hi else 0

    def degrees(self):
        return range(self.lo, self.hi + 1)

    def d(self, n) -> ExactMatrix:
        m = self.diff.get(n)
        if m is None:
            return ExactMatrix.zeros(self.ring, self.dim(n - 1), self.dim(n))
        return m

    def basis(self):
        for n in self.degrees():
            for i in range(self.dim(n)):
                yield n, i

    def label(self, n, i) -> str:
        return self.labels[n][i]

    def index_of(self, label):
        for n in self.degrees():
            if label in self.labels.get(n, ()):
                return n, self.labels[n].index(label)
        raise KeyError(label)

    def complex(self) -> ChainComplex:
        return ChainComplex(self.ring, {n: self.dim(n) for n in self.degrees()},
                            {n: self.d(n) for n in self.degrees() if self.dim(n) and self.dim(n - 1)})

    # -- arithmetic on sparse vectors {index: coeff} -------------------------

    def _clean(self, v):
        R = self.ring
        return {k: c for k, c in v.items() if not R.is_zero(c)}

    def differential(self, n, v: dict) -> dict:
        if not v or self.dim(n - 1) == 0:
            return {}
        return self.d(n).apply(v)

    def multiply(self, da, va: dict, db, vb: dict) -> dict:
        R = self.ring
        n = da + db
        if not (self.lo <= n <= self.hi):
            return {}
        out = {}
        for i, x in va.items():
            for j, y in vb.items():
                prod = self.mult.get(((da, i), (db, j)))
                if not prod:
                    continue
                xy = R.mul(x, y)
                for k, c in prod.items():
                    out[k] = R.add(out.get(k, R.zero()), R.mul(xy, c))
        return self._clean(out)

    def add(self, a: dict, b: dict, scale=None) -> dict:
        R = self.ring
        out = dict(a)
        for k, c in b.items():
            c = R.mul(scale, c) if scale is not None else c
            out[k] = R.add(out.get(k, R.zero()), c)
        return self._clean(out)

    def format_vector(self, n, v: dict) -> str:
        R = self.ring
        if not v:
            return "0"
        terms = []
        for k in sorted(v):
            c = v[k]
            lab = self.labels[n][k]
            terms.append(lab if c == R.one() else f"({R.fmt(c)}){lab}")
        return " + ".join(terms)

    # -- serialisation -------------------------------------------------------

    def to_json(self) -> dict:
        R = self.ring
        diffs = []
        for n in sorted(self.diff):
            for (i, j), v in sorted(self.diff[n].entries.items()):
                diffs.append({"degree": n, "row": i, "col": j, "value": R.to_json(v)})
        mults = []
        for (a, b) in sorted(self.mult):
            res = self.mult[(a, b)]
            if res:
                mults.append({"left": list(a), "right": list(b),
                              "result": [[k, R.to_json(c)] for k, c in sorted(res.items())]})
        d = {
            "schema": 1,
            "name": self.name,
            "ring": ring_to_json(R),
            "degrees": [self.lo, self.hi],
            "basis": {str(n): list(self.labels.get(n, ())) for n in self.degrees()},
            "differential": diffs,
            "multiplication": mults,
            "unit": [[k, R.to_json(c)] for k, c in sorted(self.unit.items())],
        }
        if self.weights is not None:
            d["weights"] = {str(n): [list(w) for w in ws] for n, ws in self.weights.items()}
        if self.exact_through is not None:
            d["exact_through"] = self.exact_through
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, d) -> "Dga":
        if isinstance(d, str):
            d = json.loads(d)
        try:
            if d.get("schema", 1) != 1:
                raise DgaError(f"unsupported schema version {d.get('schema')}")
            R = ring_from_json(d["ring"])
            lo, hi = (int(x) for x in d["degrees"])
            labels = {int(n): tuple(v) for n, v in d["basis"].items()}
            dims = {n: len(labels.get(n, ())) for n in range(lo, hi + 1)}
            ents = {}
            for e in d.get("differential", []):
                ents.setdefault(int(e["degree"]), {})[(int(e["row"]), int(e["col"]))] = R.from_json(e["value"])
            diff = {n: ExactMatrix(R, dims.get(n - 1, 0), dims.get(n, 0), es) for n, es in ents.items()}
            mult = {}
            for e in d.get("multiplication", []):
                key = (tuple(int(x) for x in e["left"]), tuple(int(x) for x in e["right"]))
                mult[key] = {int(k): R.from_json(c) for k, c in e["result"]}
            unit = {int(k): R.from_json(c) for k, c in d.get("unit", [])}
            weights = None
            if "weights" in d:
                weights = {int(n): [tuple(w) for w in ws] for n, ws in d["weights"].items()}
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            if isinstance(exc, DgaError):
                raise
            raise DgaError(f"malformed DGA description: {exc}") from exc
        X = cls(R, lo, hi, labels, diff, mult, unit, d.get("name", ""), weights, d.get("exact_through"))
        X._clean_tables()
        return X

    def _clean_tables(self):
        self.mult = {k: self._clean(v) for k, v in self.mult.items() if self._clean(v)}
        self.unit = self._clean(self.unit)


def build_dga(ring, labels_by_degree: dict, differential: dict, products, unit: dict,
              name="", weights=None, exact_through=None) -> Dga:
    """Construct a DGA from label-keyed data.

    ``differential`` maps a label to {label: coeff}; ``products`` is either
    a dict {(label, label): {label: coeff}} or a function (label, label) ->
    that sparse dict (or None). ``unit`` maps labels to coefficients.
    """
    lo, hi = min(labels_by_degree), max(labels_by_degree)
    labels = {n: tuple(labels_by_degree.get(n, ())) for n in range(lo, hi + 1)}
    where = {}
    for n, labs in labels.items():
        for i, lab in enumerate(labs):
            if lab in where:
                raise DgaError(f"duplicate basis label {lab!r}")
            where[lab] = (n, i)
    R = ring
    ents = {}
    for src, img in differential.items():
        n, j = where[src]
        for tgt, c in img.items():
            m, i = where[tgt]
            if m != n - 1:
                raise DgaError(f"d({src}) has a term {tgt} in degree {m}, expected {n - 1}")
            ents.setdefault(n, {})[(i, j)] = R.from_int(c) if isinstance(c, int) else c
    diff = {n: ExactMatrix(R, len(labels.get(n - 1, ())), len(labels[n]), es) for n, es in ents.items()}
    mult = {}
    pairs = [(a, b) for a in where for b in where] if callable(products) else list(products)
    for a, b in pairs:
        res = products(a, b) if callable(products) else products[(a, b)]
        if not res:
            continue
        (na, i), (nb, j) = where[a], where[b]
        vec = {}
        for tgt, c in res.items():
            m, k = where[tgt]
            if m != na + nb:
                raise DgaError(f"{a}*{b} has a term {tgt} in degree {m}, expected {na + nb}")
            vec[k] = R.from_int(c) if isinstance(c, int) else c
        mult[((na, i), (nb, j))] = vec
    uvec = {}
    for lab, c in unit.items():
        n, k = where[lab]
        if n != 0:
            raise DgaError("unit must live in degree 0")
        uvec[k] = R.from_int(c) if isinstance(c, int) else c
    X = Dga(R, lo, hi, labels, diff, mult, uvec, name, weights, exact_through)
    X._clean_tables()
    return X


# -- validation ---------------------------------------------------------------

def validate(X: Dga, check_associativity=True) -> list:
    """Check the DGA axioms; return a list of Violations (empty if valid)."""
    R = X.ring
    out = []
    lab = X.label
    for n in X.degrees():
        m = X.diff.get(n)
        if m is not None and m.shape != (X.dim(n - 1), X.dim(n)):
            out.append(Violation("shape", (f"d_{n}",), f"shape {m.shape}"))
    if out:
        return out
    for n in X.degrees():
        comp = X.d(n - 1) @ X.d(n) if X.dim(n - 2) else None
        if comp is not None and not comp.is_zero():
            cols = sorted({j for (_, j) in comp.entries})
            out.append(Violation("d_squared", (lab(n, cols[0]),), f"d∘d nonzero from degree {n}"))
    basis = list(X.basis())
    for (na, i), (nb, j) in iproduct(basis, basis):
        ea, eb = {i: R.one()}, {j: R.one()}
        ab = X.multiply(na, ea, nb, eb)
        lhs = X.differential(na + nb, ab) if X.lo <= na + nb <= X.hi else {}
        t1 = X.multiply(na - 1, X.differential(na, ea), nb, eb)
        t2 = X.multiply(na, ea, nb - 1, X.differential(nb, eb))
        sign = R.one() if na % 2 == 0 else R.neg(R.one())
        rhs = X.add(t1, t2, sign)
        if X._clean(lhs) != rhs:
            out.append(Violation("leibniz", (lab(na, i), lab(nb, j)),
                                 f"d(ab) = {X.format_vector(na + nb - 1, lhs)}, "
                                 f"da*b ± a*db = {X.format_vector(na + nb - 1, rhs)}"))
    if check_associativity:
        for (na, i), (nb, j) in iproduct(basis, basis):
            ab = X.multiply(na, {i: R.one()}, nb, {j: R.one()})
            for (nc, k) in basis:
                if not (X.lo <= na + nb + nc <= X.hi):
                    continue
                left = X.multiply(na + nb, ab, nc, {k: R.one()})
                bc = X.multiply(nb, {j: R.one()}, nc, {k: R.one()})
                right = X.multiply(na, {i: R.one()}, nb + nc, bc)
                if left != right:
                    out.append(Violation("associativity", (lab(na, i), lab(nb, j), lab(nc, k)), ""))
    if not X.unit or not (X.lo <= 0 <= X.hi):
        out.append(Violation("unit", (), "no unit in degree 0"))
    else:
        if X.differential(0, X.unit):
            out.append(Violation("unit", ("unit",), "d(unit) != 0"))
        for (n, i) in basis:
            e = {i: R.one()}
            if X.multiply(0, X.unit, n, e) != e or X.multiply(n, e, 0, X.unit) != e:
                out.append(Violation("unit", (lab(n, i),), "unit does not act as identity"))
    if X.weights is not None:
        out.extend(_weight_violations(X))
    return out


def _weight_violations(X: Dga):
    out = []
    W = X.weights
    add = lambda a, b: tuple(x + y for x, y in zip(a, b))
    for n, m in X.diff.items():
        for (i, j) in m.entries:
            if W[n - 1][i] != W[n][j]:
                out.append(Violation("weight", (X.label(n, j),), "differential changes weight"))
    for ((na, i), (nb, j)), res in X.mult.items():
        for k in res:
            if W[na + nb][k] != add(W[na][i], W[nb][j]):
                out.append(Violation("weight", (X.label(na, i), X.label(nb, j)), "product changes weight"))
    return out


def is_zero_differential(X: Dga) -> bool:
    return all(m.is_zero() for m in X.diff.values())


# -- homology -----------------------------------------------------------------

def homology(X: Dga, degrees=None) -> dict:
    """Homology groups {degree: HomologyGroup} of the underlying complex."""
    degs = list(degrees) if degrees is not None else list(X.degrees())
    return homology_of_complex(X.complex(), degs)


def _prime_factors(n):
    out, k = set(), 2
    while k * k <= n:
        while n % k == 0:
            out.add(k)
            n //= k
        k += 1
    if n > 1:
        out.add(n)
    return out


@dataclass
class HomologyRing:
    """Homology with cycle representatives and the induced product table.

    ``table[((na, i), (nb, j))]`` holds the coordinates, in the generators of
    degree na+nb, of the product of generator i of degree na and generator j
    of degree nb.
    """

    dga: Dga
    groups: dict  # degree -> Subquotient
    table: dict

    def group(self, n) -> HomologyGroup:
        return self.groups[n].group()

    def dims(self):
        return {n: sq.group().dim for n, sq in self.groups.items()}

    def representative(self, n, coords) -> dict:
        R = self.dga.ring
        sq = self.groups[n]
        out = {}
        for c, g in zip(coords, sq.generators):
            if R.is_zero(c):
                continue
            for k, x in enumerate(g):
                if not R.is_zero(x):
                    out[k] = R.add(out.get(k, R.zero()), R.mul(c, x))
        return self.dga._clean(out)

    def coords(self, n, cycle: dict):
        sq = self.groups.get(n)
        if sq is None:
            return []
        R = self.dga.ring
        dense = [cycle.get(k, R.zero()) for k in range(sq.dim)]
        return sq.coords(dense)

    def product(self, na, ca, nb, cb):
        """Coordinates of the product of two classes given by coordinates."""
        X = self.dga
        n = na + nb
        if n not in self.groups:
            return []
        v = X.multiply(na, self.representative(na, ca), nb, self.representative(nb, cb))
        return self.coords(n, v)

    def unit_class(self):
        return self.coords(0, self.dga.unit)

    def describe(self) -> str:
        X = self.dga
        R = X.ring
        lines = []
        for n, sq in sorted(self.groups.items()):
            lines.append(f"H_{n} = {sq.group()}")
            for g, o in zip(sq.generators, sq.orders):
                vec = {k: x for k, x in enumerate(g) if not R.is_zero(x)}
                lines.append(f"    class of {X.format_vector(n, vec)}")
        for ((na, i), (nb, j)), c in sorted(self.table.items()):
            if any(not R.is_zero(x) for x in c):
                lines.append(f"  [{na}:{i}]*[{nb}:{j}] = {[R.fmt(x) for x in c]} in degree {na + nb}")
        return "\n".join(lines)


def homology_ring(X: Dga) -> HomologyRing:
    """Homology with product table, for homology free or p-torsion for one p."""
    R = X.ring
    X.complex().check(list(X.degrees()))
    groups = {}
    for n in X.degrees():
        groups[n] = subquotient(X.d(n), X.d(n + 1))
    if not R.is_field:
        primes = set()
        for n, sq in groups.items():
            tors = [o for o in sq.orders if not R.is_zero(o)]
            free = len(sq.orders) - len(tors)
            if tors and free:
                raise UnsupportedHomologyError(f"H_{n} mixes free and torsion summands")
            for o in tors:
                if R.kind == "Z":
                    primes |= _prime_factors(o)
                else:
                    if any(o[:-1]):
                        raise UnsupportedHomologyError(f"H_{n} has torsion not of the form u^k")
                    primes.add("u")
        if len(primes) > 1:
            raise UnsupportedHomologyError(f"homology has torsion at several primes {sorted(map(str, primes))}")
    table = {}
    for na, sa in groups.items():
        for nb, sb in groups.items():
            if na + nb not in groups:
                continue
            for i, gi in enumerate(sa.generators):
                vi = {k: x for k, x in enumerate(gi) if not R.is_zero(x)}
                for j, gj in enumerate(sb.generators):
                    vj = {k: x for k, x in enumerate(gj) if not R.is_zero(x)}
                    v = X.multiply(na, vi, nb, vj)
                    dense = [v.get(k, R.zero()) for k in range(X.dim(na + nb))]
                    table[((na, i), (nb, j))] = groups[na + nb].coords(dense)
    return HomologyRing(X, groups, table)


# -- constructions ------------------------------------------------------------

def tensor_dga(X: Dga, Y: Dga, name=None) -> Dga:
    if X.ring != Y.ring:
        raise DgaError(f"ring mismatch: {X.ring!r} vs {Y.ring!r}")
    R = X.ring
    lo, hi = X.lo + Y.lo, X.hi + Y.hi
    index = {}  # (a_deg, a_idx, b_deg, b_idx) -> (degree, position)
    labels = {}
    for n in range(lo, hi + 1):
        labs = []
        for da in X.degrees():
            db = n - da
            if not (Y.lo <= db <= Y.hi):
                continue
            for i in range(X.dim(da)):
                for j in range(Y.dim(db)):
                    index[(da, i, db, j)] = (n, len(labs))
                    la, lb = X.label(da, i), Y.label(db, j)
                    labs.append(lb if la == "1" else la if lb == "1" else f"{la}⊗{lb}")
        labels[n] = tuple(labs)
    if len({lab for labs in labels.values() for lab in labs}) != len(index):
        # disambiguate repeated labels
        labels = {n: tuple(f"{X.label(k[0], k[1])}⊗{Y.label(k[2], k[3])}"
                           for k, _ in sorted(((k, v) for k, v in index.items() if v[0] == n), key=lambda x: x[1][1]))
                  for n in range(lo, hi + 1)}
    sgn = lambda e: R.one() if e % 2 == 0 else R.neg(R.one())
    ents = {}
    for (da, i, db, j), (n, pos) in index.items():
        for k, c in X.differential(da, {i: R.one()}).items():
            tgt = index[(da - 1, k, db, j)]
            ents.setdefault(n, {})
            e = ents[n].get((tgt[1], pos), R.zero())
            ents[n][(tgt[1], pos)] = R.add(e, c)
        for k, c in Y.differential(db, {j: R.one()}).items():
            tgt = index[(da, i, db - 1, k)]
            ents.setdefault(n, {})
            e = ents[n].get((tgt[1], pos), R.zero())
            ents[n][(tgt[1], pos)] = R.add(e, R.mul(sgn(da), c))
    dims = {n: len(labels[n]) for n in labels}
    diff = {n: ExactMatrix(R, dims.get(n - 1, 0), dims[n], es) for n, es in ents.items()}
    mult = {}
    for ((xa, i), (xb, k)), pa in X.mult.items():
        for ((ya, j), (yb, l)), pb in Y.mult.items():
            n1, n2 = xa + ya, xb + yb
            if not (lo <= n1 + n2 <= hi):
                continue
            s = sgn(ya * xb)
            vec = {}
            for u, cu in pa.items():
                for w, cw in pb.items():
                    _, pos = index[(xa + xb, u, ya + yb, w)]
                    vec[pos] = R.add(vec.get(pos, R.zero()), R.mul(s, R.mul(cu, cw)))
            key = ((n1, index[(xa, i, ya, j)][1]), (n2, index[(xb, k, yb, l)][1]))
            vec = {a: b for a, b in vec.items() if not R.is_zero(b)}
            if vec:
                mult[key] = vec
    unit = {}
    for i, a in X.unit.items():
        for j, b in Y.unit.items():
            _, pos = index[(0, i, 0, j)]
            unit[pos] = R.add(unit.get(pos, R.zero()), R.mul(a, b))
    weights = None
    if X.weights is not None and Y.weights is not None:
        weights = {n: [None] * dims[n] for n in labels}
        for (da, i, db, j), (n, pos) in index.items():
            weights[n][pos] = tuple(X.weights[da][i]) + tuple(Y.weights[db][j])
    exact = None
    bounds = []
    if X.exact_through is not None:
        bounds.append(X.exact_through + Y.lo)
    if Y.exact_through is not None:
        bounds.append(Y.exact_through + X.lo)
    if bounds:
        exact = min(bounds)
    Z = Dga(R, lo, hi, labels, diff, mult, unit, name or f"{X.name}⊗{Y.name}", weights, exact)
    Z._clean_tables()
    return Z


def unit_dga(ring: Ring = ZZ) -> Dga:
    return build_dga(ring, {0: ["1"]}, {}, {("1", "1"): {"1": 1}}, {"1": 1}, name="unit", weights={0: [()]})


def cone_dga(c: int, ring: Ring = ZZ) -> Dga:
    """Λ(e) with |e| = 1 and d(e) = c; over Z with c = p it models F_p."""
    prods = {("1", "1"): {"1": 1}, ("1", "e"): {"e": 1}, ("e", "1"): {"e": 1}}
    return build_dga(ring, {0: ["1"], 1: ["e"]}, {"e": {"1": c}}, prods, {"1": 1}, name=f"cone({c})")


def truncated_polynomial_dga(degree: int, height: int, ring: Ring = ZZ, name="x") -> Dga:
    """R[x]/(x^height) with zero differential; needs |x| even unless 2 = 0 in R."""
    if degree < 1 or height < 2:
        raise DgaError("need degree >= 1 and height >= 2")
    if degree % 2 and not (isinstance(ring, PrimeField) and ring.p == 2):
        raise DgaError("odd-degree polynomial generators are not graded-commutative here")
    labs = ["1"] + [name if k == 1 else f"{name}^{k}" for k in range(1, height)]
    labels = {n: [] for n in range(0, degree * (height - 1) + 1)}
    weights = {n: [] for n in labels}
    for k, lab in enumerate(labs):
        labels[k * degree].append(lab)
        weights[k * degree].append((k,))

    def prod(a, b):
        k = labs.index(a) + labs.index(b)
        return {labs[k]: 1} if k < height else None

    return build_dga(ring, labels, {}, prod, {"1": 1}, name=f"{name}^{height}", weights=weights)


def mod_p_reduction(X: Dga, p: int) -> Dga:
    """Derived reduction Λ_Z(e; de = p) ⊗ X of a Z-DGA."""
    if X.ring != ZZ:
        raise DgaError("mod-p reduction expects a DGA over Z")
    if not _is_prime(p):
        raise DgaError(f"{p} is not prime")
    return tensor_dga(cone_dga(p), X, name=f"F_{p}⊗{X.name}")


def base_change_mod_p(X: Dga, p: int) -> Dga:
    """Reduce the coefficients of a degreewise-free Z-DGA modulo p."""
    if isinstance(X.ring, PrimeField):
        if X.ring.p != p:
            raise DgaError(f"DGA is over F_{X.ring.p}, not F_{p}")
        return X
    if X.ring != ZZ:
        raise DgaError(f"cannot reduce a DGA over {X.ring!r} to F_{p}")
    F = PrimeField(p)
    diff = {n: ExactMatrix(F, m.nrows, m.ncols, {k: v % p for k, v in m.entries.items()}) for n, m in X.diff.items()}
    mult = {k: {i: c % p for i, c in v.items()} for k, v in X.mult.items()}
    Y = Dga(F, X.lo, X.hi, X.labels, diff, mult, {k: c % p for k, c in X.unit.items()},
            X.name, X.weights, X.exact_through)
    Y._clean_tables()
    return Y


def truncate(X: Dga, m: int) -> Dga:
    """Good truncation: keep degrees < m, replace degree m by X_m / im d_{m+1}.

    Raises TruncationError when the quotient is not free over the ground ring.
    """
    if X.lo < 0:
        raise TruncationError("truncation needs a connective DGA")
    if m >= X.hi:
        return X
    if m < X.lo:
        raise TruncationError(f"cannot truncate below the bottom degree {X.lo}")
    R = X.ring
    dm1 = X.d(m + 1)
    dim_m = X.dim(m)
    if dim_m == 0:
        labels = {n: X.labels[n] for n in range(X.lo, m + 1)}
        lift_cols, proj_rows = [], []
    else:
        s = smith_normal_form(dm1)
        bad = [f for f in s.factors if not R.is_unit(f)]
        if bad:
            raise TruncationError(f"X_{m}/im(d_{m + 1}) is not free: torsion {[R.fmt(f) for f in bad]}")
        r = s.rank
        U, Uinv = s.left.to_dense(), s.left_inv.to_dense()
        proj_rows = [U[i] for i in range(r, dim_m)]
        lift_cols = [{k: Uinv[k][i] for k in range(dim_m) if not R.is_zero(Uinv[k][i])} for i in range(r, dim_m)]
        labels = {n: X.labels[n] for n in range(X.lo, m)}
        labels[m] = tuple(f"[{X.format_vector(m, v)}]" if len(v) != 1 or list(v.values())[0] != R.one()
                          else X.labels[m][list(v)[0]] for v in lift_cols)

    def project(v):
        out = {}
        for a, row in enumerate(proj_rows):
            acc = R.zero()
            for k, c in v.items():
                acc = R.add(acc, R.mul(row[k], c))
            if not R.is_zero(acc):
                out[a] = acc
        return out

    diff = {n: X.diff[n] for n in range(X.lo + 1, m) if n in X.diff}
    if m > X.lo:
        ents = {}
        for a, v in enumerate(lift_cols):
            for i, c in X.differential(m, v).items():
                ents[(i, a)] = c
        diff[m] = ExactMatrix(R, X.dim(m - 1), len(lift_cols), ents)
    mult = {}
    for ((na, i), (nb, j)), res in X.mult.items():
        n = na + nb
        if n < m and na < m and nb < m:
            mult[((na, i), (nb, j))] = dict(res)
    # products landing in degree m, using lifts of degree-m classes
    elems = [(n, i, {i: R.one()}) for n in range(X.lo, m) for i in range(X.dim(n))]
    elems += [(m, a, v) for a, v in enumerate(lift_cols)]
    for na, i, va in elems:
        for nb, j, vb in elems:
            if na + nb != m:
                continue
            v = project(X.multiply(na, va, nb, vb))
            if v:
                mult[((na, i), (nb, j))] = v
    unit = X.unit if m > 0 else project(X.unit)
    Y = Dga(R, X.lo, m, labels, diff, mult, dict(unit), f"{X.name}[<= {m}]", None,
            None if X.exact_through is None else min(X.exact_through, m))
    Y._clean_tables()
    return Y


def dga_from_presentation(P: GradedAlgebraPresentation, bound: int, name=None) -> Dga:
    """F_p-DGA with zero differential on the monomials of total degree <= bound.

    Monomials above the bound are set to zero (a quotient by an ideal), so
    the result agrees with the presented algebra through degree ``bound``.
    Weights are the exponent vectors.
    """
    F = PrimeField(P.p)
    mons = enumerate_basis(P, bound)
    labels, where, weights = {}, {}, {}
    for mono, (s, t) in mons:
        n = s + t
        labels.setdefault(n, [])
        weights.setdefault(n, [])
        where[mono] = (n, len(labels[n]))
        labels[n].append(format_monomial(P, mono))
        weights[n].append(mono)
    mult = {}
    for a, (na, i) in where.items():
        for b, (nb, j) in where.items():
            if na + nb > bound:
                continue
            res = multiply_monomials(P, a, b)
            if res is None:
                continue
            c, mono = res
            if c and mono in where:
                mult[((na, i), (nb, j))] = {where[mono][1]: c}
    labels = {n: tuple(labels.get(n, ())) for n in range(0, bound + 1)}
    weights = {n: weights.get(n, []) for n in range(0, bound + 1)}
    return Dga(F, 0, bound, labels, {}, mult, {0: 1}, name or "presented", weights, bound)


# -- builtins -----------------------------------------------------------------

def builtin_Y2() -> Dga:
    """Z[e1 | d(e1) = 2]/(e1^4) with |e1| = 1."""
    labs = ["1", "e1", "e1^2", "e1^3"]
    power = {lab: k for k, lab in enumerate(labs)}

    def prod(a, b):
        k = power[a] + power[b]
        return {labs[k]: 1} if k < 4 else None

    return build_dga(ZZ, {0: ["1"], 1: ["e1"], 2: ["e1^2"], 3: ["e1^3"]},
                     {"e1": {"1": 2}, "e1^3": {"e1^2": 2}}, prod, {"1": 1}, name="Y2")


def builtin_formal_polynomial(p: int, N: int) -> Dga:
    """Flat Z-model Z[x]/(x^K) ⊗ Λ(e; de = p), |x| = 2p-2, of a formal F_p[x].

    K is the least height with K|x| > N, so the model agrees with the
    untruncated Z[x] ⊗ Λ(e) in every degree at most N.
    """
    if not _is_prime(p):
        raise DgaError(f"{p} is not prime")
    if N < 0:
        raise DgaError("N must be nonnegative")
    xd = 2 * p - 2
    K = N // xd + 1
    labels = {}
    labs_of = {}
    for k in range(K):
        for eps in (0, 1):
            n = k * xd + eps
            lab = ("1" if k == 0 else "x" if k == 1 else f"x^{k}") if not eps else \
                  ("e" if k == 0 else "x*e" if k == 1 else f"x^{k}*e")
            labels.setdefault(n, []).append(lab)
            labs_of[(k, eps)] = lab
    top = (K - 1) * xd + 1
    labels = {n: labels.get(n, []) for n in range(0, top + 1)}
    diff = {labs_of[(k, 1)]: {labs_of[(k, 0)]: p} for k in range(K)}

    def prod(a, b):
        ka, ea = next(key for key, v in labs_of.items() if v == a)
        kb, eb = next(key for key, v in labs_of.items() if v == b)
        if ka + kb >= K or ea + eb > 1:
            return None
        return {labs_of[(ka + kb, ea + eb)]: 1}  # x is even, so no sign

    weights = {n: [] for n in labels}
    for n, labs in labels.items():
        for lab in labs:
            k, eps = next(key for key, v in labs_of.items() if v == lab)
            weights[n].append((k,))  # x-exponent; d keeps it
    return build_dga(ZZ, labels, diff, prod, {"1": 1}, name=f"formal-poly(p={p})",
                     weights=weights, exact_through=K * xd - 1)


def _matrix_basis_algebra(ring, degrees: dict, matrices: dict):
    """Products of basis elements that are matrix units, decomposed back into the basis."""
    def mat_mul(a, b):
        n = len(a)
        return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))

    table = {}
    for a, ma in matrices.items():
        for b, mb in matrices.items():
            prod = mat_mul(ma, mb)
            deg = degrees[a] + degrees[b]
            res = {}
            for c, mc in matrices.items():
                if degrees[c] != deg:
                    continue
                # each basis matrix is a single matrix unit: read off its entry
                (i, j), = [(i, j) for i, row in enumerate(mc) for j, x in enumerate(row) if x]
                if prod[i][j]:
                    res[c] = prod[i][j]
            recon = [[0] * len(prod) for _ in prod]
            for c, k in res.items():
                for i, row in enumerate(matrices[c]):
                    for j, x in enumerate(row):
                        recon[i][j] += k * x
            if tuple(map(tuple, recon)) != prod:
                raise DgaError(f"product {a}*{b} leaves the span of the degree-{deg} basis")
            if res:
                table[(a, b)] = res
    return table


def builtin_endomorphism_dga(p: int) -> Dga:
    """Endomorphisms of the two-term complex F_p[u] --u--> F_p[u] in degrees 0, 1.

    Basis U (degree -1), D1, D2 (degree 0), L (degree 1), multiplied as the
    2x2 matrix units U = E12, D1 = E11, D2 = E22, L = E21. The unit is D1 + D2.
    """
    R = PolyRing(p)
    u = R.u()
    degrees = {"U": -1, "D1": 0, "D2": 0, "L": 1}
    mats = {
        "L": ((0, 0), (1, 0)),
        "D1": ((1, 0), (0, 0)),
        "D2": ((0, 0), (0, 1)),
        "U": ((0, 1), (0, 0)),
    }
    table = _matrix_basis_algebra(R, degrees, mats)
    table = {k: {c: R.from_int(x) for c, x in v.items()} for k, v in table.items()}
    diff = {"L": {"D1": u, "D2": u}, "D1": {"U": R.neg(u)}, "D2": {"U": u}}
    return build_dga(R, {-1: ["U"], 0: ["D1", "D2"], 1: ["L"]}, diff, table,
                     {"D1": 1, "D2": 1}, name=f"End(p={p})")


BUILTINS = {
    "Y2": "Z[e1 | d(e1) = 2]/(e1^4): the non-formal DGA with homology F_2 in degrees 0 and 2",
    "formal-poly": "flat Z-model of the formal DGA with homology F_p[x], |x| = 2p-2",
    "endomorphism": "derived endomorphisms of F_p over F_p[u], degrees -1..1",
    "cone-p": "Λ_Z(e; de = p), a flat model of F_p",
    "unit": "the ground ring Z in degree 0",
}


def builtin(name: str, p: int = 2, max_degree: int = 12) -> Dga:
    if name == "Y2":
        return builtin_Y2()
    if name == "formal-poly":
        return builtin_formal_polynomial(p, max_degree)
    if name == "endomorphism":
        return builtin_endomorphism_dga(p)
    if name == "cone-p":
        if not _is_prime(p):
            raise DgaError(f"{p} is not prime")
        X = cone_dga(p)
        X.name = f"cone-p(p={p})"
        return X
    if name == "unit":
        return unit_dga()
    raise DgaError(f"unknown builtin {name!r}; known: {', '.join(BUILTINS)}")
