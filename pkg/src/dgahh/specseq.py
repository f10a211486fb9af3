"""Bounded computations in bigraded spectral sequences.

A page E^r is stored as subquotients of the E^2 monomial span: per
bidegree a list of representatives (sparse vectors over monomials) and a
list of accumulated boundaries. Turning a page takes kernel modulo image of
d^r : E^r_{s,t} -> E^r_{s-r, t+r-1}.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .graded import (Generator, GradedAlgebraPresentation, enumerate_basis, format_monomial)
from .linalg import rref


class SpectralSequenceError(ValueError):
    pass


class InconsistentDifferentialError(SpectralSequenceError):
    pass


class InconclusiveError(SpectralSequenceError):
    def __init__(self, pairs):
        self.pairs = pairs
        shown = ", ".join(f"{a}->{b} (r={r})" for r, a, b in pairs[:6])
        super().__init__(f"differentials not excluded by degree: {shown}")


@dataclass
class DifferentialSpec:
    """d^r on E^2 monomials: entries (source, target, coefficient).

    Monomials not listed as sources map to zero.
    """

    r: int
    entries: list
    presentation: GradedAlgebraPresentation

    def as_map(self):
        out = {}
        for src, tgt, c in self.entries:
            out.setdefault(src, {})
            out[src][tgt] = (out[src].get(tgt, 0) + c) % self.presentation.p
        return out


@dataclass
class BigradedPage:
    r: int
    presentation: GradedAlgebraPresentation
    bound: int
    monomials: dict  # (s, t) -> sorted list of E^2 monomials
    reps: dict  # (s, t) -> list of {monomial: coeff}
    boundaries: dict = field(default_factory=dict)  # (s, t) -> list of {monomial: coeff}
    history: list = field(default_factory=list)

    @property
    def p(self):
        return self.presentation.p

    def dim(self, st):
        return len(self.reps.get(st, ()))

    def spots(self):
        return sorted((st for st, v in self.reps.items() if v), key=lambda st: (st[0] + st[1], st))

    def total_dims(self, bound=None):
        bound = self.bound if bound is None else bound
        out = [0] * (bound + 1)
        for (s, t), v in self.reps.items():
            if s + t <= bound:
                out[s + t] += len(v)
        return out

    def label(self, vec):
        P = self.presentation
        terms = []
        for mono in sorted(vec):
            c = vec[mono]
            lab = format_monomial(P, mono)
            terms.append(lab if c == 1 else f"{c}{lab}")
        return " + ".join(terms)

    def chart(self) -> str:
        """Text chart: one line per nonzero bidegree, ordered by total degree."""
        lines = [f"E^{self.r} page (p={self.p}, total degree <= {self.bound})"]
        for st in self.spots():
            labs = ", ".join(self.label(v) for v in self.reps[st])
            lines.append(f"  ({st[0]:>2},{st[1]:>3})  n={st[0] + st[1]:>3}  {labs}")
        return "\n".join(lines)

    def to_json(self):
        return {"r": self.r, "bound": self.bound,
                "spots": [{"s": s, "t": t, "basis": [self.label(v) for v in self.reps[(s, t)]]}
                          for (s, t) in self.spots()]}


def page_from_presentation(P: GradedAlgebraPresentation, bound: int, r: int = 2) -> BigradedPage:
    monos = {}
    for mono, st in enumerate_basis(P, bound):
        monos.setdefault(st, []).append(mono)
    for st in monos:
        monos[st].sort()
    reps = {st: [{m: 1} for m in ms] for st, ms in monos.items()}
    return BigradedPage(r, P, bound, monos, reps, {}, [f"E^{r} from presentation"])


def _coords(page: BigradedPage, st, vec):
    """Coordinates of vec in the page basis at st, modulo boundaries.

    Returns None if vec is not in the span of representatives + boundaries.
    """
    p = page.p
    monos = page.monomials.get(st, [])
    col = {m: k for k, m in enumerate(monos)}
    reps = page.reps.get(st, [])
    bnds = page.boundaries.get(st, [])
    nr = len(reps)
    if any(m not in col for m in vec):
        return None
    # solve: vec = sum c_i rep_i + sum b_j bnd_j, via elimination on an
    # augmented system whose columns are monomials plus one tag per unknown
    rows = []
    for i, v in enumerate(reps):
        row = {col[m]: c for m, c in v.items()}
        row[len(monos) + i] = 1
        rows.append(row)
    for v in bnds:
        rows.append({col[m]: c for m, c in v.items()})
    # reduce target against the row space restricted to monomial columns
    target = {col[m]: c % p for m, c in vec.items() if c % p}
    piv_rows, piv_cols = rref(rows, len(monos) + nr, p)
    coeffs = [0] * nr
    t = dict(target)
    for row, c in zip(piv_rows, piv_cols):
        if c >= len(monos):
            break
        f = t.get(c, 0)
        if f:
            for j, v in row.items():
                nv = (t.get(j, 0) - f * v) % p
                if nv:
                    t[j] = nv
                else:
                    t.pop(j, None)
    if any(j < len(monos) for j in t):
        return None
    # t now holds -(coefficients) in the tag columns
    for j, v in t.items():
        coeffs[j - len(monos)] = (-v) % p
    return coeffs


def _apply_spec(page: BigradedPage, dmap, vec):
    p = page.p
    out = {}
    for mono, c in vec.items():
        for tgt, e in dmap.get(mono, {}).items():
            out[tgt] = (out.get(tgt, 0) + c * e) % p
    return {m: c for m, c in out.items() if c}


def differential_matrix(page: BigradedPage, spec: DifferentialSpec, st):
    """Matrix (list of columns) of d^r from st in page coordinates."""
    r = spec.r
    tgt = (st[0] - r, st[1] + r - 1)
    dmap = spec.as_map()
    cols = []
    for v in page.reps.get(st, []):
        img = _apply_spec(page, dmap, v)
        if not img:
            cols.append({})
            continue
        c = _coords(page, tgt, img) if page.reps.get(tgt) or page.boundaries.get(tgt) else None
        if c is None:
            if all(page.presentation.bidegree(m) == tgt for m in img) and _in_boundaries(page, tgt, img):
                cols.append({})
                continue
            raise InconsistentDifferentialError(
                f"d^{r}({page.label(v)}) = {page.label(img)} is not a class on E^{page.r} at {tgt}")
        cols.append({k: x for k, x in enumerate(c) if x})
    return tgt, cols


def _in_boundaries(page, st, vec):
    monos = page.monomials.get(st, [])
    col = {m: k for k, m in enumerate(monos)}
    if any(m not in col for m in vec):
        return False
    rows = [{col[m]: c for m, c in v.items()} for v in page.boundaries.get(st, [])]
    before = len(rref(rows, len(monos), page.p)[1])
    rows.append({col[m]: c for m, c in vec.items()})
    return len(rref(rows, len(monos), page.p)[1]) == before


def turn_page(page: BigradedPage, spec: DifferentialSpec) -> BigradedPage:
    """E^{r+1} = ker d^r / im d^r on the bounded region."""
    if spec.r != page.r:
        raise SpectralSequenceError(f"spec is for d^{spec.r}, page is E^{page.r}")
    if spec.presentation.generators != page.presentation.generators:
        raise SpectralSequenceError("spec and page use different presentations")
    r, p = spec.r, page.p
    for src, tgt, c in spec.entries:
        (s, t), (s2, t2) = page.presentation.bidegree(src), page.presentation.bidegree(tgt)
        if (s2, t2) != (s - r, t + r - 1):
            raise InconsistentDifferentialError(
                f"d^{r} entry {format_monomial(page.presentation, src)} -> "
                f"{format_monomial(page.presentation, tgt)} has the wrong bidegree shift")
    mats = {}
    for st in page.spots():
        tgt, cols = differential_matrix(page, spec, st)
        if any(cols):
            mats[st] = (tgt, cols)
    # composite check: d^r d^r = 0
    for st, (tgt, cols) in mats.items():
        if tgt in mats:
            tgt2, cols2 = mats[tgt]
            for k, col in enumerate(cols):
                acc = {}
                for j, x in col.items():
                    for i, y in cols2[j].items():
                        acc[i] = (acc.get(i, 0) + x * y) % p
                if any(acc.values()):
                    raise InconsistentDifferentialError(
                        f"d^{r}∘d^{r} != 0 on {page.label(page.reps[st][k])}")
    new_reps, new_bnds = {}, {st: list(v) for st, v in page.boundaries.items()}
    incoming = {}
    for st, (tgt, cols) in mats.items():
        incoming[tgt] = (st, cols)
    for st in page.spots():
        reps = page.reps[st]
        k = len(reps)
        # kernel of the outgoing map, in page coordinates
        if st in mats:
            _, cols = mats[st]
            tgt = mats[st][0]
            ntgt = page.dim(tgt)
            rows = [dict() for _ in range(ntgt)]
            for j, col in enumerate(cols):
                for i, x in col.items():
                    rows[i][j] = x
            prow, pcols = rref(rows, k, p)
            pset = set(pcols)
            kernel = []
            for f in range(k):
                if f in pset:
                    continue
                v = {f: 1}
                for row, c in zip(prow, pcols):
                    if row.get(f):
                        v[c] = (-row[f]) % p
                kernel.append(v)
        else:
            kernel = [{i: 1} for i in range(k)]
        # image of the incoming map, in page coordinates
        image = []
        if st in incoming:
            _, cols = incoming[st]
            image = [c for c in cols if c]
        img_rows, img_cols = rref(image, k, p)
        # complement of the image inside the kernel, in echelon order
        reduced = []
        for v in kernel:
            v = dict(v)
            for row, c in zip(img_rows, img_cols):
                f = v.get(c, 0)
                if f:
                    for j, x in row.items():
                        nv = (v.get(j, 0) - f * x) % p
                        if nv:
                            v[j] = nv
                        else:
                            v.pop(j, None)
            if v:
                reduced.append(v)
        comp_rows, _ = rref(reduced, k, p)

        def lift(coords):
            out = {}
            for i, x in coords.items():
                for m, c in reps[i].items():
                    out[m] = (out.get(m, 0) + x * c) % p
            return {m: c for m, c in out.items() if c}

        new_reps[st] = [lift(v) for v in comp_rows]
        if image:
            new_bnds.setdefault(st, [])
            new_bnds[st] = new_bnds[st] + [lift(v) for v in img_rows]
    hist = page.history + [f"d^{r}: {sum(1 for _ in spec.entries)} entries"]
    return BigradedPage(r + 1, page.presentation, page.bound, page.monomials,
                        {st: v for st, v in new_reps.items() if v}, new_bnds, hist)


def possible_differentials(page: BigradedPage, r: int, bound=None):
    """Pairs (r, source, target) of nonzero spots that a d^r could connect."""
    bound = page.bound if bound is None else bound
    out = []
    for (s, t) in page.spots():
        if s + t > bound + 1 or s - r < 0:
            continue
        tgt = (s - r, t + r - 1)
        if page.dim(tgt):
            out.append((r, (s, t), tgt))
    return out


def e_infinity_dims(pages, bound: int):
    """Total-degree dims of E^infinity through ``bound`` from the last page.

    Every d^r with r at least the last page index must vanish by degree
    reasons on spots of total degree <= bound + 1, else InconclusiveError.
    Those spots are only final if the page reaches bound + 2, which is
    therefore required.
    """
    pages = list(pages)
    last = pages[-1]
    if bound > last.bound - 2:
        raise SpectralSequenceError(f"page built through {last.bound}; dims valid through {last.bound - 2}")
    max_s = max((s for s, _ in last.spots()), default=0)
    blocking = []
    for r in range(last.r, max_s + 1):
        blocking.extend(possible_differentials(last, r, bound))
    if blocking:
        raise InconclusiveError(blocking)
    return last.total_dims(bound)


# -- Bökstedt-type pages ---------------------------------------------------------

VARIANTS = ("Y", "X_m", "dualSteenrod")


def _variant(name):
    aliases = {"Y": "Y", "X": "X_m", "X_m": "X_m", "Xm": "X_m", "dualSteenrod": "dualSteenrod",
               "dual-steenrod": "dualSteenrod", "A": "dualSteenrod"}
    if name not in aliases:
        raise SpectralSequenceError(f"unknown variant {name!r}; choose from {', '.join(VARIANTS)}")
    return aliases[name]


def bokstedt_presentation(p: int, variant: str, bound: int, m: int = 2) -> GradedAlgebraPresentation:
    """E^2 page presentations for the Y, X_m and dual Steenrod variants.

    At odd p with d = 2p - 2:
      Y:   Γ(st0) (1,1) ⊗ Λ(sx) (1,d) ⊗ Γ(phi2x) (2,2d)
      X_m: the same with phi{m}x at (2, m d)
      dualSteenrod: Λ(sxi_r) (1, 2(p^r - 1)) ⊗ Γ(st_s) (1, 2p^s - 1), generators
      of internal degree <= bound
    At p = 2 the Y and X_m pages are Λ(sxi1) (1,1) ⊗ Γ(phi{2m}xi1) (2, 2m).
    """
    v = _variant(variant)
    if v == "Y":
        m = 2
    if m < 2:
        raise SpectralSequenceError("m must be at least 2")
    if p == 2:
        if v == "dualSteenrod":
            raise SpectralSequenceError("the dual Steenrod variant is only set up for odd p")
        return GradedAlgebraPresentation(2, [Generator("sxi1", 1, 1, "exterior"),
                                             Generator(f"phi{2 * m}xi1", 2, 2 * m, "dividedPower")])
    d = 2 * p - 2
    if v in ("Y", "X_m"):
        return GradedAlgebraPresentation(p, [Generator("st0", 1, 1, "dividedPower"),
                                             Generator("sx", 1, d, "exterior"),
                                             Generator(f"phi{m}x", 2, m * d, "dividedPower")])
    gens = []
    r = 1
    while 2 * (p ** r - 1) <= bound:
        gens.append(Generator(f"sxi{r}", 1, 2 * (p ** r - 1), "exterior"))
        r += 1
    s = 0
    while 2 * p ** s - 1 <= bound:
        gens.append(Generator(f"st{s}", 1, 2 * p ** s - 1, "dividedPower"))
        s += 1
    return GradedAlgebraPresentation(p, gens)


def bokstedt_pattern(p: int, variant: str, bound: int, m: int = 2) -> DifferentialSpec:
    """d^{p-1} g_k[st_i] = g_{k-p}[st_i] * (sx or sxi_{i+1}) for k >= p.

    Only pure divided-power monomials are sources; every other monomial
    maps to zero.
    """
    if p == 2:
        raise SpectralSequenceError("the divided-power pattern is only defined for odd p")
    v = _variant(variant)
    P = bokstedt_presentation(p, v, bound, m)
    names = [g.name for g in P.generators]
    n = len(names)
    pairs = []  # (divided generator index, exterior partner index)
    if v in ("Y", "X_m"):
        pairs.append((names.index("st0"), names.index("sx")))
    else:
        for i, g in enumerate(P.generators):
            if g.name.startswith("st"):
                partner = f"sxi{int(g.name[2:]) + 1}"
                if partner in names:
                    pairs.append((i, names.index(partner)))
    entries = []
    for gi, xi in pairs:
        g = P.generators[gi]
        k = p
        while k * g.degree <= bound:
            src = [0] * n
            src[gi] = k
            tgt = [0] * n
            tgt[gi] = k - p
            tgt[xi] = 1
            entries.append((tuple(src), tuple(tgt), 1))
            k += 1
    return DifferentialSpec(p - 1, entries, P)


@dataclass
class SpectralRun:
    pages: list
    bound: int
    dims: list

    def to_json(self):
        return {"schema": 1, "bound": self.bound, "e_infinity": self.dims,
                "pages": [pg.to_json() for pg in self.pages]}


def run_bokstedt(p: int, variant: str, bound: int, m: int = 2) -> SpectralRun:
    """Build E^2, turn at d^{p-1}, and read off E^infinity through ``bound``.

    Pages are built two degrees past ``bound``: classes in degree bound + 1
    (the only possible sources into degree ``bound``) then see all of their
    own incoming differentials. Pages r < p - 1 must carry no possible
    differential by degree reasons.
    """
    top = bound + 2
    P = bokstedt_presentation(p, variant, top, m)
    E = page_from_presentation(P, top)
    pages = [E]
    if p == 2:
        return SpectralRun(pages, bound, e_infinity_dims(pages, bound))
    for r in range(2, p - 1):
        blocking = possible_differentials(E, r, bound)
        if blocking:
            raise InconclusiveError(blocking)
        E = BigradedPage(r + 1, E.presentation, E.bound, E.monomials, E.reps, E.boundaries,
                         E.history + [f"d^{r} = 0 by degree"])
        pages.append(E)
    spec = bokstedt_pattern(p, variant, top, m)
    E = turn_page(E, spec)
    pages.append(E)
    return SpectralRun(pages, bound, e_infinity_dims(pages, bound))
