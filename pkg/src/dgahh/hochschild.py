"""Hochschild homology HH^Z(X; F_p) through the normalized cyclic bar complex.

X is reduced mod p (valid because X is degreewise free), and F_p is a
bimodule through the augmentation on both sides, so the complex in bar
degree m is spanned by words [a_1|...|a_m] of positive-degree basis
elements. Total degree is m + sum |a_i|. The differential is

    sum_{i=1}^{m-1} (-1)^i [..|a_i a_{i+1}|..]  +  (-1)^m D

where D is the internal differential with Koszul signs. The two outer
faces multiply through the augmentation and vanish on positive-degree
letters; the unnormalized complex keeps them and the unit letter.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field, replace

from .dga import Dga, DgaError, base_change_mod_p, dga_from_presentation, is_zero_differential
from .graded import (Generator, GradedAlgebraPresentation, GradedDims, ParityError,
                     PresentationError, poincare_dims)
from .linalg import backend


class HochschildError(ValueError):
    pass


@dataclass
class BarComplex:
    """Cyclic bar complex split into blocks preserved by the differential.

    ``blocks[key]`` lists the words of that block; ``key[0]`` is the total
    degree. ``images[key]`` holds, per word, the sparse image in
    ``target[key]``.
    """

    dga: Dga  # the F_p-DGA the words are built from
    p: int
    top: int
    normalized: bool
    letters: list  # (degree, basis index) per letter id
    blocks: dict = field(default_factory=dict)
    images: dict = field(default_factory=dict)
    target: dict = field(default_factory=dict)
    bigraded: bool = False

    def dims(self):
        out = {}
        for key, words in self.blocks.items():
            out[key[0]] = out.get(key[0], 0) + len(words)
        return out

    def block_rank(self, key) -> int:
        imgs = self.images.get(key)
        tgt = self.target.get(key)
        if not imgs or tgt is None or not self.blocks.get(tgt):
            return 0
        return backend.fp_rank(imgs, len(self.blocks[tgt]), self.p)

    def homology_dims(self, through: int):
        """Dimensions per block key; valid for total degree <= through < top."""
        if through >= self.top:
            raise HochschildError(f"complex built through {self.top}; homology valid through {self.top - 1}")
        ranks = {}
        incoming = {}
        for key in self.blocks:
            if key[0] <= through + 1:
                ranks[key] = self.block_rank(key)
                t = self.target.get(key)
                if t is not None:
                    incoming[t] = key
        out = {}
        for key, words in self.blocks.items():
            if key[0] > through:
                continue
            src = incoming.get(key)
            h = len(words) - ranks.get(key, 0) - (ranks.get(src, 0) if src is not None else 0)
            if h:
                out[key] = h
        return out


def _check_input(X: Dga, p: int) -> Dga:
    if X.ring.kind not in ("Z", "Fp"):
        raise HochschildError(f"Hochschild homology needs a DGA over Z or F_p, not {X.ring!r}")
    try:
        Xp = base_change_mod_p(X, p)
    except DgaError as exc:
        raise HochschildError(str(exc)) from exc
    if Xp.lo != 0:
        raise HochschildError(f"DGA must be connective with bottom degree 0 (found {Xp.lo})")
    if Xp.dim(0) != 1 or Xp.unit != {0: 1}:
        raise HochschildError("degree 0 must be spanned by the unit")
    for i in range(Xp.dim(1)):
        if Xp.differential(1, {i: 1}):
            raise HochschildError(
                f"augmentation to F_{p} is not a chain map: d({Xp.label(1, i)}) is nonzero mod {p}")
    return Xp


def cyclic_bar(X: Dga, p: int, N: int, normalized: bool = True, check: bool = True) -> BarComplex:
    """Build the cyclic bar complex through total degree N + 1."""
    Xp = _check_input(X, p)
    top = N + 1
    zero_d = is_zero_differential(Xp)
    weights = Xp.weights if Xp.weights is not None and _weights_respect_d(Xp) else None

    letters = []
    if not normalized:
        letters.append((0, 0))
    for n in range(1, Xp.hi + 1):
        for i in range(Xp.dim(n)):
            letters.append((n, i))
    letter_id = {l: k for k, l in enumerate(letters)}
    unit_letter = letter_id.get((0, 0))
    size = [n + 1 for n, _ in letters]

    def key_of(word, total):
        t = total - len(word)
        extra = ()
        if weights is not None:
            w = None
            for l in word:
                n, i = letters[l]
                wl = weights[n][i]
                w = wl if w is None else tuple(a + b for a, b in zip(w, wl))
            extra = (w if w is not None else (),)
        if zero_d:
            return (total, len(word), t) + extra
        return (total,) + extra

    by_total = {0: [()]}
    for n in range(1, top + 1):
        ws = []
        for l, sz in enumerate(size):
            if sz <= n:
                for w in by_total[n - sz]:
                    ws.append(w + (l,))
        ws.sort()
        by_total[n] = ws

    B = BarComplex(Xp, p, top, normalized, letters, bigraded=zero_d)
    position = {}
    for n in range(0, top + 1):
        for w in by_total[n]:
            key = key_of(w, n)
            blk = B.blocks.setdefault(key, [])
            position[w] = (key, len(blk))
            blk.append(w)

    mult = Xp.mult
    dmaps = {n: Xp.d(n).columns() for n in range(1, Xp.hi + 1)}

    def image(w):
        m = len(w)
        out = {}

        def put(word, c):
            c %= p
            if c:
                out[word] = (out.get(word, 0) + c) % p

        for i in range(m - 1):
            a, b = letters[w[i]], letters[w[i + 1]]
            res = mult.get((a, b))
            if not res:
                continue
            sign = -1 if (i + 1) % 2 else 1
            n = a[0] + b[0]
            for k, c in res.items():
                lid = letter_id.get((n, k))
                if lid is None:  # product lands on the unit: degenerate word
                    continue
                put(w[:i] + (lid,) + w[i + 2:], sign * c)
        if not normalized and m:
            if w[0] == unit_letter:
                put(w[1:], 1)
            if w[-1] == unit_letter:
                put(w[:-1], -1 if m % 2 else 1)
        outer = -1 if m % 2 else 1
        koszul = 0
        for i in range(m):
            n, idx = letters[w[i]]
            if n >= 1:
                sign = outer * (-1 if koszul % 2 else 1)
                for k, c in dmaps[n][idx].items():
                    lid = letter_id.get((n - 1, k))
                    if lid is None:
                        continue
                    put(w[:i] + (lid,) + w[i + 1:], sign * c)
            koszul += n
        return out

    word_images = {}
    for key, words in B.blocks.items():
        if key[0] == 0:
            continue
        vecs = []
        tgt_key = None
        for w in words:
            img = image(w)
            word_images[w] = img
            vec = {}
            for tw, c in img.items():
                tk, ti = position[tw]
                if tgt_key is None:
                    tgt_key = tk
                elif tk != tgt_key:
                    raise HochschildError(f"differential leaves block {key}: internal error in splitting")
                vec[ti] = c
            vecs.append(vec)
        B.images[key] = vecs
        B.target[key] = tgt_key if tgt_key is not None else _guess_target(key, zero_d)
    if check:
        for w, img in word_images.items():
            acc = {}
            for tw, c in img.items():
                for uw, e in word_images.get(tw, {}).items():
                    acc[uw] = (acc.get(uw, 0) + c * e) % p
            bad = [u for u, v in acc.items() if v]
            if bad:
                raise HochschildError(f"d∘d != 0 on word {w}")
    return B


def _guess_target(key, zero_d):
    if zero_d:
        return (key[0] - 1, key[1] - 1) + key[2:]
    return (key[0] - 1,) + key[1:]


def _weights_respect_d(X: Dga) -> bool:
    W = X.weights
    for n, m in X.diff.items():
        for (i, j) in m.entries:
            if W[n - 1][i] != W[n][j]:
                return False
    return True


@dataclass
class HochschildDims:
    input_id: str
    p: int
    max_degree: int
    dims: dict  # total degree -> dimension, for 0..max_degree
    guaranteed_through: int
    bidims: dict | None = None  # (bar degree, internal degree) -> dimension
    cohomological: bool = False
    method: str = "cyclic bar, normalized"

    def as_list(self, lo=0, hi=None):
        hi = self.max_degree if hi is None else hi
        return [self.dims.get(n, 0) for n in range(lo, hi + 1)]

    def records(self):
        return [{"input": self.input_id, "prime": self.p, "degree": n, "dimension": self.dims.get(n, 0),
                 "guaranteed": n <= self.guaranteed_through}
                for n in range(0, self.max_degree + 1)]

    def to_json(self):
        return {"schema": 1, "kind": "HH^*" if self.cohomological else "HH_*", "method": self.method,
                "records": self.records()}

    def table(self):
        head = "HH^n" if self.cohomological else "HH_n"
        lines = [f"{head}({self.input_id}; F_{self.p})", f"{'n':>4}  {'dim':>4}  guaranteed"]
        for r in self.records():
            lines.append(f"{r['degree']:>4}  {r['dimension']:>4}  {'yes' if r['guaranteed'] else 'no'}")
        return "\n".join(lines)


def hh_dims(X: Dga, p: int, N: int, normalized: bool = True, input_id: str | None = None) -> HochschildDims:
    """Dimensions of HH^Z(X; F_p) in total degrees 0..N."""
    if N < 0:
        raise HochschildError("max degree must be nonnegative")
    B = cyclic_bar(X, p, N, normalized=normalized)
    per_block = B.homology_dims(N)
    dims, bidims = {}, ({} if B.bigraded else None)
    for key, h in per_block.items():
        dims[key[0]] = dims.get(key[0], 0) + h
        if B.bigraded:
            st = (key[1], key[2])
            bidims[st] = bidims.get(st, 0) + h
    guaranteed = N if X.exact_through is None else min(N, X.exact_through)
    return HochschildDims(input_id or X.name, p, N, dims, guaranteed, bidims,
                          method="cyclic bar, " + ("normalized" if normalized else "unnormalized"))


def hh_cohomology_dims(X, p: int | None = None, N: int | None = None,
                       input_id: str | None = None) -> HochschildDims:
    """Dimensions of Hochschild cohomology with F_p coefficients.

    Accepts either a DGA (with p and N) or already computed homology dims.
    Over a field the cohomology groups are the duals of the homology groups,
    so the dimensions coincide degree by degree.
    """
    h = X if isinstance(X, HochschildDims) else hh_dims(X, p, N, input_id=input_id)
    return replace(h, dims=dict(h.dims), bidims=None if h.bidims is None else dict(h.bidims),
                   cohomological=True)


def hh_graded_closed_form(P: GradedAlgebraPresentation) -> GradedAlgebraPresentation:
    """Bigraded presentation of HH(A; F_p) for A a free graded-commutative algebra.

    polynomial x        -> Λ(sx) at (1, |x|)
    exterior y (p odd)  -> Γ(sy) at (1, |y|)
    truncated z, height m (and exterior at p = 2, as height 2)
                        -> Λ(sz) at (1, |z|) ⊗ Γ(phi{m}z) at (2, m|z|)
    """
    p = P.p
    out = []
    for g in P.generators:
        d = g.degree
        kind, m = g.kind, g.m
        if kind == "dividedPower":
            raise PresentationError(f"no closed form for divided-power generator {g.name}")
        if kind == "exterior" and p == 2:
            kind, m = "truncatedPolynomial", 2
        if p != 2 and kind in ("polynomial", "truncatedPolynomial") and d % 2:
            raise ParityError(f"{kind} generator {g.name} has odd degree {d} at p={p}")
        if kind == "polynomial":
            out.append(Generator(f"s{g.name}", 1, d, "exterior"))
        elif kind == "exterior":
            out.append(Generator(f"s{g.name}", 1, d, "dividedPower"))
        else:
            out.append(Generator(f"s{g.name}", 1, d, "exterior"))
            out.append(Generator(f"phi{m}{g.name}", 2, m * d, "dividedPower"))
    return GradedAlgebraPresentation(p, out)


def closed_form_dims(P: GradedAlgebraPresentation, N: int, bigraded=False) -> GradedDims:
    return poincare_dims(hh_graded_closed_form(P), N, bigraded=bigraded)


def bar_dims_of_presentation(P: GradedAlgebraPresentation, N: int, normalized=True) -> HochschildDims:
    """HH dims of a presented algebra through the bar complex (degrees <= N)."""
    X = dga_from_presentation(P, N + 1)
    return hh_dims(X, P.p, N, normalized=normalized, input_id=_presentation_id(P))


def _presentation_id(P):
    parts = []
    for g in P.generators:
        kind = g.kind if g.m is None else f"{g.kind}({g.m})"
        parts.append(f"{kind} {g.name} {g.degree}")
    return "; ".join(parts)


def closed_form_table(P: GradedAlgebraPresentation, N: int) -> str:
    Q = hh_graded_closed_form(P)
    bi = poincare_dims(Q, N, bigraded=True)
    lines = [f"HH({_presentation_id(P)}; F_{P.p}) = "
             + " ⊗ ".join(f"{'Λ' if g.kind == 'exterior' else 'Γ'}({g.name}) ({g.s},{g.t})" for g in Q.generators),
             f"{'s':>3} {'t':>4} {'dim':>4}"]
    for (s, t), v in sorted(bi.data.items(), key=lambda kv: (kv[0][0] + kv[0][1], kv[0])):
        lines.append(f"{s:>3} {t:>4} {v:>4}")
    tot = bi.total()
    lines.append("total: " + " ".join(str(tot[n]) for n in range(N + 1)))
    return "\n".join(lines)


def closed_form_json(P: GradedAlgebraPresentation, N: int) -> dict:
    Q = hh_graded_closed_form(P)
    bi = poincare_dims(Q, N, bigraded=True)
    return {"schema": 1, "presentation": Q.to_json(),
            "bidegrees": [{"s": s, "t": t, "dimension": v} for (s, t), v in sorted(bi.data.items())],
            "records": [{"input": _presentation_id(P), "prime": P.p, "degree": n,
                         "dimension": bi.total()[n], "guaranteed": True} for n in range(N + 1)]}
