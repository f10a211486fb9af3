"""Bigraded free graded-commutative algebras over F_p given by generators."""
from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb

from .linalg.rings import _is_prime

KINDS = ("polynomial", "exterior", "dividedPower", "truncatedPolynomial")


class PresentationError(ValueError):
    pass


class ParityError(PresentationError):
    pass


class PrimeMismatchError(PresentationError):
    pass


@dataclass(frozen=True)
class Generator:
    name: str
    s: int
    t: int
    kind: str
    m: int | None = None  # height for truncatedPolynomial

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PresentationError(f"unknown generator kind {self.kind!r}")
        if self.s < 0 or self.t < 0 or self.s + self.t < 1:
            raise PresentationError(f"generator {self.name} needs nonnegative bidegree of positive total degree")
        if self.kind == "truncatedPolynomial":
            if self.m is None or self.m < 2:
                raise PresentationError(f"truncated generator {self.name} needs height m >= 2")
        elif self.m is not None:
            raise PresentationError(f"height only applies to truncated generators ({self.name})")

    @property
    def degree(self):
        return self.s + self.t

    def max_exponent(self):
        if self.kind == "exterior":
            return 1
        if self.kind == "truncatedPolynomial":
            return self.m - 1
        return None

    def to_json(self):
        d = {"name": self.name, "s": self.s, "t": self.t, "kind": self.kind}
        if self.m is not None:
            d["m"] = self.m
        return d


@dataclass(frozen=True)
class GradedAlgebraPresentation:
    p: int
    generators: tuple

    def __post_init__(self):
        if not _is_prime(self.p):
            raise PresentationError(f"{self.p} is not prime")
        object.__setattr__(self, "generators", tuple(self.generators))
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise PresentationError(f"duplicate generator names in {names}")
        if self.p != 2:
            for g in self.generators:
                if g.kind == "exterior" and g.degree % 2 == 0:
                    raise ParityError(f"exterior generator {g.name} has even degree {g.degree} at p={self.p}")

    def index(self, name):
        for i, g in enumerate(self.generators):
            if g.name == name:
                return i
        raise KeyError(name)

    def bidegree(self, mono):
        s = t = 0
        for e, g in zip(mono, self.generators):
            s += e * g.s
            t += e * g.t
        return s, t

    def unit(self):
        return (0,) * len(self.generators)

    def to_json(self):
        return {"schema": 1, "prime": self.p, "generators": [g.to_json() for g in self.generators]}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, d):
        if isinstance(d, str):
            d = json.loads(d)
        try:
            gens = [Generator(g["name"], int(g["s"]), int(g["t"]), g["kind"], g.get("m")) for g in d["generators"]]
            return cls(int(d["prime"]), gens)
        except (KeyError, TypeError) as exc:
            raise PresentationError(f"malformed presentation: {exc}") from exc


def enumerate_basis(P: GradedAlgebraPresentation, bound: int):
    """Monomials of total degree <= bound as (exponents, (s, t)) pairs.

    Sorted by total degree, then s, then exponent tuple.
    """
    gens = P.generators
    out = []

    def rec(i, mono, deg):
        if i == len(gens):
            out.append(tuple(mono))
            return
        g = gens[i]
        cap = g.max_exponent()
        e = 0
        while deg + e * g.degree <= bound and (cap is None or e <= cap):
            mono.append(e)
            rec(i + 1, mono, deg + e * g.degree)
            mono.pop()
            e += 1

    if bound >= 0:
        rec(0, [], 0)
    res = [(m, P.bidegree(m)) for m in out]
    res.sort(key=lambda x: (x[1][0] + x[1][1], x[1][0], x[0]))
    return res


def divided_power_product(i: int, j: int, p: int) -> int:
    """Coefficient c with gamma_i * gamma_j = c * gamma_{i+j} over F_p."""
    return comb(i + j, i) % p


def multiply_monomials(P: GradedAlgebraPresentation, a, b):
    """Product of two monomials as (coefficient mod p, monomial), or None if zero."""
    p = P.p
    coeff = 1
    out = []
    for ea, eb, g in zip(a, b, P.generators):
        e = ea + eb
        cap = g.max_exponent()
        if cap is not None and e > cap:
            return None
        if g.kind == "dividedPower":
            coeff = coeff * divided_power_product(ea, eb, p) % p
            if coeff == 0:
                return None
        out.append(e)
    if p != 2:
        # move b's factors left past a's later factors
        sign = 0
        n = len(P.generators)
        for j in range(n):
            if b[j] and P.generators[j].degree % 2:
                for i in range(j + 1, n):
                    if a[i] and P.generators[i].degree % 2:
                        sign += a[i] * b[j]
        if sign % 2:
            coeff = (-coeff) % p
    return coeff, tuple(out)


def tensor(P1: GradedAlgebraPresentation, P2: GradedAlgebraPresentation) -> GradedAlgebraPresentation:
    if P1.p != P2.p:
        raise PrimeMismatchError(f"cannot tensor over F_{P1.p} with F_{P2.p}")
    return GradedAlgebraPresentation(P1.p, P1.generators + P2.generators)


def format_monomial(P: GradedAlgebraPresentation, mono) -> str:
    parts = []
    for e, g in zip(mono, P.generators):
        if not e:
            continue
        if g.kind == "dividedPower":
            parts.append(g.name if e == 1 else f"g{e}[{g.name}]")
        else:
            parts.append(g.name if e == 1 else f"{g.name}^{e}")
    return "*".join(parts) if parts else "1"


class GradedDims:
    """Dimensions indexed by total degree, or by bidegree (s, t)."""

    def __init__(self, data=None, bigraded=False):
        self.bigraded = bigraded
        self.data = {k: v for k, v in (data or {}).items() if v}

    def total(self) -> "GradedDims":
        if not self.bigraded:
            return self
        out = {}
        for (s, t), v in self.data.items():
            out[s + t] = out.get(s + t, 0) + v
        return GradedDims(out)

    def __getitem__(self, key):
        return self.data.get(key, 0)

    def as_list(self, lo, hi):
        tot = self.total()
        return [tot[n] for n in range(lo, hi + 1)]

    def convolve(self, other: "GradedDims", bound=None) -> "GradedDims":
        a, b = self.total().data, other.total().data
        out = {}
        for i, x in a.items():
            for j, y in b.items():
                if bound is None or i + j <= bound:
                    out[i + j] = out.get(i + j, 0) + x * y
        return GradedDims(out)

    def __eq__(self, other):
        return isinstance(other, GradedDims) and self.bigraded == other.bigraded and self.data == other.data

    def __repr__(self):
        return f"GradedDims({dict(sorted(self.data.items()))}{', bigraded' if self.bigraded else ''})"


def poincare_dims(P: GradedAlgebraPresentation, bound: int, bigraded=False) -> GradedDims:
    out = {}
    for _, (s, t) in enumerate_basis(P, bound):
        key = (s, t) if bigraded else s + t
        out[key] = out.get(key, 0) + 1
    return GradedDims(out, bigraded)


_KIND_ALIASES = {
    "polynomial": "polynomial", "poly": "polynomial",
    "exterior": "exterior", "ext": "exterior",
    "divided": "dividedPower", "dividedpower": "dividedPower", "gamma": "dividedPower",
    "truncated": "truncatedPolynomial", "truncatedpolynomial": "truncatedPolynomial", "trunc": "truncatedPolynomial",
}


def parse_algebra(text: str, p: int) -> GradedAlgebraPresentation:
    """Parse generator specs like "exterior x 3; truncated z 2 4; polynomial y 2".

    Each spec is ``kind name degree [height]`` in internal degree (s = 0).
    An exterior generator of even degree at odd p squares to zero, so it is
    read as a truncated polynomial generator of height 2.
    """
    gens = []
    for chunk in text.replace(",", ";").split(";"):
        words = chunk.split()
        if not words:
            continue
        if len(words) not in (3, 4):
            raise PresentationError(f"cannot parse generator spec {chunk.strip()!r}")
        kind = _KIND_ALIASES.get(words[0].lower())
        if kind is None:
            raise PresentationError(f"unknown generator kind {words[0]!r}")
        try:
            deg = int(words[2])
            m = int(words[3]) if len(words) == 4 else None
        except ValueError as exc:
            raise PresentationError(f"bad number in {chunk.strip()!r}") from exc
        if kind == "exterior" and p != 2 and deg % 2 == 0:
            kind, m = "truncatedPolynomial", 2
        gens.append(Generator(words[1], 0, deg, kind, m))
    if not gens:
        raise PresentationError("no generators given")
    return GradedAlgebraPresentation(p, gens)
