"""Acceptance checks and seeded property checks.

Each check returns a CheckResult. Expected values are frozen here and
never recomputed by the code under test.
"""
from __future__ import annotations

import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations_with_replacement

from .dga import (Dga, TruncationError, build_dga, builtin, builtin_endomorphism_dga,
                  builtin_formal_polynomial, builtin_Y2, cone_dga, dga_from_presentation, homology,
                  homology_ring, mod_p_reduction, tensor_dga, truncate, truncated_polynomial_dga,
                  unit_dga, validate)
from .graded import Generator, GradedAlgebraPresentation, parse_algebra
from .hochschild import bar_dims_of_presentation, closed_form_dims, hh_dims
from .linalg import PrimeField
from .specseq import run_bokstedt

ENV_JOBS = "DGAHH_JOBS"


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get(ENV_JOBS, "1")))
    except ValueError:
        return 1


@dataclass
class CheckResult:
    id: str
    description: str
    expected: object
    actual: object
    passed: bool
    seconds: float = 0.0

    def to_json(self):
        # runtimes are left out so identical runs give identical JSON
        return {"id": self.id, "description": self.description, "expected": self.expected,
                "actual": self.actual, "passed": self.passed}

    def line(self):
        return (f"[{'PASS' if self.passed else 'FAIL'}] {self.id}: {self.description}\n"
                f"       expected {self.expected}\n       actual   {self.actual}  ({self.seconds:.2f}s)")


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        res = fn(*args, **kwargs)
        res.seconds = time.perf_counter() - t0
        return res
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


# -- acceptance criteria --------------------------------------------------------

@_timed
def check_hh_y2():
    t0 = time.perf_counter()
    dims = hh_dims(builtin_Y2(), 2, 6).as_list(0, 6)
    el = time.perf_counter() - t0
    exp = [1, 0, 1, 0, 0, 0, 1]
    return CheckResult("hh-nonformal", "HH(Y2; F_2) in degrees 0..6 via the cyclic bar complex, under 60 s",
                       exp, dims, dims == exp and el < 60)


@_timed
def check_hh_formal():
    t0 = time.perf_counter()
    dims = hh_dims(builtin_formal_polynomial(2, 7), 2, 7).as_list(0, 7)
    el = time.perf_counter() - t0
    exp = [1, 0, 1, 1, 1, 1, 1, 1]
    return CheckResult("hh-formal", "HH(formal polynomial model; F_2) in degrees 0..7, under 60 s",
                       exp, dims, dims == exp and el < 60)


@_timed
def check_mod2_ring():
    H = homology_ring(mod_p_reduction(builtin_Y2(), 2))
    dims = [H.group(n).dim for n in range(0, 5)]
    xi = [1]
    xi2 = H.product(1, xi, 1, xi)
    xi3 = H.product(2, xi2, 1, xi)
    xi4 = H.product(3, xi3, 1, xi)
    actual = {"dims": dims, "xi^2": xi2, "xi^3": xi3, "xi^4": xi4 or [0]}
    exp = {"dims": [1, 1, 1, 1, 0], "xi^2": [1], "xi^3": [1], "xi^4": [0]}
    return CheckResult("mod2-ring", "homology ring of F_2 ⊗ Y2 is F_2[xi]/(xi^4), |xi| = 1",
                       exp, actual, actual == exp)


@_timed
def check_endomorphism():
    actual, exp = {}, {}
    for p in (2, 3, 5):
        X = builtin_endomorphism_dga(p)
        viol = validate(X)
        H = homology(X)
        actual[str(p)] = {"violations": len(viol), "H": [str(H[n]) for n in (-1, 0, 1)]}
        exp[str(p)] = {"violations": 0, "H": [f"F_{p}", f"F_{p}", "0"]}
    return CheckResult("endomorphism", "endomorphism DGA over F_p[u] is valid with homology F_p in degrees -1, 0",
                       exp, actual, actual == exp)


def oracle_singles(p):
    if p == 2:
        return ["exterior t 1", "exterior x 2", "truncated x 2 3", "truncated x 2 4",
                "polynomial x 2", "truncated xi 1 4", "polynomial y 1"]
    d = 2 * p - 2
    return ["exterior t 1", f"exterior z {2 * p - 1}", f"truncated x {d} 2", f"truncated x {d} 3",
            f"truncated x {d} 4", f"polynomial x {d}"]


def _rename(spec, suffix):
    w = spec.split()
    w[1] += suffix
    return " ".join(w)


def oracle_cases(p):
    singles = oracle_singles(p)
    cases = list(singles)
    for a, b in combinations_with_replacement(singles, 2):
        cases.append(f"{a}; {_rename(b, '2')}")
    return cases


def compare_bar_closed_form(spec: str, p: int, N: int):
    P = parse_algebra(spec, p)
    bar = bar_dims_of_presentation(P, N)
    closed = closed_form_dims(P, N, bigraded=True)
    bar_bi = {k: v for k, v in bar.bidims.items() if k[0] + k[1] <= N}
    closed_bi = {k: v for k, v in closed.data.items() if k[0] + k[1] <= N}
    return bar_bi == closed_bi, bar.as_list(0, N), closed.as_list(0, N)


@_timed
def check_oracle_equivalence(N=12, primes=(2, 3, 5), jobs=1):
    t0 = time.perf_counter()
    tasks = [(spec, p, N) for p in primes for spec in oracle_cases(p)]
    results = _map(_oracle_task, tasks, jobs)
    mismatches = [f"p={p}: {spec}" for (spec, p, _), ok in zip(tasks, results) if not ok]
    el = time.perf_counter() - t0
    return CheckResult("oracle-equivalence",
                       f"bar complex equals closed form in every bidegree of total degree <= {N} "
                       f"({len(tasks)} algebras, p in {list(primes)}), under 10 minutes",
                       [], mismatches, not mismatches and el < 600)


def _oracle_task(task):
    spec, p, N = task
    return compare_bar_closed_form(spec, p, N)[0]


@_timed
def check_spectral_sequences():
    actual, exp = {}, {}
    for p in (3, 5):
        d = 2 * p - 2
        truncpoly = [1 if (n % 2 == 0 and n <= d) else 0 for n in range(0, 2 * p + 1)]
        actual[f"Y p={p}"] = run_bokstedt(p, "Y", 2 * p).dims
        exp[f"Y p={p}"] = truncpoly
        for m in (2, 3):
            top = m * d + 2
            e = [1 if (n % 2 == 0 and n <= d) else 0 for n in range(0, top)] + [1]
            actual[f"X_{m} p={p}"] = run_bokstedt(p, "X_m", top, m).dims
            exp[f"X_{m} p={p}"] = e
    return CheckResult("spectral-sequence",
                       "E^infinity of the Y- and X_m-pages: F_p[mu]/(mu^p) below m(2p-2)+2, dim 1 there",
                       exp, actual, actual == exp)


@_timed
def check_p2_abutment():
    ss = run_bokstedt(2, "Y", 6).dims
    hh = hh_dims(builtin_Y2(), 2, 6).as_list(0, 6)
    return CheckResult("p2-abutment", "at p = 2, E^infinity of Λ(sxi1) ⊗ Γ(phi4xi1) equals HH(Y2; F_2), degrees 0..6",
                       hh, ss, ss == hh == [1, 0, 1, 0, 0, 0, 1])


# -- property families ----------------------------------------------------------

def koszul_pair_dga(p: int) -> Dga:
    """F_p-DGA on 1, a, b, ab (degrees 0..3) with d(b) = a and ba = -ab."""
    F = PrimeField(p)
    prods = {("1", "1"): {"1": 1}, ("1", "a"): {"a": 1}, ("a", "1"): {"a": 1}, ("1", "b"): {"b": 1},
             ("b", "1"): {"b": 1}, ("1", "ab"): {"ab": 1}, ("ab", "1"): {"ab": 1},
             ("a", "b"): {"ab": 1}, ("b", "a"): {"ab": -1}}
    return build_dga(F, {0: ["1"], 1: ["a"], 2: ["b"], 3: ["ab"]}, {"b": {"a": 1}}, prods, {"1": 1},
                     name=f"koszul-pair(p={p})")


def random_presentation(rng: random.Random, p: int, ngens=None) -> GradedAlgebraPresentation:
    gens = []
    for i in range(ngens or rng.randint(1, 2)):
        if p == 2:
            kind = rng.choice(["exterior", "truncatedPolynomial", "polynomial"])
            deg = rng.randint(1, 3)
        else:
            kind = rng.choice(["exterior", "truncatedPolynomial", "polynomial"])
            deg = rng.choice([1, 3]) if kind == "exterior" else rng.choice([2, 4])
        m = rng.randint(2, 4) if kind == "truncatedPolynomial" else None
        gens.append(Generator(f"g{i}", 0, deg, kind, m))
    return GradedAlgebraPresentation(p, gens)


def random_dga(rng: random.Random) -> Dga:
    """A small Z- or F_p-DGA built as a tensor product of elementary pieces."""
    if rng.random() < 0.5:
        pieces = [lambda: cone_dga(rng.randint(-6, 6)),
                  lambda: truncated_polynomial_dga(rng.choice([2, 4]), rng.randint(2, 3)),
                  builtin_Y2, unit_dga]
        X = pieces[rng.randrange(len(pieces))]()
        for _ in range(rng.randint(0, 2)):
            Y = pieces[rng.randrange(len(pieces))]()
            if sum(X.dim(n) for n in X.degrees()) * sum(Y.dim(n) for n in Y.degrees()) <= 32:
                X = tensor_dga(X, Y)
        return X
    p = rng.choice([2, 3, 5])
    F = PrimeField(p)
    X = dga_from_presentation(random_presentation(rng, p), rng.randint(3, 6))
    if rng.random() < 0.5:
        X = tensor_dga(X, cone_dga(rng.randint(0, p - 1), F))
    if rng.random() < 0.3:
        X = tensor_dga(X, koszul_pair_dga(p))
    return X


def prop_dga_axioms(seed: int, count=100):
    rng = random.Random(seed)
    dgas = [builtin_Y2(), builtin_formal_polynomial(2, 9), builtin_formal_polynomial(3, 8),
            builtin_endomorphism_dga(3), cone_dga(3), unit_dga(), mod_p_reduction(builtin_Y2(), 2)]
    dgas += [random_dga(rng) for _ in range(count)]
    bad = []
    for X in dgas:
        v = validate(X)
        if v:
            bad.append(f"{X.name}: {v[0]}")
    return bad


def prop_internal_degree(seed: int):
    bad = []
    N = 10
    for p in (2, 3):
        d = 2 * p - 2
        for m, m2 in ((2, 3), (3, 4), (2, 4)):
            a = bar_dims_of_presentation(parse_algebra(f"truncated x {d} {m}", p), N).bidims
            b = bar_dims_of_presentation(parse_algebra(f"truncated x {d} {m2}", p), N).bidims
            lim = min(m, m2) * d
            for key in set(a) | set(b):
                if key[1] < lim and a.get(key, 0) != b.get(key, 0):
                    bad.append(f"p={p} m={m},{m2} at {key}")
    return bad


def prop_kunneth(seed: int, count=6):
    rng = random.Random(seed)
    bad = []
    N = 8
    for _ in range(count):
        p = rng.choice([2, 3, 5])
        A = random_presentation(rng, p, 1)
        B = random_presentation(rng, p, 1)
        B = GradedAlgebraPresentation(p, [Generator(g.name + "b", g.s, g.t, g.kind, g.m) for g in B.generators])
        XA, XB = dga_from_presentation(A, N + 1), dga_from_presentation(B, N + 1)
        da = hh_dims(XA, p, N)
        db = hh_dims(XB, p, N)
        dab = hh_dims(tensor_dga(XA, XB), p, N).as_list(0, N)
        conv = [sum(da.dims.get(i, 0) * db.dims.get(n - i, 0) for i in range(n + 1)) for n in range(N + 1)]
        if dab != conv:
            bad.append(f"p={p}: {A.generators} ⊗ {B.generators}")
    return bad


def prop_normalization(seed: int):
    rng = random.Random(seed)
    cases = [(builtin_Y2(), 2), (builtin_formal_polynomial(2, 6), 2), (builtin_formal_polynomial(3, 6), 3),
             (unit_dga(), 3), (koszul_pair_dga(3), 3), (koszul_pair_dga(2), 2),
             (mod_p_reduction(builtin_Y2(), 2), 2)]
    for _ in range(3):
        p = rng.choice([2, 3])
        cases.append((dga_from_presentation(random_presentation(rng, p), 6), p))
    bad = []
    for X, p in cases:
        a = hh_dims(X, p, 5).as_list()
        b = hh_dims(X, p, 5, normalized=False).as_list()
        if a != b:
            bad.append(f"{X.name} p={p}: {a} vs {b}")
    return bad


def prop_truncation(seed: int):
    bad = []
    cases = [builtin_Y2(), builtin_formal_polynomial(2, 6), builtin_formal_polynomial(3, 8), cone_dga(3),
             unit_dga(), mod_p_reduction(builtin_Y2(), 2), koszul_pair_dga(3),
             dga_from_presentation(parse_algebra("exterior t 1; truncated x 2 3", 3), 6)]
    for X in cases:
        H = homology(X)
        for m in X.degrees():
            try:
                T = truncate(X, m)
            except TruncationError:
                # only legitimate when the cokernel in degree m has torsion
                if not H[m].torsion:
                    bad.append(f"{X.name}: unexpected refusal at m={m}")
                continue
            if validate(T):
                bad.append(f"{X.name}[<={m}] invalid: {validate(T)[0]}")
                continue
            HT = homology(T)
            for n in X.degrees():
                want = H[n] if n <= m else None
                got = HT.get(n)
                if want is None:
                    if got is not None and not got.is_zero():
                        bad.append(f"{X.name}[<={m}] has homology above {m}")
                elif got is None or (got.free_rank, got.torsion) != (want.free_rank, want.torsion):
                    bad.append(f"{X.name}[<={m}] changes H_{n}")
    return bad


PROPERTIES = {
    "dga-axioms": ("d∘d = 0, Leibniz, associativity and unit on builtins and 100 seeded random DGAs",
                   prop_dga_axioms),
    "internal-degree": ("F_p[x]/(x^m) and F_p[x]/(x^m') have equal bar HH below internal degree min(m,m')|x|",
                        prop_internal_degree),
    "kunneth": ("HH of a tensor product is the convolution of the factors' HH", prop_kunneth),
    "normalization": ("normalized and unnormalized complexes agree in degrees <= 5", prop_normalization),
    "truncation": ("good truncation keeps homology through m and kills it above", prop_truncation),
}


@_timed
def run_property(name: str, seed: int):
    desc, fn = PROPERTIES[name]
    bad = fn(seed)
    return CheckResult(f"property:{name}", desc, [], bad, not bad)


@_timed
def check_properties(seed=0):
    res = [run_property(name, seed) for name in PROPERTIES]
    failing = [r.id for r in res if not r.passed]
    return CheckResult("properties", "property families: " + ", ".join(PROPERTIES), [], failing, not failing)


CORE = {
    "hh-nonformal": check_hh_y2,
    "hh-formal": check_hh_formal,
    "mod2-ring": check_mod2_ring,
    "endomorphism": check_endomorphism,
    "oracle-equivalence": check_oracle_equivalence,
    "spectral-sequence": check_spectral_sequences,
    "p2-abutment": check_p2_abutment,
    "properties": check_properties,
}


def _map(fn, items, jobs):
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def _run_core(name):
    return CORE[name]()


def _run_prop(args):
    name, seed = args
    return run_property(name, seed)


def run_suite(suite: str, seed: int = 0, jobs: int | None = None):
    jobs = default_jobs() if jobs is None else jobs
    if suite == "core":
        return _map(_run_core, list(CORE), jobs)
    if suite == "properties":
        return _map(_run_prop, [(n, seed) for n in PROPERTIES], jobs)
    raise ValueError(f"unknown suite {suite!r}")
