"""Compare the compiled and pure-Python F_p rank kernels.

Workloads are the differentials of cyclic bar complexes (the hot loop of
Hochschild computations) plus random sparse matrices. Ranks from both
backends must agree.

    python benchmarks/bench_rank.py [--quick]
"""
import argparse
import random
import time

from dgahh.dga import dga_from_presentation, tensor_dga
from dgahh.graded import parse_algebra
from dgahh.hochschild import cyclic_bar
from dgahh.linalg import backend
from dgahh.verify import koszul_pair_dga


def bar_workload(spec, p, N, mixed=False):
    X = dga_from_presentation(parse_algebra(spec, p), N + 1)
    if mixed:
        # a nonzero differential stops the split by bar degree, giving larger blocks
        X = tensor_dga(X, koszul_pair_dga(p))
        X.weights = None
    B = cyclic_bar(X, p, N, check=False)
    jobs = []
    for key, vecs in B.images.items():
        tgt = B.target.get(key)
        if vecs and tgt in B.blocks:
            jobs.append((backend.pack(vecs), len(B.blocks[tgt]), p))
    return jobs


def random_workload(rng, n, density, p, count):
    jobs = []
    for _ in range(count):
        vecs = [{j: rng.randrange(1, p) for j in rng.sample(range(n), max(1, int(density * n)))} for _ in range(n)]
        jobs.append((backend.pack(vecs), n, p))
    return jobs


def time_backend(jobs, which, min_seconds=0.2):
    """Seconds per pass over the workload, repeating until min_seconds elapse."""
    reps, t0 = 0, time.perf_counter()
    while True:
        ranks = [backend.fp_rank_packed(*packed, dim, p, which=which) for packed, dim, p in jobs]
        reps += 1
        el = time.perf_counter() - t0
        if el >= min_seconds:
            return el / reps, ranks


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    rng = random.Random(1)
    N = 9 if args.quick else 11
    workloads = {
        f"bar F_2[x,y]/(x^4,y^4), |x|=|y|=1, N={N}": bar_workload("truncated x 1 4; truncated y 1 4", 2, N),
        f"bar F_3[x]/(x^3) ⊗ Λ(t) ⊗ pair, N={N + 1}": bar_workload("truncated x 2 3; exterior t 1", 3, N + 1, mixed=True),
        "random 400x400, 2% fill, p=5": random_workload(rng, 400 if not args.quick else 150, 0.02, 5, 3),
    }
    names = backend.available_backends()
    print(f"backends: {', '.join(names)}")
    for label, jobs in workloads.items():
        sizes = sum(len(packed[0]) - 1 for packed, _, _ in jobs)
        row = [f"{label}  ({len(jobs)} blocks, {sizes} columns)"]
        ranks, secs = {}, {}
        for which in names:
            secs[which], ranks[which] = time_backend(jobs, which)
            row.append(f"{which:>7}: {secs[which] * 1e3:9.2f} ms")
        if len(names) > 1:
            row.append(f"speedup x{secs['python'] / secs['cython']:.1f}")
            assert ranks["cython"] == ranks["python"], "backends disagree"
        print("\n    ".join(row))


if __name__ == "__main__":
    main()
