"""Compiled vs pure-Python modular rank on random sparse and real boundary matrices.

    python3 benchmarks/bench_rank.py [--sizes 200 400] [--repeat 3]
"""

from __future__ import annotations

import argparse
import random
import time

from hocolim import kernels
from hocolim.homalg import RationalMatrix, _csr_mod_p
from hocolim.sheaf import refinement_complex
from hocolim.skeleton import cp_diagram
from hocolim.toric import cohomology_cosheaf


def random_sparse(n: int, density: float, rng: random.Random) -> RationalMatrix:
    ent = {}
    for i in range(n):
        for j in rng.sample(range(n), max(1, int(density * n))):
            ent[(i, j)] = rng.randint(-9, 9) or 1
    return RationalMatrix(n, n, ent)


def boundary_matrices(m: int) -> list[RationalMatrix]:
    H = cohomology_cosheaf(cp_diagram(m))
    return [d for F in H.pieces.values() for d in refinement_complex(F).differentials if not d.is_zero()]


def best(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def compare(label: str, M: RationalMatrix, repeat: int):
    csr = _csr_mod_p(M, kernels.PRIME)
    args = (*csr, kernels.PRIME)
    r_py = kernels.rank_mod_p(*args, backend="python")
    t_py = best(lambda: kernels.rank_mod_p(*args, backend="python"), repeat)
    if kernels.BACKEND == "cython":
        r_cy = kernels.rank_mod_p(*args, backend="cython")
        assert r_cy == r_py, (label, r_cy, r_py)
        t_cy = best(lambda: kernels.rank_mod_p(*args, backend="cython"), repeat)
        print(f"{label:<28} rank {r_py:>6}  python {t_py * 1e3:9.2f} ms  cython {t_cy * 1e3:8.2f} ms  x{t_py / t_cy:6.1f}")
    else:
        print(f"{label:<28} rank {r_py:>6}  python {t_py * 1e3:9.2f} ms  (compiled kernel not built)")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[200, 400])
    ap.add_argument("--density", type=float, default=0.02)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--cp-m", type=int, default=6, help="boundary matrices of the CP^(m-1) refinement complex")
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    print(f"backend in use: {kernels.BACKEND}")
    for n in args.sizes:
        compare(f"random {n}x{n} d={args.density}", random_sparse(n, args.density, rng), args.repeat)
    mats = sorted(boundary_matrices(args.cp_m), key=lambda M: M.nnz, reverse=True)[:3]
    for M in mats:
        compare(f"CP^{args.cp_m - 1} boundary {M.rows}x{M.cols}", M, args.repeat)


if __name__ == "__main__":
    main()
