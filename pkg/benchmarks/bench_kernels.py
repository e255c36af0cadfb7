"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--quick]
"""
import argparse
import time

import numpy as np

from qipwsd.kernels import available_backends
from qipwsd.model import SolverConfig, build_model
from qipwsd.similarity import build_sim_tables
from qipwsd.synthetic import random_instance


def packed(seed, counts, **cfg):
    inst = random_instance(seed, counts, dim=32)
    return build_model(inst, build_sim_tables(inst), SolverConfig(**cfg)).packed


def workloads(quick):
    bf = packed(0, (6,) * (6 if quick else 8))
    bnb = packed(1, (15,) * (12 if quick else 25))
    dp = packed(2, (40,) * 50, variant="adjacent")
    ca = packed(3, (30,) * 40)

    def order(pm):
        return np.argsort(-pm.ncand, kind="stable")

    return {
        f"brute_force {bf.C.shape[0]}x{bf.C.shape[1]}":
            lambda k: k.brute_force(bf.C, bf.R, bf.P, bf.beta, bf.cand, bf.ncand),
        f"branch_and_bound {bnb.C.shape[0]}x{bnb.C.shape[1]}":
            lambda k: k.branch_and_bound(bnb.C, bnb.R, bnb.P, bnb.beta, bnb.cand, bnb.ncand,
                                         order(bnb), bnb.cand[:, 0].copy()),
        f"chain_dp {dp.C.shape[0]}x{dp.C.shape[1]}":
            lambda k: k.chain_dp(dp.C, dp.R, dp.beta, dp.cand, dp.ncand),
        f"coordinate_ascent {ca.C.shape[0]}x{ca.C.shape[1]}":
            lambda k: k.coordinate_ascent(ca.C, ca.R, ca.P, ca.beta, ca.cand, ca.ncand, ca.cand[:, 0].copy()),
    }


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true", help="smaller exhaustive workloads")
    args = ap.parse_args()

    backends = available_backends()
    names = sorted(backends)
    print(f"{'kernel':32s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, run in workloads(args.quick).items():
        results = {n: run(backends[n]) for n in names}
        if len(names) > 1:
            a, b = (np.asarray(results[n][0] if isinstance(results[n], tuple) else results[n]) for n in names)
            assert np.array_equal(a, b), f"{label}: backends disagree"
        secs = {n: best_of(lambda: run(backends[n]), args.repeat) for n in names}
        line = f"{label:32s}" + "".join(f"{secs[n]:11.4f}s" for n in names)
        if len(names) > 1:
            line += f"{secs['python'] / secs['cython']:11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
