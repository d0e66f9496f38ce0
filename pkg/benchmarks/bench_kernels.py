"""Time the numba and numpy kernel backends side by side.

    python benchmarks/bench_kernels.py --n 256,1024,4096 --repeat 5
"""

import argparse
import time

import numpy as np

from arboral import kernels
from arboral.analysis import TraceIndex, dyadic_partitions
from arboral.generators import GeneratorSpec, generate
from arboral.greedy import run


def best_of(fn, repeat):
    fn()  # warm-up (jit compile or cache load)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def workloads(n, seed):
    inst = generate(GeneratorSpec("random", n, seed))
    access = inst.as_array()
    trace = run(inst)
    idx = TraceIndex(trace)
    width = n
    row_y = np.arange(1, n + 1, dtype=np.int64)
    regions = [p.p_block for p in dyadic_partitions(n)]

    def sweep(mod):
        return lambda: mod.greedy_sweep(access)

    def scan(mod):
        return lambda: mod.unsatisfied_scan(idx.row_ptr, idx.row_x, row_y, width, 0)

    def corners(mod):
        def go():
            for r in regions:
                mod.region_corners(idx.row_ptr, idx.row_x, idx.access, r.lo, r.hi)
        return go

    return {"greedy_sweep": sweep, "unsatisfied_scan": scan, "region_corners(dyadic)": corners}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", default="256,1024,4096")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    mods = kernels.backends()
    if "numba" not in mods:
        print("numba unavailable; timing numpy only")
    print(f"{'kernel':<24}{'n':>7}" + "".join(f"{name:>12}" for name in mods) + f"{'speedup':>10}")
    for n in (int(v) for v in args.n.split(",")):
        for name, make in workloads(n, args.seed).items():
            secs = {m: best_of(make(mod), args.repeat) for m, mod in mods.items()}
            speed = secs["numpy"] / secs["numba"] if "numba" in secs else float("nan")
            print(f"{name:<24}{n:>7}" + "".join(f"{s * 1e3:>10.2f}ms" for s in secs.values())
                  + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
