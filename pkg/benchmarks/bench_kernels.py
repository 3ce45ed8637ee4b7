"""Time the numba and numpy kernel backends on random nets and games.

    python benchmarks/bench_kernels.py --vars 8 10 12 --domain 3 --repeat 3

Each row reports the best of ``--repeat`` runs per backend after one
warm-up call (which also triggers numba compilation).
"""
import argparse
import time

import numpy as np

from cpnet.generate import random_game, random_net
from cpnet.kernels import _numpy

try:
    from cpnet.kernels import _numba
except ImportError:  # numba missing
    _numba = None


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(arrays, total):
    def dominated(mod):
        return lambda: mod.dominated_mask(*arrays)

    def top(mod):
        return lambda: mod.top_mask(*arrays)

    def reach(mod):
        # full forward search from outcome 0, no target
        return lambda: mod.bfs(*arrays, 0, -1, False, np.full(total, -1, dtype=np.int64))

    return {"dominated_mask": dominated, "top_mask": top, "bfs": reach}


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--vars", type=int, nargs="+", default=[6, 8, 10, 12])
    ap.add_argument("--domain", type=int, default=3)
    ap.add_argument("--max-parents", type=int, default=2)
    ap.add_argument("--players", type=int, nargs="+", default=[3, 4, 5])
    ap.add_argument("--strategies", type=int, default=4)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = {"numpy": _numpy}
    if _numba is not None:
        backends["numba"] = _numba

    subjects = []
    for n in args.vars:
        net = random_net(n, args.domain, seed=args.seed, max_parents=args.max_parents)
        subjects.append((f"net n={n} d={args.domain}", net.packed))
    for n in args.players:
        g = random_game(n, args.strategies, seed=args.seed)
        subjects.append((f"game n={n} s={args.strategies}", g.packed))

    header = f"{'subject':<22}{'kernel':<16}{'outcomes':>10}" + "".join(f"{b:>12}" for b in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for label, packed in subjects:
        arrays = packed.arrays()
        for name, make in cases(arrays, packed.total).items():
            secs = {b: best_of(make(mod), args.repeat) for b, mod in backends.items()}
            line = f"{label:<22}{name:<16}{packed.total:>10}" + "".join(f"{s * 1e3:>10.2f}ms" for s in secs.values())
            if len(secs) == 2:
                line += f"{secs['numpy'] / secs['numba']:>9.1f}x"
            print(line)


if __name__ == "__main__":
    main()
