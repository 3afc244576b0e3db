"""Time the compiled and pure-Python kernels on identical inputs.

    python3 benchmarks/bench_kernels.py --n 100000 --repeat 3
"""

import argparse
import time

import numpy as np

from fringetrees import _backend


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=100_000)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    n = args.n
    choices = rng.integers(0, 2 * (2 * np.arange(1, n, dtype=np.int64) - 1))
    uniforms = rng.random(n - 1)
    left, right = _backend.BACKENDS["python"].remy_tree(choices)

    cases = {
        "remy_tree": lambda k: k.remy_tree(choices),
        "bst_tree": lambda k: k.bst_tree(n, uniforms),
        "scan": lambda k: k.scan(left, right),
    }
    names = _backend.available()
    print(f"n={n}  repeat={args.repeat}  backends={','.join(names)}")
    print(f"{'kernel':<10}" + "".join(f"{b:>12}" for b in names) + f"{'speedup':>10}")
    for case, fn in cases.items():
        secs = {b: best_of(lambda: fn(_backend.BACKENDS[b]), args.repeat) for b in names}
        ratio = secs["python"] / secs["compiled"] if "compiled" in secs else float("nan")
        print(f"{case:<10}" + "".join(f"{secs[b]:>11.4f}s" for b in names) + f"{ratio:>9.1f}x")


if __name__ == "__main__":
    main()
