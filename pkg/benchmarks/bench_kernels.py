"""Compare the compiled and pure-Python value kernels.

    python benchmarks/bench_kernels.py [--repeat 3]

Each case is timed on every available backend and the bitmasks are compared.
"""
import argparse
import time

from qflocal import kernels

CASES = [
    ("sum of three squares", [[1, 0, 0], [0, 1, 0], [0, 0, 1]], 100_000),
    ("ternary, off-diagonal", [[2, 1, 0], [1, 3, 1], [0, 1, 5]], 100_000),
    ("quaternary, off-diagonal", [[2, 1, 0, 0], [1, 2, 1, 0], [0, 1, 3, 1], [0, 0, 1, 7]], 100_000),
    ("A4 root lattice", [[2, -1, 0, 0], [-1, 2, -1, 0], [0, -1, 2, -1], [0, 0, -1, 2]], 50_000),
    ("rank 5, off-diagonal", [[2, 1, 0, 0, 0], [1, 2, 1, 0, 0], [0, 1, 3, 1, 0], [0, 0, 1, 4, 1], [0, 0, 0, 1, 5]], 20_000),
]


def timed(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'case':28} {'bound':>8} " + " ".join(f"{b:>10}" for b in backends) + "   speedup  agree")
    for name, g, bound in CASES:
        times, masks = [], []
        for impl in backends.values():
            t, m = timed(lambda: kernels.value_mask(g, bound, impl=impl), args.repeat)
            times.append(t)
            masks.append(m)
        agree = all(m == masks[0] for m in masks)
        speed = f"{times[0] / times[-1]:8.1f}x" if len(times) > 1 else "      n/a"
        print(f"{name:28} {bound:>8} " + " ".join(f"{t:9.3f}s" for t in times) + f"  {speed}  {agree}")


if __name__ == "__main__":
    main()
