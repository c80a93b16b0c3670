"""Compare the compiled and pure-Python kernels on the same workloads.

    python benchmarks/bench_search.py [--repeat 3]
"""
from __future__ import annotations

import argparse
import random
import time

from orientham import kernels
from orientham.expander import is_robust_outexpander
from orientham.extremal import build_extremal
from orientham.graph import random_oriented_graph, rotational_tournament
from orientham.pattern import Pattern, random_pattern
from orientham.solver import find_oriented_cycle


def workloads():
    rng = random.Random(0)
    g16 = random_oriented_graph(16, 5, seed=1)
    patterns16 = [random_pattern(16, rng) for _ in range(20)]
    for n in (12, 16):
        g = build_extremal(n).graph
        yield f"antidirected Hamilton, extremal n={n} (none)", lambda k, g=g, n=n: find_oriented_cycle(g, Pattern.antidirected(n), kernel=k)
    yield "20 random Hamilton patterns, n=16", lambda k: [find_oriented_cycle(g16, p, kernel=k) for p in patterns16]
    t17 = rotational_tournament(17)
    yield "exhaustive expander scan, rotational n=17", lambda k: is_robust_outexpander(t17, 0.05, 0.1, kernel=k)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    names = kernels.available()
    print(f"kernels: {', '.join(names)}")
    print(f"{'workload':50s}" + "".join(f"{n:>12s}" for n in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in workloads():
        secs = [best_of(lambda: fn(n), args.repeat) for n in names]
        row = f"{label:50s}" + "".join(f"{s:11.4f}s" for s in secs)
        if len(secs) > 1:
            row += f"{secs[0] / secs[1]:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
