"""Compare the compiled and pure-Python kernels.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``.  Each workload is
timed on both backends and the results are checked to agree.
"""

from __future__ import annotations

import argparse
import time

from genusbound import kernels, lpsolve, oracles
from genusbound.places import inequality_system
from genusbound.weil import make_elliptic_class


def system(q, traces, D):
    return inequality_system(q, [make_elliptic_class(q, t) for t in traces], D)


def workloads():
    f2 = system(2, range(-2, 3), 8)
    f3 = system(3, range(-3, 4), 12)
    return [
        ("enumerate F_2 D=8 g=26", lambda b: lpsolve.enumerate_points(f2, 26, backend=b)),
        ("enumerate F_2 D=8 g=20", lambda b: lpsolve.enumerate_points(f2, 20, backend=b)),
        ("enumerate F_3 D=12 g=30", lambda b: lpsolve.enumerate_points(f3, 30, backend=b)),
        ("Weierstrass traces q=9", lambda b: oracles.weierstrass_traces(9, b)),
        ("Weierstrass traces q=13", lambda b: oracles.weierstrass_traces(13, b)),
    ]


def best_time(fn, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args(argv)
    if kernels.compiled is None:
        print("compiled kernels not built; only the Python backend is available")
    backends = ["python"] + (["compiled"] if kernels.compiled is not None else [])
    print(f"{'workload':28s}" + "".join(f"{b:>12s}" for b in backends) + f"{'speedup':>10s}")
    for name, fn in workloads():
        times, results = [], []
        for b in backends:
            t, r = best_time(lambda: fn(b), args.repeat)
            times.append(t)
            results.append(r)
        assert all(r == results[0] for r in results), f"backends disagree on {name}"
        speed = f"{times[0] / times[-1]:9.1f}x" if len(times) > 1 else ""
        print(f"{name:28s}" + "".join(f"{t:11.4f}s" for t in times) + speed, flush=True)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
