"""Compare the compiled and pure-Python trace kernels.

    python benchmarks/bench_kernels.py [--maxlen 10] [--repeat 3]

Both backends scan every nonidentity word of <A_0, A_1> up to ``maxlen``
for traces +-2; the script checks that they agree and prints timings.
"""

from __future__ import annotations

import argparse
import timeit

from ultraparadox import kernels

A0 = ((1, 1), (1, 2))
A1 = ((5, 2), (2, 1))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--maxlen", type=int, default=10)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = ["python"] + (["cython"] if kernels.BACKEND == "cython" else [])
    results = {}
    for b in backends:
        t = min(timeit.repeat(lambda: kernels.trace_scan(A0, A1, args.maxlen, backend=b),
                              number=1, repeat=args.repeat))
        results[b] = (t, kernels.trace_scan(A0, A1, args.maxlen, backend=b))
        words, hits = results[b][1]
        print(f"{b:>7}: {words} words, {len(hits)} parabolic, best of {args.repeat}: {t:.4f} s")
    if len(results) == 2:
        same = results["python"][1] == results["cython"][1]
        same = same and (kernels.level_traces(A0, A1, min(args.maxlen, 8), backend="python")
                         == kernels.level_traces(A0, A1, min(args.maxlen, 8), backend="cython"))
        speedup = results["python"][0] / max(results["cython"][0], 1e-9)
        print(f"results identical: {same}; speedup x{speedup:.0f}")
    else:
        print("compiled extension not built; only the Python backend was timed")


if __name__ == "__main__":
    main()
