"""Compare the compiled and pure-Python kernel backends.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``.
"""
import argparse
import timeit

import numpy as np

from foxforms import kernels
from foxforms import liegroup as lg


def cases(rng):
    letters = np.array([int(s) * int(i) for s, i in zip(rng.choice([-1, 1], 4000), rng.integers(1, 5, 4000))],
                       dtype=np.int64)
    word = [int(a) for a in rng.choice([1, 2, 3, 4, -1, -2, -3, -4], 24)]
    for n in (2, 3):
        X = lg.haar_configuration(rng, 4, n)
        Xinv = np.conj(np.swapaxes(X, -1, -2)).copy()
        V = lg.random_algebra(rng, (3, 4), n)
        yield f"word_eval_diff  len=24 SU({n}) batch=3", lambda X=X, Xinv=Xinv, V=V: kernels.word_eval_diff(word, X, Xinv, V)
    yield "reduce_letters  len=4000", lambda: kernels.reduce_letters(letters)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=2000)
    args = ap.parse_args()
    backends = sorted(kernels.available_backends(), key=lambda b: b != "python")
    rng = np.random.default_rng(0)
    named = list(cases(rng))
    original = kernels.BACKEND
    print(f"{'kernel':40s}" + "".join(f"{b:>14s}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for name, fn in named:
        times = []
        for b in backends:
            kernels.use_backend(b)
            fn()
            times.append(min(timeit.repeat(fn, number=args.repeat, repeat=3)) / args.repeat * 1e6)
        row = f"{name:40s}" + "".join(f"{t:11.2f} us" for t in times)
        if len(times) > 1:
            row += f"{times[0] / times[-1]:11.1f}x"
        print(row)
    kernels.use_backend(original)


if __name__ == "__main__":
    main()
