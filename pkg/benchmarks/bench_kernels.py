"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from strobotomo import _backend
from strobotomo.randomized import random_complex, random_gkls


def cases(rng):
    out = []
    for n in (2, 4, 8):
        gen = random_gkls(rng, n, n_dissipators=3)
        ops = np.array([v for v, _ in gen.dissipators])
        rates = np.array([g for _, g in gen.dissipators])
        h = gen.hamiltonian.matrix
        out.append((f"gkls_superop n={n}", lambda b, h=h, o=ops, r=rates: _backend.gkls_superop(h, o, r, backend=b)))
        a = random_complex(rng, 4 * n)
        out.append((f"hermitian_split n={4 * n}", lambda b, a=a: _backend.hermitian_split(a, backend=b)))
    for k, m in ((8, 16), (40, 256)):
        q = np.linalg.qr(rng.normal(size=(m, k)) + 1j * rng.normal(size=(m, k)))[0].T.copy()
        w = rng.normal(size=m) + 1j * rng.normal(size=m)
        out.append((f"cgs2 {k}x{m}", lambda b, q=q, k=k, w=w: _backend.cgs2(q, k, w.copy(), backend=b)))
    v = rng.normal(size=64)
    out.append(("simplex_project m=64", lambda b: _backend.simplex_project(v, backend=b)))
    return out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    backends = _backend.available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'kernel':<24}" + "".join(f"{b:>14}" for b in backends) + ("   speedup" if len(backends) > 1 else ""))
    for name, fn in cases(np.random.default_rng(0)):
        times = []
        for b in backends:
            timer = timeit.Timer(lambda: fn(b))
            number, _ = timer.autorange()
            times.append(min(timer.repeat(args.repeat, number)) / number)
        line = f"{name:<24}" + "".join(f"{t * 1e6:>11.1f} us" for t in times)
        if len(times) > 1:
            line += f"   {times[1] / times[0]:7.2f}x"
        print(line)


if __name__ == "__main__":
    main()
