"""Compiled vs pure-Python kernel timings.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from billiard_zeta import kernels
from billiard_zeta.geometry import three_disks
from billiard_zeta.realize import realize_window
from billiard_zeta.symbolic import random_word


def _cases(scene, n_words, length, seed=0):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n_words):
        word = tuple(random_word(scene.kappa0, length, rng))
        w = realize_window(scene, word)
        idx = np.asarray(word) - 1
        cx, cy, r = scene.centers[idx, 0], scene.centers[idx, 1], scene.radii[idx]
        # interior angles, perturbed, between the two pinned end points
        seed_t = np.arctan2(w.points[:, 1] - cy, w.points[:, 0] - cx)[1:-1] + 1e-2
        out.append((w, cx, cy, r, seed_t, w.points[0], w.points[-1]))
    return out


def bench(backend, cases, repeat):
    k = kernels.get_backend(backend)

    def solve():
        for w, cx, cy, r, t, a, b in cases:
            k.solve_chain(cx[1:-1], cy[1:-1], r[1:-1], t.copy(), False,
                          kernels.POINT, a[0], a[1], kernels.POINT, b[0], b[1])

    def front():
        for w, cx, cy, r, *_ in cases:
            k.front_chain(w.points[:, 0], w.points[:, 1], cx, cy, r, 0.0, 0.5)

    return (min(timeit.repeat(solve, number=1, repeat=repeat)),
            min(timeit.repeat(front, number=1, repeat=repeat)))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--words", type=int, default=50)
    ap.add_argument("--length", type=int, default=30)
    a = ap.parse_args()
    cases = _cases(three_disks(), a.words, a.length)
    rows = {"python": bench("python", cases, a.repeat)}
    try:
        rows["cython"] = bench("cython", cases, a.repeat)
    except ImportError:
        print("compiled extension not built; python only")
    print(f"{a.words} words of length {a.length}, best of {a.repeat}")
    print(f"{'backend':8s} {'solve_chain':>12s} {'front_chain':>12s}")
    for name, (s, f) in rows.items():
        print(f"{name:8s} {s * 1e3:10.2f}ms {f * 1e3:10.2f}ms")
    if "cython" in rows:
        p, c = rows["python"], rows["cython"]
        print(f"{'speedup':8s} {p[0] / c[0]:11.1f}x {p[1] / c[1]:11.1f}x")


if __name__ == "__main__":
    main()
