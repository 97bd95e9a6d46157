"""Compare the numba and numpy double description kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

Times the dual of the X^5_5 linear cone of surfaces and a batch of random
cones under each backend and checks that both give the same rays.
"""

import argparse
import random
import time

from cyclecones import _kernels as K
from cyclecones.cone import double_description
from cyclecones.ring import SpaceSignature
from cyclecones.tables import linear_dual


def random_cones(count, seed=1):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        d = rng.randint(6, 9)
        out.append([tuple(rng.randint(-3, 3) for _ in range(d)) for _ in range(rng.randint(12, 24))])
    return out


def x55():
    linear_dual.cache_clear()
    return linear_dual(SpaceSignature(5, 5), 2).rays


def batch(cones):
    return [double_description(rows, len(rows[0])) for rows in cones]


def timed(fn, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t)
    return best, result


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    cones = random_cones(40)
    backends = ["numpy"] + (["numba"] if K.HAVE_NUMBA else [])
    results = {}
    if "numba" in backends:  # compile outside the timed region
        K.set_backend("numba")
        batch(cones[:2])
    for name in backends:
        K.set_backend(name)
        t1, r1 = timed(x55, args.repeat)
        t2, r2 = timed(lambda: batch(cones), args.repeat)
        results[name] = (r1, r2)
        print(f"{name:>6}: X^5_5 dual {t1:7.3f}s ({len(r1)} rays)   40 random cones {t2:7.3f}s")
    if len(results) == 2:
        same = results["numpy"] == results["numba"]
        print("backends agree" if same else "BACKENDS DISAGREE")


if __name__ == "__main__":
    main()
