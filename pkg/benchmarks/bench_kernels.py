"""Time the compiled game kernels against their interpreted bodies.

    python3 benchmarks/bench_kernels.py [--n 20000] [--repeat 3]

Each kernel runs on identical inputs through both paths; the script checks
that the results agree and prints the median wall time of each.
"""

import argparse
import itertools
import statistics
import time

import numpy as np

from online_ramsey import _accel
from online_ramsey.game.board import sample_older_neighbours
from online_ramsey.game.kernels import single_edge_vertex_game, star_edge_game, table_size


def interpreted(func):
    return getattr(func, "py_func", func)


def vertex_case(n, seed):
    n -= n % 2
    ptr, idx = sample_older_neighbours(n, n ** -1.8, np.random.default_rng(seed))

    def run(fn):
        return fn(ptr, idx, n, 2, False, True)

    return run


def star_case(n, seed, k=3, r=2):
    budget = 2 * n
    pairs = np.random.default_rng(seed).integers(0, n, size=(4 * r * budget, 2), dtype=np.int64)
    perms = np.array(list(itertools.permutations(range(r))), dtype=np.int64)

    def run(fn):
        counts = np.zeros(n * r, dtype=np.int64)
        degree = np.zeros(n, dtype=np.int64)
        table = np.full(table_size(r * budget), -1, dtype=np.int64)
        state = np.array([0, budget, 0, 0, 0], dtype=np.int64)
        us, vs = np.zeros(r, dtype=np.int64), np.zeros(r, dtype=np.int64)
        fn(pairs, 0, n, k, r, False, perms, counts, degree, table, state, us, vs)
        return state.tolist()

    return run


def timed(run, fn, repeat):
    samples = []
    for _ in range(repeat):
        start = time.perf_counter()
        result = run(fn)
        samples.append(time.perf_counter() - start)
    return result, statistics.median(samples)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=20000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    if not _accel.NUMBA_ENABLED:
        print("numba is disabled; only the interpreted path is timed")
    print(f"{'kernel':<26}{'interpreted s':>14}{'compiled s':>12}{'speedup':>9}")
    cases = {
        "single_edge_vertex_game": (single_edge_vertex_game, vertex_case(args.n, args.seed)),
        "star_edge_game": (star_edge_game, star_case(args.n, args.seed)),
    }
    for name, (kernel, run) in cases.items():
        slow_result, slow = timed(run, interpreted(kernel), args.repeat)
        if _accel.NUMBA_ENABLED:
            run(kernel)  # compile outside the timed region
            fast_result, fast = timed(run, kernel, args.repeat)
            assert fast_result == slow_result, f"{name}: backends disagree"
            print(f"{name:<26}{slow:>14.4f}{fast:>12.5f}{slow / fast:>8.0f}x")
        else:
            print(f"{name:<26}{slow:>14.4f}{'-':>12}{'-':>9}")


if __name__ == "__main__":
    main()
