"""Compare the compiled kernels with the pure-Python fallback.

    python benchmarks/bench_kernels.py [--repeat 3] [--max-n 10]

Both backends run the same inputs; results are checked for equality
before timings are printed.
"""
import argparse
import time

import numpy as np

from nlgames import _kernels_py, kernels, rng
from nlgames.harness import _quantum_table
from nlgames.quantum import singlet_state


def best_of(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_enumeration(impls, ns, repeat):
    rows = []
    for n in ns:
        timings = {}
        results = set()
        for name, impl in impls.items():
            t, wins = best_of(lambda: impl.enumerate_wins(1, n), repeat)
            timings[name] = t
            results.add(wins)
        assert len(results) == 1, f"backends disagree at n={n}"
        rows.append((f"enumerate game1 n={n} ({4**n} tuples)", timings))
    return rows


def bench_rounds(impls, trials, rounds, repeat):
    u_a = rng.trial_uniforms(1, rng.ALICE, 0, trials, rounds).copy()
    u_b = rng.trial_uniforms(1, rng.BOB, 0, trials, rounds).copy()
    q = np.zeros((trials, rounds), dtype=np.int8)
    zeros = np.zeros(2, dtype=np.int8)
    table = _quantum_table(singlet_state())
    timings = {}
    results = []
    for name, impl in impls.items():
        def go():
            a = np.empty(q.shape, dtype=np.int8)
            b = np.empty(q.shape, dtype=np.int8)
            impl.play_rounds(q, q, u_a, u_b, kernels.QUANTUM, kernels.QUANTUM, zeros, zeros, table, a, b)
            return tuple(int(v) for v in impl.score_rounds(1, q, q, a, b))

        timings[name], res = best_of(go, repeat)
        results.append(res)
    assert len(set(results)) == 1, "backends disagree on play/score"
    return [(f"play+score singlet {trials}x{rounds} rounds", timings)]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--max-n", type=int, default=10)
    parser.add_argument("--trials", type=int, default=100_000)
    parser.add_argument("--rounds", type=int, default=10)
    args = parser.parse_args(argv)

    impls = {"python": _kernels_py}
    compiled = kernels.compiled_module()
    if compiled is None:
        print("compiled kernels not built; timing the pure-Python fallback only")
    else:
        impls["cython"] = compiled

    rows = bench_enumeration(impls, range(6, args.max_n + 1, 2), args.repeat)
    rows += bench_rounds(impls, args.trials, args.rounds, args.repeat)

    header = f"{'case':<44}" + "".join(f"{name:>12}" for name in impls) + ("     speedup" if compiled else "")
    print(header)
    for label, timings in rows:
        line = f"{label:<44}" + "".join(f"{timings[name]:>11.4f}s" for name in impls)
        if compiled:
            line += f"{timings['python'] / timings['cython']:>11.1f}x"
        print(line)


if __name__ == "__main__":
    main()
