"""Benchmark the compiled transfer-matrix kernel against the numpy fallback.

Times ``propagate`` over one-period and long-window workloads of the sizes
the Wronskian oracle actually uses, in both double and long-double modes,
and reports the speedup plus the max relative discrepancy between backends.

Run:  python3 benchmarks/bench_kernels.py
"""

import time

import numpy as np

from dislospec import _kern


def _workload(n_steps: int, rng: np.random.Generator):
    x1 = rng.uniform(0.0, 1.0, size=n_steps)
    x2 = rng.uniform(0.0, 1.0, size=n_steps)
    q1 = 0.05 * np.cos(2 * np.pi * x1)
    q2 = 0.05 * np.cos(2 * np.pi * x2)
    return q1, q2, 1.0 / n_steps


def _time(fn, repeats: int) -> float:
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    print(f"active backend: {_kern.BACKEND}")
    rng = np.random.default_rng(0)
    E = 9.87
    cases = [
        ("one period, double", 400, False, 200),
        ("one period, longdouble", 3200, True, 20),
        ("20-period window, double", 20 * 400, False, 20),
        ("20-period window, longdouble", 20 * 3200, True, 3),
    ]
    header = f"{'case':<28} {'steps':>7} {'compiled':>10} {'numpy':>10} {'speedup':>8} {'max rel diff':>13}"
    print(header)
    print("-" * len(header))
    for name, n_steps, longdouble, repeats in cases:
        q1, q2, h = _workload(n_steps, rng)
        t_c = _time(lambda: _kern.propagate(q1, q2, h, E, longdouble=longdouble), repeats)
        t_py = _time(
            lambda: _kern.propagate_python(q1, q2, h, E, longdouble=longdouble), repeats
        )
        Tc = _kern.propagate(q1, q2, h, E, longdouble=longdouble)
        Tp = _kern.propagate_python(q1, q2, h, E, longdouble=longdouble)
        rel = float(np.max(np.abs(np.asarray(Tc, float) - np.asarray(Tp, float)))) / max(
            float(np.max(np.abs(np.asarray(Tc, float)))), 1e-300
        )
        print(
            f"{name:<28} {n_steps:>7} {t_c * 1e3:>8.2f}ms {t_py * 1e3:>8.2f}ms "
            f"{t_py / t_c:>7.1f}x {rel:>13.2e}"
        )


if __name__ == "__main__":
    main()
