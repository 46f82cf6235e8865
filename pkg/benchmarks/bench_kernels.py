"""Timing comparison of the compiled and fallback kernel backends.

Runs the three hot kernels on matched inputs through every importable
backend and prints best-of-N per-call times.  The first compiled call
is excluded (JIT warm-up).

    python3 benchmarks/bench_kernels.py [--sizes 256,2048,16384] [--repeats 50]
"""

import argparse
import time

import numpy as np

from swlw._kernels import get_backends


def _inputs(n: int, rng: np.random.Generator) -> dict:
    pad = np.zeros(1, dtype=np.complex128)
    diag = rng.normal(size=n) + 1j * rng.normal(size=n)
    diag += 4.0 * np.sign(diag.real) + 4.0j * np.sign(diag.imag)
    x = np.linspace(-20.0, 20.0, n)
    h = x[1] - x[0]
    u = np.exp(-(x**2)) * np.exp(1.5j * x)
    v = np.tanh(x)
    absu2 = u.real**2 + u.imag**2
    return {
        "thomas": (
            np.concatenate((pad, rng.normal(size=n - 1) + 0j)),
            diag,
            np.concatenate((rng.normal(size=n - 1) + 0j, pad)),
            rng.normal(size=n) + 1j * rng.normal(size=n),
        ),
        "cn_newton": (u, 0.5 * v, 1.0, 0.2 * h, h, 1e-12, 25),
        "silf_update": (v, absu2, v**2, absu2, 0.2 * h, h, 0.9, 0.9, 1.0),
    }


def _best_time(fn, args, repeats: int) -> float:
    fn(*args)  # warm-up / JIT
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="256,2048,16384")
    ap.add_argument("--repeats", type=int, default=50)
    ns = ap.parse_args()
    sizes = [int(s) for s in ns.sizes.split(",")]
    backends = get_backends()
    names = list(backends)

    header = f"{'kernel':<12}{'n':>8}" + "".join(f"{b:>14}" for b in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    rng = np.random.default_rng(0)
    for n in sizes:
        args = _inputs(n, rng)
        for kernel in ("thomas", "cn_newton", "silf_update"):
            times = [
                _best_time(getattr(mod, kernel), args[kernel], ns.repeats)
                for mod in backends.values()
            ]
            row = f"{kernel:<12}{n:>8}" + "".join(
                f"{t * 1e6:>12.1f}us" for t in times
            )
            if len(times) == 2:
                row += f"{times[0] / times[1]:>9.1f}x"
            print(row)


if __name__ == "__main__":
    main()
