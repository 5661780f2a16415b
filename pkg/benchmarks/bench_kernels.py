"""Timing comparison of the compiled kernels against the pure fallback.

Runs every kernel entry point on a fixed workload with both backends and
prints a table of best-of-N wall times.  Useful sanity check after
touching the extension: the two columns must agree in output (asserted
here) and the native column should win by a wide margin.

    python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

from triquad._kernels import pure

try:
    from triquad._kernels import _native as native
except ImportError:
    native = None


def _fundamental_imag(lo: int) -> list[int]:
    # fundamental discriminants D with lo < D < 0, no package imports
    out = []
    for D in range(-3, lo, -1):
        r = D % 4
        if r == 1:
            d = -D
        elif r == 0 and (-D // 4) % 4 in (1, 2):
            d = -D // 4
        else:
            continue
        k = 2
        squarefree = True
        while k * k <= d:
            if d % (k * k) == 0:
                squarefree = False
                break
            k += 1
        if squarefree:
            out.append(D)
    return out


_DISCS_FORMS = _fundamental_imag(-6000)
_DISCS_DIRICHLET = _fundamental_imag(-1500)

WORKLOADS = [
    ("sieve_primes", lambda m: m.sieve_primes(500_000)),
    ("square_part_table", lambda m: list(m.square_part_table(300_000))),
    ("kronecker", lambda m: [m.kronecker(-8587, a) for a in range(1, 100_001)]),
    ("class_number_forms", lambda m: [m.class_number_forms(-D) for D in _DISCS_FORMS]),
    ("dirichlet_class_number", lambda m: [m.dirichlet_class_number(-D) for D in _DISCS_DIRICHLET]),
    ("theta_psi_tally", lambda m: m.theta_psi_tally(300_000, 4, 1)),
]


def best_time(fn, module, repeats: int):
    best = None
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = fn(module)
        dt = time.perf_counter() - t0
        best = dt if best is None else min(best, dt)
    return best, result


def main() -> None:
    parser = argparse.ArgumentParser(description="kernel backend timings")
    parser.add_argument("--repeats", type=int, default=3, help="best-of-N (default 3)")
    args = parser.parse_args()

    if native is None:
        print("compiled backend not importable; timing the pure fallback only")
    print(f"{'kernel':<24}{'pure (s)':>12}{'native (s)':>12}{'speedup':>10}")
    for name, fn in WORKLOADS:
        t_pure, r_pure = best_time(fn, pure, args.repeats)
        if native is None:
            print(f"{name:<24}{t_pure:>12.4f}{'-':>12}{'-':>10}")
            continue
        t_native, r_native = best_time(fn, native, args.repeats)
        assert r_pure == r_native, f"backend disagreement in {name}"
        print(f"{name:<24}{t_pure:>12.4f}{t_native:>12.4f}{t_pure / t_native:>9.1f}x")


if __name__ == "__main__":
    main()
