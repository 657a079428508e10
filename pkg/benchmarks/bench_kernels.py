#!/usr/bin/env python3
"""Benchmark the compiled point-counting kernel against its pure-Python twin.

Two workloads:
  * enumeration sweep: a_p for all good primes up to a bound (O(p) per prime)
  * BSGS order finding: a_p at scattered large primes (O(p^{1/4}) per prime)

Usage: python benchmarks/bench_kernels.py [--pmax 20000] [--big 2000000]
"""

import argparse
import time

from hasseweil import _kernels_py
from hasseweil.numtheory import is_prime, primes_up_to

try:
    from hasseweil import _kernels

    HAVE_COMPILED = True
except ImportError:
    _kernels = None
    HAVE_COMPILED = False

E37 = (0, 0, 1, -1, 0)
C4_C6 = (48, -216)


def timed(fn, *args):
    start = time.perf_counter()
    result = fn(*args)
    return result, time.perf_counter() - start


def bench_enumeration(p_max: int) -> None:
    primes = [p for p in primes_up_to(p_max) if p != 37]
    print(f"enumeration sweep, {len(primes)} primes <= {p_max}:")
    py_result, py_time = timed(_kernels_py.ap_sweep, *E37, primes)
    print(f"  python : {py_time:8.3f}s")
    if HAVE_COMPILED:
        cy_result, cy_time = timed(_kernels.ap_sweep, *E37, primes)
        assert cy_result == py_result, "kernel twins disagree"
        print(f"  cython : {cy_time:8.3f}s   ({py_time / cy_time:5.1f}x)")


def bench_bsgs(around: int, count: int = 40) -> None:
    primes = []
    candidate = around
    while len(primes) < count:
        if is_prime(candidate):
            primes.append(candidate)
        candidate += 1
    print(f"BSGS order finding, {count} primes near {around}:")
    c4, c6 = C4_C6

    def sweep(mod):
        return [mod.ap_bsgs(c4, c6, p) for p in primes]

    py_result, py_time = timed(sweep, _kernels_py)
    print(f"  python : {py_time:8.3f}s")
    if HAVE_COMPILED:
        cy_result, cy_time = timed(sweep, _kernels)
        assert cy_result == py_result, "kernel twins disagree"
        print(f"  cython : {cy_time:8.3f}s   ({py_time / cy_time:5.1f}x)")


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--pmax", type=int, default=20000)
    parser.add_argument("--big", type=int, default=2 * 10**6)
    args = parser.parse_args()
    if not HAVE_COMPILED:
        print("compiled kernel unavailable; timing the fallback only\n")
    bench_enumeration(args.pmax)
    print()
    bench_bsgs(args.big)


if __name__ == "__main__":
    main()
