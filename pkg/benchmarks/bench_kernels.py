"""Compare the compiled and pure-Python quadrature kernels.

Two measurements:

* kernel: repeated ``integrate`` calls on representative panel layouts,
  with a check that both backends return the same numbers;
* end to end: the gold rotational critical-distance column through the
  CLI, once per backend (the pure-Python run is forced with
  ``MOLHEAT_PURE_PYTHON=1`` in a subprocess).

Usage::

    python3 benchmarks/bench_kernels.py [--repeat N] [--skip-cli]
"""

import argparse
import math
import os
import subprocess
import sys
import time
import timeit

from molheat import greens, kernels, materials as M

CASES = [
    # (label, omega rad/s, z m)
    ("LiH rot, 20 nm", 2 * math.pi * 444e9, 2e-8),
    ("LiH rot, 2 um", 2 * math.pi * 444e9, 2e-6),
    ("OH(a) rot, 50 um", 2 * math.pi * 2513.88e9, 5e-5),
    ("CaF vib, 3 mm", 2 * math.pi * 18.4e12, 3e-3),
]
GOLD = M.Drude(1.37e16, 4.12e13, "Au")


def _layouts(omega, z):
    eps, _ = M.eval_material(GOLD, omega)
    zeta = z * omega / 3e8
    prop = greens.propagating_edges(zeta, eps, 1, 1, 1)
    evan, _ = greens.evanescent_edges(zeta, eps, 1, 1, 1, -1.0, 40.0)
    return eps, zeta, [(0, prop), (1, evan)]


def bench_kernel(repeat):
    backends = {"python": kernels.get_backend("python")}
    try:
        backends["compiled"] = kernels.get_backend("compiled")
    except ImportError:
        print("compiled extension not built; kernel comparison skipped")
        return
    print(f"{'case':22s} {'python ms':>10s} {'compiled ms':>12s} {'speedup':>8s} {'max rel diff':>13s}")
    for label, omega, z in CASES:
        eps, zeta, layouts = _layouts(omega, z)
        k = omega / 3e8

        def run(mod):
            return [mod.integrate(kind, edges, zeta, eps, 1, 1, 1, -1.0, 1e-8, 1e-20 * k, 5000)
                    for kind, edges in layouts]

        times = {}
        for name, mod in backends.items():
            times[name] = min(timeit.repeat(lambda: run(mod), number=1, repeat=repeat)) * 1e3
        a, b = run(backends["python"]), run(backends["compiled"])
        diff = max(abs(x[i] - y[i]) / max(abs(y[i]), 1e-300) for x, y in zip(a, b) for i in (0, 1))
        print(f"{label:22s} {times['python']:10.2f} {times['compiled']:12.2f} "
              f"{times['python'] / times['compiled']:8.1f} {diff:13.2e}")


def bench_cli():
    args = [sys.executable, "-m", "molheat.cli", "critical", "--channel", "rot", "--material", "Au"]
    outputs = {}
    for name, flag in (("compiled", "0"), ("python", "1")):
        env = dict(os.environ, MOLHEAT_PURE_PYTHON=flag)
        t0 = time.perf_counter()
        res = subprocess.run(args, env=env, capture_output=True, text=True, check=True)
        outputs[name] = res.stdout
        print(f"gold rotational column, {name:8s} backend: {time.perf_counter() - t0:6.2f} s")
    print("identical CSV output:", outputs["compiled"] == outputs["python"])


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=5)
    p.add_argument("--skip-cli", action="store_true")
    args = p.parse_args(argv)
    print(f"default backend: {kernels.BACKEND}")
    bench_kernel(args.repeat)
    if not args.skip_cli:
        bench_cli()


if __name__ == "__main__":
    main()
