"""Timing comparison of the compiled and numpy evaluation kernels.

Run from the repository root:

    python3 benchmarks/bench_kernels.py

The two backends are imported side by side (the selector in
qdtau.kernels is bypassed) so one process measures both.  A full
period-engine build is also timed under each backend via subprocess
with QDTAU_FORCE_PY toggled, since backend choice happens at import.
"""
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from qdtau import _kernels_py

try:
    from qdtau import _kernels
except ImportError:
    _kernels = None


def bench_eval(impl, x, mids, halves, number=200):
    return min(timeit.repeat(lambda: impl.eval_sheet1(x, mids, halves),
                             number=number, repeat=5)) / number


def main():
    rng = np.random.default_rng(0)
    # reference n=5 cut geometry
    mids = np.array([-1.5 + 0j, 0.25 + 0j, 1.5 + 0j])
    halves = np.array([0.5 + 0j, 0.25 + 0j, 0.5 + 0j])

    print(f"{'points':>8}  {'numpy':>12}  {'compiled':>12}  {'speedup':>8}")
    for npts in (32, 256, 2048, 16384):
        x = (rng.uniform(-3, 3, npts) + 1j * rng.uniform(-3, 3, npts))
        t_py = bench_eval(_kernels_py, x, mids, halves)
        if _kernels is None:
            print(f"{npts:>8}  {t_py * 1e6:>10.2f}us  {'n/a':>12}")
            continue
        t_cy = bench_eval(_kernels, x, mids, halves)
        ok = np.allclose(_kernels_py.eval_sheet1(x, mids, halves),
                         _kernels.eval_sheet1(x, mids, halves))
        print(f"{npts:>8}  {t_py * 1e6:>10.2f}us  {t_cy * 1e6:>10.2f}us"
              f"  {t_py / t_cy:>7.2f}x  {'agree' if ok else 'DISAGREE'}")

    # end-to-end: period matrix of the reference configuration
    snippet = (
        "import time\n"
        "from qdtau.curves import QDConfigG0, build_cover\n"
        "from qdtau.cycles import build_cycles_robust\n"
        "from qdtau.periods import PeriodEngine\n"
        "from qdtau.kernels import BACKEND\n"
        "cfg = QDConfigG0(zeros=[0.0],"
        " poles=[1.0, -1.0, 2.0, -2.0, 0.5])\n"
        "t0 = time.perf_counter()\n"
        "for _ in range(5):\n"
        "    pe = PeriodEngine(build_cycles_robust(build_cover(cfg)))\n"
        "    pe.normalized_basis()\n"
        "import json\n"
        "print(json.dumps({'backend': BACKEND,"
        " 'seconds': (time.perf_counter() - t0) / 5}))\n"
    )
    print()
    for force in ("0", "1"):
        out = subprocess.run(
            [sys.executable, "-c", snippet],
            capture_output=True, text=True,
            env={**os.environ, "QDTAU_FORCE_PY": force},
        )
        if out.returncode:
            print(out.stderr, file=sys.stderr)
            return 1
        rec = json.loads(out.stdout)
        print(f"period engine, backend={rec['backend']:>7}: "
              f"{rec['seconds'] * 1e3:.1f} ms per build")
    return 0


if __name__ == "__main__":
    sys.exit(main())
