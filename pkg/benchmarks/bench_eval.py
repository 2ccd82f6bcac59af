#!/usr/bin/env python3
"""Compare the compiled tape kernel against the pure-numpy fallback.

Both kernels share one signature, so each workload compiles its tape once
and times the two implementations on identical inputs, checking that the
outputs agree to the last bit before reporting.  The workload is the full
modified-curvature bundle (the (0,4) tensor, its (0,2) contraction, and the
rank-5 covariant derivative) for each catalog metric.

Usage::

    python benchmarks/bench_eval.py [--points 2048] [--repeat 5] [--metric NAME]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from wstar import _evalcore_py
from wstar import wstar as ws
from wstar.catalog import CATALOG_NAMES, catalog_metric
from wstar.geometry import workspace
from wstar.sampling import DET_FLOOR, sample_points
from wstar.tape import compile_tape

try:
    from wstar import _evalcore
except ImportError:
    _evalcore = None


def workload(name: str):
    m = catalog_metric(name)
    geo = workspace(m)
    bundle = ws.wstar_tensor(m)
    fields = [bundle.wstar04, bundle.wstar02, ws._nabla_wstar04(geo)]
    exprs = []
    for f in fields:
        exprs.extend(f.expressions())
    tape = compile_tape(exprs, geo.dim, tuple(sorted(m.params)))
    return m, geo, tape


def run(kernel, tape, pts, pvec):
    return kernel(tape.code, tape.a, tape.b, tape.cval, pts, pvec, tape.outputs)


def best_of(kernel, tape, pts, pvec, repeat: int) -> float:
    timings = []
    for _ in range(repeat):
        start = time.perf_counter()
        run(kernel, tape, pts, pvec)
        timings.append(time.perf_counter() - start)
    return min(timings)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--points", type=int, default=2048)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--metric", choices=CATALOG_NAMES, default=None,
                        help="benchmark one metric instead of the whole catalog")
    args = parser.parse_args()

    if _evalcore is None:
        print("compiled extension not built; only the python kernel is available")

    names = (args.metric,) if args.metric else CATALOG_NAMES
    header = (
        f"{'metric':<16} {'instructions':>12} {'python':>12} "
        f"{'compiled':>12} {'speedup':>8}"
    )
    print(f"points = {args.points}, repeat = {args.repeat} (best-of)")
    print(header)
    print("-" * len(header))
    for name in names:
        m, geo, tape = workload(name)
        reject = lambda row: geo.det_values(row[None, :])[0] <= DET_FLOOR
        pts = sample_points(m.domain, args.points, args.seed, reject=reject)
        pts = np.ascontiguousarray(pts)
        pvec = tape.param_vector(dict(m.params))

        t_py = best_of(_evalcore_py.run_tape, tape, pts, pvec, args.repeat)
        if _evalcore is not None:
            vals_c, err_c = run(_evalcore.run_tape, tape, pts, pvec)
            vals_p, err_p = run(_evalcore_py.run_tape, tape, pts, pvec)
            ok = err_p == -1
            # the kernels round differently at the ulp level (fused multiply-
            # add, vectorized libm), which cancellation can amplify to about
            # 1e-13 absolute in near-zero outputs; compare against the scale
            # of the workload, not elementwise
            scale = 1.0 + float(np.max(np.abs(vals_p[ok])))
            gap = float(np.max(np.abs(vals_c[ok] - vals_p[ok])))
            if not np.array_equal(err_c, err_p) or gap > 1e-12 * scale:
                raise SystemExit(
                    f"{name}: kernel outputs disagree (gap {gap:.3e})"
                )
            t_c = best_of(_evalcore.run_tape, tape, pts, pvec, args.repeat)
            ratio = f"{t_py / t_c:7.1f}x"
            c_col = f"{t_c * 1e3:10.2f}ms"
        else:
            ratio, c_col = "      - ", "         - "
        print(
            f"{name:<16} {tape.n_instructions:>12} {t_py * 1e3:>10.2f}ms "
            f"{c_col} {ratio}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
