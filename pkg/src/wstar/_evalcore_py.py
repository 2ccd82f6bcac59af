"""Pure-numpy tape evaluation kernel (fallback when the extension is absent).

Mirrors the semantics of the compiled kernel in ``_evalcore.pyx``: per point,
the first instruction producing a non-finite value is recorded in ``err`` and
that row of the output stays NaN.  Vectorized per instruction over chunks of
points; opcode numbers match the table in :mod:`wstar.tape`.
"""

from __future__ import annotations

import numpy as np

_CHUNK = 64


def run_tape(code, a, b, cval, pts, pvec, out_idx):
    n = code.shape[0]
    n_points = pts.shape[0]
    m = out_idx.shape[0]
    vals = np.full((n_points, m), np.nan)
    err = np.full(n_points, -1, dtype=np.int64)

    for start in range(0, n_points, _CHUNK):
        stop = min(start + _CHUNK, n_points)
        width = stop - start
        regs = np.empty((n, width))
        e = np.full(width, -1, dtype=np.int64)
        with np.errstate(all="ignore"):
            for i in range(n):
                op = code[i]
                if op == 0:  # CONST
                    v = np.full(width, cval[i])
                elif op == 1:  # COORD
                    v = pts[start:stop, a[i]]
                elif op == 2:  # PARAM
                    v = np.full(width, pvec[a[i]])
                elif op == 3:  # NEG
                    v = -regs[a[i]]
                elif op == 4:
                    v = np.sin(regs[a[i]])
                elif op == 5:
                    v = np.cos(regs[a[i]])
                elif op == 6:
                    v = np.tan(regs[a[i]])
                elif op == 7:
                    v = np.exp(regs[a[i]])
                elif op == 8:
                    v = np.log(regs[a[i]])
                elif op == 9:
                    v = np.sqrt(regs[a[i]])
                elif op == 10:
                    v = np.sinh(regs[a[i]])
                elif op == 11:
                    v = np.cosh(regs[a[i]])
                elif op == 12:  # ADD
                    v = regs[a[i]] + regs[b[i]]
                elif op == 13:  # SUB
                    v = regs[a[i]] - regs[b[i]]
                elif op == 14:  # MUL
                    v = regs[a[i]] * regs[b[i]]
                elif op == 15:  # DIV
                    v = regs[a[i]] / regs[b[i]]
                elif op == 16:  # POWI
                    v = np.power(regs[a[i]], int(b[i]))
                elif op == 17:  # POWF
                    v = np.power(regs[a[i]], cval[i])
                else:
                    v = np.full(width, np.nan)
                bad = ~np.isfinite(v) & (e == -1)
                if bad.any():
                    e[bad] = i
                regs[i] = v

        ok = e == -1
        if m and ok.any():
            sel = regs[out_idx, :].T  # (width, m)
            rows = np.nonzero(ok)[0] + start
            vals[rows] = sel[ok]
        err[start:stop] = e

    return vals, err
