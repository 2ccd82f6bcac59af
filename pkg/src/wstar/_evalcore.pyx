# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled tape evaluation kernel.

Scalar loop per point over a flat instruction tape; the first instruction
producing a non-finite value is recorded in ``err`` and that output row stays
NaN.  Opcode numbers match the table in ``wstar.tape``; the numpy fallback in
``_evalcore_py`` mirrors the same semantics.
"""

import numpy as np

from libc.math cimport (NAN, cos, cosh, exp, isfinite, log, pow, sin, sinh,
                        sqrt, tan)


def run_tape(int[::1] code, int[::1] a, int[::1] b, double[::1] cval,
             double[:, ::1] pts, double[::1] pvec, long long[::1] out_idx):
    cdef Py_ssize_t n = code.shape[0]
    cdef Py_ssize_t n_points = pts.shape[0]
    cdef Py_ssize_t m = out_idx.shape[0]
    vals_np = np.full((n_points, m), np.nan)
    err_np = np.full(n_points, -1, dtype=np.int64)
    regs_np = np.empty(n if n else 1)
    cdef double[:, ::1] vals = vals_np
    cdef long long[::1] err = err_np
    cdef double[::1] regs = regs_np
    cdef Py_ssize_t p, i, j
    cdef int op
    cdef double v
    for p in range(n_points):
        for i in range(n):
            op = code[i]
            if op == 0:    # CONST
                v = cval[i]
            elif op == 1:  # COORD
                v = pts[p, a[i]]
            elif op == 2:  # PARAM
                v = pvec[a[i]]
            elif op == 3:  # NEG
                v = -regs[a[i]]
            elif op == 4:
                v = sin(regs[a[i]])
            elif op == 5:
                v = cos(regs[a[i]])
            elif op == 6:
                v = tan(regs[a[i]])
            elif op == 7:
                v = exp(regs[a[i]])
            elif op == 8:
                v = log(regs[a[i]])
            elif op == 9:
                v = sqrt(regs[a[i]])
            elif op == 10:
                v = sinh(regs[a[i]])
            elif op == 11:
                v = cosh(regs[a[i]])
            elif op == 12:  # ADD
                v = regs[a[i]] + regs[b[i]]
            elif op == 13:  # SUB
                v = regs[a[i]] - regs[b[i]]
            elif op == 14:  # MUL
                v = regs[a[i]] * regs[b[i]]
            elif op == 15:  # DIV
                v = regs[a[i]] / regs[b[i]]
            elif op == 16:  # POWI
                v = pow(regs[a[i]], <double> b[i])
            elif op == 17:  # POWF
                v = pow(regs[a[i]], cval[i])
            else:
                v = NAN
            if not isfinite(v):
                err[p] = i
                break
            regs[i] = v
        if err[p] < 0:
            for j in range(m):
                vals[p, j] = regs[out_idx[j]]
    return vals_np, err_np
