"""Flat instruction tapes for fast multi-point evaluation of expression DAGs.

A tape is a straight-line program in SSA form: instruction ``i`` writes
register ``i``, operands ``a``/``b`` are register indices (or immediate data
for leaf opcodes).  Shared subexpressions across all compiled components are
emitted once (the interning layer makes sharing visible by object identity),
so one tape evaluates a whole tensor field per point.

Execution is delegated to a kernel selected in :mod:`wstar.backend`: a
compiled extension when available, otherwise a vectorized numpy fallback.
Both kernels flag the first instruction per point whose result is not finite
(division by zero, log of a non-positive number, fractional power of a
negative base, overflow, ...) instead of raising, so a bad sample point does
not abort a batch.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .exprlib import Expr, _postorder, to_text

__all__ = ["Tape", "compile_tape", "TapeEvalError"]

# opcode table (kernels mirror these values as literals)
OP_CONST = 0
OP_COORD = 1
OP_PARAM = 2
OP_NEG = 3
OP_SIN = 4
OP_COS = 5
OP_TAN = 6
OP_EXP = 7
OP_LN = 8
OP_SQRT = 9
OP_SINH = 10
OP_COSH = 11
OP_ADD = 12
OP_SUB = 13
OP_MUL = 14
OP_DIV = 15
OP_POWI = 16  # b holds the integer exponent
OP_POWF = 17  # cval holds the float exponent

_UNARY_OPS = {
    "neg": OP_NEG,
    "sin": OP_SIN,
    "cos": OP_COS,
    "tan": OP_TAN,
    "exp": OP_EXP,
    "ln": OP_LN,
    "sqrt": OP_SQRT,
    "sinh": OP_SINH,
    "cosh": OP_COSH,
}
_BINARY_OPS = {"add": OP_ADD, "sub": OP_SUB, "mul": OP_MUL, "div": OP_DIV}


class TapeEvalError(Exception):
    """Batch evaluation failed at a specific point and subexpression."""

    def __init__(self, message: str, point_index: int, expr: Expr | None):
        self.point_index = point_index
        self.expr = expr
        where = f" in '{to_text(expr, max_len=80)}'" if expr is not None else ""
        super().__init__(f"{message}{where} (point #{point_index})")


class Tape:
    """Compiled form of a list of scalar expressions over shared coordinates."""

    def __init__(self, code, a, b, cval, outputs, nodes, n_coords, param_names):
        self.code = code
        self.a = a
        self.b = b
        self.cval = cval
        self.outputs = outputs
        self.nodes = nodes  # instruction index -> source Expr (error attribution)
        self.n_coords = n_coords
        self.param_names = tuple(param_names)

    @property
    def n_instructions(self) -> int:
        return int(self.code.shape[0])

    @property
    def n_outputs(self) -> int:
        return int(self.outputs.shape[0])

    def param_vector(self, params: Mapping[str, float]) -> np.ndarray:
        try:
            return np.array([float(params[name]) for name in self.param_names])
        except KeyError as missing:
            raise TapeEvalError(f"missing parameter {missing}", -1, None) from None

    def evaluate(self, points: np.ndarray, params: Mapping[str, float] | None = None):
        """Evaluate all outputs at many points.

        ``points`` has shape (P, n_coords).  Returns ``(values, err)`` where
        ``values`` has shape (P, n_outputs) and ``err[p]`` is -1 for success or
        the index of the first failing instruction (that row is left as NaN).
        """
        from .backend import run_tape

        pts = np.ascontiguousarray(points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != self.n_coords:
            raise ValueError(f"points must have shape (P, {self.n_coords})")
        pvec = self.param_vector(params or {})
        return run_tape(self.code, self.a, self.b, self.cval, pts, pvec, self.outputs)

    def evaluate_checked(self, points: np.ndarray, params=None) -> np.ndarray:
        """Like :meth:`evaluate` but raises :class:`TapeEvalError` on any failure."""
        vals, err = self.evaluate(points, params)
        bad = np.nonzero(err >= 0)[0]
        if bad.size:
            p = int(bad[0])
            node = self.nodes[int(err[p])]
            raise TapeEvalError("evaluation left the domain", p, node)
        return vals


def compile_tape(
    exprs: Sequence[Expr], n_coords: int, param_names: Sequence[str] = ()
) -> Tape:
    """Compile expressions into one tape, sharing common subexpressions."""
    pidx = {name: k for k, name in enumerate(param_names)}
    index: dict = {}
    code: list = []
    aa: list = []
    bb: list = []
    cv: list = []
    nodes: list = []

    def emit(op: int, a: int = 0, b: int = 0, c: float = 0.0, node=None) -> int:
        code.append(op)
        aa.append(a)
        bb.append(b)
        cv.append(c)
        nodes.append(node)
        return len(code) - 1

    pending: set = set()
    for root in exprs:
        work = [(root, False)]
        while work:
            node, ready = work.pop()
            if not ready:
                if id(node) in index or id(node) in pending:
                    continue
                pending.add(id(node))
                work.append((node, True))
                for c in node.args:
                    work.append((c, False))
                continue
            kind = node.kind
            if kind == "const":
                i = emit(OP_CONST, c=float(node.data), node=node)
            elif kind == "coord":
                if node.data >= n_coords:
                    raise ValueError(f"coordinate index {node.data} out of range")
                i = emit(OP_COORD, a=node.data, node=node)
            elif kind == "param":
                if node.data not in pidx:
                    raise ValueError(f"unknown parameter '{node.data}'")
                i = emit(OP_PARAM, a=pidx[node.data], node=node)
            elif kind == "pow":
                base = index[id(node.args[0])]
                q = node.data
                if isinstance(q, Fraction) and q.denominator == 1 and abs(q.numerator) < 2**31:
                    i = emit(OP_POWI, a=base, b=q.numerator, node=node)
                else:
                    i = emit(OP_POWF, a=base, c=float(q), node=node)
            elif kind in _UNARY_OPS:
                i = emit(_UNARY_OPS[kind], a=index[id(node.args[0])], node=node)
            elif kind in _BINARY_OPS:
                i = emit(
                    _BINARY_OPS[kind],
                    a=index[id(node.args[0])],
                    b=index[id(node.args[1])],
                    node=node,
                )
            else:
                raise ValueError(f"cannot compile node kind '{kind}'")
            index[id(node)] = i

    outputs = np.array([index[id(r)] for r in exprs], dtype=np.int64)
    return Tape(
        np.array(code, dtype=np.int32),
        np.array(aa, dtype=np.int32),
        np.array(bb, dtype=np.int32),
        np.array(cv, dtype=np.float64),
        outputs,
        nodes,
        n_coords,
        param_names,
    )
