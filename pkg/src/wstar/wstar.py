"""The W*-curvature tensor: construction plus its identity suite.

Working index order: throughout this module the (0,4) curvature is read as

    R_{ijkl} := S_{ijlk}

where S is :attr:`wstar.geometry.Geometry.riemann04`.  In this order the
single trace gives g^{il}R_{ijkl} = +Ricci_{jk} and the contracted
differential Bianchi identity reads ∇_h R^h_{jkl} = ∇_l R_{jk} − ∇_k R_{jl}.

The tensor itself modifies the curvature by a metric–Ricci coupling chosen so
that exactly one effective trace survives:

    W*_{ijkl} = R_{ijkl} − 1/(n−1) [g_{jk} R_{il} − g_{jl} R_{ik}]

For n = 4 the surviving trace is g^{il}W*_{ijkl} = (4/3)(R_{jk} − (R/4)g_{jk}),
zero precisely on Einstein metrics.  The residual functions below evaluate,
at caller-supplied sample points, every identity the tensor satisfies
(divergence, cyclic second-Bianchi analogue, commutator action, trace
decomposition) together with the closed-form expressions circulated for them;
where a closed form disagrees with an independent route, the independent
route is authoritative and the deviation is reported, not hidden.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .exprlib import const, mul, neg, simplify, sub
from .geometry import (
    Geometry,
    MetricSpec,
    TensorField,
    is_zero,
    ricci_commutator,
    term_sum,
    workspace,
)

__all__ = [
    "WStarBundle",
    "KrupkaParts",
    "wstar_tensor",
    "wstar_contraction",
    "wstar_trace_residual",
    "wstar_divergence_direct",
    "wstar_divergence_formula",
    "codazzi_residual",
    "scalar_gradient_max",
    "WeylDivergenceReport",
    "weyl_divergence_crosscheck",
    "wstar_symmetry_residual",
    "wstar_bianchi_residual",
    "wstar_semisymmetry_residual",
    "krupka_oracle",
    "krupka_closed_forms",
    "krupka_decompose",
]


# --- symbolic construction ----------------------------------------------------


def swapped_riemann(geo: Geometry) -> TensorField:
    """The (0,4) curvature in this module's index order (last two slots swapped).

    Components are shared with ``geo.riemann04``; only the index layout differs.
    """

    def build():
        s = geo.riemann04
        return TensorField("llll", s.comps.transpose(0, 1, 3, 2), "CurvatureSwapped")

    return geo.cached("riemann04_swapped", build)


def _wstar04(geo: Geometry) -> TensorField:
    def build():
        n = geo.dim
        if n < 2:
            raise ValueError("the curvature modification needs dim >= 2")
        g, ric = geo.g, geo.ricci
        r4 = swapped_riemann(geo)
        coeff = const(Fraction(1, n - 1))
        comps = np.empty((n, n, n, n), dtype=object)
        for i, j, k, l in product(range(n), repeat=4):
            terms = []
            if not (is_zero(g[j, k]) or is_zero(ric[i, l])):
                terms.append(mul(g[j, k], ric[i, l]))
            if not (is_zero(g[j, l]) or is_zero(ric[i, k])):
                terms.append(neg(mul(g[j, l], ric[i, k])))
            correction = term_sum(terms)
            if is_zero(correction):
                comps[i, j, k, l] = r4[i, j, k, l]
            else:
                comps[i, j, k, l] = simplify(
                    sub(r4[i, j, k, l], mul(coeff, correction))
                )
        return TensorField("llll", comps, "WStar04")

    return geo.cached("wstar04", build)


def _nabla_wstar04(geo: Geometry) -> TensorField:
    return geo.cached(
        "nabla_wstar04", lambda: geo.covariant_derivative(_wstar04(geo))
    )


@dataclass(frozen=True)
class WStarBundle:
    """The tensor in its three layouts: (0,4), (1,3) and the (0,2) trace."""

    wstar04: TensorField
    wstar13: TensorField
    wstar02: TensorField
    dim: int


def wstar_tensor(metric: MetricSpec) -> WStarBundle:
    """Build (once per metric) the tensor bundle for ``metric``."""
    geo = workspace(metric)

    def build():
        w04 = _wstar04(geo)
        w13 = geo.raise_index(w04, 0)
        w02 = geo.contract(w13, 0, 3)  # g^{il} W*_{ijkl}
        return WStarBundle(w04, w13, w02, geo.dim)

    return geo.cached("wstar_bundle", build)


def wstar_contraction(bundle: WStarBundle, metric: MetricSpec) -> TensorField:
    """The single effective trace g^{il}W*_{ijkl} as a symbolic field."""
    return bundle.wstar02


def wstar_trace_residual(metric: MetricSpec, points) -> float:
    """max |g^{il}W*_{ijkl} − (4/3)(R_{jk} − (R/4)g_{jk})| over the points."""
    geo = workspace(metric)
    b = wstar_tensor(metric)
    vals = geo.eval_fields(
        {"w02": b.wstar02, "ric": geo.ricci, "g": geo.g, "R": geo.scalar_field},
        points,
    )
    rho = vals["ric"] - 0.25 * vals["R"][:, None, None] * vals["g"]
    return float(np.max(np.abs(vals["w02"] - (4.0 / 3.0) * rho)))


# --- divergence ---------------------------------------------------------------


def wstar_divergence_direct(bundle: WStarBundle, metric: MetricSpec, points) -> np.ndarray:
    """∇_h W*^h_{jkl} by covariant differentiation and metric trace.

    This is the ground-truth route: the rank-5 covariant derivative of the
    (0,4) field is evaluated and contracted with g^{hi} numerically.
    """
    geo = workspace(metric)
    vals = geo.eval_fields({"ginv": geo.ginv, "dw": _nabla_wstar04(geo)}, points)
    return np.einsum("phi,pijklh->pjkl", vals["ginv"], vals["dw"])


def wstar_divergence_formula(
    metric: MetricSpec, points, scalar_coefficient: float = 1.0 / 3.0
) -> np.ndarray:
    """Closed form ∇_l R_{jk} − ∇_k R_{jl} − c·[g_{jk}∇_l R − g_{jl}∇_k R].

    With c = 1/3 this is the circulated display for the divergence; the value
    consistent with the contracted Bianchi identity (∇^s R_{sl} = ½∇_l R) is
    c = 1/6, and only that choice matches the direct route on metrics with
    non-constant scalar curvature.  Both are exercised by the check suite.
    """
    geo = workspace(metric)
    vals = geo.eval_fields(
        {"g": geo.g, "nric": geo.nabla_ricci, "gr": geo.grad_scalar}, points
    )
    n = vals["nric"]  # n[p, a, b, m] = nabla_m Ric_ab
    codazzi = n - np.einsum("pjlk->pjkl", n)  # nabla_l R_jk - nabla_k R_jl
    gradient_part = np.einsum("pjk,pl->pjkl", vals["g"], vals["gr"]) - np.einsum(
        "pjl,pk->pjkl", vals["g"], vals["gr"]
    )
    return codazzi - scalar_coefficient * gradient_part


def codazzi_residual(metric: MetricSpec, points) -> float:
    """max |∇_l R_{jk} − ∇_k R_{jl}|: zero iff the Ricci tensor is Codazzi."""
    geo = workspace(metric)
    n = geo.eval_field(geo.nabla_ricci, points)
    return float(np.max(np.abs(n - np.einsum("pjlk->pjkl", n))))


def scalar_gradient_max(metric: MetricSpec, points) -> float:
    """max |∂_m R|: zero iff the scalar curvature is constant on the sample."""
    geo = workspace(metric)
    return float(np.max(np.abs(geo.eval_field(geo.grad_scalar, points))))


# --- conformal curvature cross-check -----------------------------------------


@dataclass(frozen=True)
class WeylDivergenceReport:
    """Direct conformal-curvature divergence and its closed-form deviation."""

    direct_max: float  # max |∇_h C^h_{jkl}| (ground truth)
    formula_deviation: float  # max |direct − circulated closed form|
    codazzi_max: float
    scalar_gradient_max: float


def weyl_divergence_crosscheck(metric: MetricSpec, points) -> WeylDivergenceReport:
    """Evaluate ∇_h C^h_{jkl} directly and compare the circulated closed form.

    The closed form evaluated here is, in this module's index order,

        ½ [∇_l R_{jk} − ∇_k R_{jl}] + 1/6 [g_{jk}∇_l R − g_{jl}∇_k R]

    whereas the divergence itself works out to the same Codazzi part with
    −1/12 on the gradient part; the two agree exactly when the scalar
    curvature is constant, and the deviation is reported otherwise.  The
    implication "Codazzi Ricci (hence constant R) ⇒ divergence-free conformal
    curvature" is checked from the returned residuals.
    """
    geo = workspace(metric)
    vals = geo.eval_fields(
        {
            "ginv": geo.ginv,
            "dweyl": geo.nabla_weyl,
            "g": geo.g,
            "nric": geo.nabla_ricci,
            "gr": geo.grad_scalar,
        },
        points,
    )
    # geometry stores C in the unswapped order; swapping its last two slots
    # before the trace keeps the whole report in this module's convention
    dweyl_swapped = np.einsum("pijlkm->pijklm", vals["dweyl"])
    direct = np.einsum("phi,pijklh->pjkl", vals["ginv"], dweyl_swapped)
    n = vals["nric"]
    codazzi = n - np.einsum("pjlk->pjkl", n)
    gradient_part = np.einsum("pjk,pl->pjkl", vals["g"], vals["gr"]) - np.einsum(
        "pjl,pk->pjkl", vals["g"], vals["gr"]
    )
    formula = 0.5 * codazzi + (1.0 / 6.0) * gradient_part
    return WeylDivergenceReport(
        direct_max=float(np.max(np.abs(direct))),
        formula_deviation=float(np.max(np.abs(direct - formula))),
        codazzi_max=float(np.max(np.abs(codazzi))),
        scalar_gradient_max=float(np.max(np.abs(vals["gr"]))),
    )


# --- covariant constancy and the cyclic identity ------------------------------


def wstar_symmetry_residual(metric: MetricSpec, points) -> tuple:
    """(max |∇_m W*_{ijkl}|, max |∇_m R_{jk} − ¼ g_{jk} ∂_m R|).

    The first number measures covariant constancy of the tensor; on metrics
    where it vanishes the second must vanish too (taking the trace of the
    constancy equation forces the Ricci derivative onto the metric).
    """
    geo = workspace(metric)
    vals = geo.eval_fields(
        {
            "dw": _nabla_wstar04(geo),
            "nric": geo.nabla_ricci,
            "g": geo.g,
            "gr": geo.grad_scalar,
        },
        points,
    )
    residual = float(np.max(np.abs(vals["dw"])))
    quarter = 0.25 * np.einsum("pjk,pm->pjkm", vals["g"], vals["gr"])
    quarter_residual = float(np.max(np.abs(vals["nric"] - quarter)))
    return residual, quarter_residual


def wstar_bianchi_residual(metric: MetricSpec, points) -> tuple:
    """Residuals of the cyclic derivative identity, as (identity, cyclic-only).

    The cyclic sum ∇_m W*_{ijkl} + ∇_k W*_{ijlm} + ∇_l W*_{ijmk} equals

        −1/3 [ g_{jk}(∇_m R_{il} − ∇_l R_{im})
             + g_{jl}(∇_k R_{im} − ∇_m R_{ik})
             + g_{jm}(∇_l R_{ik} − ∇_k R_{il}) ]

    identically; the first residual is |cyclic sum − right side| (must be
    numerics-level on every metric), the second is |cyclic sum| alone (zero
    precisely when the Ricci tensor is Codazzi).
    """
    geo = workspace(metric)
    vals = geo.eval_fields(
        {"dw": _nabla_wstar04(geo), "g": geo.g, "nric": geo.nabla_ricci}, points
    )
    d = vals["dw"]  # d[p, i, j, k, l, m] = nabla_m W*_{ijkl}
    cyc = (
        d
        + np.einsum("pijlmk->pijklm", d)
        + np.einsum("pijmkl->pijklm", d)
    )
    n = vals["nric"]
    x = n - np.einsum("piba->piab", n)  # x[p, i, a, b] = nabla_b R_ia - nabla_a R_ib
    g = vals["g"]
    rhs = (-1.0 / 3.0) * (
        np.einsum("pjk,pilm->pijklm", g, x)
        + np.einsum("pjl,pimk->pijklm", g, x)
        + np.einsum("pjm,pikl->pijklm", g, x)
    )
    residual_identity = float(np.max(np.abs(cyc - rhs)))
    residual_cyclic = float(np.max(np.abs(cyc)))
    return residual_identity, residual_cyclic


def wstar_semisymmetry_residual(metric: MetricSpec, points) -> tuple:
    """([∇_μ,∇_ν] acting on W*_{ijkl}, and the trace-consistency residual).

    Both commutators are computed algebraically through the curvature action
    on each slot.  The second number checks the exact proportionality
    [∇_μ,∇_ν]W*_{jk} = (4/3)[∇_μ,∇_ν]R_{jk} of the (0,2) traces, which holds
    on every metric because the two tensors differ by a multiple of g.
    """
    geo = workspace(metric)
    b = wstar_tensor(metric)
    vals = geo.eval_fields(
        {"w04": b.wstar04, "w02": b.wstar02, "ric": geo.ricci, "r13": geo.riemann13},
        points,
    )
    comm_w04 = ricci_commutator(vals["w04"], "llll", vals["r13"])
    residual_a = float(np.max(np.abs(comm_w04)))
    comm_w02 = ricci_commutator(vals["w02"], "ll", vals["r13"])
    comm_ric = ricci_commutator(vals["ric"], "ll", vals["r13"])
    residual_b = float(np.max(np.abs(comm_w02 - (4.0 / 3.0) * comm_ric)))
    return residual_a, residual_b


# --- trace decomposition ------------------------------------------------------


def _trace_system_matrix(n: int) -> np.ndarray:
    """Matrix of the linear system tying (C, D, E) to the three traces.

    Writing the decomposition W*^i_{klm} = B^i_{klm} + δ^i_k C_{lm}
    + δ^i_l D_{km} + δ^i_m E_{kl} with B traceless, the traces over
    (i,k), (i,l), (i,m) give, for every index pair (a, b):

        T1_ab = n·C_ab + D_ab + E_ba
        T2_ab = C_ab + n·D_ab + E_ab
        T3_ab = C_ba + D_ab + n·E_ab
    """
    nn = n * n
    m = np.zeros((3 * nn, 3 * nn))

    def c_col(a, b):
        return a * n + b

    def d_col(a, b):
        return nn + a * n + b

    def e_col(a, b):
        return 2 * nn + a * n + b

    row = 0
    for a, b in product(range(n), repeat=2):
        m[row, c_col(a, b)] += n
        m[row, d_col(a, b)] += 1
        m[row, e_col(b, a)] += 1
        row += 1
    for a, b in product(range(n), repeat=2):
        m[row, c_col(a, b)] += 1
        m[row, d_col(a, b)] += n
        m[row, e_col(a, b)] += 1
        row += 1
    for a, b in product(range(n), repeat=2):
        m[row, c_col(b, a)] += 1
        m[row, d_col(a, b)] += 1
        m[row, e_col(a, b)] += n
        row += 1
    return m


_TRACE_MATRIX_4 = _trace_system_matrix(4)


def _traces(w13_vals: np.ndarray):
    """T1_ab = W^t_{tab}, T2_ab = W^t_{atb}, T3_ab = W^t_{abt} (batched)."""
    t1 = np.einsum("pttab->pab", w13_vals)
    t2 = np.einsum("ptatb->pab", w13_vals)
    t3 = np.einsum("ptabt->pab", w13_vals)
    return t1, t2, t3


def krupka_oracle(w13_vals: np.ndarray):
    """Solve the trace system exactly for (C, D, E); the ground-truth values.

    ``w13_vals`` has shape (P, n, n, n, n) (or a single point's (n, n, n, n));
    the tracelessness of the remainder B is imposed through the three trace
    equations, which determine C, D, E uniquely for n = 4.
    """
    single = w13_vals.ndim == 4
    vals = w13_vals[None] if single else w13_vals
    n = vals.shape[1]
    if n != 4:
        raise ValueError("trace decomposition implemented for dim 4")
    t1, t2, t3 = _traces(vals)
    p = vals.shape[0]
    rhs = np.concatenate(
        [t1.reshape(p, -1), t2.reshape(p, -1), t3.reshape(p, -1)], axis=1
    )
    try:
        sol = np.linalg.solve(_TRACE_MATRIX_4, rhs.T).T
    except np.linalg.LinAlgError as err:  # pragma: no cover - fixed matrix
        raise np.linalg.LinAlgError(f"singular trace system: {err}") from None
    c = sol[:, : n * n].reshape(p, n, n)
    d = sol[:, n * n : 2 * n * n].reshape(p, n, n)
    e = sol[:, 2 * n * n :].reshape(p, n, n)
    if single:
        return c[0], d[0], e[0]
    return c, d, e


def krupka_closed_forms(w02_vals: np.ndarray):
    """Exact solution of the trace system in terms of the (0,2) contraction.

    The traces of the tensor evaluate to T1 = 0, T2 = −W*_{ab}, T3 = +W*_{ab}
    (W*_{ab} symmetric), and the unique solution is then

        C = 0,   D = −(1/3)·W*_{ab},   E = +(1/3)·W*_{ab}.
    """
    zero = np.zeros_like(w02_vals)
    return zero, -w02_vals / 3.0, w02_vals / 3.0


def _trace_combos(w13_vals: np.ndarray):
    """The circulated fixed-weight trace combinations for (C, D, E).

    With T1, T2, T3 as in :func:`krupka_oracle`, these are

        C_ab = 1/33 [10·T1_ab − 2(T2_ab + T3_ba)]
        D_ab = 1/33 [−2(T1_ab + T3_ba) + 10·T2_ab]
        E_ab = 1/33 [10·T3_ab − 2(T1_ba + T2_ba)]

    They are compared against the linear-solve values; where they disagree
    the solve is authoritative.
    """
    t1, t2, t3 = _traces(w13_vals)
    t1t = np.einsum("pab->pba", t1)
    t2t = np.einsum("pab->pba", t2)
    t3t = np.einsum("pab->pba", t3)
    c = (10.0 * t1 - 2.0 * (t2 + t3t)) / 33.0
    d = (-2.0 * (t1 + t3t) + 10.0 * t2) / 33.0
    e = (10.0 * t3 - 2.0 * (t1t + t2t)) / 33.0
    return c, d, e


@dataclass(frozen=True)
class KrupkaParts:
    """Trace decomposition of the (1,3) tensor at one point.

    ``C``, ``D``, ``E`` come from the exact linear solve and ``B`` is the
    remainder built from them (traceless by construction of the solve);
    ``combo_*`` are the circulated fixed-weight combinations reported for
    comparison.
    """

    B: np.ndarray
    C: np.ndarray
    D: np.ndarray
    E: np.ndarray
    combo_C: np.ndarray
    combo_D: np.ndarray
    combo_E: np.ndarray

    def reconstruction(self) -> np.ndarray:
        n = self.C.shape[0]
        eye = np.eye(n)
        return (
            self.B
            + np.einsum("ik,lm->iklm", eye, self.C)
            + np.einsum("il,km->iklm", eye, self.D)
            + np.einsum("im,kl->iklm", eye, self.E)
        )

    def trace_residual(self) -> float:
        """Largest of the three traces of B (all must vanish)."""
        t1 = np.einsum("ttab->ab", self.B)
        t2 = np.einsum("tatb->ab", self.B)
        t3 = np.einsum("tabt->ab", self.B)
        return float(max(np.max(np.abs(t)) for t in (t1, t2, t3)))


def krupka_decompose(w13_point: np.ndarray) -> KrupkaParts:
    """Decompose one point's (1,3) values into traceless part plus δ-terms."""
    if w13_point.ndim != 4:
        raise ValueError("expected a single point's (n, n, n, n) values")
    vals = w13_point[None]
    c, d, e = krupka_oracle(vals)
    combo_c, combo_d, combo_e = _trace_combos(vals)
    n = w13_point.shape[0]
    eye = np.eye(n)
    b = (
        w13_point
        - np.einsum("ik,plm->piklm", eye, c)[0]
        - np.einsum("il,pkm->piklm", eye, d)[0]
        - np.einsum("im,pkl->piklm", eye, e)[0]
    )
    return KrupkaParts(
        B=b,
        C=c[0],
        D=d[0],
        E=e[0],
        combo_C=combo_c[0],
        combo_D=combo_d[0],
        combo_E=combo_e[0],
    )
