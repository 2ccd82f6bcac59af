"""Named, tolerance-aware checks over a metric at sampled points.

Each check computes a per-point residual array from evaluated tensor fields,
compares its maximum against ``atol + rtol * scale`` (scale = magnitude of the
check's dominant ingredient), and reports pass / fail / not-applicable with
the worst sample point.  Property checks (does this space-time satisfy the
condition?) fail honestly on metrics that lack the property; identity checks
must pass everywhere, and the two circulated closed forms that disagree with
their independent routes fail with a reason naming the deviation instead of
being patched over.

The registry is ordered; ``run_all`` evaluates a subset or everything and is
deterministic for a fixed (metric, seed, points, tolerances) tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from .geometry import Geometry, MetricSpec, ricci_commutator, workspace
from . import relativity as rel
from . import wstar as ws

__all__ = ["CheckContext", "CheckOutcome", "REGISTRY", "check_names", "run_check"]


@dataclass
class CheckOutcome:
    status: str  # "pass" | "fail" | "not-applicable"
    max_residual: float
    tolerance: float
    worst_point: Optional[np.ndarray]
    reason: Optional[str] = None


class CheckContext:
    """Shared evaluated-field cache for one (metric, points, config) run."""

    # evaluation groups: one compiled tape per group actually touched
    _GROUPS = (
        ("g", "ginv", "ric", "R", "gradR"),
        ("nric",),
        ("r13", "r4", "w04", "w13", "w02"),
        ("dw",),
        ("weyl", "nweyl"),
        ("t", "nt"),
    )

    def __init__(self, metric: MetricSpec, points, cfg: rel.FieldEquationConfig,
                 atol: float = 1e-9, rtol: float = 1e-6):
        self.metric = metric
        self.geo: Geometry = workspace(metric)
        self.points = np.asarray(points, dtype=float)
        self.cfg = cfg
        self.atol = atol
        self.rtol = rtol
        self._vals: Dict[str, np.ndarray] = {}

    def _fields(self, names):
        geo, b = self.geo, ws.wstar_tensor(self.metric)
        table = {
            "g": lambda: geo.g,
            "ginv": lambda: geo.ginv,
            "ric": lambda: geo.ricci,
            "R": lambda: geo.scalar_field,
            "gradR": lambda: geo.grad_scalar,
            "nric": lambda: geo.nabla_ricci,
            "r13": lambda: geo.riemann13,
            "r4": lambda: ws.swapped_riemann(geo),
            "w04": lambda: b.wstar04,
            "w13": lambda: b.wstar13,
            "w02": lambda: b.wstar02,
            "dw": lambda: ws._nabla_wstar04(geo),
            "weyl": lambda: geo.weyl,
            "nweyl": lambda: geo.nabla_weyl,
            "t": lambda: rel.energy_momentum(self.metric, self.cfg),
            "nt": lambda: rel.nabla_energy_momentum(self.metric, self.cfg),
        }
        return {n: table[n]() for n in names}

    def get(self, name: str) -> np.ndarray:
        if name not in self._vals:
            group = next(g for g in self._GROUPS if name in g)
            self._vals.update(
                self.geo.eval_fields(self._fields(group), self.points)
            )
        return self._vals[name]

    def amax(self, name: str) -> float:
        return float(np.max(np.abs(self.get(name))))

    def tol(self, scale: float) -> float:
        return self.atol + self.rtol * scale

    def outcome(self, per_point: np.ndarray, scale: float,
                reason: Optional[str] = None) -> CheckOutcome:
        """Pass/fail from a per-point residual array and a scale."""
        per_point = np.asarray(per_point, dtype=float)
        worst = int(np.argmax(per_point))
        res = float(per_point[worst])
        tolerance = self.tol(scale)
        status = "pass" if res <= tolerance else "fail"
        return CheckOutcome(status, res, tolerance, self.points[worst], reason)

    def na(self, reason: str, tolerance: Optional[float] = None) -> CheckOutcome:
        return CheckOutcome(
            "not-applicable", 0.0, self.tol(0.0) if tolerance is None else tolerance,
            None, reason,
        )


def _ptmax(a: np.ndarray) -> np.ndarray:
    """Collapse all but the leading (point) axis with max |.|."""
    return np.max(np.abs(a.reshape(a.shape[0], -1)), axis=1)


# --- identity checks ----------------------------------------------------------


def _check_trace_identity(ctx: CheckContext) -> CheckOutcome:
    n = ctx.geo.dim
    factor = n / (n - 1.0)
    rho = ctx.get("ric") - (ctx.get("R")[:, None, None] / n) * ctx.get("g")
    res = _ptmax(ctx.get("w02") - factor * rho)
    return ctx.outcome(res, 1.0 + ctx.amax("R") * ctx.amax("g"))


def _divergence_direct(ctx: CheckContext) -> np.ndarray:
    return np.einsum("phi,pijklh->pjkl", ctx.get("ginv"), ctx.get("dw"))


def _divergence_formula(ctx: CheckContext, coeff: float) -> np.ndarray:
    nric, g, gr = ctx.get("nric"), ctx.get("g"), ctx.get("gradR")
    codazzi = nric - np.einsum("pjlk->pjkl", nric)
    gradient = np.einsum("pjk,pl->pjkl", g, gr) - np.einsum("pjl,pk->pjkl", g, gr)
    return codazzi - coeff * gradient


def _check_divergence_formula(ctx: CheckContext) -> CheckOutcome:
    direct = _divergence_direct(ctx)
    res = _ptmax(direct - _divergence_formula(ctx, 1.0 / 3.0))
    adj = float(np.max(_ptmax(direct - _divergence_formula(ctx, 1.0 / 6.0))))
    out = ctx.outcome(res, 1.0 + _ptmax(direct).max())
    if out.status == "fail":
        out.reason = (
            "circulated form carries 1/3 on the scalar-gradient term where the "
            "contracted Bianchi identity forces 1/6; the direct route is "
            f"authoritative (adjusted-coefficient gap {adj:.3e})"
        )
    return out


def _check_divergence_adjusted(ctx: CheckContext) -> CheckOutcome:
    direct = _divergence_direct(ctx)
    res = _ptmax(direct - _divergence_formula(ctx, 1.0 / 6.0))
    return ctx.outcome(res, 1.0 + _ptmax(direct).max())


def _check_bianchi_identity(ctx: CheckContext) -> CheckOutcome:
    d, nric, g = ctx.get("dw"), ctx.get("nric"), ctx.get("g")
    cyc = (
        d
        + np.einsum("pijlmk->pijklm", d)
        + np.einsum("pijmkl->pijklm", d)
    )
    x = nric - np.einsum("piba->piab", nric)
    rhs = -(1.0 / 3.0) * (
        np.einsum("pjk,pilm->pijklm", g, x)
        + np.einsum("pjl,pimk->pijklm", g, x)
        + np.einsum("pjm,pikl->pijklm", g, x)
    )
    return ctx.outcome(_ptmax(cyc - rhs), 1.0 + ctx.amax("dw"))


def _check_semisymmetry_trace_identity(ctx: CheckContext) -> CheckOutcome:
    r13 = ctx.get("r13")
    lhs = ricci_commutator(ctx.get("w02"), "ll", r13)
    rhs = (4.0 / 3.0) * ricci_commutator(ctx.get("ric"), "ll", r13)
    scale = ctx.amax("r13") * (ctx.amax("w02") + ctx.amax("ric"))
    return ctx.outcome(_ptmax(lhs - rhs), scale)


def _check_krupka_oracle_match(ctx: CheckContext) -> CheckOutcome:
    w13 = ctx.get("w13")
    c, d, e = ws.krupka_oracle(w13)
    cc, cd, ce = ws.krupka_closed_forms(ctx.get("w02"))
    eye = np.eye(ctx.geo.dim)
    recon = (
        np.einsum("ik,plm->piklm", eye, c)
        + np.einsum("il,pkm->piklm", eye, d)
        + np.einsum("im,pkl->piklm", eye, e)
    )
    b = w13 - recon
    traces = np.stack(
        [
            _ptmax(np.einsum("pttab->pab", b)),
            _ptmax(np.einsum("ptatb->pab", b)),
            _ptmax(np.einsum("ptabt->pab", b)),
        ]
    ).max(axis=0)
    forms = np.stack(
        [_ptmax(c - cc), _ptmax(d - cd), _ptmax(e - ce)]
    ).max(axis=0)
    recon_res = _ptmax(w13 - (b + recon))
    res = np.maximum(np.maximum(traces, forms), recon_res)
    return ctx.outcome(res, 1.0 + ctx.amax("w13"))


def _check_krupka_printed_forms(ctx: CheckContext) -> CheckOutcome:
    w13 = ctx.get("w13")
    c, d, e = ws.krupka_oracle(w13)
    t1 = np.einsum("pttab->pab", w13)
    t2 = np.einsum("ptatb->pab", w13)
    t3 = np.einsum("ptabt->pab", w13)
    tr = lambda a: np.einsum("pab->pba", a)
    combo_c = (10.0 * t1 - 2.0 * (t2 + tr(t3))) / 33.0
    combo_d = (-2.0 * (t1 + tr(t3)) + 10.0 * t2) / 33.0
    combo_e = (10.0 * t3 - 2.0 * (tr(t1) + tr(t2))) / 33.0
    n = ctx.geo.dim
    rho = ctx.get("ric") - (ctx.get("R")[:, None, None] / n) * ctx.get("g")
    res = np.stack(
        [
            _ptmax(combo_c - c),
            _ptmax(combo_d - d),
            _ptmax(combo_e - e),
            _ptmax(d - rho / 9.0),
            _ptmax(e + rho / 9.0),
        ]
    ).max(axis=0)
    out = ctx.outcome(res, 1.0 + ctx.amax("w13"))
    if out.status == "fail":
        out.reason = (
            "circulated trace combinations (1/33 weights, +-1/9 Ricci forms) "
            "do not solve the trace system away from Einstein metrics; the "
            "linear-solve oracle is authoritative and the engine closed forms "
            "match it (see krupka_oracle_match)"
        )
    return out


def _check_field_equation_trace(ctx: CheckContext) -> CheckOutcome:
    g, ginv, t, scal = ctx.get("g"), ctx.get("ginv"), ctx.get("t"), ctx.get("R")
    cfg = ctx.cfg
    res = np.zeros(ctx.points.shape[0])
    skipped = []
    for a in range(ctx.points.shape[0]):
        try:
            dec = rel.perfect_fluid_decompose(t[a], g[a], ginv[a], ctx.points[a])
        except rel.FluidError as err:
            skipped.append(str(err))
            continue
        res[a] = abs(scal[a] - (4.0 * cfg.lam + cfg.k * (dec.mu - 3.0 * dec.p)))
    if len(skipped) == ctx.points.shape[0]:
        return ctx.na("no perfect-fluid decomposition at any sample point")
    reason = None
    if skipped:
        reason = f"{len(skipped)} point(s) had no fluid form and were skipped"
    out = ctx.outcome(res, 1.0 + ctx.amax("R"))
    out.reason = reason or out.reason
    return out


def _check_weyl_divergence(ctx: CheckContext) -> CheckOutcome:
    nweyl = np.einsum("pijlkm->pijklm", ctx.get("nweyl"))
    direct = np.einsum("phi,pijklh->pjkl", ctx.get("ginv"), nweyl)
    printed = 0.5 * _divergence_formula(ctx, -1.0 / 3.0)  # codazzi/2 + grad/6
    deviation = float(np.max(_ptmax(direct - printed)))
    codazzi = float(np.max(_ptmax(_divergence_formula(ctx, 0.0))))
    grad = ctx.amax("gradR")
    note = f"printed closed form deviates from the direct route by {deviation:.3e}"
    scale = 1.0 + ctx.amax("nric")
    if codazzi > ctx.tol(scale) or grad > ctx.tol(ctx.amax("R")):
        return ctx.na(
            "Ricci tensor is not Codazzi at the sample points, so the "
            "vanishing conclusion does not apply; " + note
        )
    return ctx.outcome(_ptmax(direct), scale, note)


# --- property checks ----------------------------------------------------------


def _check_ricci_flat(ctx: CheckContext) -> CheckOutcome:
    return ctx.outcome(_ptmax(ctx.get("ric")), ctx.amax("r4"))


def _check_einstein(ctx: CheckContext) -> CheckOutcome:
    n = ctx.geo.dim
    dev = ctx.get("ric") - (ctx.get("R")[:, None, None] / n) * ctx.get("g")
    scale = ctx.amax("ric") + ctx.amax("R") * ctx.amax("g") / n
    out = ctx.outcome(_ptmax(dev), scale)
    trace_res = ctx.amax("w02")
    out.reason = f"independent trace route residual {trace_res:.3e}"
    return out


def _check_constant_scalar(ctx: CheckContext) -> CheckOutcome:
    return ctx.outcome(_ptmax(ctx.get("gradR")[:, None]), ctx.amax("R"))


def _check_codazzi(ctx: CheckContext) -> CheckOutcome:
    nric = ctx.get("nric")
    res = _ptmax(nric - np.einsum("pjlk->pjkl", nric))
    return ctx.outcome(res, ctx.amax("nric"))


def _check_ricci_recurrent(ctx: CheckContext) -> CheckOutcome:
    fit = rel.ricci_recurrence_fit(ctx.metric, ctx.points)
    if not fit.applicable:
        return ctx.na(fit.reason or "recurrence undefined")
    ric, nric = ctx.get("ric"), ctx.get("nric")
    usable = np.max(np.abs(ric), axis=(1, 2)) > 1e-10
    res = np.zeros(ctx.points.shape[0])
    res[usable] = _ptmax(
        nric[usable] - np.einsum("pjk,pm->pjkm", ric[usable], fit.b)
    )
    out = ctx.outcome(res, ctx.amax("nric"))
    out.reason = (
        f"recurrence 1-form closedness residual {fit.closedness_residual:.3e}"
    )
    return out


def _check_ricci_semisymmetric(ctx: CheckContext) -> CheckOutcome:
    comm = ricci_commutator(ctx.get("ric"), "ll", ctx.get("r13"))
    return ctx.outcome(_ptmax(comm), ctx.amax("r13") * ctx.amax("ric"))


def _check_wstar_flat(ctx: CheckContext) -> CheckOutcome:
    return ctx.outcome(_ptmax(ctx.get("w04")), ctx.amax("r4"))


def _check_wstar_divergence_free(ctx: CheckContext) -> CheckOutcome:
    return ctx.outcome(_ptmax(_divergence_direct(ctx)), ctx.amax("dw"))


def _check_wstar_parallel(ctx: CheckContext) -> CheckOutcome:
    return ctx.outcome(_ptmax(ctx.get("dw")), ctx.amax("w04"))


def _check_wstar_semisymmetric(ctx: CheckContext) -> CheckOutcome:
    comm = ricci_commutator(ctx.get("w04"), "llll", ctx.get("r13"))
    return ctx.outcome(_ptmax(comm), ctx.amax("r13") * ctx.amax("w04"))


def _check_quarter_rule(ctx: CheckContext) -> CheckOutcome:
    parallel = _check_wstar_parallel(ctx)
    if parallel.status != "pass":
        return ctx.na(
            "modified curvature is not covariantly constant here "
            f"(residual {parallel.max_residual:.3e}); the quarter-trace rule "
            "only applies in that regime"
        )
    n = ctx.geo.dim
    pred = np.einsum("pjk,pm->pjkm", ctx.get("g"), ctx.get("gradR")) / n
    return ctx.outcome(_ptmax(ctx.get("nric") - pred), 1.0 + ctx.amax("nric"))


def _check_t_parallel(ctx: CheckContext) -> CheckOutcome:
    return ctx.outcome(_ptmax(ctx.get("nt")), ctx.amax("t"))


def _check_t_codazzi(ctx: CheckContext) -> CheckOutcome:
    nt = ctx.get("nt")
    return ctx.outcome(_ptmax(nt - np.einsum("pjlk->pjkl", nt)), ctx.amax("nt"))


def _check_t_semisymmetric(ctx: CheckContext) -> CheckOutcome:
    comm = ricci_commutator(ctx.get("t"), "ll", ctx.get("r13"))
    return ctx.outcome(_ptmax(comm), ctx.amax("r13") * ctx.amax("t"))


def _check_em_distribution(ctx: CheckContext) -> CheckOutcome:
    rep = rel.em_distribution_check(ctx.metric, ctx.cfg, ctx.points)
    note = (
        f"trace reads R = +kT with residual {rep.literal_sign_residual:.3e}; "
        f"sign-reversed reading residual {rep.reversed_sign_residual:.3e}"
    )
    if rep.conclusion == "not-applicable":
        return ctx.na(
            "modified curvature is not covariantly constant "
            f"(residual {rep.symmetry_residual:.3e}); " + note
        )
    tol = ctx.tol(1.0 + rep.trace_max)
    status = "pass" if rep.nabla_t_max <= tol else "fail"
    return CheckOutcome(status, rep.nabla_t_max, tol, None, note)


def _check_dust_vacuum(ctx: CheckContext) -> CheckOutcome:
    rep = rel.dust_vacuum_check(ctx.metric, ctx.cfg, ctx.points)
    if rep.status == "not-applicable":
        return ctx.na(rep.detail)
    residual = rep.mu_max if rep.mu_max is not None else 0.0
    tol = ctx.tol(1.0)
    status = "pass" if residual <= tol else "fail"
    return CheckOutcome(status, residual, tol, None, rep.detail)


# --- theorem-consistency pairings ---------------------------------------------


def _pairing(name: str):
    def run(ctx: CheckContext) -> CheckOutcome:
        pairs = {
            p.name: p
            for p in rel.pairing_checks(
                ctx.metric, ctx.cfg, ctx.points, ctx.atol, ctx.rtol
            )
        }
        p = pairs[name]
        if p.holds is None:
            return ctx.na(p.detail, tolerance=0.5)
        status = "pass" if p.holds else "fail"
        return CheckOutcome(status, 0.0 if p.holds else 1.0, 0.5, None, p.detail)

    return run


REGISTRY: "Dict[str, Callable[[CheckContext], CheckOutcome]]" = {
    # identities - must pass on every metric
    "trace_identity": _check_trace_identity,
    "divergence_formula": _check_divergence_formula,
    "divergence_adjusted": _check_divergence_adjusted,
    "bianchi_identity": _check_bianchi_identity,
    "semisymmetry_trace_identity": _check_semisymmetry_trace_identity,
    "krupka_oracle_match": _check_krupka_oracle_match,
    "krupka_printed_forms": _check_krupka_printed_forms,
    "field_equation_trace": _check_field_equation_trace,
    "weyl_divergence": _check_weyl_divergence,
    # properties of the particular space-time
    "ricci_flat": _check_ricci_flat,
    "einstein": _check_einstein,
    "constant_scalar_curvature": _check_constant_scalar,
    "codazzi": _check_codazzi,
    "ricci_recurrent": _check_ricci_recurrent,
    "ricci_semisymmetric": _check_ricci_semisymmetric,
    "wstar_flat": _check_wstar_flat,
    "wstar_divergence_free": _check_wstar_divergence_free,
    "wstar_parallel": _check_wstar_parallel,
    "wstar_semisymmetric": _check_wstar_semisymmetric,
    "quarter_rule": _check_quarter_rule,
    "t_parallel": _check_t_parallel,
    "t_codazzi": _check_t_codazzi,
    "t_semisymmetric": _check_t_semisymmetric,
    "em_distribution": _check_em_distribution,
    "dust_vacuum": _check_dust_vacuum,
    # theorem-consistency pairings, each side computed independently
    "pairing_codazzi_divergence": _pairing("codazzi_iff_divergence_free"),
    "pairing_einstein_trace": _pairing("einstein_iff_trace_vanishes"),
    "pairing_parallel_semisymmetric": _pairing("parallel_implies_t_semisymmetric"),
    "pairing_flat_parallel_t": _pairing("flat_implies_constant_scalar_and_parallel_t"),
    "pairing_flat_lambda_fluid": _pairing("flat_implies_lambda_like_fluid"),
    "pairing_semisymmetric_t": _pairing("t_semisymmetric_iff_ricci_semisymmetric"),
}


def check_names():
    return tuple(REGISTRY)


def run_check(name: str, ctx: CheckContext) -> CheckOutcome:
    if name not in REGISTRY:
        raise KeyError(f"unknown check {name!r}")
    return REGISTRY[name](ctx)
