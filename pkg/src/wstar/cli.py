"""Command-line entry point: catalog listing, check runs, point evaluation.

Exit codes: 0 all requested checks passed (or output-only commands succeeded),
1 at least one check failed, 2 usage or input-parsing problem, 3 evaluation
error (bad point, singular metric, arithmetic failure).  Reports are
deterministic for a fixed (metric, seed, points, tolerances) tuple; pass
``--no-timestamp`` to make JSON output byte-identical across runs.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import catalog, relativity as rel, wstar as ws
from .checks import CheckContext, REGISTRY, run_check
from .geometry import Geometry, MetricSpec, workspace
from .metricfile import MetricFileError, load_metric as _load_metric_file
from .report import CheckReport, RunReport, render_json, render_table, utc_stamp
from .sampling import DET_FLOOR, SamplingError, sample_points
from .tape import TapeEvalError

__all__ = ["RunConfig", "load_metric", "run_checks", "compute_at", "main"]

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_EVAL = 3


class UsageError(Exception):
    pass


class EvalError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    """Validated options shared by the check and classify commands."""

    metric: str
    checks: tuple = ("all",)
    points: int = 32
    seed: int = 42
    rtol: float = 1e-6
    atol: float = 1e-9
    k: float = 1.0
    lam: float = 0.0
    fmt: str = "json"
    timestamp: bool = True

    def __post_init__(self):
        if self.points < 1:
            raise UsageError("--points must be at least 1")
        if not self.rtol > 0.0:
            raise UsageError("--rtol must be positive")
        if not self.atol > 0.0:
            raise UsageError("--atol must be positive")
        if self.fmt not in ("json", "table"):
            raise UsageError("--format must be 'json' or 'table'")
        if self.k == 0.0:
            raise UsageError("--k must be nonzero")
        bad = [c for c in self.checks if c != "all" and c not in REGISTRY]
        if bad:
            known = ", ".join(REGISTRY)
            raise UsageError(
                f"unknown check name(s): {', '.join(bad)};"
                f" available: all, {known}"
            )


def load_metric(source: str) -> MetricSpec:
    """A catalog name, or a path to a metric definition file."""
    if source in catalog.CATALOG_NAMES:
        return catalog.catalog_metric(source)
    if os.path.exists(source):
        return _load_metric_file(source)
    names = ", ".join(catalog.CATALOG_NAMES)
    raise UsageError(
        f"metric {source!r} is neither a catalog name ({names}) "
        "nor an existing file"
    )


def sample_for(geo: Geometry, count: int, seed: int) -> np.ndarray:
    """Deterministic in-domain sample, rejecting near-degenerate points."""
    reject = lambda row: geo.det_values(row[None, :])[0] <= DET_FLOOR
    return sample_points(geo.metric.domain, count, seed, reject=reject)


def _check_names(cfg: RunConfig) -> tuple:
    if "all" in cfg.checks:
        return tuple(REGISTRY)
    return cfg.checks


def run_checks(cfg: RunConfig) -> RunReport:
    metric = load_metric(cfg.metric)
    geo = workspace(metric)
    pts = sample_for(geo, cfg.points, cfg.seed)
    ctx = CheckContext(
        metric, pts, rel.FieldEquationConfig(k=cfg.k, lam=cfg.lam),
        atol=cfg.atol, rtol=cfg.rtol,
    )
    rep = RunReport(
        metric=metric.name, seed=cfg.seed, points=cfg.points,
        atol=cfg.atol, rtol=cfg.rtol, k=cfg.k, lam=cfg.lam,
        dim=metric.dim, coords=tuple(metric.coords),
        timestamp=utc_stamp() if cfg.timestamp else None,
    )
    for name in _check_names(cfg):
        try:
            out = run_check(name, ctx)
        except (TapeEvalError, FloatingPointError, np.linalg.LinAlgError,
                ZeroDivisionError, rel.FluidError) as err:
            rep.checks.append(
                CheckReport(name, "fail", float("inf"), ctx.tol(0.0), None,
                            f"evaluation error: {err}")
            )
            continue
        rep.checks.append(
            CheckReport(
                name, out.status, out.max_residual, out.tolerance,
                None if out.worst_point is None else [float(v) for v in out.worst_point],
                out.reason,
            )
        )
    return rep


# --- point evaluation ---------------------------------------------------------

_TENSOR_NAMES = (
    "metric", "inverse", "christoffel", "riemann", "ricci", "scalar",
    "weyl", "wstar", "wstar_contraction", "energy_momentum", "krupka",
)


def _field_for(name: str, metric: MetricSpec, geo: Geometry,
               cfg: rel.FieldEquationConfig):
    if name == "metric":
        return geo.g
    if name == "inverse":
        return geo.ginv
    if name == "christoffel":
        return geo.christoffel
    if name == "riemann":
        return geo.riemann04
    if name == "ricci":
        return geo.ricci
    if name == "scalar":
        return geo.scalar_field
    if name == "weyl":
        return geo.weyl
    if name == "wstar":
        return ws.wstar_tensor(metric).wstar04
    if name == "wstar_contraction":
        return ws.wstar_tensor(metric).wstar02
    if name == "energy_momentum":
        return rel.energy_momentum(metric, cfg)
    raise UsageError(f"unknown tensor {name!r}; choose from {', '.join(_TENSOR_NAMES)}")


def _entries(values: np.ndarray):
    if values.ndim == 0:
        yield "", float(values)
        return
    for idx in np.ndindex(values.shape):
        v = float(values[idx])
        if v != 0.0:
            yield "(" + ",".join(str(i) for i in idx) + ")", v


def _render_values(values: np.ndarray, prefix: str = "") -> list:
    if values.ndim == 0:
        body = repr(float(values))
        return [f"{prefix}: {body}" if prefix else body]
    lines = [f"{prefix}{key}: {v!r}" for key, v in _entries(values)]
    if not lines:
        lines.append(f"{prefix}: all components zero" if prefix
                     else "all components zero")
    return lines


def parse_point(at: str, metric: MetricSpec) -> np.ndarray:
    given = {}
    for item in at.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise UsageError(f"--at entries look like name=value; got {item!r}")
        key, _, raw = item.partition("=")
        key = key.strip()
        if key not in metric.coords:
            raise UsageError(
                f"unknown coordinate {key!r}; this metric uses "
                + ", ".join(metric.coords)
            )
        if key in given:
            raise UsageError(f"coordinate {key!r} given twice")
        try:
            given[key] = float(raw)
        except ValueError:
            raise UsageError(f"coordinate {key!r} has non-numeric value {raw!r}")
    missing = [c for c in metric.coords if c not in given]
    if missing:
        raise UsageError("missing coordinate value(s): " + ", ".join(missing))
    point = np.array([given[c] for c in metric.coords], dtype=float)
    for c, v, (lo, hi) in zip(metric.coords, point, metric.domain):
        if not lo <= v <= hi:
            raise EvalError(
                f"coordinate {c}={v:g} is outside the metric domain [{lo:g}, {hi:g}]"
            )
    return point


def compute_at(tensor: str, metric: MetricSpec, point: np.ndarray,
               cfg: rel.FieldEquationConfig) -> str:
    geo = workspace(metric)
    if tensor == "krupka":
        b = ws.wstar_tensor(metric)
        w13 = geo.eval_field(b.wstar13, point[None, :])[0]
        parts = ws.krupka_decompose(w13)
        lines = []
        for label in ("B", "C", "D", "E"):
            lines.extend(_render_values(getattr(parts, label), prefix=f"{label}"))
        return "\n".join(lines)
    field = _field_for(tensor, metric, geo, cfg)
    values = geo.eval_field(field, point[None, :])[0]
    return "\n".join(_render_values(np.asarray(values)))


# --- classify -----------------------------------------------------------------


def classify_payload(cfg: RunConfig) -> tuple:
    """(payload dict, any-pairing-violated flag)."""
    metric = load_metric(cfg.metric)
    geo = workspace(metric)
    pts = sample_for(geo, cfg.points, cfg.seed)
    fe = rel.FieldEquationConfig(k=cfg.k, lam=cfg.lam)
    record = rel.classify(metric, fe, pts, atol=cfg.atol, rtol=cfg.rtol)
    pairs = rel.pairing_checks(metric, fe, pts, cfg.atol, cfg.rtol)
    flags = {}
    residuals = {}
    for name, fr in record.flags().items():
        flags[name] = fr.flag
        entry = {"residual": float(fr.residual), "threshold": float(fr.threshold)}
        if fr.note:
            entry["note"] = fr.note
        residuals[name] = entry
    payload = {
        "metric": metric.name,
        "seed": cfg.seed,
        "points": cfg.points,
        "tolerances": {"atol": cfg.atol, "rtol": cfg.rtol},
        "k": cfg.k,
        "lambda": cfg.lam,
        "flags": flags,
        "residuals": residuals,
        "pairings": [
            {"name": p.name, "holds": p.holds, "detail": p.detail} for p in pairs
        ],
    }
    if cfg.timestamp:
        payload["timestamp"] = utc_stamp()
    violated = any(p.holds is False for p in pairs)
    return payload, violated


def _classify_table(payload: dict) -> str:
    lines = [
        f"metric: {payload['metric']}   points: {payload['points']}"
        f"   seed: {payload['seed']}",
        "",
    ]
    word = {True: "yes", False: "no", None: "n/a"}
    width = max(len(n) for n in payload["flags"])
    for name, flag in payload["flags"].items():
        r = payload["residuals"][name]
        extra = f"   (residual {r['residual']:.3e}, threshold {r['threshold']:.3e})"
        note = f"   -- {r['note']}" if "note" in r else ""
        lines.append(f"{name.ljust(width)}  {word[flag].ljust(3)}{extra}{note}")
    lines.append("")
    lines.append("theorem pairings:")
    for p in payload["pairings"]:
        tag = {True: "consistent", False: "VIOLATED", None: "n/a"}[p["holds"]]
        lines.append(f"  {p['name']}: {tag} -- {p['detail']}")
    if "timestamp" in payload:
        lines.append("")
        lines.append(f"generated: {payload['timestamp']}")
    return "\n".join(lines)


# --- argument parsing ---------------------------------------------------------


def _add_run_flags(p: argparse.ArgumentParser):
    p.add_argument("--metric", required=True, help="catalog name or metric file path")
    p.add_argument("--points", type=int, default=32)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--rtol", type=float, default=1e-6)
    p.add_argument("--atol", type=float, default=1e-9)
    p.add_argument("--k", type=float, default=1.0, help="gravitational coupling")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0,
                   help="cosmological constant")
    p.add_argument("--format", dest="fmt", choices=("json", "table"),
                   default="json")
    p.add_argument("--no-timestamp", dest="timestamp", action="store_false",
                   help="omit the timestamp for byte-identical output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wstar",
        description=(
            "Evaluate curvature identities, space-time properties, and "
            "theorem-consistency pairings for a metric at sampled points."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    cat = sub.add_parser("catalog", help="work with the built-in metric catalog")
    cat_sub = cat.add_subparsers(dest="catalog_command", required=True)
    cat_sub.add_parser("list", help="list built-in metrics")

    chk = sub.add_parser("check", help="run named checks against a metric")
    _add_run_flags(chk)
    chk.add_argument(
        "--checks", default="all",
        help="comma-separated check names, or 'all' (default)",
    )

    cmp_ = sub.add_parser("compute", help="evaluate one tensor at one point")
    cmp_.add_argument("--metric", required=True)
    cmp_.add_argument("--tensor", required=True, choices=_TENSOR_NAMES)
    cmp_.add_argument("--at", required=True,
                      help="comma-separated coordinates, e.g. t=1,r=4,theta=1.2,phi=0")
    cmp_.add_argument("--k", type=float, default=1.0)
    cmp_.add_argument("--lambda", dest="lam", type=float, default=0.0)

    cls = sub.add_parser("classify", help="report property flags and pairings")
    _add_run_flags(cls)
    return parser


def _cmd_catalog(args) -> int:
    for name in catalog.CATALOG_NAMES:
        print(f"{name}: {catalog.describe(name)}")
    return EXIT_OK


def _cmd_check(args) -> int:
    names = tuple(s.strip() for s in args.checks.split(",") if s.strip())
    if not names:
        raise UsageError("--checks needs at least one name or 'all'")
    cfg = RunConfig(
        metric=args.metric, checks=names, points=args.points, seed=args.seed,
        rtol=args.rtol, atol=args.atol, k=args.k, lam=args.lam,
        fmt=args.fmt, timestamp=args.timestamp,
    )
    rep = run_checks(cfg)
    print(render_json(rep) if cfg.fmt == "json" else render_table(rep))
    return EXIT_CHECK_FAILED if rep.failed else EXIT_OK


def _cmd_compute(args) -> int:
    metric = load_metric(args.metric)
    cfg = rel.FieldEquationConfig(k=args.k, lam=args.lam)
    point = parse_point(args.at, metric)
    print(compute_at(args.tensor, metric, point, cfg))
    return EXIT_OK


def _cmd_classify(args) -> int:
    cfg = RunConfig(
        metric=args.metric, points=args.points, seed=args.seed,
        rtol=args.rtol, atol=args.atol, k=args.k, lam=args.lam,
        fmt=args.fmt, timestamp=args.timestamp,
    )
    payload, violated = classify_payload(cfg)
    if cfg.fmt == "json":
        import json

        print(json.dumps(payload, indent=2))
    else:
        print(_classify_table(payload))
    return EXIT_CHECK_FAILED if violated else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {
        "catalog": _cmd_catalog,
        "check": _cmd_check,
        "compute": _cmd_compute,
        "classify": _cmd_classify,
    }[args.command]
    try:
        return handler(args)
    except (UsageError, MetricFileError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except (EvalError, SamplingError, TapeEvalError, FloatingPointError,
            np.linalg.LinAlgError, rel.FluidError) as err:
        print(f"evaluation error: {err}", file=sys.stderr)
        return EXIT_EVAL


if __name__ == "__main__":  # pragma: no cover - exercised via the console script
    sys.exit(main())
