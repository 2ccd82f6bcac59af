"""Built-in metric catalog: five space-times exercising every check branch."""

from __future__ import annotations

from .exprlib import const, coord
from .geometry import MetricSpec, VectorFieldSpec
from .metricfile import parse_metric_text

__all__ = ["CATALOG_NAMES", "catalog_metric", "describe", "builtin_vector_fields"]

_TEXTS = {
    "minkowski": """\
# Flat space-time in inertial coordinates.
dim = 4
coords = t, x, y, z
domain t = -1 .. 1
domain x = -1 .. 1
domain y = -1 .. 1
domain z = -1 .. 1
g[0][0] = -1
g[1][1] = 1
g[2][2] = 1
g[3][3] = 1
""",
    "schwarzschild": """\
# Static spherically symmetric vacuum exterior; M is the central mass.
# Domain keeps r well away from the horizon r = 2M and theta away from the axis.
dim = 4
coords = t, r, theta, phi
param M = 1.0
domain t = 0 .. 10
domain r = 3.0 .. 20.0
domain theta = 0.3 .. 2.8
domain phi = 0 .. 6.28
g[0][0] = -(1 - 2*M/r)
g[1][1] = 1/(1 - 2*M/r)
g[2][2] = r^2
g[3][3] = r^2 * sin(theta)^2
""",
    "desitter_flat": """\
# Exponentially expanding flat slicing with Hubble rate H (maximal symmetry).
dim = 4
coords = t, x, y, z
param H = 1.0
domain t = -0.5 .. 0.5
domain x = -1 .. 1
domain y = -1 .. 1
domain z = -1 .. 1
g[0][0] = -1
g[1][1] = exp(2*H*t)
g[2][2] = exp(2*H*t)
g[3][3] = exp(2*H*t)
""",
    "flrw_dust": """\
# Spatially flat dust cosmology, scale factor a(t) = t^(2/3).
dim = 4
coords = t, x, y, z
domain t = 0.5 .. 5
domain x = -1 .. 1
domain y = -1 .. 1
domain z = -1 .. 1
g[0][0] = -1
g[1][1] = t^(4/3)
g[2][2] = t^(4/3)
g[3][3] = t^(4/3)
""",
    "perturbed_flat": """\
# Flat metric plus 0.05 times a fixed quadratic symmetric perturbation.
# Generic: not Einstein, curvature tensors have no special symmetry.
dim = 4
coords = t, x, y, z
domain t = -0.5 .. 0.5
domain x = -0.5 .. 0.5
domain y = -0.5 .. 0.5
domain z = -0.5 .. 0.5
g[0][0] = -1 + 0.05*(t^2 + x^2)
g[0][1] = 0.05*x*y
g[0][2] = 0.05*x*z
g[0][3] = 0.05*t*y
g[1][1] = 1 + 0.05*(y^2 + z^2)
g[1][2] = 0.05*y*z
g[1][3] = 0.05*t*x
g[2][2] = 1 + 0.05*(z^2 + t^2)
g[2][3] = 0.05*t*z
g[3][3] = 1 + 0.05*(x^2 + y^2)
""",
}

_DESCRIPTIONS = {
    "minkowski": "flat space-time; every curvature object vanishes",
    "schwarzschild": "vacuum black-hole exterior (M=1); Ricci-flat, curvature nonzero",
    "desitter_flat": "constant positive curvature (H=1); Einstein, maximally symmetric",
    "flrw_dust": "dust cosmology a(t)=t^(2/3); non-Einstein perfect fluid",
    "perturbed_flat": "flat plus generic quadratic perturbation; no special structure",
}

CATALOG_NAMES = tuple(_TEXTS)

_specs: dict = {}


def catalog_metric(name: str) -> MetricSpec:
    """Catalog metric by name; the returned object is shared across calls."""
    if name not in _TEXTS:
        raise KeyError(f"unknown catalog metric {name!r}")
    spec = _specs.get(name)
    if spec is None:
        spec = parse_metric_text(_TEXTS[name], name)
        _specs[name] = spec
    return spec


def describe(name: str) -> str:
    return _DESCRIPTIONS[name]


def builtin_vector_fields(metric: MetricSpec):
    """Vector fields used by the collineation checks.

    ``coordinate_time``: unit flow of the first coordinate (Killing for static
    metrics).  ``euler``: ξ^i = x^i, radial scaling (a homothety of flat space).
    """
    n = metric.dim
    d_t = VectorFieldSpec(
        "coordinate_time", tuple(const(1) if i == 0 else const(0) for i in range(n))
    )
    euler = VectorFieldSpec("euler", tuple(coord(i) for i in range(n)))
    return [d_t, euler]
