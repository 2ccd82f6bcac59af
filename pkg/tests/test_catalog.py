"""Tests for the built-in metric catalog."""

import numpy as np
import pytest

from wstar.catalog import CATALOG_NAMES, builtin_vector_fields, catalog_metric, describe
from wstar.exprlib import Point, coord, const, evaluate

EXPECTED = ("minkowski", "schwarzschild", "desitter_flat", "flrw_dust", "perturbed_flat")


def test_catalog_names():
    assert CATALOG_NAMES == EXPECTED


def test_unknown_name():
    with pytest.raises(KeyError):
        catalog_metric("kerr")


def test_specs_are_cached_by_identity():
    for name in CATALOG_NAMES:
        assert catalog_metric(name) is catalog_metric(name)


def test_all_metrics_are_4d_and_symmetric():
    for name in CATALOG_NAMES:
        spec = catalog_metric(name)
        assert spec.dim == 4
        assert len(spec.domain) == 4
        for lo, hi in spec.domain:
            assert lo < hi
        for i in range(4):
            for j in range(4):
                assert spec.g[i][j] == spec.g[j][i]


def test_descriptions_exist():
    for name in CATALOG_NAMES:
        assert isinstance(describe(name), str) and describe(name)


def test_minkowski_is_constant_diagonal():
    spec = catalog_metric("minkowski")
    p = Point((0.3, -0.2, 0.9, 0.1), {})
    diag = [evaluate(spec.g[i][i], p) for i in range(4)]
    assert diag == [-1.0, 1.0, 1.0, 1.0]
    assert spec.g[0][1] == const(0)


def test_schwarzschild_parameters_and_domain():
    spec = catalog_metric("schwarzschild")
    assert spec.params == {"M": 1.0}
    assert spec.domain[1] == (3.0, 20.0)
    # horizon factor at r = 4M: g_tt = -(1 - 1/2) = -1/2
    p = Point((0.0, 4.0, 1.0, 0.0), {"M": 1.0})
    assert evaluate(spec.g[0][0], p) == pytest.approx(-0.5)


def test_desitter_spatial_scale():
    spec = catalog_metric("desitter_flat")
    p = Point((0.25, 0.0, 0.0, 0.0), {"H": 2.0})
    assert evaluate(spec.g[1][1], p) == pytest.approx(np.exp(1.0))


def test_flrw_uses_rational_power_of_time():
    spec = catalog_metric("flrw_dust")
    p = Point((8.0, 0.0, 0.0, 0.0), {})
    # a(t)^2 = t^(4/3): 8^(4/3) = 16
    assert evaluate(spec.g[1][1], p) == pytest.approx(16.0)


def test_perturbed_flat_has_generic_off_diagonals():
    spec = catalog_metric("perturbed_flat")
    p = Point((0.2, 0.3, 0.4, 0.5), {})
    assert evaluate(spec.g[0][1], p) == pytest.approx(0.05 * 0.3 * 0.4)
    assert evaluate(spec.g[0][0], p) == pytest.approx(-1 + 0.05 * (0.04 + 0.09))
    # every component nonzero somewhere: no accidental structure
    for i in range(4):
        for j in range(4):
            assert spec.g[i][j] != const(0)


def test_builtin_vector_fields():
    mink = catalog_metric("minkowski")
    fields = builtin_vector_fields(mink)
    assert [f.name for f in fields] == ["coordinate_time", "euler"]
    d_t, euler = fields
    assert d_t.components == (const(1), const(0), const(0), const(0))
    assert euler.components == tuple(coord(i) for i in range(4))
