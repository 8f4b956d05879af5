"""Tests for convex-roof machinery on symmetric mixtures and the GHZ/W surface."""

import math

import numpy as np
import pytest

from gmelab import (
    Curve1D,
    convex_hull_1d,
    ghz_w_surface,
    ghz_w_wtilde_mixed_gme,
    mixed_symmetric_gme,
)
from gmelab.errors import PreconditionError
from gmelab.geomopt import lambda_symmetric, two_term_symmetric_lambda


def pure_two_term_e(n, k1, k2, s):
    lam = two_term_symmetric_lambda(n, k1, k2, s)
    return 1.0 - lam * lam


# ---------------------------------------------------------------------------
# 1-D hull
# ---------------------------------------------------------------------------


def test_hull_of_convex_input_is_identity():
    xs = np.linspace(0.0, 1.0, 101)
    ys = (xs - 0.4) ** 2
    hull = convex_hull_1d(Curve1D(xs, ys))
    assert np.max(np.abs(hull.ys - ys)) < 1e-12
    assert np.array_equal(hull.xs, xs)


def test_hull_flattens_concave_bump():
    xs = np.linspace(0.0, 1.0, 201)
    ys = np.sin(math.pi * xs)  # concave: hull is the chord between endpoints
    hull = convex_hull_1d(Curve1D(xs, ys))
    assert np.max(np.abs(hull.ys - 0.0)) < 1e-12


def test_hull_curve_validation():
    with pytest.raises(PreconditionError):
        Curve1D(np.array([0.0, 0.5, 0.5, 1.0]), np.zeros(4))  # not strictly increasing
    with pytest.raises(PreconditionError):
        Curve1D(np.array([0.1, 0.5, 1.0]), np.zeros(3))  # missing endpoint 0


def test_w_wtilde_curve_already_convex():
    xs = np.linspace(0.0, 1.0, 201)
    ys = np.array([pure_two_term_e(3, 1, 2, s) for s in xs])
    hull = convex_hull_1d(Curve1D(xs, ys))
    assert np.max(np.abs(hull.ys - ys)) < 1e-9


def test_seven_party_curve_gains_flat_middle():
    xs = np.linspace(0.0, 1.0, 201)
    ys = np.array([pure_two_term_e(7, 2, 5, s) for s in xs])
    hull = convex_hull_1d(Curve1D(xs, ys))
    gap = ys - hull.ys
    assert gap.min() > -1e-12
    assert gap.max() > 1e-3  # a genuinely flattened stretch
    # hull flat (linear) where it separates from the input
    seam = gap > 1e-9
    seg = hull.ys[seam]
    diffs = np.diff(seg, 2)
    assert np.max(np.abs(diffs)) < 1e-6


# ---------------------------------------------------------------------------
# symmetric mixtures
# ---------------------------------------------------------------------------


def test_mixture_of_product_extremes_is_unentangled():
    for n in (3, 5):
        for s in (0.0, 0.3, 0.7, 1.0):
            assert mixed_symmetric_gme(n, 0, n, s, grid=101) < 1e-12


def test_w_wtilde_mixture_midpoint():
    assert abs(mixed_symmetric_gme(3, 1, 2, 0.5, grid=201) - 0.25) < 1e-6


def test_mixture_endpoints_reduce_to_pure():
    for n, k1, k2 in [(3, 1, 2), (4, 2, 0), (7, 2, 5)]:
        e1 = 1.0 - lambda_symmetric(n, [k1, n - k1]) ** 2
        e2 = 1.0 - lambda_symmetric(n, [k2, n - k2]) ** 2
        assert abs(mixed_symmetric_gme(n, k1, k2, 1.0, grid=101) - e1) < 1e-9
        assert abs(mixed_symmetric_gme(n, k1, k2, 0.0, grid=101) - e2) < 1e-9


def test_mixture_roof_below_pure_curve():
    for s in np.linspace(0.0, 1.0, 11):
        mixed = mixed_symmetric_gme(7, 2, 5, float(s), grid=101)
        pure = pure_two_term_e(7, 2, 5, float(s))
        assert mixed <= pure + 1e-9


def test_mixture_segment_convexity():
    ss = np.linspace(0.0, 1.0, 11)
    vals = np.array([mixed_symmetric_gme(7, 2, 5, float(s), grid=101) for s in ss])
    assert np.min(np.diff(vals, 2)) > -1e-9


def test_mixture_mixing_never_increases_entanglement():
    # E(p rho(s1) + (1-p) rho(s2)) <= p E(rho(s1)) + (1-p) E(rho(s2))
    n, k1, k2 = 7, 2, 5
    for s1, s2, p in [(0.2, 0.8, 0.5), (0.1, 0.6, 0.3), (0.4, 1.0, 0.7)]:
        blend = p * s1 + (1 - p) * s2
        lhs = mixed_symmetric_gme(n, k1, k2, blend, grid=101)
        rhs = p * mixed_symmetric_gme(n, k1, k2, s1, grid=101) + (
            1 - p
        ) * mixed_symmetric_gme(n, k1, k2, s2, grid=101)
        assert lhs <= rhs + 1e-9


def test_mixture_input_validation():
    with pytest.raises(PreconditionError):
        mixed_symmetric_gme(3, 1, 1, 0.5)
    with pytest.raises(PreconditionError):
        mixed_symmetric_gme(3, 1, 2, 1.5)
    with pytest.raises(PreconditionError):
        mixed_symmetric_gme(3, 1, 2, 0.5, grid=50)


# ---------------------------------------------------------------------------
# GHZ/W/W-tilde surface
# ---------------------------------------------------------------------------


def test_surface_separable_node():
    assert ghz_w_wtilde_mixed_gme(0.25, 0.375, grid=201) < 1e-6


def test_surface_ghz_corner():
    assert abs(ghz_w_wtilde_mixed_gme(1.0, 0.0, grid=101) - 0.5) < 1e-9


def test_surface_x_zero_column_matches_1d_family():
    for s in (0.0, 0.25, 0.5, 0.75, 1.0):
        surf = ghz_w_wtilde_mixed_gme(0.0, s, grid=201)
        line = mixed_symmetric_gme(3, 2, 1, s, grid=201)
        assert abs(surf - line) < 1e-6


def test_surface_segment_convexity():
    # straight segment in (x, y) from near-W corner to GHZ corner
    surface = ghz_w_surface(grid=201)
    t = np.linspace(0.0, 1.0, 11)
    xs = 0.05 + (1.0 - 0.05) * t
    ys = 0.9 * (1.0 - t)
    vals = np.array([surface.value_at(float(x), float(y)) for x, y in zip(xs, ys)])
    assert np.min(np.diff(vals, 2)) > -1e-9


def test_surface_nonnegative_and_capped():
    surface = ghz_w_surface(grid=101)
    assert np.min(surface.values) > -1e-12
    assert np.max(surface.values) <= 1.0
