"""Convex-roof geometric entanglement for structured mixed families.

Mixtures that are invariant under a twirl over their natural symmetry group
reduce to convex hulls of pure-state entanglement curves; this module builds
those hulls on dense grids.
"""

import functools
import math
import warnings
from dataclasses import dataclass

import numpy as np

from ._util import spawn_rngs
from .errors import PreconditionError
from .geomopt import two_term_symmetric_lambda

SECOND_DIFF_TOL = -1e-12


@dataclass
class Curve1D:
    """Samples of a function on [0, 1]; xs strictly increasing, endpoints included."""

    xs: np.ndarray
    ys: np.ndarray

    def __post_init__(self):
        self.xs = np.asarray(self.xs, dtype=float)
        self.ys = np.asarray(self.ys, dtype=float)
        if self.xs.ndim != 1 or self.xs.shape != self.ys.shape:
            raise PreconditionError("xs and ys must be 1-D and equally long")
        if self.xs.size < 2 or np.any(np.diff(self.xs) <= 0):
            raise PreconditionError("xs must be strictly increasing")
        if abs(self.xs[0]) > 1e-12 or abs(self.xs[-1] - 1.0) > 1e-12:
            raise PreconditionError("curve must span [0, 1]")

    def value_at(self, x):
        return float(np.interp(x, self.xs, self.ys))


@dataclass
class Surface2D:
    """Entanglement over the simplex {x >= 0, y >= 0, x + y <= 1}, sampled on
    a rectangular (x, r) grid with y = (1 - x) r."""

    xs: np.ndarray
    rs: np.ndarray
    values: np.ndarray

    def value_at(self, x, y):
        if x < -1e-12 or y < -1e-12 or x + y > 1.0 + 1e-12:
            raise PreconditionError("(x, y) must lie in the probability simplex")
        x = min(max(x, 0.0), 1.0)
        y = min(max(y, 0.0), 1.0 - x)
        r = 0.0 if x >= 1.0 - 1e-15 else y / (1.0 - x)
        r = min(max(r, 0.0), 1.0)
        i = min(int(np.searchsorted(self.xs, x) - 1), len(self.xs) - 2)
        j = min(int(np.searchsorted(self.rs, r) - 1), len(self.rs) - 2)
        i = max(i, 0)
        j = max(j, 0)
        tx = (x - self.xs[i]) / (self.xs[i + 1] - self.xs[i])
        tr = (r - self.rs[j]) / (self.rs[j + 1] - self.rs[j])
        v = self.values
        return float(
            (1 - tx) * (1 - tr) * v[i, j]
            + tx * (1 - tr) * v[i + 1, j]
            + (1 - tx) * tr * v[i, j + 1]
            + tx * tr * v[i + 1, j + 1]
        )


def _lower_hull_values(xs, ys):
    """Lower convex envelope evaluated back on the sample grid."""
    hull = []  # indices of hull vertices
    for i in range(len(xs)):
        while len(hull) >= 2:
            i0, i1 = hull[-2], hull[-1]
            cross = (xs[i1] - xs[i0]) * (ys[i] - ys[i0]) - (ys[i1] - ys[i0]) * (xs[i] - xs[i0])
            if cross <= 0.0:
                hull.pop()
            else:
                break
        hull.append(i)
    return np.interp(xs, xs[hull], ys[hull])


def convex_hull_1d(curve):
    """Lower convex envelope of a sampled curve, on the same grid."""
    return Curve1D(curve.xs, _lower_hull_values(curve.xs, curve.ys))


def mixed_symmetric_gme(n, k1, k2, s, grid=401):
    """Convex-roof E_sin2 of the two-component symmetric mixture with weight s
    on the k1 component, via the hull of the pure superposition curve."""
    if grid < 101:
        raise PreconditionError("grid must be at least 101")
    if not 0.0 <= s <= 1.0:
        raise PreconditionError("s must lie in [0, 1]")
    qs = np.linspace(0.0, 1.0, grid)
    pure = np.array(
        [1.0 - two_term_symmetric_lambda(n, k1, k2, q) ** 2 for q in qs]
    )
    hull = convex_hull_1d(Curve1D(qs, pure))
    return hull.value_at(s)


def _lambda_sq_grid(a, b, c):
    """Vectorized squared overlap maximum for coefficient arrays (a, b, c).

    Solves the stationarity cubic per point by bracketed bisection and keeps
    the best stationary value; the boundary product states contribute a.
    """
    a = np.asarray(a, dtype=float).reshape(-1)
    b = np.asarray(b, dtype=float).reshape(-1)
    c = np.asarray(c, dtype=float).reshape(-1)
    npts = a.size
    best = a.copy()  # t = 0 / t -> inf candidates give lambda = a
    ts = np.linspace(0.0, 10.0, 1001)
    chunk = 8192
    for lo_i in range(0, npts, chunk):
        sl = slice(lo_i, min(lo_i + chunk, npts))
        ca, cb, cc = a[sl][:, None], b[sl][:, None], c[sl][:, None]
        g = 3.0 * ca * (ts * ts - ts) + cb * (1.0 - 2.0 * ts * ts) + cc * (2.0 * ts - ts ** 3)
        sign = np.sign(g)
        flip_pt, flip_t = np.nonzero(sign[:, :-1] * sign[:, 1:] < 0)
        zero_pt, zero_t = np.nonzero(np.abs(g) < 1e-15)
        pts = np.concatenate([flip_pt, zero_pt])
        lo = np.concatenate([ts[flip_t], ts[zero_t]])
        hi = np.concatenate([ts[flip_t + 1], ts[zero_t]])
        if pts.size == 0:
            continue
        pa, pb, pc = ca[pts, 0], cb[pts, 0], cc[pts, 0]

        def geval(t):
            return 3.0 * pa * (t * t - t) + pb * (1.0 - 2.0 * t * t) + pc * (2.0 * t - t ** 3)

        glo = geval(lo)
        for _ in range(80):
            mid = 0.5 * (lo + hi)
            gm = geval(mid)
            same = (gm > 0) == (glo > 0)
            lo = np.where(same, mid, lo)
            glo = np.where(same, gm, glo)
            hi = np.where(same, hi, mid)
        t = 0.5 * (lo + hi)
        lam = (pa * (1.0 + t ** 3) + pb * t + pc * t * t) / (1.0 + t * t) ** 1.5
        np.maximum.at(best, np.arange(npts)[sl][pts], lam)
    return best ** 2


@functools.lru_cache(maxsize=4)
def ghz_w_surface(grid=401):
    """Two-pass convexified entanglement surface of the GHZ / W / inverted-W
    mixture family, on a (grid x grid) rectangular (x, r) lattice."""
    if grid < 101:
        raise PreconditionError("grid must be at least 101")
    xs = np.linspace(0.0, 1.0, grid)
    rs = np.linspace(0.0, 1.0, grid)
    xg = xs[:, None] * np.ones((1, grid))
    yg = (1.0 - xs)[:, None] * rs[None, :]
    a = np.sqrt(xg / 2.0)
    b = np.sqrt(3.0 * yg)
    c = np.sqrt(np.clip(3.0 * (1.0 - xg - yg), 0.0, None))
    energy = 1.0 - _lambda_sq_grid(a, b, c).reshape(grid, grid)
    energy = np.clip(energy, 0.0, None)

    hulled = np.empty_like(energy)
    for i in range(grid):  # pass 1: along the mixing ratio r at fixed x
        hulled[i, :] = _lower_hull_values(rs, energy[i, :])
    for j in range(grid):  # pass 2: along x at fixed r
        hulled[:, j] = _lower_hull_values(xs, hulled[:, j])

    surface = Surface2D(xs, rs, hulled)
    _audit_convexity(surface)
    return surface


def _audit_convexity(surface, segments=1000, tol=1e-6):
    rng = spawn_rngs(0, 1)[0]
    worst = 0.0
    for _ in range(segments):
        p = rng.random(2)
        q = rng.random(2)
        if p.sum() > 1.0:
            p = 1.0 - p
        if q.sum() > 1.0:
            q = 1.0 - q
        e0 = surface.value_at(*p)
        e1 = surface.value_at(*q)
        for t in np.linspace(0.0, 1.0, 11)[1:-1]:
            mid = (1 - t) * p + t * q
            gap = surface.value_at(*mid) - ((1 - t) * e0 + t * e1)
            worst = max(worst, gap)
    if worst > tol:
        warnings.warn(
            f"convexified surface violates segment convexity by {worst:.3e}",
            RuntimeWarning,
            stacklevel=2,
        )


def ghz_w_wtilde_mixed_gme(x, y, grid=401):
    """Convex-roof E_sin2 of the rank-3 mixture with weights (x, y, 1-x-y) on
    the GHZ, W, and inverted-W projectors."""
    surface = ghz_w_surface(grid)
    return surface.value_at(x, y)
