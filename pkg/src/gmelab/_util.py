"""Small numeric helpers shared across modules."""

import math
import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
_INVPHI2 = (3.0 - math.sqrt(5.0)) / 2.0


def worker_count():
    """Worker cap from GME_THREADS (0 or unset = auto)."""
    raw = os.environ.get("GME_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n <= 0:
        n = os.cpu_count() or 1
    return n


def run_indexed(fn, items):
    """Map fn over items, threaded when allowed; order always preserved."""
    items = list(items)
    workers = min(worker_count(), len(items)) if items else 1
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def golden_max(f, lo, hi, tol=1e-12, max_iter=300):
    """Golden-section maximization of a unimodal f on [lo, hi].

    Returns (x, f(x)). Endpoints are included as candidates, so a boundary
    maximum is still reported correctly.
    """
    a, b = float(lo), float(hi)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)
    c = a + _INVPHI2 * h
    d = a + _INVPHI * h
    fc, fd = f(c), f(d)
    for _ in range(max_iter):
        if h <= tol:
            break
        if fc >= fd:
            b, d, fd = d, c, fc
            h = b - a
            c = a + _INVPHI2 * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + _INVPHI * h
            fd = f(d)
    x, fx = (c, fc) if fc >= fd else (d, fd)
    for xe in (lo, hi):
        fe = f(xe)
        if fe > fx:
            x, fx = xe, fe
    return x, fx


def binary_entropy(p):
    """Shannon entropy of (p, 1-p) in bits."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * math.log2(p) - (1.0 - p) * math.log2(1.0 - p))


def spawn_rngs(seed, n):
    """n independent child generators of a root seed (schedule-independent)."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(n)]


def fmt12(x):
    """Floats with 12 significant digits, integers and strings verbatim."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)
