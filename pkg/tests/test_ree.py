"""Tests for relative-entropy-of-entanglement bounds and the numeric minimizer."""

import math

import numpy as np
import pytest

from gmelab import (
    F_function,
    PureState,
    ReeConfig,
    conjectured_ree,
    entanglement_eigenvalue,
    numeric_ree,
    partial_trace,
    plenio_vedral_bound,
    ree_lower_bound,
)
from gmelab.errors import PreconditionError
from gmelab.geomopt import det_state, dicke, lambda_symmetric
from gmelab.qstate import DensityMatrix

LOG2_9_4 = math.log2(9.0 / 4.0)
FAST = ReeConfig(restarts=1, max_evaluations=1500, seed=0)


def ghz(n=3):
    v = np.zeros(2**n)
    v[0] = v[-1] = 1.0 / math.sqrt(2.0)
    return PureState((2,) * n, v)


def dicke_mixture(n, k1, k2, s):
    a = dicke(n, k1).vector
    b = dicke(n, k2).vector
    m = s * np.outer(a, a.conj()) + (1.0 - s) * np.outer(b, b.conj())
    return DensityMatrix((2,) * n, m)


def two_support(n, k1, k2, s):
    p = np.zeros(n + 1)
    p[k1] = s
    p[k2] = 1.0 - s
    return p


def n2_closed_form(s):
    """Known exact REE of the two-qubit mixture s|11><11| + (1-s)|Psi+><Psi+|."""
    return s * math.log2(4.0 * s / (1.0 + s) ** 2) + (1.0 - s) * math.log2(2.0 / (1.0 + s))


# ---------------------------------------------------------------------------
# pure-state lower bound
# ---------------------------------------------------------------------------


def test_lower_bound_values():
    assert abs(ree_lower_bound(ghz(3)) - 1.0) < 1e-9
    assert abs(ree_lower_bound(dicke(3, 2)) - LOG2_9_4) < 1e-9
    assert abs(ree_lower_bound(det_state(2)) - 1.0) < 1e-9
    assert abs(ree_lower_bound(det_state(3)) - math.log2(6.0)) < 1e-7


# ---------------------------------------------------------------------------
# F upper bound
# ---------------------------------------------------------------------------


def test_F_matches_two_qubit_closed_form():
    for s in np.linspace(0.1, 0.9, 9):
        got = F_function(2, two_support(2, 0, 1, float(s)))
        assert abs(got - n2_closed_form(float(s))) < 1e-12


def test_F_single_support_is_pure_value():
    for n, k in [(3, 1), (4, 2), (6, 2)]:
        p = np.zeros(n + 1)
        p[k] = 1.0
        want = -2.0 * math.log2(lambda_symmetric(n, [k, n - k]))
        assert abs(F_function(n, p) - want) < 1e-12


def test_F_product_state_is_zero():
    p = np.zeros(5)
    p[0] = 1.0
    assert abs(F_function(4, p)) < 1e-12


def test_F_rejects_bad_distribution():
    with pytest.raises(PreconditionError):
        F_function(3, [0.5, 0.5])  # wrong length
    with pytest.raises(PreconditionError):
        F_function(3, [0.5, 0.2, 0.2, 0.2])  # sums to 1.1


# ---------------------------------------------------------------------------
# conjectured REE (convex hull of F)
# ---------------------------------------------------------------------------


def test_conjectured_single_support_is_exact():
    p = np.zeros(4)
    p[2] = 1.0
    res = conjectured_ree(3, p)
    assert not res.is_conjecture
    assert abs(res.value - (-2.0 * math.log2(2.0 / 3.0))) < 1e-12


def test_conjectured_closed_forms_match_hull():
    # the five families with published closed forms
    for n, k1, k2 in [(3, 0, 1), (3, 1, 2), (4, 0, 1), (4, 1, 2), (4, 1, 3)]:
        for s in (0.21, 0.53, 0.84):
            res = conjectured_ree(n, two_support(n, k1, k2, s))
            assert res.is_conjecture
            assert res.closed_form is not None
            assert abs(res.value - res.closed_form) < 1e-6


def test_conjectured_hull_strictly_below_F_in_middle():
    n, k1, k2 = 4, 0, 3
    gaps = []
    for s in (0.01, 0.1, 0.5, 0.9, 0.99):
        gap = F_function(n, two_support(n, k1, k2, s)) - conjectured_ree(
            n, two_support(n, k1, k2, s)
        ).value
        assert gap > -1e-12  # hull never exceeds F
        gaps.append(gap)
    assert gaps[2] > 1e-1  # deep separation mid-family
    assert gaps[0] < gaps[2] and gaps[-1] < gaps[2]  # shrinking toward the ends


def test_reduction_chain_from_four_party_dicke():
    # tracing parties out of |S(4,1)> walks down the known mixture chain
    rho3 = partial_trace(dicke(4, 1), (0, 1, 2))
    weights3 = [float(np.real(dicke(3, k).vector @ rho3.matrix @ dicke(3, k).vector)) for k in range(4)]
    assert abs(weights3[0] - 0.25) < 1e-12 and abs(weights3[1] - 0.75) < 1e-12
    e3 = conjectured_ree(3, two_support(3, 0, 1, 0.25)).value

    rho2 = partial_trace(rho3, (0, 1))
    weights2 = [float(np.real(dicke(2, k).vector @ rho2.matrix @ dicke(2, k).vector)) for k in range(3)]
    assert abs(weights2[0] - 0.5) < 1e-12 and abs(weights2[1] - 0.5) < 1e-12
    e2 = conjectured_ree(2, two_support(2, 0, 1, 0.5)).value
    assert abs(e2 - n2_closed_form(0.5)) < 1e-9

    # entanglement cannot grow under discarding parties
    e4 = -2.0 * math.log2(lambda_symmetric(4, [1, 3]))
    assert e4 >= e3 - 1e-9 >= e2 - 2e-9


# ---------------------------------------------------------------------------
# numeric minimizer
# ---------------------------------------------------------------------------


def test_numeric_ree_ghz():
    res = numeric_ree(ghz(3).density(), ansatz_size=8, cfg=FAST)
    assert abs(res.value - 1.0) < 5e-3


def test_numeric_ree_two_qubit_mixture():
    rho = dicke_mixture(2, 0, 1, 0.5)
    res = numeric_ree(rho, cfg=ReeConfig(restarts=2, max_evaluations=2000, seed=0))
    assert abs(res.value - n2_closed_form(0.5)) < 5e-3


def test_numeric_ree_maximally_mixed():
    mm = DensityMatrix((2, 2), np.eye(4) / 4)
    res = numeric_ree(mm, cfg=ReeConfig(restarts=1, max_evaluations=1000, seed=0))
    assert 0.0 <= res.value < 1e-6


def test_numeric_ree_positive_on_npt_state():
    bell = np.zeros(4)
    bell[0] = bell[3] = 1.0 / math.sqrt(2.0)
    m = 0.9 * np.outer(bell, bell) + 0.1 * np.eye(4) / 4
    res = numeric_ree(DensityMatrix((2, 2), m), cfg=FAST)
    assert res.value > 0.1


def test_numeric_ree_rejects_small_ansatz():
    mm = DensityMatrix((2, 2), np.eye(4) / 4)
    with pytest.raises(PreconditionError):
        numeric_ree(mm, ansatz_size=2)


def test_numeric_ree_ansatz_reconstructs_a_state():
    res = numeric_ree(ghz(3).density(), ansatz_size=8, cfg=FAST)
    w = res.ansatz.weights
    assert abs(float(np.sum(w)) - 1.0) < 1e-10
    assert np.all(w >= 0.0)
    assert len(res.ansatz.products) == 8


# ---------------------------------------------------------------------------
# cross-entropy (reduction) bound
# ---------------------------------------------------------------------------


def test_plenio_vedral_examples():
    w_bound = plenio_vedral_bound(dicke(3, 2))
    assert abs(w_bound.value - LOG2_9_4) < 1e-8
    ghz_bound = plenio_vedral_bound(ghz(3))
    assert abs(ghz_bound.value - 1.0) < 1e-10
    s41 = plenio_vedral_bound(dicke(4, 1))
    want = -2.0 * math.log2(lambda_symmetric(4, [1, 3]))
    assert abs(s41.value - want) < 1e-8


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------


def test_sandwich_lower_bound_below_numeric():
    cases = [
        (ghz(3), 8),
        (dicke(3, 2), 4),
        (dicke(4, 2), 5),
        (det_state(2), 6),
        (det_state(3), 9),
    ]
    for psi, m in cases:
        lower = ree_lower_bound(psi)
        upper = numeric_ree(psi.density(), ansatz_size=m, cfg=FAST).value
        assert lower <= upper + 5e-3


def test_overlap_entropy_below_F_on_random_distributions():
    # -2 log2 max_theta sum_k sqrt(p_k C(n,k)) cos^k sin^(n-k) <= F({p})
    rng = np.random.default_rng(97)
    thetas = np.linspace(0.0, math.pi / 2, 4001)
    for _ in range(200):
        n = int(rng.integers(2, 7))
        p = rng.dirichlet(np.ones(n + 1))
        amps = np.sqrt([p[k] * math.comb(n, k) for k in range(n + 1)])
        overlap = np.zeros_like(thetas)
        for k in range(n + 1):
            overlap += amps[k] * np.cos(thetas) ** k * np.sin(thetas) ** (n - k)
        e_val = -2.0 * math.log2(float(overlap.max()))
        assert e_val <= F_function(n, p) + 1e-9


def test_sin2_log2_chain_inequality():
    rng = np.random.default_rng(101)
    for _ in range(20):
        v = rng.normal(size=8) + 1j * rng.normal(size=8)
        psi = PureState((2, 2, 2), v / np.linalg.norm(v))
        report = entanglement_eigenvalue(psi)
        assert report.e_sin2 * math.log2(math.e) <= report.e_log2 + 1e-12
