"""Tests for the pure-state geometric-measure solver and closed-form families."""

import itertools
import math

import numpy as np
import pytest

from gmelab import (
    HartreeConfig,
    PartitionSpec,
    PureState,
    correlation_lambda_sq,
    det_state,
    dicke,
    entanglement_eigenvalue,
    ghz_w_lambda,
    lambda_det,
    lambda_symmetric,
    optimal_witness_value,
    schmidt_lambda,
    symmetric_state,
    tensor_product,
    two_term_symmetric_lambda,
)
from gmelab.bipartite import pure_concurrence
from gmelab.errors import PreconditionError

SQRT_HALF = 1.0 / math.sqrt(2.0)


def ghz(n=3):
    v = np.zeros(2**n)
    v[0] = v[-1] = SQRT_HALF
    return PureState((2,) * n, v)


def random_pure(dims, rng):
    total = int(np.prod(dims))
    v = rng.normal(size=total) + 1j * rng.normal(size=total)
    return PureState(dims, v / np.linalg.norm(v))


def haar_unitary(d, rng):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def apply_local(psi, unitaries):
    amps = psi.amps
    n = psi.n_parties
    for i, u in enumerate(unitaries):
        amps = np.moveaxis(np.tensordot(u, amps, axes=(1, i)), 0, i)
    return PureState(psi.dims, amps.reshape(-1))


# ---------------------------------------------------------------------------
# solver on closed-form states
# ---------------------------------------------------------------------------


def test_solver_ghz():
    report = entanglement_eigenvalue(ghz(3))
    assert report.converged
    assert abs(report.lambda_max - SQRT_HALF) < 1e-10
    assert abs(report.e_sin2 - 0.5) < 1e-10
    assert abs(report.e_log2 - 1.0) < 1e-10


def test_solver_w_state():
    report = entanglement_eigenvalue(dicke(3, 2))
    assert abs(report.lambda_max - 2.0 / 3.0) < 1e-10
    assert abs(report.e_sin2 - 5.0 / 9.0) < 1e-10


def test_solver_product_state():
    plus = np.array([1.0, 1.0]) / math.sqrt(2)
    psi = PureState((2, 2, 2), np.kron(np.kron(plus, plus), plus))
    report = entanglement_eigenvalue(psi)
    assert abs(report.lambda_max - 1.0) < 1e-12


def test_report_identities():
    rng = np.random.default_rng(41)
    report = entanglement_eigenvalue(random_pure((2, 2, 2), rng))
    assert abs(report.e_sin2 - (1.0 - report.lambda_max**2)) < 1e-12
    assert abs(report.e_log2 + 2.0 * math.log2(report.lambda_max)) < 1e-12


def test_solver_two_qubit_concurrence_relation():
    rng = np.random.default_rng(43)
    for _ in range(50):
        psi = random_pure((2, 2), rng)
        c = pure_concurrence(psi)
        want = (1.0 + math.sqrt(1.0 - c * c)) / 2.0
        got = entanglement_eigenvalue(psi).lambda_max ** 2
        assert abs(got - want) < 1e-8


# ---------------------------------------------------------------------------
# Schmidt route
# ---------------------------------------------------------------------------


def test_schmidt_lambda_two_qubit_branch():
    for p in (0.1, 0.5, 0.9):
        v = np.zeros(4)
        v[0] = math.sqrt(p)
        v[3] = math.sqrt(1.0 - p)
        psi = PureState((2, 2), v)
        cut = PartitionSpec.of((0,), 2)
        assert abs(schmidt_lambda(psi, cut) - max(math.sqrt(p), math.sqrt(1 - p))) < 1e-12


def test_schmidt_lambda_maximally_entangled_qudit():
    for d in (2, 3, 4):
        v = np.zeros(d * d)
        v[:: d + 1] = 1.0 / math.sqrt(d)
        psi = PureState((d, d), v)
        assert abs(schmidt_lambda(psi, PartitionSpec.of((0,), 2)) - 1.0 / math.sqrt(d)) < 1e-12


def test_schmidt_lambda_matches_solver_two_party():
    rng = np.random.default_rng(47)
    for dims in ((2, 2), (2, 3), (3, 3)):
        psi = random_pure(dims, rng)
        lam = schmidt_lambda(psi, PartitionSpec.of((0,), 2))
        assert abs(lam - entanglement_eigenvalue(psi).lambda_max) < 1e-9


# ---------------------------------------------------------------------------
# symmetric and determinant families
# ---------------------------------------------------------------------------


def test_symmetric_state_w_amplitudes():
    w = dicke(3, 2)
    nonzero = np.sort(np.abs(w.vector[np.abs(w.vector) > 0]))
    assert nonzero.size == 3
    assert np.allclose(nonzero, 1.0 / math.sqrt(3), atol=1e-14)


def test_symmetric_state_product_endpoint():
    s30 = dicke(3, 0)
    idx = np.nonzero(np.abs(s30.vector) > 0)[0]
    assert idx.tolist() == [7]  # all parties in level 1
    assert abs(abs(s30.vector[7]) - 1.0) < 1e-14


def test_symmetric_state_qutrit_pair():
    psi = symmetric_state(2, [0, 1, 1])
    v = psi.vector.reshape(3, 3)
    assert abs(v[1, 2] - SQRT_HALF) < 1e-14
    assert abs(v[2, 1] - SQRT_HALF) < 1e-14
    assert np.count_nonzero(np.abs(psi.vector) > 0) == 2


def test_symmetric_state_rejects_bad_counts():
    with pytest.raises(PreconditionError):
        symmetric_state(3, [1, 1])


def test_lambda_symmetric_closed_values():
    assert abs(lambda_symmetric(3, [2, 1]) - 2.0 / 3.0) < 1e-14
    assert abs(lambda_symmetric(4, [2, 2]) - math.sqrt(3.0 / 8.0)) < 1e-14
    assert abs(lambda_symmetric(5, [0, 5]) - 1.0) < 1e-14


def test_lambda_symmetric_matches_solver():
    for n, k in [(3, 1), (4, 2), (5, 3)]:
        report = entanglement_eigenvalue(dicke(n, k))
        assert abs(report.lambda_max - lambda_symmetric(n, [k, n - k])) < 1e-8


def test_det_state_closed_values():
    assert abs(lambda_det(2) ** 2 - 0.5) < 1e-14
    assert abs(lambda_det(3) ** 2 - 1.0 / 6.0) < 1e-14
    with pytest.raises(PreconditionError):
        det_state(7)


def test_det_state_solver_agreement():
    cfg = HartreeConfig(restarts=64, seed=1)
    report = entanglement_eigenvalue(det_state(3), cfg)
    assert abs(report.lambda_max - 1.0 / math.sqrt(6.0)) < 1e-7


def test_two_term_symmetric_values():
    assert abs(two_term_symmetric_lambda(3, 2, 1, 0.5) - math.sqrt(3.0) / 2.0) < 1e-10
    for n, k1, k2 in [(3, 2, 1), (5, 4, 2)]:
        got = two_term_symmetric_lambda(n, k1, k2, 1.0)
        assert abs(got - lambda_symmetric(n, [k1, n - k1])) < 1e-10


def test_two_term_symmetric_matches_solver():
    r = 0.5
    n, k1, k2 = 7, 2, 5
    a, b = math.sqrt(r), math.sqrt(1 - r)
    psi = PureState((2,) * n, a * dicke(n, k1).vector + b * dicke(n, k2).vector)
    report = entanglement_eigenvalue(psi)
    assert abs(report.lambda_max - two_term_symmetric_lambda(n, k1, k2, r)) < 1e-7


def test_ghz_w_lambda_endpoints():
    assert abs(ghz_w_lambda(1.0, 0.0) - SQRT_HALF) < 1e-10
    assert abs(ghz_w_lambda(0.0, 1.0) - 2.0 / 3.0) < 1e-10


def test_ghz_w_lambda_matches_solver_inside():
    x, y = 0.3, 0.4
    v = (
        math.sqrt(x) * ghz(3).vector
        + math.sqrt(y) * dicke(3, 2).vector
        + math.sqrt(1 - x - y) * dicke(3, 1).vector
    )
    psi = PureState((2, 2, 2), v)
    report = entanglement_eigenvalue(psi)
    assert abs(report.lambda_max - ghz_w_lambda(x, y)) < 1e-8


# ---------------------------------------------------------------------------
# witness and correlation routes
# ---------------------------------------------------------------------------


def test_optimal_witness_values():
    assert abs(optimal_witness_value(ghz(3)) + 0.5) < 1e-9
    assert abs(optimal_witness_value(dicke(3, 2)) + 5.0 / 9.0) < 1e-9
    assert abs(optimal_witness_value(dicke(4, 2)) + 5.0 / 8.0) < 1e-9


def test_optimal_witness_rejects_product():
    v = np.zeros(4)
    v[0] = 1.0
    with pytest.raises(PreconditionError):
        optimal_witness_value(PureState((2, 2), v))


def test_correlation_lambda_sq_examples():
    assert abs(correlation_lambda_sq(ghz(3)) - 0.5) < 1e-8
    v = np.zeros(4)
    v[0] = 1.0
    assert abs(correlation_lambda_sq(PureState((2, 2), v)) - 1.0) < 1e-10


def test_correlation_lambda_sq_matches_solver():
    rng = np.random.default_rng(53)
    for _ in range(3):
        psi = random_pure((2, 2, 2), rng)
        want = entanglement_eigenvalue(psi).lambda_max ** 2
        assert abs(correlation_lambda_sq(psi, restarts=12) - want) < 1e-6


# ---------------------------------------------------------------------------
# invariants
# ---------------------------------------------------------------------------


def test_lambda_invariant_under_local_unitaries():
    rng = np.random.default_rng(59)
    base = entanglement_eigenvalue(ghz(3)).lambda_max
    for _ in range(5):
        us = [haar_unitary(2, rng) for _ in range(3)]
        rotated = entanglement_eigenvalue(apply_local(ghz(3), us)).lambda_max
        assert abs(rotated - base) < 1e-8


def test_lambda_multiplicative_under_tensor_products():
    rng = np.random.default_rng(61)
    for _ in range(3):
        a = random_pure((2, 2), rng)
        b = random_pure((2, 2), rng)
        la = entanglement_eigenvalue(a).lambda_max
        lb = entanglement_eigenvalue(b).lambda_max
        joint = entanglement_eigenvalue(tensor_product(a, b)).lambda_max
        assert abs(joint - la * lb) < 1e-8


def test_lambda_symmetric_minimized_at_balanced_k():
    for n in (4, 5, 6, 7):
        vals = [lambda_symmetric(n, [k, n - k]) for k in range(n + 1)]
        k_min = int(np.argmin(vals))
        assert k_min in (n // 2, (n + 1) // 2)


def test_monotone_counterexample_function_dips_negative():
    xs = np.linspace(0.3, 0.8, 501)
    n = 4
    f = np.log2(1 + n * xs**2) - (n * xs**2 / (1 + n * xs**2)) * np.log2(n)
    assert float(f.min()) < 0.0


def _grid_lambda(psi, resolution=120):
    """Brute-force Lambda_max: grid the first party's Bloch vector, exact rest."""
    amps = psi.amps

    def value(theta, phi):
        local = np.array([math.cos(theta / 2), math.sin(theta / 2) * np.exp(1j * phi)])
        rest = np.tensordot(local.conj(), amps, axes=(0, 0))
        if rest.ndim == 1:
            return float(np.linalg.norm(rest))
        return float(np.linalg.svd(rest.reshape(rest.shape[0], -1), compute_uv=False)[0])

    thetas = np.linspace(0.0, math.pi, resolution)
    phis = np.linspace(0.0, 2 * math.pi, resolution, endpoint=False)
    best = (0.0, 0.0, 0.0)
    for t in thetas:
        for p in phis:
            v = value(t, p)
            if v > best[0]:
                best = (v, t, p)
    # one refinement pass around the coarse winner
    dt = math.pi / resolution
    dp = 2 * math.pi / resolution
    _, t0, p0 = best
    for t in np.linspace(t0 - dt, t0 + dt, 41):
        for p in np.linspace(p0 - dp, p0 + dp, 41):
            v = value(min(max(t, 0.0), math.pi), p)
            if v > best[0]:
                best = (v, t, p)
    return best[0]


def test_brute_force_grid_matches_solver():
    rng = np.random.default_rng(67)
    for dims in ((2, 2), (2, 2, 2)):
        psi = random_pure(dims, rng)
        grid = _grid_lambda(psi)
        solver = entanglement_eigenvalue(psi).lambda_max
        assert abs(grid - solver) < 1e-4
