"""Tests for bound-entangled constructions and Bell-operator diagnostics."""

import itertools
import math

import numpy as np
import pytest

from gmelab import (
    BellSettings,
    DepolarizedForm,
    HartreeConfig,
    PartitionSpec,
    PureState,
    chsh_max,
    dur_gme,
    dur_negativity_one_vs_rest,
    dur_negativity_two_vs_rest,
    dur_state,
    mermin_klyshko,
    mk_max,
    mk_operator_norm,
    negativity,
    nondistill_consistency,
    numeric_ree,
    partial_transpose,
    smolin_gme,
    smolin_ree,
    smolin_state,
    upb_state,
    upb_unextendibility_sweep,
)
from gmelab.boundent import _upb_members
from gmelab.errors import PreconditionError
from gmelab.ree import ReeConfig

SQRT2 = math.sqrt(2.0)


def singlet_density():
    v = np.array([0.0, 1.0, -1.0, 0.0]) / SQRT2
    from gmelab.qstate import DensityMatrix

    return DensityMatrix((2, 2), np.outer(v, v))


def ghz_density(n):
    v = np.zeros(2**n)
    v[0] = v[-1] = 1.0 / SQRT2
    return PureState((2,) * n, v).density()


# ---------------------------------------------------------------------------
# Smolin state
# ---------------------------------------------------------------------------


def test_smolin_permutation_invariance():
    rho = smolin_state()
    mat = rho.matrix
    t = mat.reshape((2,) * 8)
    for perm in itertools.permutations(range(4)):
        axes = list(perm) + [4 + i for i in perm]
        permuted = np.transpose(t, axes).reshape(16, 16)
        assert np.max(np.abs(permuted - mat)) < 1e-14


def test_smolin_negativity_cuts():
    rho = smolin_state()
    for party in range(4):
        cut = PartitionSpec.of((party,), 4)
        assert abs(negativity(rho, cut) - 1.0) < 1e-12
    for pair in ((0, 1), (0, 2), (0, 3)):
        cut = PartitionSpec.of(pair, 4)
        assert negativity(rho, cut) < 1e-12


def test_smolin_gme_summary():
    res = smolin_gme(sweeps=200, seed=0)
    assert res.e_sin2 == 0.5
    assert res.e_log2 == 1.0
    for lam in res.support_lambdas:
        assert abs(lam - 1.0 / SQRT2) < 1e-8
    assert res.sweep_min >= 0.5 - 1e-6


def test_smolin_ree_is_one_bit():
    assert abs(smolin_ree() - 1.0) < 1e-9


def test_smolin_depolarized_form():
    form = DepolarizedForm.from_state(smolin_state())
    assert abs(form.lambda0_plus - 0.25) < 1e-13
    assert abs(form.lambda0_minus) < 1e-13
    # weight 1/8 sits on the three GHZ pairs whose bit pattern has even parity
    expected = np.zeros(7)
    expected[[2, 4, 5]] = 0.125
    assert np.allclose(form.lambdas, expected, atol=1e-13)
    assert abs(form.delta - 0.25) < 1e-13
    total = form.lambda0_plus + form.lambda0_minus + 2.0 * form.lambdas.sum()
    assert abs(total - 1.0) < 1e-12


def test_depolarized_form_validation():
    with pytest.raises(PreconditionError):
        DepolarizedForm(0.5, 0.5, np.array([0.25]))  # sums to 1.5


# ---------------------------------------------------------------------------
# Dur family
# ---------------------------------------------------------------------------


def test_dur_negativity_formulas_match_eigensolver():
    for N in (4, 5, 6):
        for x in (0.1, 1.0 / (N + 1), 0.5):
            rho = dur_state(N, x)
            one = negativity(rho, PartitionSpec.of((0,), N))
            two = negativity(rho, PartitionSpec.of((0, 1), N))
            assert abs(one - dur_negativity_one_vs_rest(N, x)) < 1e-9
            assert abs(two - dur_negativity_two_vs_rest(N, x)) < 1e-9


def test_dur_x_zero_all_cuts_ppt():
    N = 4
    rho = dur_state(N, 0.0)
    for size in (1, 2):
        for group in itertools.combinations(range(N), size):
            pt = partial_transpose(rho, PartitionSpec.of(group, N))
            assert float(np.linalg.eigvalsh(pt)[0]) > -1e-10


def test_dur_bound_entangled_window():
    # at x = 1/(N+1) the one-vs-rest cuts are PPT while a two-vs-rest is NPT
    N = 4
    x = 1.0 / (N + 1)
    assert dur_negativity_one_vs_rest(N, x) == 0.0
    assert dur_negativity_two_vs_rest(N, x) > 0.0


def test_dur_gme_values():
    res = dur_gme(4, 0.2, verify=False)
    assert abs(res.e_sin2 - 0.1) < 1e-12
    assert abs(res.e_log2 - math.log2(2.0 / 1.8)) < 1e-12
    assert dur_gme(4, 0.0, verify=False).e_sin2 == 0.0


def test_dur_gme_verified_lambda():
    res = dur_gme(4, 0.5, verify=True)
    assert abs(res.lambda_target - math.sqrt(0.75)) < 1e-12
    assert res.max_lambda_error < 1e-7


def test_dur_state_validation():
    with pytest.raises(PreconditionError):
        dur_state(3, 0.5)
    with pytest.raises(PreconditionError):
        dur_state(4, 1.2)


# ---------------------------------------------------------------------------
# UPB state
# ---------------------------------------------------------------------------


def test_upb_members_orthonormal():
    members, _ = _upb_members()
    assert len(members) == 4
    for i, a in enumerate(members):
        for j, b in enumerate(members):
            want = 1.0 if i == j else 0.0
            assert abs(abs(np.vdot(a, b)) - want) < 1e-12


def test_upb_state_trace_rank_ppt():
    rho = upb_state()
    assert abs(np.trace(rho.matrix).real - 1.0) < 1e-12
    assert int(np.sum(np.linalg.eigvalsh(rho.matrix) > 1e-12)) == 4
    for party in range(3):
        pt = partial_transpose(rho, PartitionSpec.of((party,), 3))
        assert float(np.linalg.eigvalsh(pt)[0]) >= -1e-10


def test_upb_unextendibility_sweep():
    best = upb_unextendibility_sweep(samples=20000, seed=0)
    assert best > 0.01  # no product state near the orthogonal complement


def test_upb_entangled_by_ree_witness():
    res = numeric_ree(upb_state(), cfg=ReeConfig(restarts=2, max_evaluations=2000, seed=0))
    assert res.value > 0.05


# ---------------------------------------------------------------------------
# Bell operators
# ---------------------------------------------------------------------------


def test_mermin_klyshko_singlet_chsh_angles():
    settings = BellSettings.planar([(0.0, math.pi / 2), (math.pi / 4, -math.pi / 4)])
    val = mermin_klyshko(singlet_density(), settings)
    assert abs(abs(val) - SQRT2) < 1e-12


def test_chsh_max_singlet():
    assert abs(chsh_max(singlet_density()) - 2.0 * SQRT2) < 1e-9


def test_mk_max_ghz_values():
    for n in (2, 3, 4):
        res = mk_max(ghz_density(n))
        assert abs(res.value - 2.0 ** ((n - 1) / 2.0)) < 1e-6


def test_mk_product_states_bounded():
    rng = np.random.default_rng(103)
    for _ in range(20):
        n = int(rng.integers(2, 5))
        vecs = []
        for _ in range(n):
            v = rng.normal(size=2) + 1j * rng.normal(size=2)
            vecs.append(v / np.linalg.norm(v))
        amps = vecs[0]
        for v in vecs[1:]:
            amps = np.kron(amps, v)
        rho = PureState((2,) * n, amps).density()
        angles = rng.uniform(0, 2 * math.pi, size=(n, 2))
        settings = BellSettings.planar([tuple(row) for row in angles])
        assert abs(mermin_klyshko(rho, settings)) <= 1.0 + 1e-9


def test_mk_operator_norm_bound():
    rng = np.random.default_rng(107)
    for n in (2, 3, 4, 5, 6):
        dirs = []
        for _ in range(n):
            pair = []
            for _ in range(2):
                v = rng.normal(size=3)
                pair.append(v / np.linalg.norm(v))
            dirs.append(pair)
        settings = BellSettings(dirs)
        assert mk_operator_norm(settings) <= 2.0 ** ((n - 1) / 2.0) + 1e-9


def test_bell_settings_validation():
    with pytest.raises(PreconditionError):
        BellSettings([[np.array([1.0, 1.0, 0.0])]])  # not unit norm


# ---------------------------------------------------------------------------
# nondistillability consistency
# ---------------------------------------------------------------------------


def test_nondistill_n8_below_mk_threshold():
    report = nondistill_consistency(8, 2.0 ** (1 - 8))
    assert report.nondistillable_all_cuts
    assert not report.mk_violation
    assert report.mk_threshold > 2.0 ** (1 - 8)


def test_nondistill_n6_functional_threshold():
    report = nondistill_consistency(6, 2.0 ** (1 - 6))
    want = 2.0 * (2.0 / math.pi) ** 6
    assert abs(report.functional_threshold - want) < 1e-12
    assert report.functional_threshold > 2.0 ** (1 - 6)


def test_nondistill_delta_zero_trivial():
    report = nondistill_consistency(5, 0.0)
    assert report.nondistillable_all_cuts
    assert not (report.mk_violation or report.three_setting_violation or report.functional_violation)


def test_nondistill_thresholds_exceed_bound_for_all_n():
    for n in range(4, 21):
        report = nondistill_consistency(n, 2.0 ** (1 - n))
        assert report.violations_imply_distillability
        assert report.mk_threshold > 2.0 ** (1 - n)
        assert report.three_setting_threshold > 2.0 ** (1 - n)
        assert report.functional_threshold > 2.0 ** (1 - n)
