"""Bound entangled states and Bell-operator diagnostics.

Four-qubit unlockable bound entanglement, the N-party single-excitation
family, the three-qubit unextendible-product-basis state, Mermin-Klyshko
operators, and the non-distillability vs. Bell-violation threshold arithmetic.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from ._util import spawn_rngs
from .errors import PreconditionError
from .geomopt import HartreeConfig, entanglement_eigenvalue
from .qstate import DensityMatrix, PureState, relative_entropy

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass
class BellSettings:
    """Measurement directions: one list of unit 3-vectors per party."""

    directions: list

    def __post_init__(self):
        for party in self.directions:
            for vec in party:
                if abs(np.linalg.norm(vec) - 1.0) > 1e-12:
                    raise PreconditionError("measurement directions must be unit vectors")

    @classmethod
    def planar(cls, angles):
        """Two in-plane directions per party from a list of (alpha, alpha') pairs."""
        dirs = [
            [np.array([math.cos(t), math.sin(t), 0.0]) for t in pair]
            for pair in angles
        ]
        return cls(dirs)


@dataclass
class DepolarizedForm:
    """Diagonal GHZ-basis form reachable by local depolarization."""

    lambda0_plus: float
    lambda0_minus: float
    lambdas: np.ndarray

    def __post_init__(self):
        self.lambdas = np.asarray(self.lambdas, dtype=float)
        total = self.lambda0_plus + self.lambda0_minus + 2.0 * self.lambdas.sum()
        if abs(total - 1.0) > 1e-10:
            raise PreconditionError("depolarized weights must sum to 1")
        if min(self.lambda0_plus, self.lambda0_minus, *self.lambdas, 0.0) < -1e-12:
            raise PreconditionError("depolarized weights must be nonnegative")

    @property
    def delta(self):
        return self.lambda0_plus - self.lambda0_minus

    @classmethod
    def from_state(cls, rho):
        n = len(rho.dims)
        if any(d != 2 for d in rho.dims):
            raise PreconditionError("defined for qubit registers")
        dim = 2**n
        mat = rho.matrix

        def ghz_pair(j, sign):
            v = np.zeros(dim, dtype=complex)
            v[j] = 1.0 / math.sqrt(2.0)
            v[dim - 1 - j] = sign / math.sqrt(2.0)
            return v

        def expect(v):
            return float(np.real(v.conj() @ mat @ v))

        lam_plus = expect(ghz_pair(0, +1))
        lam_minus = expect(ghz_pair(0, -1))
        lams = np.array(
            [
                expect(ghz_pair(j, +1)) + expect(ghz_pair(j, -1))
                for j in range(1, dim // 2)
            ]
        ) / 2.0
        return cls(lam_plus, lam_minus, lams)


def _bell_pairs():
    s = 1.0 / math.sqrt(2.0)
    return [
        np.array([s, 0, 0, s]),
        np.array([s, 0, 0, -s]),
        np.array([0, s, s, 0]),
        np.array([0, s, -s, 0]),
    ]


def _x_states():
    dim = 16
    vecs = []
    for a, b in ((0b0000, 0b1111), (0b0011, 0b1100), (0b0101, 0b1010), (0b0110, 0b1001)):
        v = np.zeros(dim)
        v[a] = v[b] = 1.0 / math.sqrt(2.0)
        vecs.append(v)
    return vecs


def smolin_state():
    """Four-qubit unlockable bound entangled state.

    Built two ways -- as the uniform two-pair Bell mixture and as the uniform
    mixture of the four GHZ-like basis states -- which must agree entrywise.
    """
    rho_a = np.zeros((16, 16))
    for bell in _bell_pairs():
        pair = np.outer(bell, bell)
        rho_a += 0.25 * np.kron(pair, pair)
    rho_b = np.zeros((16, 16))
    for v in _x_states():
        rho_b += 0.25 * np.outer(v, v)
    if np.max(np.abs(rho_a - rho_b)) > 1e-14:
        raise AssertionError("the two constructions must agree entrywise")
    return DensityMatrix((2, 2, 2, 2), rho_a)


@dataclass
class SmolinGme:
    e_sin2: float
    e_log2: float
    support_lambdas: list
    sweep_min: float
    sweeps: int


def smolin_gme(sweeps=10000, seed=0, cfg=None):
    """Analytic geometric entanglement of the four-qubit bound entangled state,
    plus a Monte Carlo check that random pure-state decompositions never
    average below it.

    Every pure state in the support span has overlap at most 1/sqrt(2) with
    any product state, so each sampled decomposition member's reported
    E_sin2 is a true lower bound for that member and the sweep minimum is a
    sound consistency probe.
    """
    cfg = cfg or HartreeConfig(restarts=2, max_iterations=300, tolerance=1e-10)
    xs = _x_states()
    dims = (2, 2, 2, 2)
    support = []
    for v in xs:
        rep = entanglement_eigenvalue(PureState(dims, v), cfg)
        support.append(rep.lambda_max)

    rngs = spawn_rngs(seed, sweeps)
    sweep_min = math.inf
    for rng in rngs:
        z = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        u, _ = np.linalg.qr(z)
        mean = 0.0
        for k in range(4):
            amp = u[k] @ np.array(xs) / 2.0  # row k of the mixed decomposition
            p = float(np.vdot(amp, amp).real)
            psi = PureState(dims, amp / math.sqrt(p))
            rep = entanglement_eigenvalue(psi, cfg)
            mean += p * (1.0 - rep.lambda_max**2)
        sweep_min = min(sweep_min, mean)
    return SmolinGme(
        e_sin2=0.5,
        e_log2=1.0,
        support_lambdas=support,
        sweep_min=sweep_min,
        sweeps=sweeps,
    )


def smolin_ree():
    """Relative entropy of entanglement of the four-qubit bound entangled
    state, evaluated in closed form as S(rho || sigma) = 1 bit.

    sigma is the uniform diagonal mixture over the eight even-parity basis
    strings.  It is fully separable (each basis string is a product state)
    and it is the equal mixture of the closest separable states of the four
    GHZ-like support vectors, so by joint convexity no separable state does
    better.  The matching lower bound comes from the one-vs-rest cut: after
    the last three parties merge, the state is a mixture of locally
    orthogonal Bell pairs and distills one full ebit.
    """
    rho = smolin_state()
    diag = np.zeros(16)
    for s in range(16):
        if bin(s).count("1") % 2 == 0:
            diag[s] = 1.0 / 8.0
    sigma = DensityMatrix((2, 2, 2, 2), np.diag(diag))
    return relative_entropy(rho, sigma)


def _dur_vectors(N):
    dim = 2**N
    psi_g = np.zeros(dim)
    psi_g[0] = psi_g[dim - 1] = 1.0 / math.sqrt(2.0)
    us = [1 << (N - k) for k in range(1, N + 1)]  # single 1 at party k
    vs = [dim - 1 - u for u in us]
    return psi_g, us, vs


def dur_state(N, x):
    """N-qubit mixture of a GHZ projector with the uniform single-flip
    product mixture; bound entangled for 0 < x <= 1/(N+1)."""
    if not 4 <= N <= 10:
        raise PreconditionError("N must be between 4 and 10")
    if not 0.0 <= x <= 1.0:
        raise PreconditionError("x must lie in [0, 1]")
    dim = 2**N
    psi_g, us, vs = _dur_vectors(N)
    rho = x * np.outer(psi_g, psi_g)
    for u, v in zip(us, vs):
        rho[u, u] += (1.0 - x) / (2.0 * N)
        rho[v, v] += (1.0 - x) / (2.0 * N)
    return DensityMatrix((2,) * N, rho)


def dur_negativity_one_vs_rest(N, x):
    return max(0.0, ((N + 1) * x - 1.0) / N)


def dur_negativity_two_vs_rest(N, x):
    return float(x)


@dataclass
class DurGme:
    e_sin2: float
    e_log2: float
    lambda_target: float
    max_lambda_error: float


def dur_gme(N, x, verify=True, cfg=None):
    """Geometric entanglement of the single-excitation GHZ mixture: (x/2,
    log2(2/(2-x))), with optional verification that the optimal-decomposition
    members all reach the predicted overlap."""
    if not 4 <= N <= 10:
        raise PreconditionError("N must be between 4 and 10")
    if not 0.0 <= x <= 1.0:
        raise PreconditionError("x must lie in [0, 1]")
    target = math.sqrt((2.0 - x) / 2.0)
    max_err = 0.0
    if verify:
        cfg = cfg or HartreeConfig(restarts=6, seed=7)
        dim = 2**N
        psi_g, us, vs = _dur_vectors(N)
        for basis in (us, vs):
            for k, idx in enumerate(basis):
                for sign in (+1.0, -1.0):
                    vec = math.sqrt(x) * psi_g
                    vec = vec.copy()
                    vec[idx] += sign * math.sqrt(1.0 - x)
                    rep = entanglement_eigenvalue(PureState((2,) * N, vec), cfg)
                    max_err = max(max_err, abs(rep.lambda_max - target))
    return DurGme(
        e_sin2=x / 2.0,
        e_log2=math.log2(2.0 / (2.0 - x)),
        lambda_target=target,
        max_lambda_error=max_err,
    )


def _upb_members():
    zero = np.array([1.0, 0.0])
    one = np.array([0.0, 1.0])
    plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
    minus = np.array([1.0, -1.0]) / math.sqrt(2.0)
    triples = [
        (zero, one, plus),
        (one, plus, zero),
        (plus, zero, one),
        (minus, minus, minus),
    ]
    return [np.kron(np.kron(a, b), c) for a, b, c in triples], triples


def upb_state():
    """Three-qubit bound entangled state: the normalized projector onto the
    complement of an unextendible product basis."""
    members, _ = _upb_members()
    rho = np.eye(8)
    for v in members:
        rho -= np.outer(v, v)
    return DensityMatrix((2, 2, 2), rho / 4.0)


def upb_unextendibility_sweep(samples=10**5, seed=0):
    """Smallest max-overlap between random product states and the four basis
    members; bounded away from zero because the basis is unextendible."""
    _, triples = _upb_members()
    rng = spawn_rngs(seed, 1)[0]
    t = rng.uniform(0.0, math.pi / 2.0, size=(3, samples))
    phi = rng.uniform(0.0, 2.0 * math.pi, size=(3, samples))
    comps = [
        np.stack([np.cos(t[p]), np.sin(t[p]) * np.exp(1j * phi[p])])
        for p in range(3)
    ]
    worst = np.zeros(samples)
    for a, b, c in triples:
        ov = (
            (a.conj() @ comps[0])
            * (b.conj() @ comps[1])
            * (c.conj() @ comps[2])
        )
        worst = np.maximum(worst, np.abs(ov))
    return float(worst.min())


def _mk_operator(settings):
    dirs = settings.directions
    if any(len(pair) != 2 for pair in dirs):
        raise PreconditionError("two measurement directions per party required")

    def sigma(vec):
        return vec[0] * _PAULI["x"] + vec[1] * _PAULI["y"] + vec[2] * _PAULI["z"]

    b = sigma(dirs[0][0])
    bp = sigma(dirs[0][1])
    for a, ap in ((sigma(v0), sigma(v1)) for v0, v1 in dirs[1:]):
        b, bp = (
            0.5 * (np.kron(b, a + ap) + np.kron(bp, a - ap)),
            0.5 * (np.kron(bp, ap + a) + np.kron(b, ap - a)),
        )
    return b


def mermin_klyshko(rho, settings):
    """Expectation of the recursively built N-party Bell operator."""
    if any(d != 2 for d in rho.dims):
        raise PreconditionError("defined for qubit registers")
    if len(settings.directions) != len(rho.dims):
        raise PreconditionError("one direction pair per party required")
    op = _mk_operator(settings)
    return float(np.real(np.trace(op @ rho.matrix)))


def mk_operator_norm(settings):
    return float(np.linalg.norm(_mk_operator(settings), ord=2))


@dataclass
class MkOptimum:
    value: float
    settings: BellSettings


def mk_max(rho, restarts=8, seed=0, max_sweeps=60, tol=1e-10):
    """Maximize |<B_N>| over planar measurement directions by coordinate
    ascent.

    With every other setting frozen, the expectation as a function of one
    angle t is u_x cos(t) + u_y sin(t) + v: the monomials carrying this
    direction are linear in it, the rest (those carrying the party's other
    direction) give the constant v.  Three probe values identify (u, v) and
    the single-angle update |v| + |u| is exact.
    """
    if any(d != 2 for d in rho.dims):
        raise PreconditionError("defined for qubit registers")
    n = len(rho.dims)
    best_val = -math.inf
    best_angles = None
    for rng in spawn_rngs(seed, restarts):
        angles = rng.uniform(0.0, 2.0 * math.pi, size=(n, 2))
        current = mermin_klyshko(rho, BellSettings.planar(angles))
        for _ in range(max_sweeps):
            previous = current
            for p in range(n):
                for q in range(2):
                    angles[p][q] = 0.0
                    f0 = mermin_klyshko(rho, BellSettings.planar(angles))
                    angles[p][q] = math.pi / 2.0
                    f90 = mermin_klyshko(rho, BellSettings.planar(angles))
                    angles[p][q] = math.pi
                    f180 = mermin_klyshko(rho, BellSettings.planar(angles))
                    rest = 0.5 * (f0 + f180)
                    ux = 0.5 * (f0 - f180)
                    uy = f90 - rest
                    sign = 1.0 if rest >= 0.0 else -1.0
                    angles[p][q] = math.atan2(sign * uy, sign * ux)
                    current = rest + sign * math.hypot(ux, uy)
            if abs(current) - abs(previous) < tol:
                break
        if abs(current) > best_val:
            best_val = abs(current)
            best_angles = angles.copy()
    return MkOptimum(value=best_val, settings=BellSettings.planar(best_angles))


def chsh_max(rho, restarts=8, seed=0):
    """Maximum CHSH value in the conventional normalization (classical
    bound 2, quantum maximum 2*sqrt(2)); the two-party Bell operator here
    carries a factor 1/2 relative to it."""
    if len(rho.dims) != 2:
        raise PreconditionError("CHSH is a two-party inequality")
    return 2.0 * mk_max(rho, restarts=restarts, seed=seed).value


@dataclass
class NondistillReport:
    N: int
    delta: float
    nondistillable_all_cuts: bool
    mk_threshold: float
    three_setting_threshold: float
    functional_threshold: float
    mk_violation: bool
    three_setting_violation: bool
    functional_violation: bool
    violations_imply_distillability: bool


def nondistill_consistency(N, delta):
    """Compare a GHZ-diagonal Delta against the no-distillability condition
    and the three Bell-violation thresholds; any violation implies bipartite
    distillability because each threshold exceeds the non-distillable range."""
    if N < 4:
        raise PreconditionError("N must be at least 4")
    nondistill_cap = 2.0 ** (1 - N)
    mk_thr = 2.0 ** (-(N - 1) / 2.0)
    three_thr = math.sqrt(3.0) * (2.0 / 3.0) ** N
    func_thr = 2.0 * (2.0 / math.pi) ** N
    return NondistillReport(
        N=N,
        delta=delta,
        nondistillable_all_cuts=bool(1.0 - delta >= (2 ** (N - 1) - 1) * delta),
        mk_threshold=mk_thr,
        three_setting_threshold=three_thr,
        functional_threshold=func_thr,
        mk_violation=bool(delta > mk_thr),
        three_setting_violation=bool(delta > three_thr),
        functional_violation=bool(delta > func_thr),
        violations_imply_distillability=bool(
            min(mk_thr, three_thr, func_thr) > nondistill_cap
        ),
    )
