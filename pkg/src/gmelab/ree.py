"""Relative entropy of entanglement (REE) in bits.

Pure-state lower bound from the entanglement eigenvalue, the F upper bound
for permutation- and phase-symmetric qubit mixtures, its convex hull as the
conjectured exact value, and a derivative-free numeric minimizer over
explicit separable ansatzes.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from ._util import spawn_rngs
from .errors import PreconditionError
from .geomopt import (
    HartreeConfig,
    dicke,
    entanglement_eigenvalue,
    lambda_symmetric,
)
from .mixedhull import Curve1D, convex_hull_1d
from .qstate import DensityMatrix, ProductState, PureState, partial_trace

LOG2 = math.log(2.0)
SUPPORT_PENALTY = 1e6
NULL_CUTOFF = 1e-12

# Two-component symmetric mixtures whose F curve is already convex, with the
# published closed forms (weight s on the first index).
_CLOSED_FORMS = {
    (3, 2, 1): lambda s: s * np.log2(9 * s / ((1 + s) ** 2 * (2 - s)))
    + (1 - s) * np.log2(9 * (1 - s) / ((2 - s) ** 2 * (1 + s))),
    (3, 0, 1): lambda s: s * np.log2(27 * s / (2 + s) ** 3)
    + (1 - s) * np.log2(9 / (2 + s) ** 2),
    (4, 0, 1): lambda s: s * np.log2(256 * s / (3 + s) ** 4)
    + (1 - s) * np.log2(64 / (3 + s) ** 3),
    (4, 1, 2): lambda s: s * np.log2(64 * s / ((2 - s) * (2 + s) ** 3))
    + (1 - s) * np.log2(128 * (1 - s) / (3 * (2 - s) ** 2 * (2 + s) ** 2)),
    (4, 1, 3): lambda s: s * np.log2(64 * s / ((3 - 2 * s) * (1 + 2 * s) ** 3))
    + (1 - s) * np.log2(64 * (1 - s) / ((3 - 2 * s) ** 3 * (1 + 2 * s))),
}


@dataclass
class SeparableAnsatz:
    """Explicit separable mixture sigma = sum_i weights[i] |products[i]><...|."""

    weights: np.ndarray
    products: list

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if np.any(self.weights < -1e-12) or abs(self.weights.sum() - 1.0) > 1e-10:
            raise PreconditionError("weights must form a probability vector")
        if len(self.products) != self.weights.size:
            raise PreconditionError("one product state per weight required")

    def density(self):
        vecs = [p.to_pure().vector for p in self.products]
        dim = vecs[0].size
        sigma = np.zeros((dim, dim), dtype=complex)
        for w, v in zip(self.weights, vecs):
            sigma += w * np.outer(v, v.conj())
        return DensityMatrix(self.products[0].to_pure().dims, sigma)


@dataclass
class ReeConfig:
    restarts: int = 16
    max_evaluations: int = 5000
    seed: int = 0
    fatol: float = 1e-12

    def __post_init__(self):
        if self.restarts < 1 or self.max_evaluations < 100:
            raise PreconditionError("need at least 1 restart and 100 evaluations")


@dataclass
class ReeResult:
    value: float
    ansatz: SeparableAnsatz
    improved: bool
    evaluations: int


@dataclass
class ConjecturedRee:
    value: float
    is_conjecture: bool = True
    closed_form: float | None = None
    curve: Curve1D | None = None


@dataclass
class CrossEntropyBound:
    value: float
    partial: bool
    per_party: list = field(default_factory=list)


def ree_lower_bound(psi, cfg=None):
    """-2 log2 of the entanglement eigenvalue; a lower bound on the REE."""
    report = entanglement_eigenvalue(psi, cfg)
    return -2.0 * math.log2(report.lambda_max)


def F_function(n, p):
    """Upper bound on the REE of the symmetric mixture with Dicke weights p.

    p[k] is the weight on the symmetric state with k zeros, k = 0..n.
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (n + 1,) or np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-10:
        raise PreconditionError("p must be a distribution over k = 0..n")
    alpha = float(np.dot(p, np.arange(n + 1)))
    total = 0.0
    for k in range(n + 1):
        if p[k] <= 0.0:
            continue
        log_term = (
            math.log(p[k])
            + n * math.log(n)
            - (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1))
        )
        if k > 0:
            log_term -= k * math.log(alpha)
        if k < n:
            log_term -= (n - k) * math.log(n - alpha)
        total += p[k] * log_term / LOG2
    return total


def _family_curve(n, k1, k2, grid):
    ss = np.linspace(0.0, 1.0, grid)
    vals = np.empty(grid)
    for i, s in enumerate(ss):
        p = np.zeros(n + 1)
        p[k1] = s
        p[k2] = 1.0 - s
        vals[i] = F_function(n, p)
    return Curve1D(ss, vals)


def conjectured_ree(n, p, grid=401):
    """Convex hull of F along a two-component symmetric mixture family.

    The returned value is conjectural (exact only where proved); mixtures with
    more than two nonzero weights are not supported.
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (n + 1,) or np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-10:
        raise PreconditionError("p must be a distribution over k = 0..n")
    support = [k for k in range(n + 1) if p[k] > 1e-14]
    if len(support) == 1:
        k = support[0]
        value = F_function(n, p)
        return ConjecturedRee(value=value, is_conjecture=False, closed_form=value)
    if len(support) != 2:
        raise PreconditionError("only two-component mixtures are supported")
    k2, k1 = support  # weight s sits on k1; curve runs from pure k2 to pure k1
    s = float(p[k1])
    curve = _family_curve(n, k1, k2, grid)
    hull = convex_hull_1d(curve)

    def f_at(sv):
        q = np.zeros(n + 1)
        q[k1], q[k2] = sv, 1.0 - sv
        return F_function(n, q)

    if curve.value_at(s) - hull.value_at(s) < 1e-12:
        # on a convex stretch the hull coincides with F itself
        value = f_at(s)
    else:
        # on a flattened seam, interpolate between the exact contact values
        below = np.nonzero(curve.ys - hull.ys < 1e-12)[0]
        left = below[below <= np.searchsorted(curve.xs, s)]
        right = below[below >= np.searchsorted(curve.xs, s)]
        sa = float(curve.xs[left[-1]])
        sb = float(curve.xs[right[0]])
        t = (s - sb) / (sa - sb)
        value = t * f_at(sa) + (1.0 - t) * f_at(sb)
    closed = None
    for (fn, fk1, fk2), formula in _CLOSED_FORMS.items():
        if fn != n:
            continue
        if {fk1, fk2} == {k1, k2}:
            closed = float(formula(s if fk1 == k1 else 1.0 - s))
        elif {n - fk1, n - fk2} == {k1, k2}:
            closed = float(formula(s if n - fk1 == k1 else 1.0 - s))
        if closed is not None:
            break
    return ConjecturedRee(value=value, is_conjecture=True, closed_form=closed, curve=hull)


def _product_vector(angles, dims):
    """Map unconstrained angles to local state vectors, one per party."""
    factors = []
    pos = 0
    for d in dims:
        polar = angles[pos : pos + d - 1]
        phases = angles[pos + d - 1 : pos + 2 * (d - 1)]
        pos += 2 * (d - 1)
        amp = np.ones(d, dtype=complex)
        for j in range(d - 1):
            amp[j] *= math.cos(polar[j])
            amp[j + 1 :] *= math.sin(polar[j])
        amp[1:] *= np.exp(1j * np.asarray(phases))
        factors.append(amp)
    return factors


def _kron_all(factors):
    out = factors[0]
    for f in factors[1:]:
        out = np.kron(out, f)
    return out


class _ReeObjective:
    """S(rho || sigma(x)) with a support penalty, over packed parameters."""

    def __init__(self, rho, n_components):
        self.dims = rho.dims
        self.rho = rho.matrix
        self.n_components = n_components
        self.per_party = [2 * (d - 1) for d in self.dims]
        self.angles_per_component = sum(self.per_party)
        self.n_params = n_components * self.angles_per_component + n_components
        evals = np.linalg.eigvalsh(self.rho)
        evals = np.clip(evals.real, 0.0, None)
        self.rho_ent = float(sum(v * math.log2(v) for v in evals if v > 1e-15))
        self.evaluations = 0

    def split(self, x):
        na = self.n_components * self.angles_per_component
        return x[:na].reshape(self.n_components, self.angles_per_component), x[na:]

    def sigma_of(self, x):
        angle_rows, raw_w = self.split(x)
        w = raw_w * raw_w
        total = w.sum()
        if total <= 0:
            w = np.full(self.n_components, 1.0 / self.n_components)
        else:
            w = w / total
        dim = int(np.prod(self.dims))
        sigma = np.zeros((dim, dim), dtype=complex)
        vecs = []
        for i in range(self.n_components):
            v = _kron_all(_product_vector(angle_rows[i], self.dims))
            vecs.append(v)
            sigma += w[i] * np.outer(v, v.conj())
        return sigma, w, vecs

    def __call__(self, x):
        self.evaluations += 1
        sigma, _, _ = self.sigma_of(x)
        svals, svecs = np.linalg.eigh(sigma)
        q = np.einsum("ia,ij,ja->a", svecs.conj(), self.rho, svecs).real
        null = svals < NULL_CUTOFF
        leak = float(q[null].sum())
        if leak > 1e-12:
            return SUPPORT_PENALTY + leak
        keep = ~null
        cross = float(np.dot(q[keep], np.log2(svals[keep])))
        return max(self.rho_ent - cross, 0.0)


def _informed_starts(rho, M, rng):
    """Structured initial parameter vectors for the separable-ansatz search."""
    dims = rho.dims
    n = len(dims)
    starts = []
    all_qubits = all(d == 2 for d in dims)

    def pack(components, weights):
        obj_angles = []
        for comp in components:
            row = []
            for d, (polars, phases) in zip(dims, comp):
                row.extend(polars)
                row.extend(phases)
            obj_angles.append(row)
        return np.concatenate([np.ravel(obj_angles), np.sqrt(np.maximum(weights, 1e-6))])

    def phase_group(theta, count):
        comps = []
        for l in range(count):
            phi = 2.0 * math.pi * l / count
            comps.append([([theta], [phi]) for _ in range(n)])
        return comps

    if all_qubits:
        # Phase-averaged symmetric ansatz around the stationary polar angle.
        basis = _dicke_basis(n)
        qk = np.array([float(np.real(v.conj() @ rho.matrix @ v)) for v in basis])
        off = 1.0 - qk.sum()
        if abs(off) < 1e-8 and _is_dicke_diagonal(rho.matrix, basis, qk):
            support = [k for k in range(n + 1) if qk[k] > 1e-12]
            thetas = [_stationary_theta(n, qk)]
            if len(support) == 2:
                k2, k1 = support
                s = qk[k1]
                seg = _hull_segment(n, k1, k2, s)
                if seg is not None:
                    sa, sb, t = seg
                    ta = _theta_of_family(n, k1, k2, sa)
                    tb = _theta_of_family(n, k1, k2, sb)
                    group = n + 1
                    if 2 * group <= M:
                        comps = phase_group(ta, group) + phase_group(tb, group)
                        weights = [t / group] * group + [(1 - t) / group] * group
                        comps, weights = _pad_random(comps, weights, M, dims, rng)
                        starts.append(pack(comps, weights))
            group = min(M, n + 1)
            for theta in thetas:
                comps = phase_group(theta, group)
                weights = [1.0 / group] * group
                comps, weights = _pad_random(comps, weights, M, dims, rng)
                starts.append(pack(comps, weights))

    # Dominant computational-basis strings of rho.
    diag = np.real(np.diag(rho.matrix))
    order = np.argsort(diag)[::-1][:M]
    order = [i for i in order if diag[i] > 1e-10]
    if order:
        comps = []
        weights = []
        for idx in order:
            digits = np.unravel_index(idx, dims)
            comp = []
            for d, dig in zip(dims, digits):
                polars = [(math.pi / 2 if j < dig else 0.0) for j in range(d - 1)]
                comp.append((polars, [0.0] * (d - 1)))
            comps.append(comp)
            weights.append(diag[idx])
        weights = list(np.asarray(weights) / sum(weights))
        comps, weights = _pad_random(comps, weights, M, dims, rng)
        starts.append(pack(comps, weights))

    # Hartree approximations of the leading eigenvectors.
    evals, evecs = np.linalg.eigh(rho.matrix)
    idx = np.argsort(evals)[::-1]
    comps = []
    weights = []
    for rank_i in idx[: min(M, 4)]:
        if evals[rank_i] < 1e-10:
            break
        psi = PureState(dims, evecs[:, rank_i])
        report = entanglement_eigenvalue(
            psi, HartreeConfig(restarts=4, seed=int(rng.integers(2**31)))
        )
        comp = []
        for f in report.closest.factors:
            comp.append(_vector_to_angles(f))
        comps.append(comp)
        weights.append(float(evals[rank_i]))
    if comps:
        weights = list(np.asarray(weights) / sum(weights))
        comps, weights = _pad_random(comps, weights, M, dims, rng)
        starts.append(pack(comps, weights))
    return starts


def _vector_to_angles(v):
    """Invert the hyperspherical map for one local state vector."""
    d = v.size
    v = v * np.exp(-1j * np.angle(v[np.argmax(np.abs(v))]))
    mags = np.abs(v)
    polars = []
    residual = 1.0
    for j in range(d - 1):
        c = mags[j] / math.sqrt(residual) if residual > 1e-15 else 1.0
        c = min(max(c, 0.0), 1.0)
        polars.append(math.acos(c))
        residual = max(residual - mags[j] ** 2, 0.0)
    phases = list(np.angle(v[1:]))
    return polars, phases


def _pad_random(comps, weights, M, dims, rng):
    comps = list(comps)
    weights = list(weights)
    while len(comps) < M:
        comp = []
        for d in dims:
            comp.append(
                (
                    list(rng.uniform(0, math.pi / 2, d - 1)),
                    list(rng.uniform(0, 2 * math.pi, d - 1)),
                )
            )
        comps.append(comp)
        weights.append(1e-4)
    total = sum(weights)
    return comps, [w / total for w in weights]


def _dicke_basis(n):
    return [dicke(n, k).vector for k in range(n + 1)]


def _is_dicke_diagonal(mat, basis, qk):
    for a in range(len(basis)):
        for b in range(a + 1, len(basis)):
            if abs(basis[a].conj() @ mat @ basis[b]) > 1e-10:
                return False
    proj = sum(
        q * np.outer(v, v.conj()) for q, v in zip(qk, basis) if q > 0
    )
    return bool(np.allclose(proj, mat, atol=1e-8))


def _stationary_theta(n, p):
    alpha = float(np.dot(p, np.arange(n + 1)))
    frac = min(max(alpha / n, 0.0), 1.0)
    return math.acos(math.sqrt(frac))


def _theta_of_family(n, k1, k2, s):
    alpha = s * k1 + (1.0 - s) * k2
    return math.acos(math.sqrt(alpha / n))


def _hull_segment(n, k1, k2, s, grid=401):
    """Endpoints (sa, sb) of the hull segment through s, and the mixing t."""
    curve = _family_curve(n, k1, k2, grid)
    hull = convex_hull_1d(curve)
    if curve.value_at(s) - hull.value_at(s) < 1e-12:
        return None
    below = np.nonzero(curve.ys - hull.ys < 1e-12)[0]
    left = below[below <= np.searchsorted(curve.xs, s)]
    right = below[below >= np.searchsorted(curve.xs, s)]
    if left.size == 0 or right.size == 0:
        return None
    sa = curve.xs[left[-1]]
    sb = curve.xs[right[0]]
    t = (s - sb) / (sa - sb) if sa != sb else 1.0
    return sa, sb, min(max(t, 0.0), 1.0)


def numeric_ree(rho, ansatz_size=None, cfg=None):
    """Minimize S(rho || sigma) over explicit separable mixtures.

    Block-coordinate Nelder-Mead over each component's local angles and the
    squared-normalized weight vector. The result is always an upper bound on
    the REE.
    """
    cfg = cfg or ReeConfig()
    dim = int(np.prod(rho.dims))
    if dim > 64:
        raise PreconditionError("total dimension must be at most 64")
    rank = int(np.sum(np.linalg.eigvalsh(rho.matrix) > 1e-10))
    M = ansatz_size if ansatz_size is not None else rank + dim
    if M < rank:
        raise PreconditionError("ansatz size must be at least rank(rho)")

    rngs = spawn_rngs(cfg.seed, cfg.restarts)
    objective = _ReeObjective(rho, M)
    best_x = None
    best_val = math.inf
    init_best = math.inf

    for restart, rng in enumerate(rngs):
        starts = _informed_starts(rho, M, rng) if restart == 0 else []
        if not starts or restart > 0:
            x0 = np.concatenate(
                [
                    rng.uniform(0, math.pi / 2, M * objective.angles_per_component),
                    rng.uniform(0.5, 1.0, M),
                ]
            )
            starts = starts + [x0]
        for x0 in starts:
            init_val = objective(x0)
            init_best = min(init_best, init_val)
            x, val = _block_descent(objective, x0, cfg)
            if val < best_val:
                best_val, best_x = val, x

    _, w, _ = objective.sigma_of(best_x)
    angle_rows, _ = objective.split(best_x)
    products = [
        ProductState(_product_vector(angle_rows[i], rho.dims)) for i in range(M)
    ]
    ansatz = SeparableAnsatz(w, products)
    return ReeResult(
        value=float(best_val),
        ansatz=ansatz,
        improved=bool(best_val < init_best - 1e-12),
        evaluations=objective.evaluations,
    )


def _block_descent(objective, x0, cfg):
    """Cycle Nelder-Mead over per-component angle blocks and the weight block."""
    x = np.array(x0, dtype=float)
    M = objective.n_components
    na = objective.angles_per_component
    blocks = [np.arange(i * na, (i + 1) * na) for i in range(M)]
    blocks.append(np.arange(M * na, M * na + M))
    budget = cfg.max_evaluations
    used_at_entry = objective.evaluations
    current = objective(x)
    per_block = max(60, budget // (2 * len(blocks)))
    while objective.evaluations - used_at_entry < budget:
        sweep_start = current
        for idx in blocks:
            remaining = budget - (objective.evaluations - used_at_entry)
            if remaining <= 0:
                break

            def block_fn(sub):
                trial = x.copy()
                trial[idx] = sub
                return objective(trial)

            res = minimize(
                block_fn,
                x[idx],
                method="Nelder-Mead",
                options={
                    "maxfev": int(min(per_block, remaining)),
                    "fatol": cfg.fatol,
                    "xatol": 1e-8,
                },
            )
            if res.fun < current:
                current = float(res.fun)
                x[idx] = res.x
        if sweep_start - current < 1e-10:
            break
    return x, current


def plenio_vedral_bound(psi, grid=401):
    """Lower bound on the REE of a 3- or 4-qubit pure state from single-party
    reductions: max over parties of REE(reduction) + entropy(reduction)."""
    n = len(psi.dims)
    if not (3 <= n <= 4) or any(d != 2 for d in psi.dims):
        raise PreconditionError("defined for 3 or 4 qubits")
    rho = psi.density()
    basis = _dicke_basis(n - 1)
    best = -math.inf
    partial = False
    per_party = []
    for party in range(n):
        keep = [i for i in range(n) if i != party]
        red = partial_trace(rho, keep)
        evals = np.clip(np.linalg.eigvalsh(red.matrix), 0.0, None)
        entropy = float(-sum(v * math.log2(v) for v in evals if v > 1e-15))
        qk = np.array(
            [float(np.real(v.conj() @ red.matrix @ v)) for v in basis]
        )
        if abs(qk.sum() - 1.0) < 1e-8 and _is_dicke_diagonal(red.matrix, basis, qk):
            qk = np.clip(qk, 0.0, None)
            qk /= qk.sum()
            support = [k for k in range(n) if qk[k] > 1e-12]
            if len(support) <= 2:
                ree_red = conjectured_ree(n - 1, qk, grid).value
            else:
                ree_red = 0.0
                partial = True
        else:
            ree_red = 0.0
            partial = True
        per_party.append(ree_red + entropy)
        best = max(best, ree_red + entropy)
    return CrossEntropyBound(value=best, partial=partial, per_party=per_party)
