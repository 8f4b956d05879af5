"""Geometric entanglement of pure states.

The central quantity is the entanglement eigenvalue Lambda_max: the largest
overlap magnitude between a state and any product (Hartree) state. From it,
E_sin2 = 1 - Lambda_max^2 and E_log2 = -2 log2 Lambda_max.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from ._util import golden_max, run_indexed, spawn_rngs
from .errors import PreconditionError
from .qstate import PartitionSpec, ProductState, PureState

PRODUCT_LAMBDA_EDGE = 1e-9


@dataclass
class HartreeConfig:
    """Controls for the alternating product-state maximization."""

    max_iterations: int = 2000
    tolerance: float = 1e-11
    restarts: int = 32
    seed: int = 0
    symmetric_ansatz: bool = False

    def __post_init__(self):
        if self.max_iterations < 1 or self.restarts < 1 or self.tolerance <= 0:
            raise PreconditionError("bad solver configuration")


@dataclass
class EntanglementReport:
    lambda_max: float
    e_sin2: float
    e_log2: float
    closest: ProductState
    converged: bool
    iterations_used: int


def _env_vector(amps, factors, skip):
    """Contraction of amps against conj of every factor except `skip`."""
    t = np.moveaxis(amps, skip, 0)
    for j in range(len(factors)):
        if j == skip:
            continue
        t = np.tensordot(t, factors[j].conj(), axes=([1], [0]))
    return t


def _sweeps(amps, start, max_iterations, tolerance, symmetric):
    n = len(start)
    vs = [v.copy() for v in start]
    lam = 0.0
    for it in range(1, max_iterations + 1):
        if symmetric:
            w = _env_vector(amps, vs, 0)
            nw = np.linalg.norm(w)
            if nw == 0.0:
                return vs, 0.0, False, it
            v = w / nw
            vs = [v] * n
            new_lam = abs(np.vdot(v, _env_vector(amps, vs, 0)))
        else:
            for i in range(n):
                w = _env_vector(amps, vs, i)
                nw = np.linalg.norm(w)
                if nw == 0.0:
                    return vs, 0.0, False, it
                vs[i] = w / nw
                new_lam = nw
        if abs(new_lam - lam) < tolerance:
            return vs, new_lam, True, it
        lam = new_lam
    return vs, lam, False, max_iterations


def _fix_phases(factors):
    fixed = []
    for v in factors:
        idx = np.nonzero(np.abs(v) > 1e-12)[0]
        if idx.size:
            phase = v[idx[0]] / abs(v[idx[0]])
            v = v / phase
        fixed.append(v)
    return fixed


def _symmetric_start(psi):
    """Shared local vector: principal eigenvector of the mean 1-party reduction."""
    d = psi.dims[0]
    n = psi.n_parties
    acc = np.zeros((d, d), dtype=complex)
    for i in range(n):
        m = np.moveaxis(psi.amps, i, 0).reshape(d, -1)
        acc += m @ m.conj().T
    _, vecs = np.linalg.eigh(acc / n)
    return vecs[:, -1]


def entanglement_eigenvalue(psi, cfg=None):
    """Best product approximation by alternating maximization with restarts."""
    cfg = cfg or HartreeConfig()
    if psi.n_parties < 2:
        raise PreconditionError("need at least two parties")
    dims = psi.dims
    amps = psi.amps
    if cfg.symmetric_ansatz and len(set(dims)) != 1:
        raise PreconditionError("symmetric ansatz requires equal local dimensions")

    starts = []
    for rng in spawn_rngs(cfg.seed, cfg.restarts):
        vs = []
        for d in dims:
            v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
            vs.append(v / np.linalg.norm(v))
        starts.append(vs)
    if len(set(dims)) == 1:
        v = _symmetric_start(psi)
        starts.append([v.copy() for _ in dims])

    def solve(start):
        return _sweeps(amps, start, cfg.max_iterations, cfg.tolerance, cfg.symmetric_ansatz)

    results = run_indexed(solve, starts)
    best = max(range(len(results)), key=lambda i: (results[i][1], -i))
    vs, lam, converged, iters = results[best]
    lam = min(float(lam), 1.0)
    closest = ProductState(_fix_phases(vs))
    return EntanglementReport(
        lambda_max=lam,
        e_sin2=1.0 - lam * lam,
        e_log2=-2.0 * math.log2(lam) if lam > 0 else float("inf"),
        closest=closest,
        converged=converged,
        iterations_used=iters,
    )


def schmidt_lambda(psi, cut):
    """Largest Schmidt coefficient across a bipartition."""
    n = psi.n_parties
    if cut.n_parties != n:
        raise PreconditionError("cut does not match the number of parties")
    da = int(np.prod([psi.dims[i] for i in cut.group_a]))
    t = np.moveaxis(psi.amps, cut.group_a, range(len(cut.group_a)))
    m = t.reshape(da, -1)
    return float(np.linalg.svd(m, compute_uv=False)[0])


def symmetric_state(n, counts):
    """Equal-weight superposition over all arrangements of the given level counts.

    counts[l] parties sit in level l; the amplitude of every arrangement is
    sqrt(prod(counts!)/n!).
    """
    counts = [int(k) for k in counts]
    if any(k < 0 for k in counts) or sum(counts) != n:
        raise PreconditionError("counts must be nonnegative and sum to n")
    d = len(counts)
    if d < 2:
        raise PreconditionError("need at least two levels")
    dims = (d,) * n
    amp = math.sqrt(math.prod(math.factorial(k) for k in counts) / math.factorial(n))
    vec = np.zeros(int(d ** n), dtype=complex)
    levels = [l for l, k in enumerate(counts) for _ in range(k)]
    for arrangement in set(itertools.permutations(levels)):
        vec[int(np.ravel_multi_index(arrangement, dims))] = amp
    return PureState(dims, vec)


def dicke(n, k):
    """Qubit symmetric state with k parties in level 0 and n-k in level 1."""
    return symmetric_state(n, [k, n - k])


def lambda_symmetric(n, counts):
    """Closed-form Lambda_max of symmetric_state(n, counts)."""
    counts = [int(k) for k in counts]
    if any(k < 0 for k in counts) or sum(counts) != n:
        raise PreconditionError("counts must be nonnegative and sum to n")
    mult = math.factorial(n) / math.prod(math.factorial(k) for k in counts)
    prod = math.prod((k / n) ** (k / 2) for k in counts if k > 0)
    return float(math.sqrt(mult) * prod)


def det_state(n):
    """Fully antisymmetric n-party n-level state (normalized determinant)."""
    if not 2 <= n <= 6:
        raise PreconditionError("determinant states supported for 2 <= n <= 6")
    dims = (n,) * n
    vec = np.zeros(int(n ** n), dtype=complex)
    root = 1.0 / math.sqrt(math.factorial(n))
    for perm in itertools.permutations(range(n)):
        sign = _perm_sign(perm)
        vec[int(np.ravel_multi_index(perm, dims))] = sign * root
    return PureState(dims, vec)


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        length = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def lambda_det(n):
    """Lambda_max of det_state(n): 1/sqrt(n!)."""
    if not 2 <= n <= 6:
        raise PreconditionError("determinant states supported for 2 <= n <= 6")
    return 1.0 / math.sqrt(math.factorial(n))


def _dicke_overlap(n, k, theta):
    """A_k(theta) = sqrt(C(n,k)) cos^k(theta) sin^(n-k)(theta)."""
    return math.sqrt(math.comb(n, k)) * math.cos(theta) ** k * math.sin(theta) ** (n - k)


def two_term_symmetric_lambda(n, k1, k2, r):
    """Lambda_max of sqrt(r)|S(n,k1)> + sqrt(1-r)|S(n,k2)> (phase-free family)."""
    if k1 == k2:
        raise PreconditionError("k1 and k2 must differ")
    if not (0 <= k1 <= n and 0 <= k2 <= n):
        raise PreconditionError("k out of range")
    if not 0.0 <= r <= 1.0:
        raise PreconditionError("r must lie in [0, 1]")
    a, b = math.sqrt(r), math.sqrt(1.0 - r)

    def f(theta):
        return a * _dicke_overlap(n, k1, theta) + b * _dicke_overlap(n, k2, theta)

    thetas = np.linspace(0.0, math.pi / 2, 801)
    vals = [f(t) for t in thetas]
    i = int(np.argmax(vals))
    lo = thetas[max(i - 1, 0)]
    hi = thetas[min(i + 1, len(thetas) - 1)]
    _, lam = golden_max(f, lo, hi, tol=1e-13)
    return float(lam)


def ghz_w_lambda(x, y):
    """Lambda_max of sqrt(x)|GHZ> + sqrt(y)|W> + sqrt(1-x-y)|inverted W> (3 qubits).

    The stationarity condition is a cubic in t = tan(theta) of the shared
    local vector; roots are bracketed on [0, 10] and bisected to residual
    1e-13, and the root with the largest overlap wins (simplex corners can
    produce more than one nonnegative root).
    """
    if x < -1e-12 or y < -1e-12 or x + y > 1.0 + 1e-12:
        raise PreconditionError("(x, y) must lie in the probability simplex")
    x = min(max(x, 0.0), 1.0)
    y = min(max(y, 0.0), 1.0 - x)
    a = math.sqrt(x / 2.0)
    b = math.sqrt(3.0 * y)
    c = math.sqrt(3.0 * (1.0 - x - y))

    def g(t):
        return 3.0 * a * (t * t - t) + b * (1.0 - 2.0 * t * t) + c * (2.0 * t - t ** 3)

    def lam(t):
        return (a * (1.0 + t ** 3) + b * t + c * t * t) / (1.0 + t * t) ** 1.5

    ts = np.linspace(0.0, 10.0, 2001)
    gs = 3.0 * a * (ts * ts - ts) + b * (1.0 - 2.0 * ts * ts) + c * (2.0 * ts - ts ** 3)
    roots = [float(ts[i]) for i in np.nonzero(np.abs(gs) < 1e-15)[0]]
    sign_flip = np.nonzero(np.sign(gs[:-1]) * np.sign(gs[1:]) < 0)[0]
    for i in sign_flip:
        lo, hi = float(ts[i]), float(ts[i + 1])
        glo = g(lo)
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            gm = g(mid)
            if abs(gm) < 1e-13:
                break
            if (gm > 0) == (glo > 0):
                lo, glo = mid, gm
            else:
                hi = mid
        roots.append(0.5 * (lo + hi))
    # the boundary product states |000> / |111> are always candidates
    best = a
    if roots:
        best = max(best, max(lam(t) for t in roots))
    return float(best)


def optimal_witness_value(psi, cfg=None):
    """Expectation of the optimal witness Lambda^2*I - |psi><psi| on psi itself."""
    report = entanglement_eigenvalue(psi, cfg)
    if report.lambda_max >= 1.0 - PRODUCT_LAMBDA_EDGE:
        raise PreconditionError("state is a product state; no witness exists")
    return -report.e_sin2


_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def _apply_site(amps, op, site):
    t = np.tensordot(op, amps, axes=([1], [site]))
    return np.moveaxis(t, 0, site)


def correlation_lambda_sq(psi, restarts=8, seed=0, max_sweeps=500, tol=1e-12):
    """Lambda^2 via the correlation-function expansion.

    Evaluates (1/2^n) * sum over party subsets of <prod_j r_j.sigma_j>,
    maximized over per-party unit Bloch vectors. Qubits only, n <= 4.
    """
    n = psi.n_parties
    if any(d != 2 for d in psi.dims):
        raise PreconditionError("correlation route is qubits-only")
    if n > 4:
        raise PreconditionError("correlation route capped at 4 parties")

    tensors = {}
    for subset in itertools.chain.from_iterable(
        itertools.combinations(range(n), m) for m in range(1, n + 1)
    ):
        t = np.zeros((3,) * len(subset))
        for axes in itertools.product(range(3), repeat=len(subset)):
            cur = psi.amps
            for site, ax in zip(subset, axes):
                cur = _apply_site(cur, _PAULI[ax], site)
            t[axes] = float(np.real(np.vdot(psi.amps, cur)))
        tensors[subset] = t

    def objective(blochs):
        total = 1.0
        for subset, t in tensors.items():
            cur = t
            for j in subset:
                cur = np.tensordot(cur, blochs[j], axes=([0], [0]))
            total += float(cur)
        return total / 2 ** n

    def coefficient(blochs, j):
        coef = np.zeros(3)
        for subset, t in tensors.items():
            if j not in subset:
                continue
            cur = np.moveaxis(t, subset.index(j), -1)
            for site in subset:
                if site != j:
                    cur = np.tensordot(blochs[site], cur, axes=([0], [0]))
            coef += np.asarray(cur)
        return coef

    best = 0.0
    for rng in spawn_rngs(seed, restarts):
        blochs = rng.standard_normal((n, 3))
        blochs /= np.linalg.norm(blochs, axis=1, keepdims=True)
        prev = objective(blochs)
        for _ in range(max_sweeps):
            for j in range(n):
                coef = coefficient(blochs, j)
                norm = np.linalg.norm(coef)
                if norm > 0:
                    blochs[j] = coef / norm
            cur = objective(blochs)
            if abs(cur - prev) < tol:
                break
            prev = cur
        best = max(best, prev)
    return best


def two_party_cut(psi):
    """Convenience 1|rest bipartition for a multi-party state."""
    return PartitionSpec.of((0,), psi.n_parties)
