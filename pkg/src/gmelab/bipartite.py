"""Bipartite measures: Schmidt data, concurrence, negativity, and the
closed-form geometric entanglement of two-qubit, Werner, and isotropic states.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._util import binary_entropy
from .errors import PreconditionError
from .qstate import (
    DensityMatrix,
    PureState,
    SUPPORT_CUTOFF,
    hermitize,
    partial_transpose,
)

_Y2 = np.array(
    [
        [0, 0, 0, -1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
        [-1, 0, 0, 0],
    ],
    dtype=float,
)  # sigma_y x sigma_y


@dataclass
class SchmidtDecomposition:
    coefficients: np.ndarray
    left_basis: np.ndarray  # columns
    right_basis: np.ndarray  # columns

    def reconstruct(self):
        """Bipartite amplitude matrix sum_k lambda_k |l_k><r_k*|."""
        return (self.left_basis * self.coefficients) @ self.right_basis.conj().T


def schmidt(psi, cut):
    """Schmidt decomposition of psi across the given bipartition."""
    if cut.n_parties != psi.n_parties:
        raise PreconditionError("cut does not match the number of parties")
    da = int(np.prod([psi.dims[i] for i in cut.group_a]))
    t = np.moveaxis(psi.amps, cut.group_a, range(len(cut.group_a)))
    m = t.reshape(da, -1)
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    return SchmidtDecomposition(coefficients=s, left_basis=u, right_basis=vh.conj().T)


def pure_concurrence(psi):
    """C = 2|ad - bc| for a two-qubit pure state."""
    if psi.dims != (2, 2):
        raise PreconditionError("two-qubit states only")
    a, b, c, d = psi.vector
    return float(2.0 * abs(a * d - b * c))


def _check_two_qubit(rho):
    if rho.dims != (2, 2):
        raise PreconditionError("two-qubit states only")
    return rho.matrix


def concurrence(rho):
    """Wootters concurrence of a two-qubit density matrix.

    The square roots of the eigenvalues of rho (Y rho* Y) equal the singular
    values of tau = L^T Y L with rho = L L^dagger, which avoids the precision
    loss of rooting near-zero eigenvalues of the non-Hermitian product.
    """
    mat = _check_two_qubit(rho)
    evals, vecs = np.linalg.eigh(mat)
    factor = vecs * np.sqrt(np.clip(evals, 0.0, None))
    tau = factor.T @ _Y2 @ factor
    r = np.linalg.svd(tau, compute_uv=False)
    return float(max(0.0, r[0] - r[1] - r[2] - r[3]))


def eof(rho):
    """Entanglement of formation in bits, from the concurrence."""
    c = concurrence(rho)
    return binary_entropy(0.5 * (1.0 + math.sqrt(max(0.0, 1.0 - c * c))))


def negativity(rho, cut):
    """Twice the total weight of negative partial-transpose eigenvalues."""
    evals = np.linalg.eigvalsh(hermitize(partial_transpose(rho, cut)))
    return float(2.0 * max(0.0, -np.sum(evals[evals < 0.0])))


def gme_two_qubit(rho):
    """Convex-roof geometric entanglement of any two-qubit state."""
    c = concurrence(rho)
    return 0.5 * (1.0 - math.sqrt(max(0.0, 1.0 - c * c)))


def werner_state(f, d):
    """Swap-symmetric state with swap expectation f on d x d."""
    if not -1.0 <= f <= 1.0 or d < 2:
        raise PreconditionError("need |f| <= 1 and d >= 2")
    eye = np.eye(d * d)
    swap = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            swap[i * d + j, j * d + i] = 1.0
    mat = (d * d - f * d) / (d ** 4 - d * d) * eye + (f * d * d - d) / (d ** 4 - d * d) * swap
    return DensityMatrix((d, d), mat)


def werner_gme(f, d):
    """Geometric entanglement of werner_state(f, d); zero for f >= 0."""
    if not -1.0 <= f <= 1.0 or d < 2:
        raise PreconditionError("need |f| <= 1 and d >= 2")
    if f >= 0.0:
        return 0.0
    return 0.5 * (1.0 - math.sqrt(1.0 - f * f))


def isotropic_state(F, d):
    """Mixture of the maximally entangled |Phi+> (weight F) and its complement."""
    if not 0.0 <= F <= 1.0 or d < 2:
        raise PreconditionError("need F in [0,1] and d >= 2")
    phi = np.zeros(d * d, dtype=complex)
    for i in range(d):
        phi[i * d + i] = 1.0 / math.sqrt(d)
    proj = np.outer(phi, phi.conj())
    mat = (1.0 - F) / (d * d - 1.0) * (np.eye(d * d) - proj) + F * proj
    return DensityMatrix((d, d), mat)


def isotropic_gme(F, d):
    """Geometric entanglement of isotropic_state(F, d); zero up to F = 1/d."""
    if not 0.0 <= F <= 1.0 or d < 2:
        raise PreconditionError("need F in [0,1] and d >= 2")
    if F <= 1.0 / d:
        return 0.0
    return 1.0 - (math.sqrt(F) + math.sqrt((1.0 - F) * (d - 1.0))) ** 2 / d


def thermal_werner(J, T):
    """Two-site Heisenberg thermal state: r |Psi-><Psi-| + (1-r)/4 identity.

    Returns (DensityMatrix, r). Entangled iff r > 1/3.
    """
    if T <= 0.0:
        raise PreconditionError("temperature must be positive")
    beta = 1.0 / T
    r = (math.exp(-3.0 * beta * J) - math.exp(beta * J)) / (
        3.0 * math.exp(beta * J) + math.exp(-3.0 * beta * J)
    )
    psi_minus = np.array([0.0, 1.0, -1.0, 0.0], dtype=complex) / math.sqrt(2.0)
    mat = r * np.outer(psi_minus, psi_minus.conj()) + (1.0 - r) / 4.0 * np.eye(4)
    return DensityMatrix((2, 2), mat), float(r)


# ---------------------------------------------------------------------------
# Optimal two-qubit decompositions
# ---------------------------------------------------------------------------


def _takagi(tau):
    """Factor a complex symmetric tau as W tau W^T = diag(s), s >= 0 descending.

    Uses the real embedding [[Re, Im], [Im, -Re]], whose spectrum comes in
    +/- pairs; the nonnegative half yields the congruence transform.
    """
    m = tau.shape[0]
    emb = np.block([[tau.real, tau.imag], [tau.imag, -tau.real]])
    w, q = np.linalg.eigh(emb)

    def jmap(v):
        return np.concatenate([-v[m:], v[:m]])

    picked = []
    svals = []
    for i in np.argsort(-w):
        if len(picked) == m:
            break
        v = q[:, i].copy()
        for p in picked:
            v -= p * (p @ v)
            jp = jmap(p)
            v -= jp * (jp @ v)
        nv = np.linalg.norm(v)
        if nv < 1e-8:
            continue
        v /= nv
        picked.append(v)
        svals.append(max(float(w[i]), 0.0))
    rows = np.array([(p[:m] - 1j * p[m:]) for p in picked])
    order = np.argsort(-np.array(svals))
    return rows[order], np.array(svals)[order]


def wootters_decomposition(rho, tol=1e-12):
    """Decomposition of an entangled two-qubit state into pure states that all
    carry concurrence equal to concurrence(rho).

    Returns a list of (weight, PureState). Averaging the pure-state geometric
    entanglement over it reproduces gme_two_qubit(rho).
    """
    mat = _check_two_qubit(rho)
    c_target = concurrence(rho)
    if c_target <= 0.0:
        raise PreconditionError("state is separable; no equal-concurrence decomposition")
    evals, vecs = np.linalg.eigh(mat)
    keep = evals > SUPPORT_CUTOFF
    sub = vecs[:, keep] * np.sqrt(evals[keep])  # subnormalized columns
    m = sub.shape[1]
    tau = sub.T @ _Y2 @ sub
    w_rows, svals = _takagi(tau)
    xs = (w_rows @ sub.T).T  # columns x_k with S(x_k) = svals[k]
    phases = np.ones(m, dtype=complex)
    phases[1:] = 1j
    xs = xs * phases

    def self_flip(v):
        return complex(v @ _Y2 @ v)

    def residual(k):
        return float(np.real(self_flip(xs[:, k]))) - c_target * float(
            np.real(np.vdot(xs[:, k], xs[:, k]))
        )

    # Real rotations preserve sum(residual) = C - C = 0; zero them in turn.
    for fixed in range(m - 1):
        active = list(range(fixed, m))
        if all(abs(residual(k)) <= tol for k in active):
            break
        k0 = active[int(np.argmax([abs(residual(k)) for k in active]))]
        partners = [k for k in active if residual(k) * residual(k0) < 0.0]
        if not partners:
            raise PreconditionError("equalization failed; state too close to separable")
        k1 = partners[int(np.argmax([abs(residual(k)) for k in partners]))]

        def rotated_residual(phi):
            v = math.cos(phi) * xs[:, k0] + math.sin(phi) * xs[:, k1]
            return float(np.real(self_flip(v))) - c_target * float(np.real(np.vdot(v, v)))

        lo, hi = 0.0, math.pi / 2.0
        flo = rotated_residual(lo)
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            fm = rotated_residual(mid)
            if abs(fm) < tol:
                lo = hi = mid
                break
            if (fm > 0.0) == (flo > 0.0):
                lo, flo = mid, fm
            else:
                hi = mid
        phi = 0.5 * (lo + hi)
        new0 = math.cos(phi) * xs[:, k0] + math.sin(phi) * xs[:, k1]
        new1 = -math.sin(phi) * xs[:, k0] + math.cos(phi) * xs[:, k1]
        xs[:, k0], xs[:, k1] = new0, new1
        # move the zeroed vector to the front of the active window
        xs[:, [fixed, k0]] = xs[:, [k0, fixed]]

    out = []
    for k in range(m):
        p = float(np.real(np.vdot(xs[:, k], xs[:, k])))
        if p <= tol:
            continue
        out.append((p, PureState((2, 2), xs[:, k] / math.sqrt(p))))
    return out
