"""Distillation and compression worked examples.

Pure-state distillation yield, the two-pair Werner recursion (closed form
plus an explicit four-qubit circuit simulation), and the three-letter quantum
data-compression demonstration.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from ._util import binary_entropy
from .errors import PreconditionError


@dataclass
class DistillationTrace:
    """Sequence of (step, value) pairs produced by iterating a protocol."""

    points: list

    def __post_init__(self):
        for _, value in self.points:
            if not -1e-12 <= value <= 1.0 + 1e-12:
                raise PreconditionError("trace values must stay in [0, 1]")

    @property
    def final(self):
        return self.points[-1][1]


def pure_yield(theta, n):
    """Average number of Bell pairs per copy distilled from n copies of
    cos(theta)|00> + sin(theta)|11> by the measure-and-batch protocol."""
    if not 0.0 <= theta <= math.pi / 2.0:
        raise PreconditionError("theta must lie in [0, pi/2]")
    if not 1 <= n <= 10**4:
        raise PreconditionError("n must lie in [1, 10^4]")
    c2 = math.cos(theta) ** 2
    s2 = math.sin(theta) ** 2
    ks = np.arange(n + 1)
    log_binom = gammaln(n + 1) - gammaln(ks + 1) - gammaln(n - ks + 1)
    log_p = np.full(n + 1, -np.inf)
    mask = np.ones(n + 1, dtype=bool)
    if s2 == 0.0:
        mask &= ks == 0
    if c2 == 0.0:
        mask &= ks == n
    with np.errstate(divide="ignore"):
        log_p[mask] = (
            log_binom[mask]
            + (n - ks[mask]) * (math.log(c2) if c2 > 0 else 0.0)
            + ks[mask] * (math.log(s2) if s2 > 0 else 0.0)
        )
    p = np.exp(log_p)
    return float(np.dot(p, log_binom / math.log(2.0)) / n)


def pure_yield_limit(theta):
    """n -> infinity limit of pure_yield: the entropy of a reduced state."""
    return binary_entropy(math.cos(theta) ** 2)


def werner_step(r):
    """One round of the two-pair recurrence for the Werner parameter.

    Written as identity plus gain so the fixed points 0, 1/3, 1 are exact
    in floating point.
    """
    if not 0.0 <= r <= 1.0:
        raise PreconditionError("r must lie in [0, 1]")
    return r + r * (1.0 - r) * (3.0 * r - 1.0) / (3.0 * (1.0 + r * r))


def werner_trace(r0, steps):
    points = [(0, float(r0))]
    r = float(r0)
    for step in range(1, steps + 1):
        r = werner_step(r)
        points.append((step, r))
    return DistillationTrace(points)


def _cnot_permutation():
    """Both-side CNOTs for the two-pair protocol on qubits (A1,B1,A2,B2)."""
    perm = np.zeros(16, dtype=int)
    for idx in range(16):
        b = [(idx >> (3 - q)) & 1 for q in range(4)]
        b[2] ^= b[0]  # Alice: control A1, target A2
        b[3] ^= b[1]  # Bob: control B1, target B2
        perm[idx] = (b[0] << 3) | (b[1] << 2) | (b[2] << 1) | b[3]
    return perm


def werner_step_simulated(r):
    """r' extracted from an explicit density-matrix simulation of the
    two-pair purification circuit (CNOTs, coincidence measurement on the
    second pair, fidelity of the kept pair)."""
    if not 0.0 <= r <= 1.0:
        raise PreconditionError("r must lie in [0, 1]")
    phi = np.zeros(4)
    phi[0] = phi[3] = 1.0 / math.sqrt(2.0)
    pair = r * np.outer(phi, phi) + (1.0 - r) * np.eye(4) / 4.0
    rho = np.kron(pair, pair)
    # reorder (A1,B1)(A2,B2) -> (A1,B1,A2,B2) is already the kron layout
    perm = _cnot_permutation()
    rho = rho[np.ix_(perm, perm)]
    kept = np.zeros((4, 4), dtype=complex)
    p_success = 0.0
    t = rho.reshape(2, 2, 2, 2, 2, 2, 2, 2)
    for outcome in (0, 1):
        block = t[:, :, outcome, outcome, :, :, outcome, outcome]
        branch = block.reshape(4, 4)
        p_success += float(np.real(np.trace(branch)))
        kept += branch
    kept /= p_success
    fidelity = float(np.real(phi @ kept @ phi))
    return (4.0 * fidelity - 1.0) / 3.0


@dataclass
class CompressionReport:
    entropy_bits: float
    p_typical: float
    f_success: float
    f_failure: float
    fidelity: float
    baseline: float


def schumacher_demo():
    """Three-letter, two-qubit compression of the {|H>, |D>} ensemble.

    Simulates the project-onto-typical-subspace protocol message by message
    and reports the ensemble entropy, typical-subspace probability, the
    success/failure fidelities, the overall fidelity, and the send-two-and-
    guess baseline.
    """
    h = np.array([1.0, 0.0])
    d = np.array([1.0, 1.0]) / math.sqrt(2.0)
    rho = 0.5 * (np.outer(h, h) + np.outer(d, d))
    evals, evecs = np.linalg.eigh(rho)
    order = np.argsort(evals)[::-1]
    evals, evecs = evals[order], evecs[:, order]
    q_vec = evecs[:, 0] * np.sign(evecs[0, 0])
    entropy = float(-sum(v * math.log2(v) for v in evals if v > 1e-15))

    rho3 = np.kron(np.kron(rho, rho), rho)
    e3, v3 = np.linalg.eigh(rho3)
    order3 = np.argsort(e3)[::-1]
    v3 = v3[:, order3]
    typical = v3[:, :4]
    projector = typical @ typical.T.conj()
    guess = np.kron(np.kron(q_vec, q_vec), q_vec)

    letters = (h, d)
    p_typ = []
    f_fail = []
    fidelity = 0.0
    for bits in range(8):
        msg = [letters[(bits >> (2 - i)) & 1] for i in range(3)]
        psi = np.kron(np.kron(msg[0], msg[1]), msg[2])
        p = float(np.real(psi @ projector @ psi))
        f1 = p  # normalized post-measurement state overlaps the original by p
        f2 = float(abs(np.dot(psi, guess)) ** 2)
        p_typ.append(p)
        f_fail.append(f2)
        fidelity += (p * f1 + (1.0 - p) * f2) / 8.0

    baseline = 0.0
    for letter in letters:
        baseline += 0.5 * float(abs(np.dot(letter, q_vec)) ** 2)
    return CompressionReport(
        entropy_bits=entropy,
        p_typical=float(np.mean(p_typ)),
        f_success=float(np.mean(p_typ)),
        f_failure=float(np.mean(f_fail)),
        fidelity=float(fidelity),
        baseline=baseline,
    )
