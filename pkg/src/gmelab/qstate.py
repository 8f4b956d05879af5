"""State containers, reductions, and entropic primitives.

Conventions used throughout the package:

- party 1 is the most significant index (row-major layout);
- operator support is defined by an eigenvalue cutoff of 1e-12;
- matrices within 1e-10 of Hermitian are symmetrized before eigensolves.

Everything is dense. Pure states are capped at total dimension 2**14 and
density matrices at 2**12.
"""

import numpy as np

from .errors import PreconditionError, QstFormatError

SUPPORT_CUTOFF = 1e-12
HERM_TOL = 1e-10
NORM_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_TOL = 1e-9
LOAD_TOL = 1e-8

MAX_PURE_DIM = 2 ** 14
MAX_MIXED_DIM = 2 ** 12


def _check_dims(dims):
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 2 for d in dims):
        raise PreconditionError("every local dimension must be an integer >= 2")
    return dims


def hermitize(mat, tol=HERM_TOL):
    """Symmetrize a nearly-Hermitian matrix; reject anything worse than tol."""
    mat = np.asarray(mat, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise PreconditionError("expected a square matrix")
    gap = np.max(np.abs(mat - mat.conj().T))
    if gap > tol:
        raise PreconditionError(f"matrix is not Hermitian (residual {gap:.3e})")
    return 0.5 * (mat + mat.conj().T)


class PureState:
    """Normalized pure state over a tuple of local dimensions."""

    def __init__(self, dims, amps):
        dims = _check_dims(dims)
        total = int(np.prod(dims))
        if total > MAX_PURE_DIM:
            raise PreconditionError(f"pure state dimension {total} exceeds cap {MAX_PURE_DIM}")
        amps = np.asarray(amps, dtype=complex)
        if amps.size != total:
            raise PreconditionError("amplitude count does not match dimensions")
        norm2 = float(np.sum(np.abs(amps) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL:
            raise PreconditionError(f"state is not normalized (sum |amp|^2 = {norm2!r})")
        self.dims = dims
        self.amps = amps.reshape(dims)

    @property
    def n_parties(self):
        return len(self.dims)

    @property
    def vector(self):
        return self.amps.reshape(-1)

    def density(self):
        v = self.vector
        return DensityMatrix(self.dims, np.outer(v, v.conj()))

    def overlap(self, other):
        """<self|other> for states on identical dims."""
        if self.dims != other.dims:
            raise PreconditionError("dimension mismatch")
        return complex(np.vdot(self.vector, other.vector))


class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite operator over local dims."""

    def __init__(self, dims, matrix, check_psd=True):
        dims = _check_dims(dims)
        total = int(np.prod(dims))
        if total > MAX_MIXED_DIM:
            raise PreconditionError(f"density matrix dimension {total} exceeds cap {MAX_MIXED_DIM}")
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.shape != (total, total):
            raise PreconditionError("matrix shape does not match dimensions")
        matrix = hermitize(matrix)
        tr = float(np.real(np.trace(matrix)))
        if abs(tr - 1.0) > TRACE_TOL:
            raise PreconditionError(f"trace must be 1 (got {tr!r})")
        if check_psd:
            low = float(np.linalg.eigvalsh(matrix)[0])
            if low < -PSD_TOL:
                raise PreconditionError(f"matrix is not positive semidefinite (min eig {low:.3e})")
        self.dims = dims
        self.matrix = matrix

    @property
    def n_parties(self):
        return len(self.dims)


class ProductState:
    """Unentangled pure state stored as per-party local vectors."""

    def __init__(self, factors):
        factors = [np.asarray(v, dtype=complex).reshape(-1) for v in factors]
        if not factors:
            raise PreconditionError("need at least one factor")
        for v in factors:
            if v.size < 2:
                raise PreconditionError("every local dimension must be >= 2")
            if abs(np.linalg.norm(v) - 1.0) > NORM_TOL:
                raise PreconditionError("every factor must be normalized")
        self.factors = factors

    @property
    def dims(self):
        return tuple(v.size for v in self.factors)

    def to_pure(self):
        amps = self.factors[0]
        for v in self.factors[1:]:
            amps = np.kron(amps, v)
        return PureState(self.dims, amps)


class PartitionSpec:
    """A bipartition of parties 0..n-1 into two disjoint nonempty groups."""

    def __init__(self, group_a, group_b):
        group_a = tuple(sorted(int(i) for i in group_a))
        group_b = tuple(sorted(int(i) for i in group_b))
        n = len(group_a) + len(group_b)
        if not group_a or not group_b:
            raise PreconditionError("both groups must be nonempty")
        if sorted(group_a + group_b) != list(range(n)):
            raise PreconditionError("groups must disjointly cover parties 0..n-1")
        self.group_a = group_a
        self.group_b = group_b

    @classmethod
    def of(cls, group_a, n_parties):
        """Bipartition with everything outside group_a in group_b."""
        a = set(int(i) for i in group_a)
        b = [i for i in range(n_parties) if i not in a]
        return cls(tuple(sorted(a)), tuple(b))

    @property
    def n_parties(self):
        return len(self.group_a) + len(self.group_b)


def _as_matrix(obj):
    if isinstance(obj, DensityMatrix):
        return obj.matrix
    if isinstance(obj, PureState):
        v = obj.vector
        return np.outer(v, v.conj())
    return np.asarray(obj, dtype=complex)


def tensor_product(a, b):
    """Composite of two states of the same kind; dims concatenate."""
    if isinstance(a, PureState) and isinstance(b, PureState):
        return PureState(a.dims + b.dims, np.kron(a.vector, b.vector))
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(a.dims + b.dims, np.kron(a.matrix, b.matrix))
    raise PreconditionError("tensor_product expects two states of the same kind")


def _check_keep(keep, n):
    keep = tuple(sorted(set(int(i) for i in keep)))
    if not keep or any(i < 0 or i >= n for i in keep):
        raise PreconditionError(f"keep set must be a nonempty subset of 0..{n - 1}")
    return keep


def partial_trace(rho, keep):
    """Reduced density matrix over the kept parties (original party order)."""
    dims = rho.dims
    n = len(dims)
    keep = _check_keep(keep, n)
    keep_dim = int(np.prod([dims[i] for i in keep]))
    if isinstance(rho, PureState):
        t = np.moveaxis(rho.amps, keep, range(len(keep)))
        m = t.reshape(keep_dim, -1)
        return DensityMatrix(tuple(dims[i] for i in keep), m @ m.conj().T)
    t = rho.matrix.reshape(dims + dims)
    row = list(range(n))
    col = [n + i if i in keep else i for i in range(n)]
    out = [i for i in keep] + [n + i for i in keep]
    red = np.einsum(t, row + col, out).reshape(keep_dim, keep_dim)
    return DensityMatrix(tuple(dims[i] for i in keep), red)


def partial_transpose(rho, cut):
    """Matrix with the indices of cut.group_b transposed; Hermitian, trace 1."""
    dims = rho.dims
    n = len(dims)
    if cut.n_parties != n:
        raise PreconditionError("cut does not match the number of parties")
    mat = _as_matrix(rho)
    t = mat.reshape(dims + dims)
    perm = list(range(2 * n))
    for i in cut.group_b:
        perm[i], perm[n + i] = perm[n + i], perm[i]
    d = mat.shape[0]
    return np.transpose(t, perm).reshape(d, d)


def von_neumann_entropy(rho):
    """S(rho) = -Tr rho log2 rho in bits; eigenvalues <= 1e-12 contribute 0."""
    evals = np.linalg.eigvalsh(hermitize(_as_matrix(rho)))
    if float(evals[0]) < -PSD_TOL:
        raise PreconditionError(f"operator is not positive semidefinite (min eig {evals[0]:.3e})")
    evals = evals[evals > SUPPORT_CUTOFF]
    return float(-np.sum(evals * np.log2(evals)))


def relative_entropy(rho, sigma):
    """S(rho||sigma) in bits; +inf when rho's support leaks out of sigma's."""
    a = hermitize(_as_matrix(rho))
    b = hermitize(_as_matrix(sigma))
    if a.shape != b.shape:
        raise PreconditionError("dimension mismatch")
    ev_a, vec_a = np.linalg.eigh(a)
    ev_b, vec_b = np.linalg.eigh(b)
    null = vec_b[:, ev_b <= SUPPORT_CUTOFF]
    if null.shape[1]:
        leak = float(np.real(np.einsum("ij,ik,kj->", null.conj(), a, null)))
        if leak > SUPPORT_CUTOFF:
            return float("inf")
    pos_a = ev_a[ev_a > SUPPORT_CUTOFF]
    s_rho = float(np.sum(pos_a * np.log2(pos_a)))
    mask = ev_b > SUPPORT_CUTOFF
    vb = vec_b[:, mask]
    weights = np.real(np.einsum("ij,ik,kj->j", vb.conj(), a, vb))
    cross = float(np.sum(weights * np.log2(ev_b[mask])))
    return max(s_rho - cross, 0.0)


def fidelity(rho, sigma):
    """Uhlmann fidelity (squared-overlap normalization, F(psi,phi)=|<psi|phi>|^2)."""
    a = hermitize(_as_matrix(rho))
    b = hermitize(_as_matrix(sigma))
    if a.shape != b.shape:
        raise PreconditionError("dimension mismatch")
    ev, vec = np.linalg.eigh(a)
    ev = np.clip(ev, 0.0, None)
    root = (vec * np.sqrt(ev)) @ vec.conj().T
    inner = np.linalg.eigvalsh(hermitize(root @ b @ root, tol=1e-8))
    inner = np.clip(inner, 0.0, None)
    return float(min(np.sum(np.sqrt(inner)) ** 2, 1.0))


# ---------------------------------------------------------------------------
# QST text format v1
#
# line 1: `pure` or `mixed`; line 2: whitespace-separated local dimensions;
# then one entry per line. Pure entries are `i1 ... in re im` (0-based),
# mixed entries are `r1 ... rn c1 ... cn re im`. Omitted entries are zero,
# `#` starts a comment. Normalization is checked to 1e-8 on load and then
# enforced exactly.
# ---------------------------------------------------------------------------


def _content_lines(text):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def load_qst(path):
    """Parse a .qst file into a PureState or DensityMatrix."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    lines = list(_content_lines(text))
    if len(lines) < 2:
        raise QstFormatError("file must declare a kind line and a dims line")
    kind = lines[0][1].lower()
    if kind not in ("pure", "mixed"):
        raise QstFormatError(f"line {lines[0][0]}: kind must be 'pure' or 'mixed'")
    try:
        dims = tuple(int(tok) for tok in lines[1][1].split())
    except ValueError:
        raise QstFormatError(f"line {lines[1][0]}: dimensions must be integers") from None
    if not dims or any(d < 2 for d in dims):
        raise QstFormatError(f"line {lines[1][0]}: every dimension must be >= 2")
    n = len(dims)
    total = int(np.prod(dims))

    def parse_index(toks, lineno):
        idx = []
        for d, tok in zip(dims, toks):
            try:
                i = int(tok)
            except ValueError:
                raise QstFormatError(f"line {lineno}: bad index '{tok}'") from None
            if not 0 <= i < d:
                raise QstFormatError(f"line {lineno}: index {i} out of range for dimension {d}")
            idx.append(i)
        return int(np.ravel_multi_index(idx, dims))

    if kind == "pure":
        vec = np.zeros(total, dtype=complex)
        seen = set()
        for lineno, line in lines[2:]:
            toks = line.split()
            if len(toks) != n + 2:
                raise QstFormatError(f"line {lineno}: expected {n} indices and 2 floats")
            flat = parse_index(toks[:n], lineno)
            if flat in seen:
                raise QstFormatError(f"line {lineno}: duplicate entry")
            seen.add(flat)
            try:
                vec[flat] = complex(float(toks[n]), float(toks[n + 1]))
            except ValueError:
                raise QstFormatError(f"line {lineno}: bad amplitude") from None
        norm = float(np.linalg.norm(vec))
        if abs(norm * norm - 1.0) > LOAD_TOL:
            raise QstFormatError(f"state norm^2 = {norm * norm!r} is not 1 within {LOAD_TOL}")
        return PureState(dims, vec / norm)

    mat = np.full((total, total), np.nan + 0j)
    for lineno, line in lines[2:]:
        toks = line.split()
        if len(toks) != 2 * n + 2:
            raise QstFormatError(f"line {lineno}: expected {2 * n} indices and 2 floats")
        r = parse_index(toks[:n], lineno)
        c = parse_index(toks[n:2 * n], lineno)
        try:
            val = complex(float(toks[2 * n]), float(toks[2 * n + 1]))
        except ValueError:
            raise QstFormatError(f"line {lineno}: bad matrix element") from None
        if not np.isnan(mat[r, c].real):
            raise QstFormatError(f"line {lineno}: duplicate entry")
        mat[r, c] = val
        if np.isnan(mat[c, r].real):
            mat[c, r] = np.conj(val)
        elif r != c and abs(mat[c, r] - np.conj(val)) > HERM_TOL:
            raise QstFormatError(f"line {lineno}: conflicts with the transposed entry")
    mat[np.isnan(mat.real)] = 0.0
    tr = float(np.real(np.trace(mat)))
    if abs(tr - 1.0) > LOAD_TOL:
        raise QstFormatError(f"trace = {tr!r} is not 1 within {LOAD_TOL}")
    try:
        return DensityMatrix(dims, mat / tr)
    except PreconditionError as exc:
        raise QstFormatError(str(exc)) from None


def save_qst(state, path):
    """Write a state in QST text format; floats use repr for exact round-trip."""
    lines = []
    if isinstance(state, PureState):
        lines.append("pure")
        lines.append(" ".join(str(d) for d in state.dims))
        vec = state.vector
        for flat in np.nonzero(np.abs(vec) > 0)[0]:
            idx = np.unravel_index(flat, state.dims)
            val = vec[flat]
            lines.append(
                " ".join(str(i) for i in idx)
                + f" {float(val.real)!r} {float(val.imag)!r}"
            )
    elif isinstance(state, DensityMatrix):
        lines.append("mixed")
        lines.append(" ".join(str(d) for d in state.dims))
        mat = state.matrix
        rows, cols = np.nonzero(np.abs(mat) > 0)
        for r, c in zip(rows, cols):
            if c < r:
                continue  # lower triangle is implied by hermiticity
            ridx = np.unravel_index(r, state.dims)
            cidx = np.unravel_index(c, state.dims)
            val = mat[r, c]
            lines.append(
                " ".join(str(i) for i in ridx)
                + " "
                + " ".join(str(i) for i in cidx)
                + f" {float(val.real)!r} {float(val.imag)!r}"
            )
    else:
        raise PreconditionError("save_qst expects a PureState or DensityMatrix")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")
