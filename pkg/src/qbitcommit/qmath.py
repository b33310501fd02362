"""Dense state-vector toolkit for bipartite pure states.

Everything here works on explicit numpy arrays. A :class:`StateVector` keeps
its subsystem dimensions so that tensor products, partial traces and Schmidt
decompositions can be taken across any cut. Amplitudes use the Kronecker
convention: the left-most subsystem is the slowest-varying index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceededError

#: Largest operator dimension handled densely (matrices are dim x dim).
MAX_OPERATOR_DIM = 4096
#: Largest state-vector length handled densely.
MAX_STATE_DIM = 1 << 22

NORM_TOL = 1e-10
SCHMIDT_CUTOFF = 1e-12


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state on a composite space.

    Attributes:
        amplitudes: flat complex amplitude vector (read-only).
        dims: subsystem dimensions; their product is ``len(amplitudes)``.
    """

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"dims must be positive integers, got {dims}")
        if int(np.prod(dims)) != amps.size:
            raise ValueError(
                f"product of dims {dims} is {int(np.prod(dims))}, "
                f"but there are {amps.size} amplitudes")
        if amps.size > MAX_STATE_DIM:
            raise CapExceededError(
                f"state dimension {amps.size} exceeds MAX_STATE_DIM={MAX_STATE_DIM}")
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (norm={norm!r})")
        object.__setattr__(self, "amplitudes", _freeze(amps))
        object.__setattr__(self, "dims", dims)

    @classmethod
    def from_unnormalized(cls, amplitudes, dims) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise ValueError("cannot normalize the zero vector")
        return cls(amps / norm, dims)

    @classmethod
    def basis(cls, index: int | Sequence[int], dims) -> "StateVector":
        """Computational basis state. ``index`` is flat or one digit per subsystem."""
        dims = tuple(dims)
        if not isinstance(index, (int, np.integer)):
            index = int(np.ravel_multi_index(tuple(index), dims))
        amps = np.zeros(int(np.prod(dims)), dtype=complex)
        amps[index] = 1.0
        return cls(amps, dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def matrix(self, cut: int) -> np.ndarray:
        """Amplitudes reshaped to (dim of dims[:cut], dim of dims[cut:])."""
        p, q = split_dims(self.dims, cut)
        return self.amplitudes.reshape(p, q)

    def overlap(self, other: "StateVector") -> complex:
        """Inner product <self|other>."""
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def same_ray(self, other: "StateVector", atol: float = 1e-10) -> bool:
        """True if the states agree up to a global phase."""
        return abs(abs(self.overlap(other)) - 1.0) <= atol

    def density(self) -> "DensityMatrix":
        return DensityMatrix(np.outer(self.amplitudes, self.amplitudes.conj()))

    def reshape_dims(self, dims) -> "StateVector":
        return StateVector(self.amplitudes, dims)

    def __repr__(self):
        return f"StateVector(dims={self.dims})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive semidefinite, unit-trace matrix."""

    entries: np.ndarray

    def __post_init__(self):
        rho = np.array(self.entries, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError(f"density matrix must be square, got shape {rho.shape}")
        _check_operator_dim(rho.shape[0])
        if np.max(np.abs(rho - rho.conj().T), initial=0.0) > NORM_TOL:
            raise ValueError("density matrix is not Hermitian")
        tr = np.trace(rho).real
        if abs(tr - 1.0) > NORM_TOL:
            raise ValueError(f"density matrix trace is {tr!r}, expected 1")
        # exact symmetrization so downstream eigh sees a Hermitian input
        rho = 0.5 * (rho + rho.conj().T)
        if np.linalg.eigvalsh(rho)[0] < -NORM_TOL:
            raise ValueError("density matrix has a negative eigenvalue")
        object.__setattr__(self, "entries", _freeze(rho))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues in descending order."""
        return np.linalg.eigvalsh(self.entries)[::-1]

    def allclose(self, other: "DensityMatrix", atol: float = 1e-10) -> bool:
        return self.dim == other.dim and np.allclose(
            self.entries, other.entries, rtol=0, atol=atol)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class UnitaryOp:
    """Unitary matrix; ``dim`` is its side length."""

    entries: np.ndarray

    def __post_init__(self):
        u = np.array(self.entries, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError(f"unitary must be square, got shape {u.shape}")
        _check_operator_dim(u.shape[0])
        err = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
        if err > 1e-9:
            raise ValueError(f"matrix is not unitary (max |U^dag U - I| = {err:.3g})")
        object.__setattr__(self, "entries", _freeze(u))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def identity(cls, dim: int) -> "UnitaryOp":
        return cls(np.eye(dim, dtype=complex))

    def __matmul__(self, other: "UnitaryOp") -> "UnitaryOp":
        return UnitaryOp(self.entries @ other.entries)

    def kron(self, other: "UnitaryOp") -> "UnitaryOp":
        return UnitaryOp(np.kron(self.entries, other.entries))

    def dagger(self) -> "UnitaryOp":
        return UnitaryOp(self.entries.conj().T)

    def __repr__(self):
        return f"UnitaryOp(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class SchmidtForm:
    """psi = sum_i coeffs[i] * basis_a[:, i] (x) basis_b[:, i].

    ``coeffs`` are the square roots of the shared eigenvalues of the two
    reduced matrices, sorted descending, with entries below
    ``SCHMIDT_CUTOFF`` dropped.
    """

    coeffs: np.ndarray
    basis_a: np.ndarray
    basis_b: np.ndarray
    dims: tuple[int, ...]
    cut: int

    @property
    def rank(self) -> int:
        return self.coeffs.size

    @property
    def weights(self) -> np.ndarray:
        """The eigenvalues lambda_i = coeffs**2."""
        return self.coeffs ** 2

    def reconstruct(self) -> StateVector:
        amps = (self.basis_a * self.coeffs) @ self.basis_b.T
        return StateVector.from_unnormalized(amps.reshape(-1), self.dims)


def _check_operator_dim(dim: int):
    if dim > MAX_OPERATOR_DIM:
        raise CapExceededError(
            f"operator dimension {dim} exceeds MAX_OPERATOR_DIM={MAX_OPERATOR_DIM}")


def split_dims(dims: Sequence[int], cut: int) -> tuple[int, int]:
    """Dimensions (p, q) of the two factors on either side of ``cut``."""
    if not 0 <= cut <= len(dims):
        raise ValueError(f"cut {cut} out of range for dims {tuple(dims)}")
    return int(np.prod(dims[:cut], dtype=int)), int(np.prod(dims[cut:], dtype=int))


def tensor(a: StateVector, b: StateVector) -> StateVector:
    """a (x) b, with ``a`` as the slow index."""
    return StateVector(np.kron(a.amplitudes, b.amplitudes), a.dims + b.dims)


def tensor_all(states: Iterable[StateVector]) -> StateVector:
    states = list(states)
    out = states[0]
    for s in states[1:]:
        out = tensor(out, s)
    return out


def _as_matrix(rho) -> np.ndarray:
    if isinstance(rho, DensityMatrix):
        return rho.entries
    return np.asarray(rho, dtype=complex)


def partial_trace(rho: DensityMatrix, dims: Sequence[int],
                  keep: Iterable[int]) -> DensityMatrix:
    """Trace out every subsystem not listed in ``keep``.

    The kept subsystems stay in their original order.
    """
    dims = tuple(int(d) for d in dims)
    keep = sorted(set(int(k) for k in keep))
    mat = _as_matrix(rho)
    if int(np.prod(dims)) != mat.shape[0]:
        raise ValueError(f"dims {dims} do not match matrix dimension {mat.shape[0]}")
    if not keep or keep[0] < 0 or keep[-1] >= len(dims):
        raise ValueError(f"keep must be a nonempty subset of range({len(dims)}), got {keep}")
    n = len(dims)
    traced = [i for i in range(n) if i not in keep]
    t = mat.reshape(dims + dims)
    # contract each traced ket axis with its bra axis, highest index first
    for i in sorted(traced, reverse=True):
        m = t.ndim // 2
        t = np.trace(t, axis1=i, axis2=i + m)
    d = int(np.prod([dims[k] for k in keep]))
    return DensityMatrix(t.reshape(d, d))


def reduced_state(psi: StateVector, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix of a pure state without forming |psi><psi|."""
    keep = sorted(set(int(k) for k in keep))
    n = len(psi.dims)
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"keep must be a nonempty subset of range({n}), got {keep}")
    rest = [i for i in range(n) if i not in keep]
    t = psi.amplitudes.reshape(psi.dims).transpose(keep + rest)
    d = int(np.prod([psi.dims[k] for k in keep]))
    m = t.reshape(d, -1)
    return DensityMatrix(m @ m.conj().T)


def schmidt_decompose(phi: StateVector, cut: int) -> SchmidtForm:
    """Schmidt decomposition across ``dims[:cut] | dims[cut:]``.

    Computed from the SVD of the reshaped amplitude matrix. With degenerate
    coefficients the paired bases are fixed by the SVD, so only the spanned
    subspaces are meaningful.
    """
    if not 0 < cut < len(phi.dims):
        raise ValueError(f"cut must satisfy 0 < cut < {len(phi.dims)}, got {cut}")
    u, s, vh = np.linalg.svd(phi.matrix(cut), full_matrices=False)
    r = max(1, int(np.sum(s > SCHMIDT_CUTOFF)))
    return SchmidtForm(coeffs=s[:r].copy(), basis_a=u[:, :r].copy(),
                       basis_b=vh[:r].T.copy(), dims=phi.dims, cut=cut)


def psd_sqrt(mat: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(mat)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


# eigenvalues below this are eigh roundoff; their square roots (~1e-8) would
# otherwise leak into the fidelity
_EIG_FLOOR = 1e-14


def _psd_factor(mat: np.ndarray) -> np.ndarray:
    """L with mat = L L^dagger, built from the spectrum above the roundoff floor."""
    w, v = np.linalg.eigh(mat)
    keep = w > _EIG_FLOOR * max(1.0, float(w[-1]))
    return v[:, keep] * np.sqrt(w[keep])


def fidelity(rho0: DensityMatrix, rho1: DensityMatrix) -> float:
    """Square-root (Uhlmann) fidelity ``Tr |sqrt(rho0) sqrt(rho1)|``.

    This equals the largest overlap ``|<psi0|psi1>|`` over purifications of
    the two matrices. It is not squared.
    """
    a, b = _as_matrix(rho0), _as_matrix(rho1)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    # sqrt(a) sqrt(b) and L_a^dagger L_b share their singular values
    la, lb = _psd_factor(a), _psd_factor(b)
    if la.shape[1] == 0 or lb.shape[1] == 0:
        return 0.0
    sv = np.linalg.svd(la.conj().T @ lb, compute_uv=False)
    return float(np.clip(sv.sum(), 0.0, 1.0))


def purify(rho: DensityMatrix) -> StateVector:
    """Purification sum_k sqrt(p_k) |v_k> (x) |k> with an ancilla of equal dimension."""
    w, v = np.linalg.eigh(rho.entries)
    w = np.clip(w, 0.0, None)
    amps = v * np.sqrt(w)          # column k is sqrt(p_k) v_k
    return StateVector.from_unnormalized(amps.reshape(-1), (rho.dim, rho.dim))


def complete_isometry(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Unitary sending the orthonormal columns of ``src`` to those of ``dst``.

    The complement of span(src) goes to the complement of span(dst) by an
    arbitrary (QR-derived) orthonormal completion.
    """
    p, m = src.shape
    if m == p:
        return dst @ src.conj().T
    qs, _ = np.linalg.qr(src, mode="complete")
    qd, _ = np.linalg.qr(dst, mode="complete")
    return dst @ src.conj().T + qd[:, m:] @ qs[:, m:].conj().T


def nearest_isometry(mat: np.ndarray) -> np.ndarray:
    """Polar factor of ``mat``: the closest matrix with orthonormal columns."""
    x, _, yh = np.linalg.svd(mat, full_matrices=False)
    return x @ yh


def alignment_unitary(m0: np.ndarray, m1: np.ndarray) -> np.ndarray:
    """A-side unitary U maximizing Re Tr(m1^dag U m0).

    ``m0`` and ``m1`` are amplitude matrices (A rows, B columns) of two
    bipartite states. The optimum equals the trace norm of ``m0 m1^dag``,
    i.e. the fidelity of the two B-side reduced matrices, and is attained
    with a real positive overlap. The cross-Gram matrix is formed in the
    Schmidt frames so that only rank-sized SVDs are needed.
    """
    u0, s0, vh0 = np.linalg.svd(m0, full_matrices=False)
    u1, s1, vh1 = np.linalg.svd(m1, full_matrices=False)
    r0 = max(1, int(np.sum(s0 > SCHMIDT_CUTOFF)))
    r1 = max(1, int(np.sum(s1 > SCHMIDT_CUTOFF)))
    u0, s0, vh0 = u0[:, :r0], s0[:r0], vh0[:r0]
    u1, s1, vh1 = u1[:, :r1], s1[:r1], vh1[:r1]
    cross = (s0[:, None] * (vh0 @ vh1.conj().T)) * s1[None, :]
    p, _, qh = np.linalg.svd(cross)
    m = min(r0, r1)
    src = u0 @ p[:, :m]
    dst = u1 @ qh[:m].conj().T
    return complete_isometry(src, dst)


def relating_unitary(psi: StateVector, psi_prime: StateVector, cut: int,
                     atol: float = 1e-8) -> UnitaryOp:
    """A-side unitary U with (U (x) I)|psi> = |psi_prime>.

    Both states must purify the same B-side reduced matrix; otherwise no such
    unitary exists and ``ValueError`` is raised (use
    :func:`alignment_unitary` for the best approximation).
    """
    if psi.dims != psi_prime.dims:
        raise ValueError(f"dims differ: {psi.dims} vs {psi_prime.dims}")
    m0, m1 = psi.matrix(cut), psi_prime.matrix(cut)
    gap = np.max(np.abs(m0.T @ m0.conj() - m1.T @ m1.conj()))
    if gap > atol:
        raise ValueError(
            f"B-side reduced matrices differ by {gap:.3g} > {atol}; "
            "the states are not related by an A-local unitary")
    return UnitaryOp(alignment_unitary(m0, m1))


def apply_local(u: UnitaryOp, psi: StateVector, cut: int, side: str = "A") -> StateVector:
    """Apply ``u`` to one factor of the bipartition ``dims[:cut] | dims[cut:]``."""
    p, q = split_dims(psi.dims, cut)
    m = psi.amplitudes.reshape(p, q)
    side = side.upper()
    if side == "A":
        if u.dim != p:
            raise ValueError(f"unitary dim {u.dim} does not match A factor dim {p}")
        out = u.entries @ m
    elif side == "B":
        if u.dim != q:
            raise ValueError(f"unitary dim {u.dim} does not match B factor dim {q}")
        out = m @ u.entries.T
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return StateVector.from_unnormalized(out.reshape(-1), psi.dims)


def apply_on(u: UnitaryOp | np.ndarray, psi: StateVector,
             targets: Sequence[int]) -> StateVector:
    """Apply ``u`` to the listed subsystems (in the listed order)."""
    mat = u.entries if isinstance(u, UnitaryOp) else np.asarray(u)
    targets = [int(t) for t in targets]
    if len(set(targets)) != len(targets):
        raise ValueError(f"duplicate target subsystems {targets}")
    n = len(psi.dims)
    dt = int(np.prod([psi.dims[t] for t in targets]))
    if mat.shape != (dt, dt):
        raise ValueError(f"operator shape {mat.shape} does not match targets dim {dt}")
    rest = [i for i in range(n) if i not in targets]
    order = targets + rest
    t = psi.amplitudes.reshape(psi.dims).transpose(order).reshape(dt, -1)
    t = (mat @ t).reshape([psi.dims[i] for i in order])
    t = t.transpose(np.argsort(order))
    return StateVector.from_unnormalized(t.reshape(-1), psi.dims)


def permute(psi: StateVector, order: Sequence[int]) -> StateVector:
    """Reorder subsystems; new subsystem j is old subsystem ``order[j]``."""
    order = [int(o) for o in order]
    if sorted(order) != list(range(len(psi.dims))):
        raise ValueError(f"{order} is not a permutation of the subsystems")
    t = psi.amplitudes.reshape(psi.dims).transpose(order)
    return StateVector(t.reshape(-1), tuple(psi.dims[o] for o in order))


def bipartition(psi: StateVector, a_side: Sequence[int]) -> StateVector:
    """Group subsystems into two factors (A = ``a_side``, B = the rest).

    The result has ``dims == (dA, dB)``; ``dA`` is 1 when ``a_side`` is empty.
    """
    a_side = sorted(int(i) for i in a_side)
    rest = [i for i in range(len(psi.dims)) if i not in a_side]
    perm = permute(psi, a_side + rest)
    da = int(np.prod([psi.dims[i] for i in a_side], dtype=int))
    return StateVector(perm.amplitudes, (da, psi.dim // da))


def random_state(dims, rng: np.random.Generator) -> StateVector:
    dims = tuple(dims)
    d = int(np.prod(dims))
    z = rng.normal(size=d) + 1j * rng.normal(size=d)
    return StateVector.from_unnormalized(z, dims)


def random_unitary(dim: int, rng: np.random.Generator) -> UnitaryOp:
    """Haar-random unitary (QR of a complex Ginibre matrix, phases fixed)."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return UnitaryOp(q * (d / np.abs(d)))


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return DensityMatrix(rho / np.trace(rho).real)
