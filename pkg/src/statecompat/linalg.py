"""Dense complex linear algebra on small matrices.

Hermitian eigendecomposition, Kronecker products, partial traces, and
orthonormal-basis subspace arithmetic, all with explicit numerical
tolerances. Matrices and vectors are plain ``numpy`` arrays of complex128;
coercion and structural validation happen at the function boundaries.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import prod

import numpy as np

from .errors import (
    DimensionMismatchError,
    NotHermitianError,
    NotSquareError,
    NumericalFailureError,
    StateCompatError,
    VectorOutsideSubspaceError,
)

#: Modulus below which a component cannot anchor the global phase convention.
PHASE_FLOOR = 1e-8

#: Entrywise tolerance for the orthonormality of stored subspace bases.
ORTHO_TOL = 1e-10


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every operation.

    ``rank_rel`` is the relative eigenvalue/singular-value cutoff used for
    rank decisions; ``match_abs`` is the absolute Frobenius/Euclidean
    threshold for treating matrices or vectors as equal.
    """

    rank_rel: float = 1e-10
    match_abs: float = 1e-8

    def __post_init__(self):
        for name in ("rank_rel", "match_abs"):
            value = getattr(self, name)
            if not 0.0 < value < 1e-2:
                raise StateCompatError(f"{name} must lie in (0, 1e-2), got {value!r}")


DEFAULT_TOL = Tolerances()


def as_complex_vector(v) -> np.ndarray:
    """Coerce to a finite 1-d complex128 array."""
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1:
        raise StateCompatError(f"expected a 1-d vector, got shape {arr.shape}")
    if arr.size == 0:
        raise StateCompatError("vector must not be empty")
    if not np.all(np.isfinite(arr)):
        raise StateCompatError("vector contains non-finite entries")
    return arr


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-d complex128 array."""
    arr = np.asarray(m, dtype=np.complex128)
    if arr.ndim != 2:
        raise StateCompatError(f"expected a 2-d matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise StateCompatError("matrix contains non-finite entries")
    return arr


def require_square(m: np.ndarray) -> np.ndarray:
    if m.shape[0] != m.shape[1]:
        raise NotSquareError(f"matrix is {m.shape[0]}x{m.shape[1]}, not square")
    return m


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate a global phase so the first component with modulus > 1e-8 is real positive."""
    for x in v:
        if abs(x) > PHASE_FLOOR:
            return v * (x.conjugate() / abs(x))
    return np.array(v, dtype=np.complex128)


def zero_cutoff(values: np.ndarray, tol: Tolerances = DEFAULT_TOL) -> float:
    """Threshold below which an eigenvalue or singular value counts as zero.

    Relative to the largest value present, with an absolute floor so an
    all-zero spectrum still yields a positive cutoff.
    """
    peak = float(np.max(values)) if np.size(values) else 0.0
    return tol.rank_rel * max(peak, 1e-30)


@dataclass(frozen=True, eq=False)
class EigResult:
    """Eigenvalues in descending order, eigenvector i (column i) paired with eigenvalue i."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def hermitian_eig(m, tol: Tolerances = DEFAULT_TOL) -> EigResult:
    """Eigendecomposition of a (near-)Hermitian matrix, eigenvalues descending.

    Inputs whose Hermiticity defect ||M - M^dag||_F is at most ``tol.match_abs``
    are symmetrized to (M + M^dag)/2 before decomposition; larger defects are
    rejected. Eigenvector columns follow the global phase convention.
    """
    m = require_square(as_complex_matrix(m))
    defect = float(np.linalg.norm(m - m.conj().T))
    if defect > tol.match_abs:
        raise NotHermitianError(
            f"Hermiticity defect {defect:.3e} exceeds match_abs {tol.match_abs:.3e}"
        )
    sym = (m + m.conj().T) / 2.0
    try:
        w, v = np.linalg.eigh(sym)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigendecomposition failed: {exc}") from exc
    w = w[::-1]
    v = v[:, ::-1]
    v = np.column_stack([fix_phase(v[:, j]) for j in range(v.shape[1])])
    return EigResult(eigenvalues=np.real(w).copy(), eigenvectors=v)


def tensor_product_vec(vs) -> np.ndarray:
    """Kronecker product of one or more vectors; the leftmost factor varies slowest."""
    vecs = [as_complex_vector(v) for v in vs]
    if not vecs:
        raise StateCompatError("tensor product needs at least one vector")
    return reduce(np.kron, vecs)


def partial_trace(m, factor_dims, keep) -> np.ndarray:
    """Trace out every tensor factor not listed in ``keep``.

    ``m`` must be square of size prod(factor_dims); ``keep`` is a nonempty set
    of factor indices. Kept factors stay in their original relative order.
    """
    m = require_square(as_complex_matrix(m))
    dims = [int(d) for d in factor_dims]
    if not dims or any(d < 1 for d in dims):
        raise DimensionMismatchError(f"factor dimensions must be positive, got {dims}")
    if m.shape[0] != prod(dims):
        raise DimensionMismatchError(
            f"matrix dimension {m.shape[0]} is not the product of factors {dims}"
        )
    keep_set = {int(k) for k in keep}
    if not keep_set:
        raise StateCompatError("keep set must not be empty")
    if not keep_set <= set(range(len(dims))):
        raise DimensionMismatchError(
            f"keep indices {sorted(keep_set)} out of range for {len(dims)} factors"
        )
    tensor = m.reshape(dims + dims)
    remaining = list(range(len(dims)))
    for j in sorted(set(range(len(dims))) - keep_set, reverse=True):
        pos = remaining.index(j)
        tensor = np.trace(tensor, axis1=pos, axis2=pos + len(remaining))
        remaining.remove(j)
    kept_dim = prod(dims[j] for j in sorted(keep_set))
    return np.asarray(tensor).reshape(kept_dim, kept_dim).copy()


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace of C^ambient_dim, stored as orthonormal basis columns.

    The basis may be empty (shape ``(ambient_dim, 0)``); orthonormality is
    enforced entrywise to within 1e-10 at construction.
    """

    ambient_dim: int
    basis: np.ndarray

    def __post_init__(self):
        if self.ambient_dim < 1:
            raise StateCompatError("ambient dimension must be positive")
        basis = np.asarray(self.basis, dtype=np.complex128)
        if basis.ndim != 2 or basis.shape[0] != self.ambient_dim:
            raise StateCompatError(
                f"basis must be {self.ambient_dim} x k, got shape {basis.shape}"
            )
        if basis.shape[1] > self.ambient_dim:
            raise StateCompatError("subspace dimension exceeds ambient dimension")
        if not np.all(np.isfinite(basis)):
            raise StateCompatError("basis contains non-finite entries")
        if basis.shape[1] > 0:
            gram = basis.conj().T @ basis
            defect = float(np.max(np.abs(gram - np.eye(basis.shape[1]))))
            if defect > ORTHO_TOL:
                raise StateCompatError(
                    f"basis columns are not orthonormal (defect {defect:.3e})"
                )
        object.__setattr__(self, "basis", basis)

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def projector(self) -> np.ndarray:
        """The orthogonal projector onto this subspace."""
        return self.basis @ self.basis.conj().T

    def projection_defect(self, v) -> float:
        """Euclidean distance between ``v`` and its projection onto the subspace."""
        v = as_complex_vector(v)
        if v.shape[0] != self.ambient_dim:
            raise DimensionMismatchError(
                f"vector length {v.shape[0]} != ambient dimension {self.ambient_dim}"
            )
        return float(np.linalg.norm(v - self.basis @ (self.basis.conj().T @ v)))

    @classmethod
    def empty(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.zeros((ambient_dim, 0), dtype=np.complex128))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, np.eye(ambient_dim, dtype=np.complex128))

    @classmethod
    def from_span(cls, vectors, tol: Tolerances = DEFAULT_TOL) -> "Subspace":
        """Orthonormalize a list of spanning vectors (rank decided by ``tol.rank_rel``)."""
        cols = [as_complex_vector(v) for v in vectors]
        if not cols:
            raise StateCompatError("from_span needs at least one vector")
        ambient = cols[0].shape[0]
        if any(c.shape[0] != ambient for c in cols):
            raise DimensionMismatchError("spanning vectors have mixed lengths")
        return _orthonormalize(np.column_stack(cols), ambient, tol)


def _orthonormalize(pooled: np.ndarray, ambient: int, tol: Tolerances) -> Subspace:
    """Orthonormal basis for the column span of ``pooled``, rank via singular values."""
    if pooled.shape[1] == 0:
        return Subspace.empty(ambient)
    u, s, _ = np.linalg.svd(pooled, full_matrices=False)
    cutoff = zero_cutoff(s, tol)
    count = int(np.sum(s > cutoff))
    basis = np.column_stack([fix_phase(u[:, j]) for j in range(count)]) if count else \
        np.zeros((ambient, 0), dtype=np.complex128)
    return Subspace(ambient, basis)


def orthogonal_complement(subspace: Subspace) -> Subspace:
    """Orthonormal basis for the orthogonal complement."""
    d, k = subspace.ambient_dim, subspace.dim
    if k == 0:
        return Subspace.full(d)
    u, _, _ = np.linalg.svd(subspace.basis, full_matrices=True)
    if k == d:
        return Subspace.empty(d)
    basis = np.column_stack([fix_phase(u[:, j]) for j in range(k, d)])
    return Subspace(d, basis)


def orthonormal_basis_containing(
    psi, subspace: Subspace, tol: Tolerances = DEFAULT_TOL
) -> Subspace:
    """Complete a unit vector inside ``subspace`` to an orthonormal basis of it.

    The returned basis has the same dimension as ``subspace`` and its first
    column is ``psi`` up to the global phase convention.
    """
    psi = as_complex_vector(psi)
    if psi.shape[0] != subspace.ambient_dim:
        raise DimensionMismatchError(
            f"vector length {psi.shape[0]} != ambient dimension {subspace.ambient_dim}"
        )
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > tol.match_abs:
        raise StateCompatError(f"vector is not unit norm (|v| = {norm:.12g})")
    defect = subspace.projection_defect(psi)
    if defect > tol.match_abs:
        raise VectorOutsideSubspaceError(
            f"vector lies outside the subspace (projection defect {defect:.3e})"
        )
    k = subspace.dim
    # Removing the psi component from an orthonormal basis of the subspace
    # leaves exactly k-1 unit singular values, so no thresholding is needed.
    rest = subspace.basis - np.outer(psi, psi.conj() @ subspace.basis)
    columns = [fix_phase(psi)]
    if k > 1:
        u, _, _ = np.linalg.svd(rest, full_matrices=False)
        columns.extend(fix_phase(u[:, j]) for j in range(k - 1))
    return Subspace(subspace.ambient_dim, np.column_stack(columns))


def _check_family(subspaces) -> int:
    subspaces = list(subspaces)
    if not subspaces:
        raise StateCompatError("need at least one subspace")
    ambient = subspaces[0].ambient_dim
    if any(s.ambient_dim != ambient for s in subspaces):
        raise DimensionMismatchError("subspaces live in different ambient dimensions")
    return ambient


def averaged_projector_eig(subspaces) -> EigResult:
    """Eigensystem (descending) of the average of the subspaces' projectors."""
    ambient = _check_family(subspaces)
    avg = np.zeros((ambient, ambient), dtype=np.complex128)
    for s in subspaces:
        avg += s.projector()
    avg /= len(list(subspaces))
    return hermitian_eig(avg)


def subspace_intersection(subspaces, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Intersection of subspaces via the eigenvalue-one space of the averaged projector.

    A single subspace is returned as-is (its own basis, phase-fixed), which
    keeps the basis ordering of the input rather than an arbitrary
    re-diagonalization of a degenerate projector.
    """
    subspaces = list(subspaces)
    ambient = _check_family(subspaces)
    if len(subspaces) == 1:
        only = subspaces[0]
        if only.dim == 0:
            return Subspace.empty(ambient)
        basis = np.column_stack([fix_phase(only.basis[:, j]) for j in range(only.dim)])
        return Subspace(ambient, basis)
    eig = averaged_projector_eig(subspaces)
    selected = [
        fix_phase(eig.eigenvectors[:, j])
        for j in range(ambient)
        if eig.eigenvalues[j] >= 1.0 - tol.rank_rel
    ]
    if not selected:
        return Subspace.empty(ambient)
    return Subspace(ambient, np.column_stack(selected))


def subspace_span_union(subspaces, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Orthonormal basis for the span of all basis vectors pooled across the inputs."""
    subspaces = list(subspaces)
    ambient = _check_family(subspaces)
    pooled = np.hstack([s.basis for s in subspaces])
    return _orthonormalize(pooled, ambient, tol)
