"""Compatibility verdicts for sets of density-matrix assignments.

The decisive criterion is support intersection: a set of density matrices can
describe one system simultaneously exactly when all of their supports share
at least one state. Two older pairwise conditions are evaluated alongside it
for comparison: commutation of the pair (neither necessary nor sufficient)
and a nonzero operator product (necessary but strictly weaker).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .density import DensityMatrix, null_space, support
from .errors import DimensionMismatchError, StateCompatError
from .linalg import (
    DEFAULT_TOL,
    Subspace,
    Tolerances,
    averaged_projector_eig,
    subspace_intersection,
    subspace_span_union,
)


@dataclass(eq=False)
class CompatReport:
    """Aggregated verdicts for one set of density matrices.

    ``compatible``, ``intersection_dim`` and ``witness`` describe the support
    criterion; the pairwise matrices carry both the boolean flags and the
    underlying scalars (commutator Frobenius norms and product traces).
    ``marginal`` is set when a support-intersection eigenvalue fell close to
    the rank cutoff, i.e. the boolean verdict is numerically fragile.
    """

    dim: int
    n_matrices: int
    compatible: bool
    intersection_dim: int
    witness: np.ndarray | None
    forbidden_dim: int
    pairwise_commute: np.ndarray
    commute_residual: np.ndarray
    pairwise_product_nonzero: np.ndarray
    product_overlap: np.ndarray
    marginal: bool = False
    notes: list[str] = field(default_factory=list)


def _check_rhos(rhos) -> list[DensityMatrix]:
    rhos = list(rhos)
    if not rhos:
        raise StateCompatError("need at least one density matrix")
    dim = rhos[0].dim
    if any(r.dim != dim for r in rhos):
        raise DimensionMismatchError("density matrices have different dimensions")
    return rhos


def support_compatible(
    rhos, tol: Tolerances = DEFAULT_TOL
) -> tuple[bool, Subspace]:
    """Whether all supports share a state, plus the intersection itself."""
    rhos = _check_rhos(rhos)
    intersection = subspace_intersection([support(r, tol) for r in rhos], tol)
    return intersection.dim >= 1, intersection


def common_state_witness(rhos, tol: Tolerances = DEFAULT_TOL) -> np.ndarray | None:
    """A unit vector inside every support, or None when there is none.

    The returned vector is the intersection basis vector of largest averaged
    projector eigenvalue, phase-fixed. It is deterministic but not canonical:
    any other intersection vector would serve equally well.
    """
    compatible, intersection = support_compatible(rhos, tol)
    if not compatible:
        return None
    return intersection.basis[:, 0].copy()


def forbidden_subspace(rhos, tol: Tolerances = DEFAULT_TOL) -> Subspace:
    """Span of the union of all null spaces: states none of the assignments allow.

    Its orthogonal complement is the intersection of the supports.
    """
    rhos = _check_rhos(rhos)
    return subspace_span_union([null_space(r, tol) for r in rhos], tol)


def commutes(
    a: DensityMatrix, b: DensityMatrix, tol: Tolerances = DEFAULT_TOL
) -> tuple[bool, float]:
    """Commutation check; the residual is ||ab - ba||_F."""
    if a.dim != b.dim:
        raise DimensionMismatchError("density matrices have different dimensions")
    residual = float(np.linalg.norm(a.matrix @ b.matrix - b.matrix @ a.matrix))
    return residual <= tol.match_abs, residual


def product_nonzero(
    a: DensityMatrix, b: DensityMatrix, tol: Tolerances = DEFAULT_TOL
) -> tuple[bool, float]:
    """Whether the operator product ab is nonzero, decided through tr(ab).

    For positive-semidefinite factors the trace vanishes exactly when the
    product does, and the scalar is basis-free and cheap.
    """
    if a.dim != b.dim:
        raise DimensionMismatchError("density matrices have different dimensions")
    overlap = float(np.trace(a.matrix @ b.matrix).real)
    return overlap > tol.rank_rel, overlap


def _marginal_band(eigenvalues: np.ndarray, tol: Tolerances) -> bool:
    """True when a rejected intersection eigenvalue came within 10x rank_rel of the cutoff."""
    cutoff = 1.0 - tol.rank_rel
    lower = 1.0 - 11.0 * tol.rank_rel
    return bool(np.any((eigenvalues >= lower) & (eigenvalues < cutoff)))


def full_report(rhos, tol: Tolerances = DEFAULT_TOL) -> CompatReport:
    """Evaluate every criterion on the set and aggregate the results."""
    rhos = _check_rhos(rhos)
    n = len(rhos)
    compatible, intersection = support_compatible(rhos, tol)
    witness = intersection.basis[:, 0].copy() if compatible else None
    forbidden = forbidden_subspace(rhos, tol)

    commute_flags = np.ones((n, n), dtype=bool)
    commute_res = np.zeros((n, n))
    product_flags = np.ones((n, n), dtype=bool)
    overlaps = np.zeros((n, n))
    for i in range(n):
        overlaps[i, i] = float(np.trace(rhos[i].matrix @ rhos[i].matrix).real)
        for j in range(i + 1, n):
            c_ok, c_res = commutes(rhos[i], rhos[j], tol)
            p_ok, p_val = product_nonzero(rhos[i], rhos[j], tol)
            commute_flags[i, j] = commute_flags[j, i] = c_ok
            commute_res[i, j] = commute_res[j, i] = c_res
            product_flags[i, j] = product_flags[j, i] = p_ok
            overlaps[i, j] = overlaps[j, i] = p_val

    notes: list[str] = []
    marginal = False
    if n > 1:
        eig = averaged_projector_eig([support(r, tol) for r in rhos])
        marginal = _marginal_band(eig.eigenvalues, tol)
        if marginal:
            notes.append(
                "marginal: an intersection eigenvalue fell within 10x rank_rel "
                "of the acceptance cutoff; the compatibility verdict is numerically fragile"
            )

    return CompatReport(
        dim=rhos[0].dim,
        n_matrices=n,
        compatible=compatible,
        intersection_dim=intersection.dim,
        witness=witness,
        forbidden_dim=forbidden.dim,
        pairwise_commute=commute_flags,
        commute_residual=commute_res,
        pairwise_product_nonzero=product_flags,
        product_overlap=overlaps,
        marginal=marginal,
        notes=notes,
    )
