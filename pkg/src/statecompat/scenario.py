"""Constructive realization of a compatible set of density matrices.

Given N density matrices whose supports share a state phi, one entangled pure
state on N ancilla factors plus the system realizes all of them at once. Each
observer k controls one ancilla. The state is, up to normalization,

    |0 ... 0>|phi>  +  sum_k sum_{i>=1} sqrt(p_ki / p_k) |pattern(k, i)>|phi_ki>,

where ensemble k decomposes rho_k with leading term (p_k, phi) and extra
terms (p_ki, phi_ki), and pattern(k, i) puts ancilla k at level 0 and every
other ancilla at level i. When observer k finds their own ancilla at level 0
(a possible outcome, since the phi amplitude is nonzero) and knows nothing of
the others, the reduced state they assign to the system is exactly rho_k.

:func:`run_scenario` performs the whole round trip: pick a common support
state, decompose every input around it, build the joint state, condition each
observer on the level-0 outcome, trace down to the system, and report the
distance to the original assignment.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .compat import support_compatible
from .density import DensityMatrix, Ensemble, ensemble_containing, validate_density
from .errors import (
    CommonStateMismatchError,
    DimensionMismatchError,
    IncompatibleError,
    StateCompatError,
    ZeroProjectionError,
)
from .linalg import DEFAULT_TOL, Tolerances, as_complex_vector

#: Absolute tolerance on the norm of composite-state amplitudes.
NORM_TOL = 1e-10


@dataclass(eq=False)
class CompositeState:
    """Normalized amplitudes on (ancilla 1, ..., ancilla N, system).

    ``amplitudes`` is flat in C order over that factor order, so the leftmost
    ancilla index varies slowest. The block with every ancilla at level 0
    must be nonzero: the all-zero joint outcome has to be possible.
    """

    ancilla_dims: list[int]
    system_dim: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.ancilla_dims = [int(d) for d in self.ancilla_dims]
        if len(self.ancilla_dims) < 2 or any(d < 1 for d in self.ancilla_dims):
            raise StateCompatError(
                f"need at least two positive ancilla dimensions, got {self.ancilla_dims}"
            )
        if self.system_dim < 1:
            raise StateCompatError("system dimension must be positive")
        amps = as_complex_vector(self.amplitudes)
        expected = prod(self.ancilla_dims) * self.system_dim
        if amps.shape[0] != expected:
            raise DimensionMismatchError(
                f"amplitude vector has length {amps.shape[0]}, expected {expected}"
            )
        norm = float(np.linalg.norm(amps))
        if abs(norm - 1.0) > NORM_TOL:
            raise StateCompatError(f"composite state is not normalized (|v| = {norm:.12g})")
        zero_block = amps.reshape(self.ancilla_dims + [self.system_dim])[
            (0,) * len(self.ancilla_dims)
        ]
        if float(np.linalg.norm(zero_block)) == 0.0:
            raise StateCompatError("the all-zero ancilla outcome must have nonzero amplitude")
        self.amplitudes = amps

    @property
    def n_observers(self) -> int:
        return len(self.ancilla_dims)

    def as_tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.ancilla_dims + [self.system_dim])


@dataclass(eq=False)
class ObserverRecovery:
    """What one observer reconstructs after the level-0 outcome."""

    conditional: np.ndarray
    recovered: DensityMatrix
    distance: float


@dataclass(eq=False)
class ScenarioResult:
    recoveries: list[ObserverRecovery]
    joint_zero_probability: float
    success: bool

    @property
    def distances(self) -> list[float]:
        return [r.distance for r in self.recoveries]


def build_joint_state(ensembles, tol: Tolerances = DEFAULT_TOL) -> CompositeState:
    """Assemble the composite pure state from per-observer ensembles.

    Every ensemble's first term must carry the shared state (the term-0
    states must pairwise overlap to within 1e-10 of unit modulus) with a
    strictly positive weight. Ancilla k needs one level per extra term of
    every *other* ensemble, so its dimension is 1 + max over j != k of the
    extra-term counts; an observer whose peers are all single-term gets a
    trivial one-level ancilla.
    """
    ensembles = list(ensembles)
    n = len(ensembles)
    if n < 2:
        raise StateCompatError(f"need at least two observers, got {n}")
    system_dim = ensembles[0].dim
    if any(e.dim != system_dim for e in ensembles):
        raise DimensionMismatchError("ensembles live on systems of different dimensions")
    phi = ensembles[0].terms[0][1]
    for k, ensemble in enumerate(ensembles):
        weight, state = ensemble.terms[0]
        overlap = abs(complex(np.vdot(phi, state)))
        if overlap < 1.0 - 1e-10:
            raise CommonStateMismatchError(
                f"ensemble {k} leads with a state of overlap {overlap:.12g} "
                "with the shared state; the leading states must coincide up to phase"
            )
        if weight <= 0.0:
            raise StateCompatError(f"ensemble {k} gives the shared state zero weight")

    extras = [len(e.terms) - 1 for e in ensembles]
    ancilla_dims = [
        1 + max(extras[k] for k in range(n) if k != j) for j in range(n)
    ]
    tensor = np.zeros(ancilla_dims + [system_dim], dtype=np.complex128)
    tensor[(0,) * n] = phi
    for k, ensemble in enumerate(ensembles):
        p_k = ensemble.terms[0][0]
        for i, (weight, state) in enumerate(ensemble.terms[1:], start=1):
            pattern = tuple(0 if j == k else i for j in range(n))
            tensor[pattern] = np.sqrt(weight / p_k) * state
    flat = tensor.reshape(-1)
    flat = flat / np.linalg.norm(flat)
    return CompositeState(ancilla_dims, system_dim, flat)


def joint_zero_outcome_probability(psi: CompositeState) -> float:
    """Probability that every observer finds their ancilla at level 0."""
    block = psi.as_tensor()[(0,) * psi.n_observers]
    return float(np.sum(np.abs(block) ** 2))


def observer_conditional_state(psi: CompositeState, k: int) -> np.ndarray:
    """State of the remaining factors after observer k finds level 0.

    Projects ancilla k onto its level-0 basis state, drops that factor, and
    renormalizes. States built by :func:`build_joint_state` always survive
    the projection; the zero check guards hand-built inputs.
    """
    if not 0 <= k < psi.n_observers:
        raise StateCompatError(f"observer index {k} out of range (0..{psi.n_observers - 1})")
    slab = np.take(psi.as_tensor(), 0, axis=k).reshape(-1)
    norm = float(np.linalg.norm(slab))
    if norm <= 1e-15:
        raise ZeroProjectionError(f"level-0 outcome of observer {k} has zero amplitude")
    return slab / norm


def observer_reduced_density(
    conditional, factor_dims, system_index: int, tol: Tolerances = DEFAULT_TOL
) -> DensityMatrix:
    """Partial trace of the conditional pure state down to the system factor.

    Contracts |v><v| over every factor except ``factor_dims[system_index]``
    without materializing the projector.
    """
    v = as_complex_vector(conditional)
    dims = [int(d) for d in factor_dims]
    if not dims or any(d < 1 for d in dims):
        raise DimensionMismatchError(f"factor dimensions must be positive, got {dims}")
    if v.shape[0] != prod(dims):
        raise DimensionMismatchError(
            f"vector length {v.shape[0]} is not the product of factors {dims}"
        )
    if not 0 <= system_index < len(dims):
        raise DimensionMismatchError(
            f"system index {system_index} out of range for {len(dims)} factors"
        )
    rows = np.moveaxis(v.reshape(dims), system_index, -1).reshape(-1, dims[system_index])
    rho = rows.T @ rows.conj()
    return validate_density(rho, tol)


def run_scenario(rhos, tol: Tolerances = DEFAULT_TOL) -> ScenarioResult:
    """Build the joint state for a compatible set and recover each assignment.

    Raises :class:`IncompatibleError` when the supports share no state. For a
    compatible set, each observer's recovered density matrix should match the
    corresponding input to within ``tol.match_abs`` in Frobenius norm.
    """
    rhos = list(rhos)
    compatible, intersection = support_compatible(rhos, tol)
    if not compatible:
        raise IncompatibleError(
            "the supports share no common state, so no single system "
            "can realize all of these assignments"
        )
    phi = intersection.basis[:, 0]
    ensembles: list[Ensemble] = [ensemble_containing(r, phi, tol) for r in rhos]
    psi = build_joint_state(ensembles, tol)
    probability = joint_zero_outcome_probability(psi)

    recoveries = []
    for k in range(len(rhos)):
        conditional = observer_conditional_state(psi, k)
        remaining = [d for j, d in enumerate(psi.ancilla_dims) if j != k] + [psi.system_dim]
        recovered = observer_reduced_density(conditional, remaining, len(remaining) - 1, tol)
        distance = float(np.linalg.norm(recovered.matrix - rhos[k].matrix))
        recoveries.append(ObserverRecovery(conditional, recovered, distance))
    success = all(r.distance <= tol.match_abs for r in recoveries)
    return ScenarioResult(recoveries, probability, success)
