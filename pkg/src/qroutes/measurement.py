"""Spectral decomposition of observables and projective state updates.

An observable is carried together with its eigenvalue groups: one group
per distinct eigenvalue, each holding the eigenspace projector and a
deterministic orthonormal basis of that eigenspace. The two update rules
differ exactly where degeneracy appears:

* Lueders:     rho' = sum_n  P_n rho P_n          (one term per group)
* von Neumann: rho' = sum_ni |x_ni><x_ni| rho |x_ni><x_ni|   (rank one)

so the von Neumann rule additionally erases coherence inside each
degenerate eigenspace.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import AmbiguousGroupingError, DimensionError, ZeroProbabilityError
from .linalg import (
    DensityMatrix,
    as_matrix,
    hermitian_eigendecomposition,
    hermitian_part,
)


class ProjectionRule(enum.Enum):
    LUDERS = "luders"
    VON_NEUMANN = "von-neumann"

    @classmethod
    def from_name(cls, name: str) -> "ProjectionRule":
        for rule in cls:
            if rule.value == name:
                return rule
        allowed = ", ".join(r.value for r in cls)
        raise ValueError(f"unknown projection rule {name!r} (expected one of: {allowed})")


@dataclass(frozen=True, eq=False)
class EigenGroup:
    """One distinct eigenvalue with its eigenspace."""

    eigenvalue: float
    degeneracy: int
    projector: np.ndarray
    basis: tuple[np.ndarray, ...]


@dataclass(frozen=True, eq=False)
class Observable:
    """A Hermitian operator plus its grouped eigensystem.

    Groups are ordered by descending eigenvalue. Invariants (distinct
    eigenvalues, degeneracies summing to the dimension, projector
    completeness, reconstruction of the matrix) are checked on
    construction; build instances through ``spectral_decompose`` unless a
    specific intra-eigenspace basis is wanted.
    """

    matrix: np.ndarray
    groups: tuple[EigenGroup, ...]
    label: str = ""

    def __post_init__(self):
        m = as_matrix(self.matrix)
        dim = m.shape[0]
        if not self.groups:
            raise ValueError("observable needs at least one eigenvalue group")
        vals = [g.eigenvalue for g in self.groups]
        if any(a <= b for a, b in zip(vals, vals[1:])):
            raise ValueError(f"group eigenvalues must strictly decrease, got {vals}")
        if sum(g.degeneracy for g in self.groups) != dim:
            raise ValueError("group degeneracies must sum to the dimension")
        for g in self.groups:
            if g.degeneracy != len(g.basis):
                raise ValueError("degeneracy disagrees with the stored basis size")
            if abs(np.trace(g.projector).real - g.degeneracy) > 1e-8:
                raise ValueError("projector trace disagrees with the degeneracy")
            rebuilt = sum(np.outer(v, v.conj()) for v in g.basis)
            if np.max(np.abs(rebuilt - g.projector)) > 1e-10:
                raise ValueError("stored basis does not span the group projector")
        # Orthonormality of the stacked basis implies projector idempotence
        # and pairwise orthogonality in one pass.
        stacked = np.column_stack([v for g in self.groups for v in g.basis])
        if np.max(np.abs(stacked.conj().T @ stacked - np.eye(dim))) > 1e-10:
            raise ValueError("eigenbasis is not orthonormal")
        complete = sum(g.projector for g in self.groups)
        if np.max(np.abs(complete - np.eye(dim))) > 1e-10:
            raise ValueError("eigenspace projectors do not sum to the identity")
        rebuilt = sum(g.eigenvalue * g.projector for g in self.groups)
        if np.max(np.abs(rebuilt - m)) > 1e-10:
            raise ValueError(
                "groups do not reconstruct the observable matrix; "
                "the eigenvalue grouping may be too coarse"
            )

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def eigenvalues(self) -> tuple[float, ...]:
        return tuple(g.eigenvalue for g in self.groups)


def spectral_decompose(m, group_tol: float = 1e-8, *, label: str = "") -> Observable:
    """Group the eigensystem of a Hermitian matrix into distinct eigenvalues.

    Eigenvalues closer than ``group_tol`` fall into one degenerate group.
    Spacings inside the open band (group_tol, 10*group_tol) are refused
    with AmbiguousGroupingError: they are too wide to merge and too narrow
    to split with confidence.
    """
    m = as_matrix(m)
    pairs = hermitian_eigendecomposition(m)
    clusters: list[list[tuple[float, np.ndarray]]] = [[pairs[0]]]
    for prev, cur in zip(pairs, pairs[1:]):
        gap = prev[0] - cur[0]
        if group_tol < gap < 10.0 * group_tol:
            raise AmbiguousGroupingError(
                f"eigenvalue gap {gap:.3e} falls inside ({group_tol:.3e}, {10 * group_tol:.3e})"
            )
        if gap <= group_tol:
            clusters[-1].append(cur)
        else:
            clusters.append([cur])
    groups = []
    for cluster in clusters:
        vecs = tuple(vec for _, vec in cluster)
        projector = sum(np.outer(v, v.conj()) for v in vecs)
        groups.append(
            EigenGroup(
                eigenvalue=float(np.mean([val for val, _ in cluster])),
                degeneracy=len(vecs),
                projector=projector,
                basis=vecs,
            )
        )
    return Observable(matrix=m, groups=tuple(groups), label=label)


def _check_dims(rho: DensityMatrix, obs: Observable) -> None:
    if rho.dim != obs.dim:
        raise DimensionError(f"state dimension {rho.dim} vs observable dimension {obs.dim}")


def luders_update(rho: DensityMatrix, obs: Observable) -> DensityMatrix:
    """Non-selective update rho -> sum_n P_n rho P_n.

    Coherence inside each degenerate eigenspace survives; only coherence
    between different eigenvalues is removed.
    """
    _check_dims(rho, obs)
    out = sum(g.projector @ rho.mat @ g.projector for g in obs.groups)
    return DensityMatrix(hermitian_part(out))


def von_neumann_update(rho: DensityMatrix, obs: Observable) -> DensityMatrix:
    """Non-selective rank-one update over each group's stored basis.

    The state is dephased in the refinement basis, so the result can
    depend on which intra-eigenspace basis the observable carries. A fully
    degenerate observable (a single eigenvalue on the whole space) leaves
    no preferred refinement at all and maps every state to the maximally
    mixed one.
    """
    _check_dims(rho, obs)
    if len(obs.groups) == 1:
        return DensityMatrix(np.eye(rho.dim, dtype=complex) / rho.dim)
    u = np.column_stack([v for g in obs.groups for v in g.basis])
    weights = np.diag(u.conj().T @ rho.mat @ u).real
    out = (u * weights) @ u.conj().T
    return DensityMatrix(hermitian_part(out))


def apply_rule(rho: DensityMatrix, obs: Observable, rule: ProjectionRule) -> DensityMatrix:
    """Dispatch to the update implementing ``rule``."""
    if rule is ProjectionRule.LUDERS:
        return luders_update(rho, obs)
    return von_neumann_update(rho, obs)


def selective_outcome(
    rho: DensityMatrix,
    obs: Observable,
    group_index: int,
    *,
    post_state: bool = True,
) -> tuple[float, DensityMatrix | None]:
    """Probability of one eigenvalue group and the state conditioned on it.

    With ``post_state=False`` only the probability is computed, which is
    the only well-defined part when the probability is (numerically) zero;
    requesting the post-state of such an outcome raises
    ZeroProbabilityError.
    """
    _check_dims(rho, obs)
    if not 0 <= group_index < len(obs.groups):
        raise IndexError(f"group index {group_index} out of range")
    p = obs.groups[group_index].projector
    prob = min(max(float(np.trace(p @ rho.mat).real), 0.0), 1.0)
    if not post_state:
        return prob, None
    if prob <= 1e-12:
        raise ZeroProbabilityError(
            f"outcome {obs.groups[group_index].eigenvalue} has probability {prob:.3e}"
        )
    post = hermitian_part(p @ rho.mat @ p) / prob
    return prob, DensityMatrix(post)
