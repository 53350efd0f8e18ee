"""Measurement routes: sequences of observables applied under one rule.

Two routes are alternative ways of measuring the same target observable,
e.g. measuring C directly versus measuring commuting A then B with
C = A·B. Whether the final states coincide is rule- and state-dependent;
``compare_routes`` certifies it via trace distance.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, NonCommutingError, UnknownLabelError
from .linalg import DensityMatrix, trace_distance
from .measurement import (
    Observable,
    ProjectionRule,
    apply_rule,
    selective_outcome,
    spectral_decompose,
)


class Verdict(enum.Enum):
    EQUAL = "EQUAL"
    DISTINCT = "DISTINCT"


class RouteTargetWarning(UserWarning):
    """A route does not obviously measure the comparison target."""


@dataclass(frozen=True)
class Route:
    """An ordered list of observable labels executed under one rule."""

    steps: tuple[str, ...]
    rule: ProjectionRule = ProjectionRule.LUDERS
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise ValueError("a route needs at least one step")

    @property
    def display_name(self) -> str:
        return self.name or "+".join(self.steps)


@dataclass(frozen=True, eq=False)
class ComparisonReport:
    """Pairwise comparison of the final states of several routes.

    Distance matrices are exactly symmetric with zero diagonal; a pair is
    EQUAL iff its trace distance is at most ``tolerance``. Statistics are
    the outcome distribution of the target observable on each final
    state, ordered like ``target_eigenvalues``.
    """

    route_names: tuple[str, ...]
    final_states: tuple[DensityMatrix, ...]
    pairwise_trace_distance: np.ndarray
    pairwise_max_abs_diff: np.ndarray
    verdicts: tuple[tuple[Verdict, ...], ...]
    final_observable_statistics: tuple[tuple[float, ...], ...]
    target_label: str
    target_eigenvalues: tuple[float, ...]
    tolerance: float

    def verdict(self, i: int, j: int) -> Verdict:
        return self.verdicts[i][j]

    @property
    def all_equal(self) -> bool:
        return all(v is Verdict.EQUAL for row in self.verdicts for v in row)


def commutes(a: Observable, b: Observable, tol: float = 1e-10) -> bool:
    """True iff max |AB - BA| is at most tol."""
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    gap = np.max(np.abs(a.matrix @ b.matrix - b.matrix @ a.matrix))
    return bool(gap <= tol)


def product_observable(a: Observable, b: Observable) -> Observable:
    """Observable for A·B; requires the factors to commute."""
    if not commutes(a, b, 1e-10):
        raise NonCommutingError(
            f"{a.label or 'left factor'} and {b.label or 'right factor'} do not commute"
        )
    label = f"{a.label}*{b.label}" if a.label and b.label else ""
    return spectral_decompose(a.matrix @ b.matrix, label=label)


def run_route(
    initial: DensityMatrix, route: Route, registry: dict[str, Observable]
) -> DensityMatrix:
    """Fold the route's updates over the initial state, in step order."""
    state = initial
    for label in route.steps:
        if label not in registry:
            raise UnknownLabelError(f"route step {label!r} is not a registered observable")
        state = apply_rule(state, registry[label], route.rule)
    return state


def _check_route_targets(
    routes: list[Route], registry: dict[str, Observable], target_obs: Observable
) -> None:
    # A route plausibly measures the target if the target is its last step
    # or the matrix product of its steps. Anything else is the caller's
    # responsibility, so warn instead of refusing.
    for route in routes:
        if route.steps[-1] == target_obs.label:
            continue
        prod = np.eye(target_obs.dim, dtype=complex)
        for label in route.steps:
            if label not in registry:
                raise UnknownLabelError(f"route step {label!r} is not a registered observable")
            prod = prod @ registry[label].matrix
        if np.max(np.abs(prod - target_obs.matrix)) <= 1e-10:
            continue
        warnings.warn(
            f"route {route.display_name!r}: target {target_obs.label!r} is neither "
            "the last step nor the product of the steps",
            RouteTargetWarning,
            stacklevel=3,
        )


def compare_routes(
    initial: DensityMatrix,
    routes: list[Route],
    registry: dict[str, Observable],
    target: str,
    tol: float = 1e-8,
) -> ComparisonReport:
    """Run every route and compare all final states pairwise."""
    if len(routes) < 2:
        raise ValueError(f"need at least 2 routes to compare, got {len(routes)}")
    if target not in registry:
        raise UnknownLabelError(f"target {target!r} is not a registered observable")
    target_obs = registry[target]
    _check_route_targets(list(routes), registry, target_obs)
    finals = tuple(run_route(initial, route, registry) for route in routes)
    n = len(finals)
    dist = np.zeros((n, n))
    maxdiff = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            dist[i, j] = dist[j, i] = trace_distance(finals[i], finals[j])
            maxdiff[i, j] = maxdiff[j, i] = float(
                np.max(np.abs(finals[i].mat - finals[j].mat))
            )
    verdicts = tuple(
        tuple(
            Verdict.EQUAL if dist[i, j] <= tol else Verdict.DISTINCT for j in range(n)
        )
        for i in range(n)
    )
    stats = tuple(
        tuple(
            selective_outcome(state, target_obs, k, post_state=False)[0]
            for k in range(len(target_obs.groups))
        )
        for state in finals
    )
    return ComparisonReport(
        route_names=tuple(route.display_name for route in routes),
        final_states=finals,
        pairwise_trace_distance=dist,
        pairwise_max_abs_diff=maxdiff,
        verdicts=verdicts,
        final_observable_statistics=stats,
        target_label=target,
        target_eigenvalues=target_obs.eigenvalues,
        tolerance=tol,
    )
