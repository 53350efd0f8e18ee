"""Built-in measurement-route scenarios and a scenario file format.

A scenario bundles an initial state, a registry of labelled observables,
the routes to compare, and the comparison target. Files are JSON with
complex numbers written as [re, im] pairs and matrices as row-major
nested arrays; floats round-trip exactly through the default rendering.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import ParseError, UnknownScenarioError, ValidationError
from .linalg import DensityMatrix, hermiticity_defect
from .measurement import Observable, ProjectionRule, spectral_decompose
from .routes import Route

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)


@dataclass(frozen=True, eq=False)
class Scenario:
    """An immutable, fully validated route-comparison problem."""

    name: str
    system_dim: int
    initial_state: np.ndarray | DensityMatrix
    observables: Mapping[str, np.ndarray]
    routes: tuple[Route, ...]
    target: str
    rule: ProjectionRule = ProjectionRule.LUDERS
    tolerance: float = 1e-8

    def __post_init__(self):
        frozen = {}
        for label, m in dict(self.observables).items():
            a = np.array(m, dtype=complex)
            a.setflags(write=False)
            frozen[label] = a
        object.__setattr__(self, "observables", MappingProxyType(frozen))
        object.__setattr__(self, "routes", tuple(self.routes))
        if not isinstance(self.initial_state, DensityMatrix):
            v = np.array(self.initial_state, dtype=complex).reshape(-1)
            v.setflags(write=False)
            object.__setattr__(self, "initial_state", v)
        problems = self._violations()
        if problems:
            raise ValidationError(problems)

    def _violations(self) -> list[str]:
        out = []
        if self.system_dim < 1:
            out.append(f"system_dim: must be positive, got {self.system_dim}")
            return out
        if isinstance(self.initial_state, DensityMatrix):
            if self.initial_state.dim != self.system_dim:
                out.append(
                    f"initial_state: dimension {self.initial_state.dim} "
                    f"!= system_dim {self.system_dim}"
                )
        else:
            v = self.initial_state
            if v.size != self.system_dim:
                out.append(
                    f"initial_state.vector: length {v.size} != system_dim {self.system_dim}"
                )
            elif not np.all(np.isfinite(v)):
                out.append("initial_state.vector: non-finite amplitude")
            else:
                dev = abs(float(np.linalg.norm(v)) - 1.0)
                if dev > 1e-10:
                    out.append(f"initial_state.vector: norm deviates from 1 by {dev:.3e}")
        for label, m in self.observables.items():
            if m.ndim != 2 or m.shape != (self.system_dim, self.system_dim):
                out.append(
                    f"observables.{label}: shape {m.shape} != "
                    f"({self.system_dim}, {self.system_dim})"
                )
                continue
            if not np.all(np.isfinite(m)):
                out.append(f"observables.{label}: non-finite entry")
                continue
            defect = hermiticity_defect(m)
            if defect > 1e-10:
                out.append(
                    f"observables.{label}: not Hermitian (max |M - M†| = {defect:.3e})"
                )
        if not self.routes:
            out.append("routes: at least one route required")
        for i, route in enumerate(self.routes):
            for step in route.steps:
                if step not in self.observables:
                    out.append(f"routes[{i}]: unresolved label {step!r}")
        if self.target not in self.observables:
            out.append(f"target: unresolved label {self.target!r}")
        if not self.tolerance > 0:
            out.append(f"tolerance: must be positive, got {self.tolerance}")
        return out

    def initial_density(self) -> DensityMatrix:
        if isinstance(self.initial_state, DensityMatrix):
            return self.initial_state
        return DensityMatrix.pure(self.initial_state)

    def observable_registry(self) -> dict[str, Observable]:
        return {
            label: spectral_decompose(m, label=label)
            for label, m in self.observables.items()
        }

    def with_rule(self, rule: ProjectionRule) -> "Scenario":
        routes = tuple(dataclasses.replace(r, rule=rule) for r in self.routes)
        return dataclasses.replace(self, rule=rule, routes=routes)

    def with_state(self, vector) -> "Scenario":
        return dataclasses.replace(
            self, initial_state=np.asarray(vector, dtype=complex).reshape(-1)
        )

    def with_tolerance(self, tolerance: float) -> "Scenario":
        return dataclasses.replace(self, tolerance=tolerance)


def _qutrit_routes(rule: ProjectionRule) -> tuple[Route, ...]:
    return (
        Route(("C",), rule, "C"),
        Route(("A", "B"), rule, "AB"),
        Route(("B", "A"), rule, "BA"),
    )


def _build_qutrit() -> Scenario:
    return Scenario(
        name="qutrit-paper",
        system_dim=3,
        initial_state=np.full(3, 1.0 / np.sqrt(3.0), dtype=complex),
        observables={
            "A": np.diag([1.0, 1.0, 0.0]).astype(complex),
            "B": np.diag([0.0, 1.0, 1.0]).astype(complex),
            "C": np.diag([0.0, 1.0, 0.0]).astype(complex),
        },
        routes=_qutrit_routes(ProjectionRule.LUDERS),
        target="C",
    )


def counterexample_basis() -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """The orthonormal qutrit basis the non-degenerate scenario is built on."""
    s3 = np.sqrt(3.0)
    d1 = np.array([1.0, -1.0 + s3, 1.0], dtype=complex)
    d2 = np.array([1.0, -1.0 - s3, 1.0], dtype=complex)
    d3 = np.array([-1.0, 0.0, 1.0], dtype=complex)
    return tuple(v / np.linalg.norm(v) for v in (d1, d2, d3))


def _build_counterexample() -> Scenario:
    s3 = np.sqrt(3.0)
    d1, d2, d3 = counterexample_basis()
    p1, p2, p3 = (np.outer(v, v.conj()) for v in (d1, d2, d3))
    obs_d1 = (1.0 + s3) * p1 + (1.0 - s3) * p2
    obs_d2 = s3 * p1 - s3 * p2 + p3
    return Scenario(
        name="nondegenerate-counterexample",
        system_dim=3,
        initial_state=(d1 + d2 + d3) / np.sqrt(3.0),
        observables={"D1": obs_d1, "D2": obs_d2, "D3": obs_d1 @ obs_d2},
        routes=(
            Route(("D1", "D2"), ProjectionRule.LUDERS, "D1D2"),
            Route(("D2", "D1"), ProjectionRule.LUDERS, "D2D1"),
            Route(("D3",), ProjectionRule.LUDERS, "D3"),
        ),
        target="D3",
    )


def _build_two_qubit() -> Scenario:
    i2 = np.eye(2, dtype=complex)
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1.0 / np.sqrt(2.0)
    return Scenario(
        name="two-qubit-rafasala",
        system_dim=4,
        initial_state=bell,
        observables={
            "M1": np.kron(SIGMA_X, i2),
            "M2": np.kron(i2, SIGMA_Y),
            "M3": np.kron(SIGMA_X, SIGMA_Y),
        },
        routes=(
            Route(("M3",), ProjectionRule.LUDERS, "M3"),
            Route(("M1", "M2"), ProjectionRule.LUDERS, "M1M2"),
        ),
        target="M3",
    )


_BUILTINS = {
    "nondegenerate-counterexample": (
        _build_counterexample,
        "qutrit with non-degenerate D1, D2 and D3 = D1*D2; every route agrees",
    ),
    "qutrit-paper": (
        _build_qutrit,
        "degenerate qutrit observables A, B, C = A*B; direct and sequential "
        "routes for C disagree under the Lueders rule",
    ),
    "two-qubit-rafasala": (
        _build_two_qubit,
        "commuting pair sx(x)I, I(x)sy and product sx(x)sy on an entangled "
        "two-qubit state",
    ),
}


def builtin_descriptions() -> dict[str, str]:
    """Scenario name -> one-line description, alphabetical."""
    return {name: _BUILTINS[name][1] for name in sorted(_BUILTINS)}


def builtin(name: str, *, state=None) -> Scenario:
    """A ready-made scenario; ``state`` optionally replaces the initial vector."""
    if name not in _BUILTINS:
        known = ", ".join(sorted(_BUILTINS))
        raise UnknownScenarioError(f"unknown scenario {name!r} (available: {known})")
    scenario = _BUILTINS[name][0]()
    if state is not None:
        scenario = scenario.with_state(state)
    return scenario


def _decode_complex(node, path: str, problems: list[str]) -> complex:
    if (
        isinstance(node, list)
        and len(node) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in node)
    ):
        return complex(node[0], node[1])
    problems.append(f"{path}: expected a [re, im] number pair, got {node!r}")
    return 0j


def _decode_vector(node, path: str, problems: list[str]) -> np.ndarray:
    if not isinstance(node, list) or not node:
        problems.append(f"{path}: expected a non-empty array of [re, im] pairs")
        return np.zeros(1, dtype=complex)
    return np.array(
        [_decode_complex(x, f"{path}[{i}]", problems) for i, x in enumerate(node)],
        dtype=complex,
    )


def _decode_matrix(node, path: str, problems: list[str]) -> np.ndarray:
    if not isinstance(node, list) or not node:
        problems.append(f"{path}: expected a non-empty array of rows")
        return np.zeros((1, 1), dtype=complex)
    rows = [_decode_vector(row, f"{path}[{i}]", problems) for i, row in enumerate(node)]
    if len({r.size for r in rows}) != 1:
        problems.append(f"{path}: rows have inconsistent lengths")
        return np.zeros((1, 1), dtype=complex)
    return np.array(rows, dtype=complex)


def _encode_complex(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def parse_scenario(text: str) -> Scenario:
    """Build a Scenario from its file form, or fail with field context."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object")

    problems: list[str] = []

    def fetch(key, kind, required=True, default=None):
        if key not in doc:
            if required:
                problems.append(f"{key}: missing required field")
            return default
        value = doc[key]
        if not isinstance(value, kind) or isinstance(value, bool):
            want = kind.__name__ if isinstance(kind, type) else "number"
            problems.append(f"{key}: expected {want}, got {type(value).__name__}")
            return default
        return value

    name = fetch("name", str, default="")
    system_dim = fetch("system_dim", int, default=1)
    target = fetch("target", str, default="")
    rule_name = fetch("rule", str, required=False, default=ProjectionRule.LUDERS.value)
    tolerance = fetch("tolerance", (int, float), required=False, default=1e-8)

    rule = ProjectionRule.LUDERS
    try:
        rule = ProjectionRule.from_name(rule_name)
    except ValueError as exc:
        problems.append(f"rule: {exc}")

    state_node = fetch("initial_state", dict)
    initial_state: np.ndarray | DensityMatrix = np.zeros(1, dtype=complex)
    if state_node is not None:
        keys = set(state_node)
        if keys == {"vector"}:
            initial_state = _decode_vector(
                state_node["vector"], "initial_state.vector", problems
            )
        elif keys == {"density_matrix"}:
            mat = _decode_matrix(
                state_node["density_matrix"], "initial_state.density_matrix", problems
            )
            if not problems:
                try:
                    initial_state = DensityMatrix(mat)
                except Exception as exc:
                    problems.append(f"initial_state.density_matrix: {exc}")
        else:
            problems.append(
                "initial_state: expected exactly one of 'vector' or 'density_matrix'"
            )

    observables: dict[str, np.ndarray] = {}
    obs_node = fetch("observables", dict)
    if obs_node is not None:
        if not obs_node:
            problems.append("observables: at least one observable required")
        for label, m in obs_node.items():
            observables[label] = _decode_matrix(m, f"observables.{label}", problems)

    routes: list[Route] = []
    routes_node = fetch("routes", list)
    if routes_node is not None:
        if not routes_node:
            problems.append("routes: at least one route required")
        for i, node in enumerate(routes_node):
            if not isinstance(node, dict):
                problems.append(f"routes[{i}]: expected an object")
                continue
            steps = node.get("steps")
            if (
                not isinstance(steps, list)
                or not steps
                or not all(isinstance(s, str) for s in steps)
            ):
                problems.append(f"routes[{i}].steps: expected a non-empty array of labels")
                continue
            route_rule = rule
            if "rule" in node:
                try:
                    route_rule = ProjectionRule.from_name(node["rule"])
                except (ValueError, TypeError) as exc:
                    problems.append(f"routes[{i}].rule: {exc}")
            route_name = node.get("name", "")
            if not isinstance(route_name, str):
                problems.append(f"routes[{i}].name: expected a string")
                route_name = ""
            routes.append(Route(tuple(steps), route_rule, route_name))

    if problems:
        raise ValidationError(problems)
    return Scenario(
        name=name,
        system_dim=system_dim,
        initial_state=initial_state,
        observables=observables,
        routes=tuple(routes),
        target=target,
        rule=rule,
        tolerance=float(tolerance),
    )


def serialize_scenario(s: Scenario) -> str:
    """Render a Scenario in the file format; parses back to equal values."""
    if isinstance(s.initial_state, DensityMatrix):
        state_node = {
            "density_matrix": [
                [_encode_complex(x) for x in row] for row in s.initial_state.mat
            ]
        }
    else:
        state_node = {"vector": [_encode_complex(x) for x in s.initial_state]}
    doc = {
        "name": s.name,
        "system_dim": s.system_dim,
        "initial_state": state_node,
        "observables": {
            label: [[_encode_complex(x) for x in row] for row in m]
            for label, m in s.observables.items()
        },
        "routes": [
            {"name": r.name, "steps": list(r.steps), "rule": r.rule.value}
            for r in s.routes
        ],
        "target": s.target,
        "rule": s.rule.value,
        "tolerance": s.tolerance,
    }
    return json.dumps(doc, indent=2) + "\n"
