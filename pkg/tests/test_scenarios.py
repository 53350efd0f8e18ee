import json

import numpy as np
import pytest

from helpers import random_density, random_hermitian, random_state
from qroutes import (
    DensityMatrix,
    ParseError,
    ProjectionRule,
    Route,
    Scenario,
    UnknownScenarioError,
    ValidationError,
    builtin,
    builtin_descriptions,
    parse_scenario,
    serialize_scenario,
)

SQ3 = np.sqrt(3.0)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)


def spectrum(m):
    return np.sort(np.linalg.eigvalsh(m))  # independent of the package eigensolver


class TestBuiltinCatalogue:
    def test_descriptions_are_alphabetical(self):
        names = list(builtin_descriptions())
        assert names == sorted(names)
        assert names == [
            "nondegenerate-counterexample",
            "qutrit-paper",
            "two-qubit-rafasala",
        ]

    def test_unknown_name(self):
        with pytest.raises(UnknownScenarioError):
            builtin("qutrit")


class TestQutritBuiltin:
    def test_observable_matrices(self):
        s = builtin("qutrit-paper")
        assert np.array_equal(s.observables["A"], np.diag([1, 1, 0]))
        assert np.array_equal(s.observables["B"], np.diag([0, 1, 1]))
        assert np.array_equal(s.observables["C"], np.diag([0, 1, 0]))
        assert np.array_equal(
            s.observables["A"] @ s.observables["B"], s.observables["C"]
        )

    def test_default_state_is_uniform(self):
        s = builtin("qutrit-paper")
        assert np.allclose(s.initial_state, np.full(3, 1 / np.sqrt(3)), atol=1e-15)

    def test_routes_and_target(self):
        s = builtin("qutrit-paper")
        assert s.target == "C"
        assert tuple(r.steps for r in s.routes) == (("C",), ("A", "B"), ("B", "A"))
        assert all(r.rule is ProjectionRule.LUDERS for r in s.routes)

    def test_spectra(self):
        s = builtin("qutrit-paper")
        assert np.allclose(spectrum(s.observables["A"]), [0, 1, 1], atol=1e-12)
        assert np.allclose(spectrum(s.observables["B"]), [0, 1, 1], atol=1e-12)
        assert np.allclose(spectrum(s.observables["C"]), [0, 0, 1], atol=1e-12)

    def test_state_override(self):
        v = np.array([1, 0, 0], dtype=complex)
        s = builtin("qutrit-paper", state=v)
        assert np.array_equal(s.initial_state, v)

    def test_state_override_must_fit(self):
        with pytest.raises(ValidationError):
            builtin("qutrit-paper", state=np.array([1, 0], dtype=complex))


class TestCounterexampleBuiltin:
    def test_third_observable_is_the_product(self):
        s = builtin("nondegenerate-counterexample")
        d1, d2, d3 = (s.observables[k] for k in ("D1", "D2", "D3"))
        assert np.abs(d1 @ d2 - d3).max() <= 1e-10

    def test_pair_commutes(self):
        s = builtin("nondegenerate-counterexample")
        d1, d2 = s.observables["D1"], s.observables["D2"]
        assert np.abs(d1 @ d2 - d2 @ d1).max() <= 1e-10

    def test_spectra_are_nondegenerate(self):
        s = builtin("nondegenerate-counterexample")
        assert np.allclose(
            spectrum(s.observables["D1"]), sorted([1 + SQ3, 0, 1 - SQ3]), atol=1e-9
        )
        assert np.allclose(
            spectrum(s.observables["D2"]), sorted([SQ3, 1, -SQ3]), atol=1e-9
        )
        assert np.allclose(
            spectrum(s.observables["D3"]), sorted([3 + SQ3, 3 - SQ3, 0]), atol=1e-9
        )

    def test_default_state_is_normalized(self):
        s = builtin("nondegenerate-counterexample")
        assert np.linalg.norm(s.initial_state) == pytest.approx(1.0, abs=1e-12)


class TestTwoQubitBuiltin:
    def test_observables_are_pauli_products(self):
        s = builtin("two-qubit-rafasala")
        i2 = np.eye(2)
        assert np.array_equal(s.observables["M1"], np.kron(SIGMA_X, i2))
        assert np.array_equal(s.observables["M2"], np.kron(i2, SIGMA_Y))
        assert np.array_equal(s.observables["M3"], np.kron(SIGMA_X, SIGMA_Y))

    def test_family_is_mutually_commuting(self):
        s = builtin("two-qubit-rafasala")
        ms = list(s.observables.values())
        for a in ms:
            for b in ms:
                assert np.abs(a @ b - b @ a).max() <= 1e-12

    def test_spectra_are_doubly_degenerate(self):
        s = builtin("two-qubit-rafasala")
        for m in s.observables.values():
            assert np.allclose(spectrum(m), [-1, -1, 1, 1], atol=1e-12)

    def test_default_state_is_maximally_entangled(self):
        s = builtin("two-qubit-rafasala")
        expect = np.zeros(4)
        expect[0] = expect[3] = 1 / np.sqrt(2)
        assert np.allclose(s.initial_state, expect, atol=1e-15)


class TestScenarioMethods:
    def test_with_rule_rewrites_routes(self):
        s = builtin("qutrit-paper").with_rule(ProjectionRule.VON_NEUMANN)
        assert s.rule is ProjectionRule.VON_NEUMANN
        assert all(r.rule is ProjectionRule.VON_NEUMANN for r in s.routes)

    def test_with_tolerance(self):
        s = builtin("qutrit-paper").with_tolerance(1e-6)
        assert s.tolerance == 1e-6

    def test_registry_carries_labels(self):
        reg = builtin("qutrit-paper").observable_registry()
        assert set(reg) == {"A", "B", "C"}
        assert reg["A"].label == "A"

    def test_initial_density_from_vector(self):
        s = builtin("qutrit-paper")
        rho = s.initial_density()
        assert np.allclose(
            rho.mat, np.outer(s.initial_state, s.initial_state.conj()), atol=1e-15
        )

    def test_observables_are_read_only(self):
        s = builtin("qutrit-paper")
        with pytest.raises(ValueError):
            s.observables["A"][0, 0] = 5.0
        with pytest.raises(TypeError):
            s.observables["Z"] = np.eye(3)


class TestRoundTrip:
    @pytest.mark.parametrize(
        "name", ["qutrit-paper", "nondegenerate-counterexample", "two-qubit-rafasala"]
    )
    def test_builtin_round_trip_is_exact(self, name):
        first = builtin(name)
        text = serialize_scenario(first)
        second = parse_scenario(text)
        assert second.name == first.name
        assert second.system_dim == first.system_dim
        assert second.target == first.target
        assert second.rule is first.rule
        assert second.tolerance == first.tolerance
        assert np.array_equal(second.initial_state, first.initial_state)
        assert set(second.observables) == set(first.observables)
        for label in first.observables:
            assert np.array_equal(second.observables[label], first.observables[label])
        assert tuple(r.steps for r in second.routes) == tuple(
            r.steps for r in first.routes
        )
        assert [r.rule for r in second.routes] == [r.rule for r in first.routes]

    def test_random_scenario_round_trip(self):
        rng = np.random.default_rng(111)
        for case in range(5):
            dim = int(rng.integers(2, 5))
            obs = {
                "O1": random_hermitian(rng, dim),
                "O2": random_hermitian(rng, dim),
            }
            s = Scenario(
                name=f"random-{case}",
                system_dim=dim,
                initial_state=random_state(rng, dim),
                observables=obs,
                routes=(
                    Route(("O1",), ProjectionRule.LUDERS, "one"),
                    Route(("O2", "O1"), ProjectionRule.VON_NEUMANN, "two"),
                ),
                target="O1",
                tolerance=float(rng.uniform(1e-10, 1e-6)),
            )
            back = parse_scenario(serialize_scenario(s))
            assert np.array_equal(back.initial_state, s.initial_state)
            for label in obs:
                assert np.array_equal(back.observables[label], s.observables[label])
            assert back.tolerance == s.tolerance
            assert [r.rule for r in back.routes] == [r.rule for r in s.routes]

    def test_density_matrix_state_round_trip(self):
        rng = np.random.default_rng(112)
        s = builtin("qutrit-paper")
        mixed = dataclass_with_density(s, random_density(rng, 3))
        back = parse_scenario(serialize_scenario(mixed))
        assert isinstance(back.initial_state, DensityMatrix)
        assert np.array_equal(back.initial_state.mat, mixed.initial_state.mat)

    def test_serialization_is_deterministic(self):
        s = builtin("two-qubit-rafasala")
        assert serialize_scenario(s) == serialize_scenario(s)
        assert serialize_scenario(s).endswith("\n")


def dataclass_with_density(scenario, rho):
    import dataclasses

    return dataclasses.replace(scenario, initial_state=rho)


class TestParseErrors:
    def test_malformed_json(self):
        with pytest.raises(ParseError) as err:
            parse_scenario("{not json")
        assert "line 1" in str(err.value)

    def test_top_level_must_be_object(self):
        with pytest.raises(ParseError):
            parse_scenario("[1, 2, 3]")

    def test_missing_fields_are_all_reported(self):
        with pytest.raises(ValidationError) as err:
            parse_scenario("{}")
        text = str(err.value)
        for field in ("name", "system_dim", "initial_state", "observables", "routes", "target"):
            assert f"{field}: missing required field" in text

    def test_bad_complex_entry_names_the_path(self):
        doc = json.loads(serialize_scenario(builtin("qutrit-paper")))
        doc["initial_state"]["vector"][1] = "0.5"
        with pytest.raises(ValidationError, match=r"initial_state.vector\[1\]"):
            parse_scenario(json.dumps(doc))

    def test_nonhermitian_observable_names_the_label(self):
        doc = json.loads(serialize_scenario(builtin("qutrit-paper")))
        doc["observables"]["B"][0][2] = [5.0, 0.0]
        with pytest.raises(ValidationError, match="observables.B: not Hermitian"):
            parse_scenario(json.dumps(doc))

    def test_unnormalized_state_reports_deviation(self):
        doc = json.loads(serialize_scenario(builtin("qutrit-paper")))
        doc["initial_state"]["vector"] = [[1.0, 0.0], [1.0, 0.0], [0.0, 0.0]]
        with pytest.raises(ValidationError, match="norm deviates from 1 by 4.142e-01"):
            parse_scenario(json.dumps(doc))

    def test_unresolved_route_label(self):
        doc = json.loads(serialize_scenario(builtin("qutrit-paper")))
        doc["routes"][1]["steps"] = ["A", "X"]
        with pytest.raises(ValidationError, match=r"routes\[1\]: unresolved label 'X'"):
            parse_scenario(json.dumps(doc))

    def test_unresolved_target(self):
        doc = json.loads(serialize_scenario(builtin("qutrit-paper")))
        doc["target"] = "Z"
        with pytest.raises(ValidationError, match="target: unresolved label 'Z'"):
            parse_scenario(json.dumps(doc))

    def test_bad_rule_name(self):
        doc = json.loads(serialize_scenario(builtin("qutrit-paper")))
        doc["rule"] = "projective"
        with pytest.raises(ValidationError, match="rule:"):
            parse_scenario(json.dumps(doc))

    def test_ragged_matrix_rows(self):
        doc = json.loads(serialize_scenario(builtin("qutrit-paper")))
        doc["observables"]["A"] = [[[1.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]
        with pytest.raises(ValidationError, match="observables.A"):
            parse_scenario(json.dumps(doc))

    def test_wrong_field_type(self):
        doc = json.loads(serialize_scenario(builtin("qutrit-paper")))
        doc["system_dim"] = "three"
        with pytest.raises(ValidationError, match="system_dim: expected int"):
            parse_scenario(json.dumps(doc))

    def test_negative_tolerance(self):
        doc = json.loads(serialize_scenario(builtin("qutrit-paper")))
        doc["tolerance"] = -1.0
        with pytest.raises(ValidationError, match="tolerance: must be positive"):
            parse_scenario(json.dumps(doc))

    def test_state_needs_exactly_one_representation(self):
        doc = json.loads(serialize_scenario(builtin("qutrit-paper")))
        doc["initial_state"] = {"vector": [[1.0, 0.0]], "density_matrix": [[[1.0, 0.0]]]}
        with pytest.raises(ValidationError, match="exactly one of"):
            parse_scenario(json.dumps(doc))
