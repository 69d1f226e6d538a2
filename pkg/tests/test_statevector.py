from __future__ import annotations

import numpy as np
import pytest

from clusterenc.graphs import parse_graph
from clusterenc.statevector import (
    MAX_QUBITS,
    OracleTooLarge,
    StateVector,
    canonical_phase,
    pauli_action,
    quadratic_form,
    same_ray,
    state_from_stabilizers,
    statevector_graph,
)
from clusterenc.symplectic import DimensionError, PauliOp, parse_check_matrix, to_matrix

from helpers import fixture_text


@pytest.mark.parametrize("x,want", [([0, 0, 0], 0), ([1, 1, 0], 1), ([1, 1, 1], 0), ([1, 0, 1], 0)])
def test_quadratic_form_path(x, want):
    assert quadratic_form(3, [(0, 1), (1, 2)], x) == want


def test_quadratic_form_length():
    with pytest.raises(DimensionError):
        quadratic_form(3, [(0, 1)], [1, 0])


def test_graph_state_amplitude_signs():
    g = parse_graph(fixture_text("graph_6q.txt"))
    sv = statevector_graph(*g.indexed_edges())
    n, edges = g.indexed_edges()
    for b in range(2 ** n):
        bits = [(b >> q) & 1 for q in range(n)]
        assert np.sign(sv.amps[b].real) == (-1) ** quadratic_form(n, edges, bits)
    stabs = parse_check_matrix(fixture_text("graph_state_6q.txt")).generators()
    for p in stabs:
        assert np.isclose(sv.expectation(p), 1.0)
    assert same_ray(state_from_stabilizers(stabs).amps, sv.amps)


@pytest.mark.parametrize("s", ["X", "Y", "Z", "XZ", "-iYX", "ZYX"])
def test_pauli_action_matches_dense(s, rng):
    p = PauliOp.from_string(s)
    v = rng.normal(size=2 ** p.n) + 1j * rng.normal(size=2 ** p.n)
    assert np.allclose(pauli_action(p, v), to_matrix(p) @ v)


def test_gates_match_dense(rng):
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    v /= np.linalg.norm(v)
    sv = StateVector(2, v.copy()).cnot(0, 1)
    # control is qubit 0, the least significant index bit
    perm = np.array([0, 3, 2, 1])
    assert np.allclose(sv.amps, v[perm])
    sv = StateVector(2, v.copy()).cz(0, 1)
    assert np.allclose(sv.amps, v * np.array([1, 1, 1, -1]))


def test_project_and_measure():
    sv = StateVector(1).apply1("H", 0)
    assert np.isclose(sv.copy().project(PauliOp.from_string("Z"), 1), 0.5)
    bit, p0 = sv.measure(PauliOp.from_string("X"), np.random.default_rng(0))
    assert bit == 0 and np.isclose(p0, 1.0)


def test_canonical_phase():
    a = np.array([0, 1j, -1j]) / np.sqrt(2)
    assert np.allclose(canonical_phase(a), [0, 1 / np.sqrt(2), -1 / np.sqrt(2)])
    assert same_ray(a, a * np.exp(0.3j))
    assert not same_ray(a, np.array([0, 1, 1]) / np.sqrt(2))


def test_oracle_budget():
    with pytest.raises(OracleTooLarge):
        StateVector(MAX_QUBITS + 1)
