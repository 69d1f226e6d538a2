from __future__ import annotations

import numpy as np
import pytest

from clusterenc.graphs import Graph
from clusterenc.statevector import StateVector, same_ray, statevector_graph, to_statevector
from clusterenc.symplectic import DimensionError, PauliOp
from clusterenc.tableau import (
    OutcomeSource,
    ScriptContradiction,
    ScriptExhausted,
    ShotTableau,
    Tableau,
    prepare_graph_state,
    tableau_equiv,
    tensor,
    verify_stabilized,
)

from helpers import random_circuit, random_graph, random_state


@pytest.mark.parametrize("gate,want", [("H", "+X"), ("S", "+Z"), ("X", "-Z"), ("Y", "-Z"), ("Z", "+Z")])
def test_single_gates_on_zero(gate, want):
    t = Tableau(1).apply(gate, 0)
    assert str(t.stabilizers()[0]) == want


def test_cnot_makes_bell_pair():
    t = Tableau(2).apply("H", 0).apply("CNOT", 0, 1)
    assert t.expectation(PauliOp.from_string("XX")) == 1
    assert t.expectation(PauliOp.from_string("ZZ")) == 1
    assert t.expectation(PauliOp.from_string("YY")) == -1
    assert t.expectation(PauliOp.from_string("ZI")) == 0


def test_destabilizers_pair_with_stabilizers(rng):
    from clusterenc.symplectic import symplectic_product

    for n in range(1, 6):
        t = random_state(n, rng)
        for i, d in enumerate(t.destabilizers()):
            for j, s in enumerate(t.stabilizers()):
                assert symplectic_product(d, s) == int(i == j)


def test_random_circuits_match_statevector(rng):
    for _ in range(200):
        n = int(rng.integers(1, 6))
        t, sv = Tableau(n), StateVector(n)
        for gate, sites in random_circuit(n, int(rng.integers(1, 30)), rng):
            t.apply(gate, *sites)
            sv.apply(gate, *sites)
        for p in t.stabilizers():
            assert np.isclose(sv.expectation(p), 1.0)
        assert same_ray(to_statevector(t).amps, sv.amps)


def test_measurement_post_state(rng):
    for case in range(100):
        n = int(rng.integers(1, 5))
        t, sv = Tableau(n), StateVector(n)
        for gate, sites in random_circuit(n, 15, rng):
            t.apply(gate, *sites)
            sv.apply(gate, *sites)
        q, basis = int(rng.integers(n)), str(rng.choice(["X", "Y", "Z"]))
        p = PauliOp.single(n, q, basis)
        p_plus = 0.5 * (1 + sv.expectation(p))
        bit, det = t.measure(basis, q, OutcomeSource.seeded(case))
        assert det == (abs(p_plus - 0.5) > 1e-9)
        sv.project(p, bit)
        assert same_ray(to_statevector(t).amps, sv.amps)


def test_random_frequency_within_three_sigma():
    base = Tableau(2).apply("H", 0).apply("CNOT", 0, 1)
    src = OutcomeSource.seeded(11)
    shots = 10_000
    ones = sum(base.copy().measure("Z", 0, src)[0] for _ in range(shots))
    assert abs(ones - shots / 2) <= 3 * np.sqrt(shots / 4)


def test_stabilizer_measurement_is_deterministic(rng):
    for n in range(2, 7):
        g = random_graph(n, rng)
        t = prepare_graph_state(*g.indexed_edges())
        for p in t.stabilizers():
            bit, det = t.measure_observable(p, OutcomeSource.seeded(0))
            assert (bit, det) == (0, True)


@pytest.mark.parametrize("n", [1, 3, 6])
def test_graph_state_preparations_agree(n, rng):
    g = random_graph(n, rng)
    direct = prepare_graph_state(*g.indexed_edges())
    gates = prepare_graph_state(*g.indexed_edges(), via_gates=True)
    assert tableau_equiv(direct, gates)
    assert same_ray(to_statevector(direct).amps, statevector_graph(*g.indexed_edges()).amps)


def test_edge_order_independent(rng):
    for _ in range(20):
        g = random_graph(6, rng)
        n, edges = g.indexed_edges()
        shuffled = [edges[i] for i in rng.permutation(len(edges))]
        shuffled = [(b, a) if rng.random() < 0.5 else (a, b) for a, b in shuffled]
        assert tableau_equiv(prepare_graph_state(n, edges, True), prepare_graph_state(n, shuffled, True))


def test_from_stabilizers_validation():
    with pytest.raises(ValueError):
        Tableau.from_stabilizers([PauliOp.from_string("XI"), PauliOp.from_string("ZI")])
    with pytest.raises(ValueError):
        Tableau.from_stabilizers([PauliOp.from_string("XX"), PauliOp.from_string("XX")])
    with pytest.raises(DimensionError):
        Tableau.from_stabilizers([PauliOp.from_string("XX")])


def test_equivalence_is_sign_sensitive():
    a = Tableau.from_stabilizers([PauliOp.from_string("XX"), PauliOp.from_string("ZZ")])
    b = Tableau.from_stabilizers([PauliOp.from_string("YY").negate(), PauliOp.from_string("ZZ")])
    c = Tableau.from_stabilizers([PauliOp.from_string("-XX"), PauliOp.from_string("ZZ")])
    assert tableau_equiv(a, b)
    assert not tableau_equiv(a, c)


def test_restrict_after_measurement():
    # measuring the middle of a 3-path in Z leaves Z-framed ends
    t = Tableau.from_graph(3, [(0, 1), (1, 2)])
    bit, _ = t.measure("Z", 1, OutcomeSource.forced([1]))
    r = t.restrict([0, 2], {1: ("Z", bit)})
    assert verify_stabilized(r, [PauliOp.from_string("-XI"), PauliOp.from_string("-IX")])


def test_restrict_order_follows_keep():
    t = Tableau.from_stabilizers([PauliOp.from_string(s) for s in ("XII", "IZI", "IIY")])
    r = t.restrict([2, 0], {1: ("Z", 0)})
    assert verify_stabilized(r, [PauliOp.from_string("YI"), PauliOp.from_string("IX")])
    with pytest.raises(ValueError):
        t.restrict([0], {1: ("Z", 0)})


def test_script_source():
    t = Tableau(1)
    with pytest.raises(ScriptContradiction):
        t.measure("Z", 0, OutcomeSource.forced([1]))
    with pytest.raises(ScriptExhausted):
        Tableau(1).measure("X", 0, OutcomeSource.forced([]))


def test_tensor(rng):
    a, b = random_state(2, rng), random_state(3, rng)
    sv_a, sv_b = to_statevector(a).amps, to_statevector(b).amps
    # b occupies the high qubits, so it is the left Kronecker factor
    assert same_ray(to_statevector(tensor(a, b)).amps, np.kron(sv_b, sv_a))


def test_shot_tableau_matches_serial(rng):
    for _ in range(10):
        g = random_graph(6, rng)
        n, edges = g.indexed_edges()
        seq = [(str(rng.choice(["X", "Y", "Z"])), int(q)) for q in rng.permutation(n)[:4]]
        seeds = [3, 4, 5, 6]
        lock = ShotTableau.from_graph(n, edges, len(seeds))
        srcs = [OutcomeSource.seeded(s) for s in seeds]
        bits = [lock.measure_shots(basis, q, srcs) for basis, q in seq]
        for i, s in enumerate(seeds):
            t, src = Tableau.from_graph(n, edges), OutcomeSource.seeded(s)
            serial = [t.measure(basis, q, src)[0] for basis, q in seq]
            assert serial == [int(b[i]) for b in bits]
            assert tableau_equiv(t, lock.shot(i))


def test_shot_tableau_masked_pauli():
    lock = ShotTableau.from_graph(2, [(0, 1)], 3)
    lock.apply_masked("Z", 0, np.array([True, False, True]))
    assert lock.expectation_shots(PauliOp.from_string("XZ")).tolist() == [-1, 1, -1]
    with pytest.raises(ValueError):
        lock.apply_masked("H", 0, np.array([True, False, True]))
    lock.apply_masked("H", 0, np.ones(3, bool))
    serial = Tableau.from_graph(2, [(0, 1)]).apply("Z", 0).apply("H", 0)
    assert tableau_equiv(lock.shot(0), serial)


def test_check_matrix_text():
    t = Tableau.from_graph(2, [(0, 1)])
    assert t.check_matrix_text() == "2 2\n10|01 +\n01|10 +\n"


def test_large_register_word_packing():
    g = Graph.path(70)
    t = prepare_graph_state(*g.indexed_edges())
    t.measure("Z", 65, OutcomeSource.forced([0]))
    p = PauliOp(70, 1 << 64, 1 << 63)
    assert t.expectation(p) == 1
