from __future__ import annotations

import itertools

import numpy as np
import pytest

from clusterenc import local_clifford as lc
from clusterenc.engine import (
    BYPRODUCTS,
    FramedGraphState,
    PreconditionError,
    contract_chain,
    is_deterministic,
    measure,
    measure_X,
    measure_Y,
    measure_Z,
    realize,
    realize_state,
    smallest_neighbor,
    synthesize_byproducts,
)
from clusterenc.graphs import Graph
from clusterenc.statevector import same_ray, statevector_graph
from clusterenc.symplectic import PauliOp
from clusterenc.tableau import OutcomeSource, ScriptContradiction, Tableau, prepare_graph_state, tableau_equiv

from helpers import random_graph


@pytest.mark.parametrize("key", sorted(BYPRODUCTS))
def test_frozen_byproducts_match_synthesis(key):
    assert synthesize_byproducts(*key) == BYPRODUCTS[key]


def _random_frames(g: Graph, rng) -> FramedGraphState:
    fgs = FramedGraphState.of(g)
    for v in g.vertices():
        fgs.frames[v] = lc.ELEMENTS[int(rng.integers(24))]
    return fgs


def _replay(fgs: FramedGraphState, seq, rng) -> tuple[FramedGraphState, Tableau, dict]:
    """Measure ``seq`` on the engine and on the simulator with shared outcomes."""
    t = realize(fgs)
    verts = fgs.graph.vertices()
    measured = {}
    for v, basis in seq:
        q = verts.index(v)
        bit, det = t.measure(basis, q, OutcomeSource.seeded(int(rng.integers(1 << 30))))
        assert det == is_deterministic(fgs, v, basis)
        fgs = measure(fgs, v, basis, bit)
        measured[q] = (basis, bit)
    keep = [verts.index(v) for v in fgs.graph.vertices()]
    return fgs, t, {"keep": keep, "measured": measured}


def test_engine_matches_simulator(rng):
    for _ in range(500):
        n = int(rng.integers(2, 9))
        g = random_graph(n, rng, p=float(rng.uniform(0.2, 0.8)))
        fgs = _random_frames(g, rng) if rng.random() < 0.5 else FramedGraphState.of(g)
        k = int(rng.integers(1, min(n, 10)))
        seq = [(int(v), str(rng.choice(["X", "Y", "Z"]))) for v in rng.permutation(n)[:k]]
        out, t, info = _replay(fgs, seq, rng)
        assert tableau_equiv(realize(out), t.restrict(info["keep"], info["measured"]))


def test_z_measure_path():
    g = Graph.path(3)
    zero = measure_Z(FramedGraphState.of(g), 1, 0)
    assert zero.graph == Graph([0, 2]) and all(c is lc.IDENTITY for c in zero.frames.values())
    one = measure_Z(FramedGraphState.of(g), 1, 1)
    assert one.frames == {0: lc.PAULI_Z, 2: lc.PAULI_Z}
    t = prepare_graph_state(3, [(0, 1), (1, 2)])
    t.measure("Z", 1, OutcomeSource.forced([1]))
    assert tableau_equiv(realize(one), t.restrict([0, 2], {1: ("Z", 1)}))


def test_single_vertex_measurements():
    assert len(measure_Z(FramedGraphState.of(Graph([0])), 0, 1).graph) == 0
    y = measure_Y(FramedGraphState.of(Graph([0])), 0, 0)
    assert len(y.graph) == 0 and y.frames == {}
    x = measure_X(FramedGraphState.of(Graph([0, 1])), 0, None)
    assert x.record == [(0, "X", 0)] and x.frames == {1: lc.IDENTITY}
    with pytest.raises(ScriptContradiction):
        measure_X(FramedGraphState.of(Graph([0])), 0, 1)
    with pytest.raises(ValueError):
        measure_Z(FramedGraphState.of(Graph.path(2)), 0, None)


def test_y_measure_triangle():
    # local complement at a removes bc, deleting a leaves b and c isolated
    for bit in (0, 1):
        out = measure_Y(FramedGraphState.of(Graph.complete(3)), 0, bit)
        assert out.graph == Graph([1, 2])
        t = prepare_graph_state(3, [(0, 1), (0, 2), (1, 2)])
        t.measure("Y", 0, OutcomeSource.forced([bit]))
        assert tableau_equiv(realize(out), t.restrict([1, 2], {0: ("Y", bit)}))


def test_x_measure_chain_gives_spliced_chain():
    g = Graph.path(5)
    # a = 2 picks b = 3, its partner along the chain
    out = measure_X(measure_X(FramedGraphState.of(g), 2, 0, pick=lambda _g, _a: 3), 3, 0)
    assert out.graph == Graph([0, 1, 4], [(0, 1), (1, 4)])


def test_x_graph_independent_of_outcome(rng):
    for _ in range(200):
        g = random_graph(int(rng.integers(2, 8)), rng)
        a = int(rng.choice([v for v in g.vertices()] or [0]))
        if not g.neighbors(a):
            continue
        fgs = FramedGraphState.of(g)
        assert measure_X(fgs, a, 0).graph == measure_X(fgs, a, 1).graph


def test_x_independent_of_pick(rng):
    checked = 0
    while checked < 100:
        g = random_graph(int(rng.integers(3, 8)), rng)
        a = int(rng.integers(len(g)))
        if len(g.neighbors(a)) < 2:
            continue
        fgs = _random_frames(g, rng)
        for bit in (0, 1):
            states = [realize(measure_X(fgs, a, bit, pick=lambda _g, _a, b=b: b)) for b in g.neighbors(a)]
            assert all(tableau_equiv(states[0], s) for s in states[1:])
        checked += 1


def test_bad_pick():
    with pytest.raises(PreconditionError):
        measure_X(FramedGraphState.of(Graph.path(3)), 0, 0, pick=lambda g, a: 2)


def test_realize_basics():
    g = Graph.path(3)
    assert tableau_equiv(realize(FramedGraphState.of(g)), prepare_graph_state(3, g.edges()))
    minus = FramedGraphState(Graph([0]), {0: lc.PAULI_Z})
    assert realize(minus).expectation(PauliOp.from_string("X")) == -1


def test_realize_state_matches_tableau(rng):
    from clusterenc.statevector import to_statevector

    for _ in range(20):
        fgs = _random_frames(random_graph(4, rng), rng)
        assert same_ray(realize_state(fgs).amps, to_statevector(realize(fgs)).amps)


@pytest.mark.parametrize("x,y", list(itertools.product((0, 1), repeat=2)))
def test_contract_chain_matches_sequential(x, y):
    g = Graph.path(5)
    for pre in itertools.product((0, 1), repeat=5):
        fgs = FramedGraphState.of(g)
        for v, bit in zip(range(5), pre):
            if bit:
                fgs.frames[v] = lc.PAULI_Z
        fast = contract_chain(fgs, 1, 2, 3, x, y)
        slow = measure_X(measure_X(fgs, 2, x, pick=lambda _g, _a: 3), 3, y)
        assert fast.graph == slow.graph
        assert tableau_equiv(realize(fast), realize(slow))


def test_contract_chain_new_corrections():
    g = Graph.path(5)
    assert contract_chain(FramedGraphState.of(g), 1, 2, 3, 0, 0).frames == {v: lc.IDENTITY for v in (0, 1, 4)}
    out = contract_chain(FramedGraphState.of(g), 1, 2, 3, 1, 0)
    assert out.frames == {0: lc.IDENTITY, 1: lc.IDENTITY, 4: lc.PAULI_Z}


@pytest.mark.parametrize("v,a,b", [(0, 2, 3), (1, 2, 1), (0, 1, 3)])
def test_contract_chain_preconditions(v, a, b):
    with pytest.raises(PreconditionError):
        contract_chain(FramedGraphState.of(Graph.path(5)), v, a, b)


def test_contract_chain_needs_z_frames():
    fgs = FramedGraphState.of(Graph.path(5))
    fgs.frames[2] = lc.H
    with pytest.raises(PreconditionError):
        contract_chain(fgs, 1, 2, 3)


def test_simultaneous_contractions():
    # a 9-chain contracted through two pairs at once versus one after the other
    g = Graph.path(9)
    for outs in itertools.product((0, 1), repeat=4):
        fgs = FramedGraphState.of(g)
        seq = fgs
        for (v, partner), bit in zip(((1, 2), (2, None), (5, 6), (6, None)), outs):
            seq = measure_X(seq, v, bit, pick=(lambda _g, _a, b=partner: b) if partner else smallest_neighbor)
        both = contract_chain(contract_chain(fgs, 0, 1, 2, outs[0], outs[1]), 4, 5, 6, outs[2], outs[3])
        other = contract_chain(contract_chain(fgs, 4, 5, 6, outs[2], outs[3]), 0, 1, 2, outs[0], outs[1])
        assert both.graph == seq.graph == other.graph == Graph([0, 3, 4, 7, 8], [(0, 3), (3, 4), (4, 7), (7, 8)])
        assert tableau_equiv(realize(both), realize(seq))
        assert tableau_equiv(realize(other), realize(seq))


EIGEN = {("X", 0): [1, 1], ("X", 1): [1, -1], ("Y", 0): [1, 1j], ("Y", 1): [1, -1j],
         ("Z", 0): [1, 0], ("Z", 1): [0, 1]}


def test_engine_against_statevector_small(rng):
    checked = 0
    while checked < 20:
        fgs = _random_frames(random_graph(4, rng), rng)
        v, basis, bit = int(rng.integers(4)), str(rng.choice(["X", "Y", "Z"])), int(rng.integers(2))
        if is_deterministic(fgs, v, basis):
            continue
        out = measure(fgs, v, basis, bit)
        amps = realize_state(fgs).amps.reshape(2 ** (3 - v), 2, 2 ** v)
        red = np.einsum("b,ibj->ij", np.conj(EIGEN[(basis, bit)]), amps).reshape(-1)
        assert same_ray(realize_state(out).amps, red / np.linalg.norm(red))
        checked += 1


def test_statevector_graph_consistency():
    g = Graph.path(3)
    assert same_ray(realize_state(FramedGraphState.of(g)).amps, statevector_graph(3, g.edges()).amps)
