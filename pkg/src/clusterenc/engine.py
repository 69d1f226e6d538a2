"""Graph-state rewrite engine with per-vertex local-Clifford frames.

A :class:`FramedGraphState` stands for ``prod_v C_v |G>``.  Measuring a
vertex in a physical Pauli basis is pulled back through its frame to a
graph-level Pauli measurement, the matching graphical rule rewrites the
graph, and the outcome-dependent byproduct is folded into the neighbours'
frames.

The byproducts are not hand-written: :func:`synthesize_byproducts` solves for
them against the tableau simulator on small probe graphs, and the result is
frozen in :data:`BYPRODUCTS` (a regression test re-derives it).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable

from . import local_clifford as lc
from .graphs import Graph, local_complement
from .local_clifford import LocalClifford
from .symplectic import PauliOp
from .tableau import ScriptContradiction, Tableau, prepare_graph_state

PickRule = Callable[[Graph, int], int]


class PreconditionError(ValueError):
    pass


# (graph-level basis, graph-level outcome) -> role -> byproduct Clifford.
# Roles: "nbr" for Z and Y; for X, "pick" is the chosen neighbour b,
# "a_only" = N(a) - N(b) - {b}, "b_only" = N(b) - N(a) - {a}, "common" = N(a) & N(b).
BYPRODUCTS: dict[tuple[str, int], dict[str, LocalClifford]] = {
    ("Z", 0): {"nbr": lc.IDENTITY},
    ("Z", 1): {"nbr": lc.PAULI_Z},
    ("Y", 0): {"nbr": lc.S},
    ("Y", 1): {"nbr": lc.S_DAG},
    ("X", 0): {"pick": lc.H, "a_only": lc.IDENTITY, "common": lc.PAULI_Z, "b_only": lc.IDENTITY},
    ("X", 1): {"pick": lc.H_Y, "a_only": lc.PAULI_Z, "common": lc.PAULI_Z, "b_only": lc.PAULI_Z},
}


def smallest_neighbor(g: Graph, a: int) -> int:
    return min(g.neighbors(a))


@dataclass
class FramedGraphState:
    graph: Graph
    frames: dict[int, LocalClifford] = field(default_factory=dict)
    record: list[tuple[int, str, int]] = field(default_factory=list)

    def __post_init__(self):
        for v in self.graph.vertices():
            self.frames.setdefault(v, lc.IDENTITY)
        stray = set(self.frames) - set(self.graph.vertices())
        if stray:
            raise ValueError(f"frames on absent vertices {sorted(stray)}")

    @classmethod
    def of(cls, g: Graph) -> "FramedGraphState":
        return cls(g.copy())

    def copy(self) -> "FramedGraphState":
        return FramedGraphState(self.graph.copy(), dict(self.frames), list(self.record))

    def frame(self, v: int) -> LocalClifford:
        return self.frames[v]


# -- graphical rules ----------------------------------------------------------

def x_rule_graph(g: Graph, a: int, b: int) -> Graph:
    """``lambda_b(lambda_a(lambda_b(G)) - a)``."""
    h = local_complement(g, b)
    h = local_complement(h, a)
    h.remove_vertex(a)
    return local_complement(h, b)


def rule_byproducts(g: Graph, a: int, basis: str, pick: PickRule = smallest_neighbor
                    ) -> tuple[Graph, dict[int, tuple[LocalClifford, LocalClifford]], bool]:
    """Graph after a graph-level ``basis`` measurement of ``a`` and, per touched
    vertex, the byproduct for outcome 0 and for outcome 1.

    The third value is True when the outcome is deterministic (X on an
    isolated vertex, which is forced to 0).
    """
    if a not in g:
        raise KeyError(f"unknown vertex {a}")
    nb = set(g.neighbors(a))
    t0, t1 = BYPRODUCTS[(basis, 0)], BYPRODUCTS[(basis, 1)]
    out: dict[int, tuple[LocalClifford, LocalClifford]] = {}
    if basis == "Z":
        h = g.copy()
        h.remove_vertex(a)
        for v in nb:
            out[v] = (t0["nbr"], t1["nbr"])
        return h, out, False
    if basis == "Y":
        h = local_complement(g, a)
        h.remove_vertex(a)
        for v in nb:
            out[v] = (t0["nbr"], t1["nbr"])
        return h, out, False
    if basis != "X":
        raise ValueError(f"unknown basis {basis!r}")
    if not nb:
        h = g.copy()
        h.remove_vertex(a)
        return h, out, True
    b = pick(g, a)
    if b not in nb:
        raise PreconditionError(f"picked vertex {b} is not a neighbour of {a}")
    nbb = set(g.neighbors(b))
    roles = {b: "pick"}
    roles.update({v: "a_only" for v in nb - nbb - {b}})
    roles.update({v: "b_only" for v in nbb - nb - {a}})
    roles.update({v: "common" for v in nb & nbb})
    for v, role in roles.items():
        if t0[role] is not lc.IDENTITY or t1[role] is not lc.IDENTITY:
            out[v] = (t0[role], t1[role])
    return x_rule_graph(g, a, b), out, False


def graph_level_basis(frame: LocalClifford, basis: str) -> tuple[str, int]:
    """Pull a physical basis back through a frame: ``C^dag P C = (-1)^s B``."""
    return frame.inverse.conj_letter(basis)


def measure(fgs: FramedGraphState, a: int, basis: str, outcome: int | None,
            pick: PickRule = smallest_neighbor, inplace: bool = False) -> FramedGraphState:
    """Measure physical ``basis`` on vertex ``a`` with the given outcome bit.

    ``outcome`` may be None only when the result is deterministic.
    """
    basis = basis.upper()
    if a not in fgs.graph:
        raise KeyError(f"unknown vertex {a}")
    st = fgs if inplace else fgs.copy()
    gb, s = graph_level_basis(st.frames[a], basis)
    h, byp, det = rule_byproducts(st.graph, a, gb, pick)
    if det:
        forced = s
        if outcome is not None and outcome != forced:
            raise ScriptContradiction(f"vertex {a}: outcome {outcome} contradicts deterministic {forced}")
        outcome = forced
    elif outcome is None:
        raise ValueError(f"vertex {a}: outcome is random and must be supplied")
    m = outcome ^ s
    for v, (u0, u1) in byp.items():
        st.frames[v] = st.frames[v] @ (u1 if m else u0)
    del st.frames[a]
    st.graph = h
    st.record.append((a, basis, outcome))
    return st


def is_deterministic(fgs: FramedGraphState, a: int, basis: str) -> bool:
    gb, _ = graph_level_basis(fgs.frames[a], basis.upper())
    return gb == "X" and fgs.graph.degree(a) == 0


def measure_Z(fgs: FramedGraphState, a: int, outcome: int | None) -> FramedGraphState:
    return measure(fgs, a, "Z", outcome)


def measure_Y(fgs: FramedGraphState, a: int, outcome: int | None) -> FramedGraphState:
    return measure(fgs, a, "Y", outcome)


def measure_X(fgs: FramedGraphState, a: int, outcome: int | None,
              pick: PickRule = smallest_neighbor) -> FramedGraphState:
    return measure(fgs, a, "X", outcome, pick)


def _z_power(c: LocalClifford, who: str) -> int:
    if c is lc.IDENTITY:
        return 0
    if c is lc.PAULI_Z:
        return 1
    raise PreconditionError(f"frame on {who} must be I or Z, found {c.name}")


def contract_chain(fgs: FramedGraphState, v: int, a: int, b: int, x: int = 0, y: int = 0) -> FramedGraphState:
    """Splice out the chain segment ``v - a - b`` after X measurements on ``a`` and ``b``.

    ``x`` and ``y`` are the outcomes on ``a`` and ``b``.  ``v`` inherits the
    remaining neighbours of ``b``; ``Z`` byproducts move onto ``v`` and onto
    ``b``'s other neighbours as the outcomes (and any Z frames already on
    ``a`` and ``b``) dictate.
    """
    g = fgs.graph
    for u in (v, a, b):
        if u not in g:
            raise KeyError(f"unknown vertex {u}")
    if g.neighbors(a) != {v, b}:
        raise PreconditionError(f"vertex {a} must have exactly the neighbours {{{v}, {b}}}")
    if g.has_edge(v, b):
        raise PreconditionError(f"{v} and {b} must not be adjacent")
    left = g.neighbors(v) - {a}
    right = g.neighbors(b) - {a}
    if left & right:
        raise PreconditionError("neighbourhoods of v and b overlap")
    x0 = _z_power(fgs.frames[a], f"vertex {a}")
    y0 = _z_power(fgs.frames[b], f"vertex {b}")
    st = fgs.copy()
    h = g.copy()
    h.remove_vertex(a)
    h.remove_vertex(b)
    for r in right:
        h.add_edge(v, r)
    st.graph = h
    del st.frames[a], st.frames[b]
    if (y0 + y) & 1:
        st.frames[v] = st.frames[v] @ lc.PAULI_Z
    if (x0 + x) & 1:
        for r in right:
            st.frames[r] = st.frames[r] @ lc.PAULI_Z
    st.record += [(a, "X", x), (b, "X", y)]
    return st


def realize(fgs: FramedGraphState) -> Tableau:
    """Tableau of ``prod_v C_v |G>``; qubit ``i`` is the ``i``-th smallest vertex."""
    n, edges = fgs.graph.indexed_edges()
    t = prepare_graph_state(n, edges)
    for i, v in enumerate(fgs.graph.vertices()):
        t.apply_local(i, fgs.frames[v])
    return t


def realize_state(fgs: FramedGraphState):
    """Statevector of the framed state (small graphs only)."""
    from .statevector import StateVector, statevector_graph

    n, edges = fgs.graph.indexed_edges()
    sv: StateVector = statevector_graph(n, edges)
    for i, v in enumerate(fgs.graph.vertices()):
        for gname in fgs.frames[v].gates:
            sv.apply1(gname, i)
    return sv


# -- byproduct synthesis ------------------------------------------------------

def _probes(basis: str) -> list[tuple[Graph, int, dict[str, list[int]], PickRule]]:
    """Probe graphs exercising every role, with bystanders and random extra edges.

    Several probes are used together so that only a byproduct rule valid for
    every graph survives, not one exploiting a particular probe's stabilizer.
    """
    import random

    rng = random.Random(2024)
    probes = []
    for _ in range(4):
        if basis in ("Z", "Y"):
            nbr = [1, 2, 3]
            other = [4, 5]
            fixed = [(0, v) for v in nbr]
            roles = {"nbr": nbr, "other": other}
        else:
            # a=0, b=1; 2,3 in N(a) only, 4,5 common, 6,7 in N(b) only; 8,9 bystanders
            fixed = [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5), (1, 4), (1, 5), (1, 6), (1, 7)]
            roles = {"pick": [1], "a_only": [2, 3], "common": [4, 5], "b_only": [6, 7], "other": [8, 9]}
        verts = sorted({v for vs in roles.values() for v in vs} | {0})
        g = Graph(verts, fixed)
        rest = [v for v in verts if v not in (0, 1) or basis in ("Z", "Y") and v != 0]
        for i, u in enumerate(rest):
            for w in rest[i + 1:]:
                if rng.random() < 0.4:
                    g.add_edge(u, w)
        probes.append((g, 0, roles, (lambda _g, _a: 1) if basis == "X" else smallest_neighbor))
    return probes


def _bits_image(c: LocalClifford) -> tuple[tuple[int, int], tuple[int, int]]:
    return c.img_x[:2], c.img_z[:2]


def _probe_target(g: Graph, a: int, basis: str, outcome: int, pick: PickRule) -> tuple[Tableau, Graph]:
    from .tableau import OutcomeSource

    t = prepare_graph_state(*g.indexed_edges())
    t.measure(basis, g.vertices().index(a), OutcomeSource.forced([outcome]))
    keep = [i for i, v in enumerate(g.vertices()) if v != a]
    target = t.restrict(keep, {g.vertices().index(a): (basis, outcome)})
    if basis == "X":
        new_graph = x_rule_graph(g, a, pick(g, a))
    elif basis == "Y":
        new_graph = local_complement(g, a)
        new_graph.remove_vertex(a)
    else:
        new_graph = g.copy()
        new_graph.remove_vertex(a)
    return target, new_graph


def synthesize_byproducts(basis: str, outcome: int) -> dict[str, LocalClifford]:
    """Solve for the per-role byproduct by matching the tableau simulator.

    The Clifford coset modulo Paulis is fixed first by comparing stabilizer
    groups without signs, then the Pauli part by comparing with signs; a
    candidate must match on every probe graph.
    """
    from .symplectic import row_space_equal

    probes = _probes(basis)
    role_names = [r for r in probes[0][2] if r != "other"]
    cases = []
    for g, a, roles, pick in probes:
        target, new_graph = _probe_target(g, a, basis, outcome, pick)
        cases.append((target, new_graph, roles))

    def build(new_graph: Graph, roles, assign: dict[str, LocalClifford]) -> Tableau:
        fgs = FramedGraphState.of(new_graph)
        for role, c in assign.items():
            for v in roles[role]:
                fgs.frames[v] = c
        return realize(fgs)

    cosets: dict[tuple, LocalClifford] = {}
    for e in lc.ELEMENTS:
        cosets.setdefault(_bits_image(e), e)
    paulis = [lc.IDENTITY, lc.PAULI_X, lc.PAULI_Y, lc.PAULI_Z]
    for combo in itertools.product(cosets.values(), repeat=len(role_names)):
        assign0 = dict(zip(role_names, combo))
        if not all(row_space_equal(build(ng, roles, assign0).stabilizers(), tg.stabilizers(), tg.n)
                   for tg, ng, roles in cases):
            continue
        for pc in itertools.product(paulis, repeat=len(role_names)):
            assign = {r: c @ p for r, c, p in zip(role_names, combo, pc)}
            if all(build(ng, roles, assign).equivalent(tg) for tg, ng, roles in cases):
                return assign
    raise AssertionError(f"no local-Clifford byproduct found for [{basis}] outcome {outcome}")
