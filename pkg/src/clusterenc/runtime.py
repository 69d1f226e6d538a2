"""Pattern execution on the tableau simulator, verification and encoding."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .codes import (
    GraphCode,
    LocalCliffordCircuit,
    LogicalOps,
    augment,
    graph_generator_product,
    graph_of,
    logical_operators,
    standard_form,
    unpermute,
)
from .graphs import Graph
from .lattice import CONST, Correction, MeasId, MeasurementPattern, Signal, compile_graph
from .symplectic import BitMatrix, CheckMatrix, DimensionError, PauliOp, row_pauli, solve
from .tableau import OutcomeSource, ShotTableau, Tableau, tensor

# Lattices above this many qubits are refused (dense tableau memory grows as n^2).
MAX_LATTICE_QUBITS = 20000


class UnresolvedSignal(RuntimeError):
    pass


class LatticeTooLarge(ValueError):
    pass


def eval_signal(sig: Signal, outcomes: dict[MeasId, int]) -> int:
    bit = 0
    for ref in sig:
        if ref == CONST:
            bit ^= 1
        elif ref in outcomes:
            bit ^= outcomes[ref]
        else:
            raise UnresolvedSignal(f"signal refers to m{ref[0]}.{ref[1]}, which has no outcome yet")
    return bit


def _id(mid: MeasId) -> str:
    return f"m{mid[0]}.{mid[1]}"


@dataclass
class ExecutionTrace:
    outcomes: dict[MeasId, int]
    tableau: Tableau
    applied: list[Correction] = field(default_factory=list)
    deterministic: set[MeasId] = field(default_factory=set)
    lattice_state: Tableau | None = None

    def dump(self) -> str:
        lines = [f"outcome {_id(m)} = {b}" for m, b in sorted(self.outcomes.items())]
        return "\n".join(lines + [self.tableau.check_matrix_text().rstrip("\n")]) + "\n"


def _prepare(p: MeasurementPattern) -> tuple[int, list[tuple[int, int]]]:
    if p.lattice.area > MAX_LATTICE_QUBITS:
        raise LatticeTooLarge(f"{p.lattice.area} lattice qubits exceed the simulator budget of {MAX_LATTICE_QUBITS}")
    return p.lattice.graph().indexed_edges()


def execute(p: MeasurementPattern, src: OutcomeSource | None = None, restrict: bool = True) -> ExecutionTrace:
    """Run ``p`` on a freshly prepared lattice cluster state.

    Flip signals swap X and Y; sign signals negate the measured observable,
    so the recorded outcome is the eigenvalue bit of the signed observable.
    """
    src = src or OutcomeSource.seeded(None)
    n, edges = _prepare(p)
    t = Tableau.from_graph(n, edges)
    idx = p.lattice.index
    outcomes: dict[MeasId, int] = {}
    det: set[MeasId] = set()
    for mid, op in p.ops():
        basis = op.basis
        if op.flip and eval_signal(op.flip, outcomes) and basis != "Z":
            basis = "Y" if basis == "X" else "X"
        sign = eval_signal(op.sign, outcomes) if op.sign else 0
        obs = PauliOp.single(n, idx(op.site), basis)
        if sign:
            obs = obs.negate()
        bit, d = t.measure_observable(obs, src)
        outcomes[mid] = bit
        if d:
            det.add(mid)
    applied = []
    for c in p.corrections:
        if eval_signal(c.signal, outcomes):
            t.apply(c.gate, idx(c.site))
            applied.append(c)
    out = t
    if restrict:
        keep = [idx(s) for s in p.outputs]
        measured = {}
        for mid, op in p.ops():
            # the measured qubit is left in the eigenstate of the observable actually measured
            measured[idx(op.site)] = _post_state(op, outcomes, mid)
        out = t.restrict(keep, measured)
    return ExecutionTrace(outcomes, out, applied, det, t)


def _post_state(op, outcomes, mid) -> tuple[str, int]:
    basis = op.basis
    if op.flip and eval_signal(op.flip, outcomes) and basis != "Z":
        basis = "Y" if basis == "X" else "X"
    sign = eval_signal(op.sign, outcomes) if op.sign else 0
    return basis, outcomes[mid] ^ sign


def graph_stabilizers(g: Graph, sites: Sequence[int] | None = None, n: int | None = None) -> list[PauliOp]:
    """``X_v Z_N(v)`` for every vertex, optionally embedded at ``sites`` of an ``n``-qubit register."""
    verts = g.vertices()
    pos = {v: i for i, v in enumerate(verts)}
    sites = list(range(len(verts))) if sites is None else list(sites)
    n = len(verts) if n is None else n
    out = []
    for v in verts:
        x = 1 << sites[pos[v]]
        z = sum(1 << sites[pos[u]] for u in g.neighbors(v))
        out.append(PauliOp(n, x, z))
    return out


def verify_graph_state(t: Tableau, g: Graph) -> bool:
    """Every ``+X_v Z_N(v)`` lies in the stabilizer group of ``t`` (sign-inclusive)."""
    if t.n != len(g):
        raise DimensionError(f"tableau has {t.n} qubits, graph has {len(g)} vertices")
    return all(t.expectation(s) == 1 for s in graph_stabilizers(g))


def verify_execution(p: MeasurementPattern, t_lattice: Tableau, g: Graph) -> bool:
    """Check the output sites of an executed lattice state against ``|g>`` without restricting."""
    if len(p.outputs) != len(g):
        raise DimensionError("pattern outputs and graph sizes differ")
    sites = [p.lattice.index(s) for s in p.outputs]
    return all(t_lattice.expectation(s) == 1 for s in graph_stabilizers(g, sites, t_lattice.n))


def execute_shots(p: MeasurementPattern, seeds: Sequence[int]) -> tuple[list[dict[MeasId, int]], ShotTableau]:
    """Run one shot per seed in lockstep.

    Valid only for non-adaptive patterns (no flip signals): the tableau's bit
    content then evolves identically in every shot and only the sign columns
    differ.  Each shot draws exactly the outcomes :func:`execute` would with
    ``OutcomeSource.seeded(seed)``.
    """
    if any(op.flip for _, op in p.ops()):
        raise ValueError("lockstep execution needs a pattern without flip signals")
    n, edges = _prepare(p)
    srcs = [OutcomeSource.seeded(s) for s in seeds]
    t = ShotTableau.from_graph(n, edges, len(seeds))
    idx = p.lattice.index
    outcomes: list[dict[MeasId, int]] = [{} for _ in seeds]
    for mid, op in p.ops():
        signs = np.array([eval_signal(op.sign, o) if op.sign else 0 for o in outcomes], dtype=np.uint8)
        bits = t.measure_shots(op.basis, idx(op.site), srcs, signs)
        for o, b in zip(outcomes, bits):
            o[mid] = int(b)
    for c in p.corrections:
        mask = np.array([eval_signal(c.signal, o) for o in outcomes], dtype=bool)
        t.apply_masked(c.gate, idx(c.site), mask)
    return outcomes, t


def verify_shots(p: MeasurementPattern, g: Graph, seeds: Sequence[int]) -> list[bool]:
    _, t = execute_shots(p, seeds)
    sites = [p.lattice.index(s) for s in p.outputs]
    ok = np.ones(len(seeds), dtype=bool)
    for s in graph_stabilizers(g, sites, t.n):
        ok &= t.expectation_shots(s) == 1
    return ok.tolist()


# -- teleportation encoding -----------------------------------------------------

@dataclass
class CodeEncoder:
    """Everything needed to encode into ``code``.

    Work happens in the graph-code frame (qubit ``p`` is input-code qubit
    ``gc.order[p]``).  ``fix`` is a Pauli that carries the unsigned graph
    code onto the signed one while commuting with every logical, so the
    graph codewords map to codewords of the input code.
    """

    code: CheckMatrix
    gc: GraphCode
    circuit: LocalCliffordCircuit
    logicals: LogicalOps
    fix: PauliOp

    @classmethod
    def of(cls, code: CheckMatrix) -> "CodeEncoder":
        gc, circuit = standard_form(code)
        logicals = logical_operators(gc)
        g = graph_of(gc)
        n, d = gc.n, gc.d
        diffs = []
        for i, row in enumerate(gc.R.rows):
            prod = graph_generator_product(g, n, (1 << i) | (row << d))
            diffs.append(gc.signs[i] ^ prod.sign)
        constraints = gc.check_matrix().rows + logicals.x + logicals.z
        want = diffs + [0] * (2 * gc.k)
        # symplectic product with Q = (qx|qz) is p.z . qx + p.x . qz
        m = BitMatrix(len(constraints), 2 * n, [p.z | (p.x << n) for p in constraints])
        v = solve(m, sum(b << i for i, b in enumerate(want)))
        if v is None:
            raise AssertionError("no sign-fixing Pauli exists")
        return cls(code, gc, circuit, logicals, row_pauli(n, v))

    def to_code_frame(self, p: PauliOp) -> PauliOp:
        return self.circuit.inverse().conjugate(unpermute(p, self.gc.order))

    def logical_x(self) -> list[PauliOp]:
        return [self.to_code_frame(p) for p in self.logicals.x]

    def logical_z(self) -> list[PauliOp]:
        return [self.to_code_frame(p) for p in self.logicals.z]


@dataclass
class EncodingJob:
    code: CheckMatrix
    state: Tableau
    seed: int | None = None

    def __post_init__(self):
        if self.state.n != self.code.k:
            raise DimensionError(f"input state has {self.state.n} qubits, code encodes {self.code.k}")


def _resource_state(enc: CodeEncoder, resource: str, seed: int | None) -> Tableau:
    """``|G'>`` on graph-code qubits ``0..n-1`` then input nodes ``n..n+k-1``."""
    g = augment(enc.gc, enc.logicals).graph()
    if resource == "direct":
        return Tableau.from_graph(*g.indexed_edges())
    if resource == "pattern":
        p = compile_graph(g)
        return execute(p, OutcomeSource.seeded(seed)).tableau
    raise ValueError(f"unknown resource mode {resource!r}")


def encode_state(job: EncodingJob, resource: str = "direct") -> Tableau:
    """Teleport ``job.state`` into the code; returns the ``n``-qubit encoded state.

    Each input qubit is Bell-measured against its input node (CNOT, H on the
    input qubit, then Z on both); outcomes ``(m1, m2)`` are undone with
    ``X_L^{m2} Z_L^{m1}``.
    """
    enc = CodeEncoder.of(job.code)
    n, k = enc.gc.n, enc.gc.k
    if k == 0:
        raise DimensionError("code encodes no logical qubits")
    src = OutcomeSource.seeded(job.seed)
    t = tensor(_resource_state(enc, resource, job.seed), job.state)
    measured: dict[int, tuple[str, int]] = {}
    for l in range(k):
        psi, node = n + k + l, n + l
        t.cnot(psi, node)
        t.h(psi)
        m1, _ = t.measure("Z", psi, src)
        m2, _ = t.measure("Z", node, src)
        measured[psi] = ("Z", m1)
        measured[node] = ("Z", m2)
        if m2:
            t.apply_pauli(_embed(enc.logicals.x[l], t.n))
        if m1:
            t.apply_pauli(_embed(enc.logicals.z[l], t.n))
    t = t.restrict(list(range(n)), measured)
    t.apply_pauli(enc.fix)
    inv = enc.circuit.inverse()
    for gname, q in inv.gates:
        t.apply(gname, enc.gc.order.index(q))
    keep = [enc.gc.order.index(q) for q in range(n)]
    return t.restrict(keep, {})


def _embed(p: PauliOp, n: int) -> PauliOp:
    return PauliOp(n, p.x, p.z, p.phase)
