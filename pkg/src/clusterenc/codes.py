"""Graph-code standard form, logical operators, codewords and augmented graphs.

A graph code on ``n`` qubits with ``d`` generators has check matrix
``[I, R | A + R C^T, C]`` and underlying graph adjacency ``[[A, C], [C^T, 0]]``.
Any stabilizer code reaches this form by a layer of single-qubit Cliffords
followed by a qubit relabelling; :func:`standard_form` finds both.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import local_clifford as lc
from .graphs import Graph, to_dot
from .symplectic import (
    BitMatrix,
    CheckMatrix,
    ParseError,
    PauliOp,
    format_check_matrix,
    is_valid_stabilizer,
    multiply,
    parse_check_matrix,
    popcount,
    rref,
    solve,
    symplectic_product,
)

CIRCUIT_GATES = ("H", "S", "X", "Z")


class InvalidCode(ValueError):
    pass


class NonZTypeLogical(ValueError):
    pass


@dataclass
class LocalCliffordCircuit:
    """Single-qubit gates applied in list order; sites are 0-based."""

    n: int
    gates: list[tuple[str, int]] = field(default_factory=list)

    def __post_init__(self):
        for g, q in self.gates:
            if g not in CIRCUIT_GATES:
                raise ValueError(f"gate {g!r} not in {CIRCUIT_GATES}")
            if not 0 <= q < self.n:
                raise ValueError(f"site {q} out of range for {self.n} qubits")

    def site_cliffords(self) -> list[lc.LocalClifford]:
        """Net Clifford on each site."""
        out = [lc.IDENTITY] * self.n
        for g, q in self.gates:
            out[q] = lc.BY_NAME[g] @ out[q]
        return out

    def conjugate(self, p: PauliOp) -> PauliOp:
        """``U p U^dagger`` for the circuit unitary ``U``."""
        return conjugate_local(p, self.site_cliffords())

    def inverse(self) -> "LocalCliffordCircuit":
        out: list[tuple[str, int]] = []
        for g, q in reversed(self.gates):
            # S^-1 = S S S; the others are involutions
            out += [(g, q)] * (3 if g == "S" else 1)
        return LocalCliffordCircuit(self.n, out)

    def to_text(self) -> str:
        return "".join(f"{g} {q + 1}\n" for g, q in self.gates)


def conjugate_local(p: PauliOp, frames: Sequence[lc.LocalClifford]) -> PauliOp:
    x = z = 0
    flips = 0
    for q in range(p.n):
        bx, bz = p.x >> q & 1, p.z >> q & 1
        nx, nz, s = frames[q].conj(bx, bz)
        x |= nx << q
        z |= nz << q
        flips += s
    return PauliOp(p.n, x, z, (p.phase + 2 * flips) % 4)


@dataclass
class GraphCode:
    """Standard-form code.  ``signs[i]`` is the sign bit of generator ``i``
    of ``[I, R | A + R C^T, C]``; ``order[p]`` is the input-code qubit that
    became graph-code qubit ``p``."""

    n: int
    d: int
    R: BitMatrix
    A: BitMatrix
    C: BitMatrix
    signs: list[int] = field(default_factory=list)
    order: list[int] = field(default_factory=list)

    def __post_init__(self):
        k = self.n - self.d
        if (self.R.nrows, self.R.ncols) != (self.d, k) or (self.C.nrows, self.C.ncols) != (self.d, k):
            raise InvalidCode("R and C must be d x k")
        if (self.A.nrows, self.A.ncols) != (self.d, self.d):
            raise InvalidCode("A must be d x d")
        if not self.A.is_symmetric() or any(self.A[i, i] for i in range(self.d)):
            raise InvalidCode("A must be symmetric with zero diagonal")
        if not self.signs:
            self.signs = [0] * self.d
        if not self.order:
            self.order = list(range(self.n))
        if sorted(self.order) != list(range(self.n)):
            raise InvalidCode("order must be a permutation of the qubits")

    @property
    def k(self) -> int:
        return self.n - self.d

    def z_block(self) -> BitMatrix:
        left = self.A + self.R @ self.C.transpose()
        return BitMatrix(self.d, self.n, [l | (c << self.d) for l, c in zip(left.rows, self.C.rows)])

    def x_block(self) -> BitMatrix:
        return BitMatrix(self.d, self.n, [(1 << i) | (r << self.d) for i, r in enumerate(self.R.rows)])

    def check_matrix(self, signed: bool = False) -> CheckMatrix:
        return CheckMatrix.from_blocks(self.x_block(), self.z_block(), list(self.signs) if signed else None)

    def adjacency(self) -> BitMatrix:
        d, n = self.d, self.n
        ct = self.C.transpose()
        rows = [a | (c << d) for a, c in zip(self.A.rows, self.C.rows)]
        rows += list(ct.rows)
        return BitMatrix(n, n, rows)


def graph_of(gc: GraphCode) -> Graph:
    adj = gc.adjacency()
    return Graph(range(gc.n), [(i, j) for i in range(gc.n) for j in range(i + 1, gc.n) if adj[i, j]])


def _z_pivots(zrows: list[int], n: int, avoid: set[int]) -> list[int]:
    """Pivot columns of the Z-only rows, trying columns outside ``avoid`` first."""
    order = [c for c in range(n) if c not in avoid] + sorted(avoid)
    return rref(BitMatrix(len(zrows), n, zrows), order)[1]


def _apply_ops(rows: list[PauliOp], ops) -> list[PauliOp]:
    rows = list(rows)
    for kind, a, b in ops:
        if kind == "swap":
            rows[a], rows[b] = rows[b], rows[a]
        else:
            rows[b] = multiply(rows[a], rows[b])
    return rows


def standard_form(code: CheckMatrix) -> tuple[GraphCode, LocalCliffordCircuit]:
    """Bring ``code`` to graph-code form.

    Returns the graph code and the local circuit ``U``.  Conjugating the
    input generators by ``U`` and relabelling qubit ``order[p]`` to ``p``
    gives a generating set of the graph code's stabilizer (signs included).
    """
    if not is_valid_stabilizer(code):
        raise InvalidCode("input is not a valid stabilizer check matrix")
    n, d = code.n, code.d
    gens = code.generators()
    xr, xpiv, xops = rref(code.x_block())
    rows = _apply_ops(gens, xops)
    rank = len(xpiv)
    ztail = [r.z for r in rows[rank:]]
    hsites = sorted(_z_pivots(ztail, n, set(xpiv))) if ztail else []
    circuit = LocalCliffordCircuit(n, [("H", q) for q in hsites])
    rows = [circuit.conjugate(r) for r in gens]
    xb = BitMatrix(d, n, [r.x for r in rows])
    _, piv, ops = rref(xb)
    if len(piv) != d:
        raise AssertionError("X block still rank deficient after Hadamards")
    rows = _apply_ops(rows, ops)
    order = piv + [q for q in range(n) if q not in piv]
    # diagonal of A = Z1 + R Z2^T, in the relabelled frame
    ssites = []
    for i, q in enumerate(piv):
        rbits = [rows[i].x >> order[d + j] & 1 for j in range(n - d)]
        zbits = [rows[i].z >> order[d + j] & 1 for j in range(n - d)]
        diag = (rows[i].z >> q & 1) ^ (sum(a & b for a, b in zip(rbits, zbits)) & 1)
        if diag:
            ssites.append(q)
    if ssites:
        extra = LocalCliffordCircuit(n, [("S", q) for q in ssites])
        rows = [extra.conjugate(r) for r in rows]
        circuit = LocalCliffordCircuit(n, circuit.gates + extra.gates)
    perm = [permute(r, order) for r in rows]
    k = n - d
    R = BitMatrix(d, k, [r.x >> d for r in perm])
    C = BitMatrix(d, k, [r.z >> d for r in perm])
    z1 = BitMatrix(d, d, [r.z & ((1 << d) - 1) for r in perm])
    A = z1 + R @ C.transpose()
    signs = [r.phase >> 1 for r in perm]
    gc = GraphCode(n, d, R, A, C, signs, order)
    return gc, circuit


def permute(p: PauliOp, order: Sequence[int]) -> PauliOp:
    """Qubit ``order[j]`` of ``p`` becomes qubit ``j``."""
    x = z = 0
    for j, q in enumerate(order):
        x |= (p.x >> q & 1) << j
        z |= (p.z >> q & 1) << j
    return PauliOp(p.n, x, z, p.phase)


def unpermute(p: PauliOp, order: Sequence[int]) -> PauliOp:
    x = z = 0
    for j, q in enumerate(order):
        x |= (p.x >> j & 1) << q
        z |= (p.z >> j & 1) << q
    return PauliOp(p.n, x, z, p.phase)


# -- logical operators --------------------------------------------------------

@dataclass
class LogicalOps:
    x: list[PauliOp]
    z: list[PauliOp]

    @property
    def k(self) -> int:
        return len(self.x)


EXHAUSTIVE_K = 20


def _x_logical_candidates(gc: GraphCode) -> list[int]:
    """Z-supports ``(R u, u)`` ordered by weight then support."""
    d, k = gc.d, gc.k
    rcols = gc.R.transpose().rows  # column j of R as a d-bit mask

    def support(u: int) -> int:
        top = 0
        for j in range(k):
            if u >> j & 1:
                top ^= rcols[j]
        return top | (u << d)

    if k <= EXHAUSTIVE_K:
        sups = [support(u) for u in range(1, 1 << k)]
        return sorted(sups, key=lambda s: (popcount(s), [q for q in range(gc.n) if s >> q & 1]))
    return [support(1 << j) for j in range(k)]


def logical_operators(gc: GraphCode) -> LogicalOps:
    """Symplectically paired logicals.

    ``X_L`` are Z-type operators ``Z^{(R u, u)}``, chosen greedily by weight;
    ``Z_L[l]`` is a product of graph-state generators ``K_W`` with
    ``|W & supp X_L[m]|`` odd exactly when ``m = l``, a single ``K_v`` when
    one exists.
    """
    n, k = gc.n, gc.k
    chosen: list[int] = []
    basis: list[int] = []  # echelon basis for the independence test
    for s in _x_logical_candidates(gc):
        r = s
        for b in basis:
            r = min(r, r ^ b)
        if r:
            basis.append(r)
            chosen.append(s)
        if len(chosen) == k:
            break
    g = graph_of(gc)
    xs = [PauliOp.z_type(n, [q for q in range(n) if s >> q & 1]) for s in chosen]
    zs = []
    for l in range(k):
        want = [int(m == l) for m in range(k)]
        w = next((1 << v for v in range(n)
                  if all((chosen[m] >> v & 1) == want[m] for m in range(k))), None)
        if w is None:
            # columns: vertices; rows: logicals
            w = solve(BitMatrix(k, n, chosen), sum(b << m for m, b in enumerate(want)))
            if w is None:
                raise AssertionError("no conjugate logical found")
        zs.append(graph_generator_product(g, n, w))
    return LogicalOps(xs, zs)


def graph_generator_product(g: Graph, n: int, w: int) -> PauliOp:
    """``prod_{v in W} X_v Z_{N(v)}`` for the vertex mask ``w``."""
    out = PauliOp(n, 0, 0)
    for v in range(n):
        if w >> v & 1:
            kv = PauliOp(n, 1 << v, sum(1 << u for u in g.neighbors(v)))
            out = multiply(out, kv)
    return out


def check_logicals(gens: Sequence[PauliOp], ops: LogicalOps) -> bool:
    """Commutation with the stabilizer and exact symplectic pairing."""
    allops = ops.x + ops.z
    if any(symplectic_product(g, p) for g in gens for p in allops):
        return False
    k = ops.k
    for i in range(k):
        for j in range(k):
            if symplectic_product(ops.x[i], ops.z[j]) != int(i == j):
                return False
            if symplectic_product(ops.x[i], ops.x[j]) or symplectic_product(ops.z[i], ops.z[j]):
                return False
    return True


# -- augmented graph and codewords --------------------------------------------

@dataclass
class AugmentedGraph:
    """Code graph on vertices ``0..n-1`` plus input vertices ``n..n+k-1``."""

    base: Graph
    inputs: list[int]
    input_adjacency: dict[int, list[int]]

    def __post_init__(self):
        for i in self.inputs:
            nb = self.input_adjacency.get(i, [])
            if not nb:
                raise ValueError(f"input {i} has no neighbours")
            if any(v in self.inputs for v in nb):
                raise ValueError("input-input edges are not allowed")

    def graph(self) -> Graph:
        g = self.base.copy()
        for i in self.inputs:
            g.add_vertex(i)
            for v in self.input_adjacency[i]:
                g.add_edge(i, v)
        return g

    def to_dot(self, name: str = "Gprime") -> str:
        return to_dot(self.graph(), name, self.inputs)


def augment(gc: GraphCode, logicals: LogicalOps) -> AugmentedGraph:
    base = graph_of(gc)
    inputs = list(range(gc.n, gc.n + gc.k))
    adj = {}
    for i, xl in zip(inputs, logicals.x):
        if not xl.is_z_type():
            raise NonZTypeLogical(f"logical X for input {i - gc.n} is not Z-type")
        adj[i] = xl.support
    return AugmentedGraph(base, inputs, adj)


def codeword(gc: GraphCode, x: Sequence[int], logicals: LogicalOps | None = None):
    """Oracle statevector of ``|x_L> = prod_l X_L[l]^{x_l} |G>``."""
    from .statevector import statevector_graph

    if len(x) != gc.k:
        raise ValueError(f"need {gc.k} logical bits, got {len(x)}")
    logicals = logicals or logical_operators(gc)
    n, edges = graph_of(gc).indexed_edges()
    sv = statevector_graph(n, edges)
    for bit, xl in zip(x, logicals.x):
        if bit:
            sv.apply_pauli(xl)
    return sv


# -- text format ----------------------------------------------------------------

def _bits(row: int, width: int) -> str:
    return "".join(str(row >> c & 1) for c in range(width))


def format_graph_code(gc: GraphCode, circuit: LocalCliffordCircuit | None = None) -> str:
    """Signed check matrix followed by ``order``, ``R``/``A``/``C`` blocks and
    the circuit as ``gate site`` lines (all indices 1-based)."""
    out = [format_check_matrix(gc.check_matrix(signed=True)).rstrip("\n")]
    out.append("order " + " ".join(str(q + 1) for q in gc.order))
    for name, m in (("R", gc.R), ("A", gc.A), ("C", gc.C)):
        out.append(f"{name} {m.nrows} {m.ncols}")
        # zero-width blocks (k = 0) have no row lines
        out += [_bits(r, m.ncols) for r in m.rows] if m.ncols else []
    gates = circuit.gates if circuit else []
    out.append(f"circuit {len(gates)}")
    out += [f"{g} {q + 1}" for g, q in gates]
    return "\n".join(out) + "\n"


def parse_graph_code(text: str, path: str | None = None) -> tuple[GraphCode, LocalCliffordCircuit]:
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), start=1)
             if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise ParseError("empty graph-code file", 0, 0, path)
    try:
        n, d = map(int, lines[0][1].split())
    except ValueError:
        raise ParseError("header must be 'n d'", lines[0][0], 1, path) from None
    cm_lines = lines[: d + 1]
    cm = parse_check_matrix("\n".join(ln for _, ln in cm_lines), path)
    pos = d + 1

    def take(kind: str) -> tuple[int, list[str]]:
        nonlocal pos
        if pos >= len(lines):
            raise ParseError(f"missing '{kind}' section", lines[-1][0], 1, path)
        lineno, line = lines[pos]
        parts = line.split()
        if parts[0] != kind:
            raise ParseError(f"expected '{kind}'", lineno, 1, path)
        pos += 1
        return lineno, parts[1:]

    lineno, ordp = take("order")
    try:
        order = [int(v) - 1 for v in ordp]
    except ValueError:
        raise ParseError("order entries must be integers", lineno, 1, path) from None
    blocks = {}
    for name in ("R", "A", "C"):
        lineno, dims = take(name)
        r, c = map(int, dims)
        rows = []
        for _ in range(r if c else 0):
            if pos >= len(lines):
                raise ParseError(f"block {name} truncated", lineno, 1, path)
            ln_no, ln = lines[pos]
            if len(ln) != c or set(ln) - {"0", "1"}:
                raise ParseError(f"block {name} rows need {c} bits", ln_no, 1, path)
            rows.append(sum(int(b) << j for j, b in enumerate(ln)))
            pos += 1
        blocks[name] = BitMatrix(r, c, rows or [0] * r)
    lineno, cnt = take("circuit")
    gates = []
    for _ in range(int(cnt[0])):
        if pos >= len(lines):
            raise ParseError("circuit truncated", lineno, 1, path)
        ln_no, ln = lines[pos]
        parts = ln.split()
        if len(parts) != 2 or parts[0] not in CIRCUIT_GATES or not parts[1].isdigit():
            raise ParseError("gate line must be 'GATE site'", ln_no, 1, path)
        gates.append((parts[0], int(parts[1]) - 1))
        pos += 1
    if pos != len(lines):
        raise ParseError("trailing content", lines[pos][0], 1, path)
    try:
        gc = GraphCode(n, d, blocks["R"], blocks["A"], blocks["C"], list(cm.signs or [0] * d), order)
        circuit = LocalCliffordCircuit(n, gates)
    except (InvalidCode, ValueError) as e:
        raise ParseError(str(e), lines[0][0], 1, path) from None
    if gc.check_matrix().as_bitmatrix() != cm.as_bitmatrix():
        raise ParseError("blocks disagree with the check matrix", lines[0][0], 1, path)
    return gc, circuit
