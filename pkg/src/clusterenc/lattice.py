"""Compile graph states into measurement patterns on a 2D cluster lattice.

Every target vertex owns a 5x5 block on the diagonal of a block grid.  Its
output qubit sits at the block centre and two arms leave it, one leftwards
along its block row and one downwards along its block column.  Where the
row arm of ``v_i`` meets the column arm of ``v_j`` (block ``(i, j)``,
``i > j``) a crossing gadget lets the two pass, or, when ``v_i v_j`` is an
edge, joins them with a single cross edge.  Everything else is pruned by Z
measurements, and finally every arm is contracted onto its output by X
measurements.

Corrections are derived by symbolic execution with the rewrite engine:
each vertex carries a static local Clifford ``K`` times ``X^a Z^b`` where
``a`` and ``b`` are affine GF(2) forms over the measurement outcomes.
Because ``K`` never depends on outcomes, the physical measurement bases can
be fixed at compile time and the pattern needs no adaptive basis changes.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from . import local_clifford as lc
from .engine import rule_byproducts
from .graphs import Graph
from .symplectic import ParseError, encode_pauli

BASES = ("X", "Y", "Z")
CORRECTION_GATES = ("X", "Y", "Z", "H", "S", "SDG")
BLOCK = 5
CENTER = 3

Site = tuple[int, int]
MeasId = tuple[int, int]  # (round, index), both 1-based


class CompileError(RuntimeError):
    """The compiler's own consistency check failed."""


@dataclass(frozen=True)
class LatticeSpec:
    rows: int
    cols: int

    def __post_init__(self):
        if self.rows < 1 or self.cols < 1:
            raise ValueError("lattice dimensions must be positive")

    @property
    def area(self) -> int:
        return self.rows * self.cols

    def index(self, site: Site) -> int:
        r, c = site
        if not (1 <= r <= self.rows and 1 <= c <= self.cols):
            raise IndexError(f"site {site} outside {self.rows}x{self.cols} lattice")
        return (r - 1) * self.cols + (c - 1)

    def site(self, index: int) -> Site:
        r, c = divmod(index, self.cols)
        return r + 1, c + 1

    def graph(self) -> Graph:
        return Graph.grid(self.rows, self.cols)


# A signal is a sorted tuple of outcome ids; the constant 1 is ``CONST``.
CONST: MeasId = (0, 0)
Signal = tuple[MeasId, ...]


def make_signal(ids: Iterable[MeasId]) -> Signal:
    """Canonical GF(2) sum: duplicates cancel, constant first."""
    acc: set[MeasId] = set()
    for i in ids:
        acc ^= {i}
    return tuple(sorted(acc))


@dataclass(frozen=True)
class MeasurementOp:
    site: Site
    basis: str
    flip: Signal = ()
    sign: Signal = ()

    def __post_init__(self):
        if self.basis not in BASES:
            raise ValueError(f"unknown basis {self.basis!r}")


@dataclass(frozen=True)
class Correction:
    site: Site
    gate: str
    signal: Signal

    def __post_init__(self):
        if self.gate not in CORRECTION_GATES:
            raise ValueError(f"unknown correction gate {self.gate!r}")


@dataclass
class MeasurementPattern:
    """``outputs[i]`` is the lattice site holding target vertex ``i``."""

    lattice: LatticeSpec
    rounds: list[list[MeasurementOp]] = field(default_factory=list)
    corrections: list[Correction] = field(default_factory=list)
    outputs: list[Site] = field(default_factory=list)

    def ops(self) -> Iterable[tuple[MeasId, MeasurementOp]]:
        for r, ops in enumerate(self.rounds, start=1):
            for i, op in enumerate(ops, start=1):
                yield (r, i), op

    def measured_sites(self) -> set[Site]:
        return {op.site for _, op in self.ops()}

    def validate(self) -> None:
        """Static checks: no site measured twice, outputs never measured,
        every lattice site accounted for, signals refer strictly backwards."""
        seen: set[Site] = set()
        for (r, i), op in self.ops():
            self.lattice.index(op.site)
            if op.site in seen:
                raise ValueError(f"site {op.site} measured twice")
            seen.add(op.site)
            for sig in (op.flip, op.sign):
                for ref in sig:
                    if ref != CONST and not (1 <= ref[0] < r):
                        raise ValueError(f"m{r}.{i} refers to m{ref[0]}.{ref[1]}, not an earlier round")
                    if ref != CONST and not 1 <= ref[1] <= len(self.rounds[ref[0] - 1]):
                        raise ValueError(f"m{r}.{i} refers to missing m{ref[0]}.{ref[1]}")
        outs = set(self.outputs)
        if len(outs) != len(self.outputs):
            raise ValueError("duplicate output site")
        if outs & seen:
            raise ValueError("an output site is measured")
        if len(outs) + len(seen) != self.lattice.area:
            raise ValueError("every site must be measured or be an output")
        for c in self.corrections:
            if c.site not in outs:
                raise ValueError(f"correction on non-output site {c.site}")
            for ref in c.signal:
                if ref != CONST and not (1 <= ref[0] <= len(self.rounds)
                                         and 1 <= ref[1] <= len(self.rounds[ref[0] - 1])):
                    raise ValueError(f"correction refers to missing m{ref[0]}.{ref[1]}")


@dataclass(frozen=True)
class PatternMetrics:
    measurements: int
    rounds: int
    area: int


def metrics(p: MeasurementPattern) -> PatternMetrics:
    return PatternMetrics(sum(len(r) for r in p.rounds), sum(1 for r in p.rounds if r), p.lattice.area)


# -- symbolic execution -------------------------------------------------------

class _Symbolic:
    """Frames ``K_v X^{a_v} Z^{b_v}``; forms are ints, bit 0 the constant."""

    def __init__(self, lattice: LatticeSpec):
        self.lattice = lattice
        self.graph = lattice.graph()
        self.K = {v: lc.IDENTITY for v in self.graph.vertices()}
        self.a = {v: 0 for v in self.graph.vertices()}
        self.b = {v: 0 for v in self.graph.vertices()}
        self.var_of: list[MeasId] = [CONST]

    def physical_basis(self, v: int, letter: str) -> str:
        """Physical basis whose graph-level counterpart is ``letter``."""
        return self.K[v].conj_letter(letter)[0]

    def measure(self, v: int, basis: str, mid: MeasId, pick: Callable[[Graph, int], int]) -> None:
        gl, s0 = self.K[v].inverse.conj_letter(basis)
        lx, lz = encode_pauli(gl)
        s = s0 ^ (self.b[v] if lx else 0) ^ (self.a[v] if lz else 0)
        var = 1 << len(self.var_of)
        self.var_of.append(mid)
        h, byp, det = rule_byproducts(self.graph, v, gl, pick)
        m = 0 if det else var ^ s
        for u, (u0, u1) in byp.items():
            vx, vz = lc.pauli_bits(u0.inverse @ u1)
            inv = u0.inverse
            ix, iz = inv.conj(1, 0), inv.conj(0, 1)
            a, b = self.a[u], self.b[u]
            na = (a if ix[0] else 0) ^ (b if iz[0] else 0)
            nb = (a if ix[1] else 0) ^ (b if iz[1] else 0)
            self.K[u] = self.K[u] @ u0
            self.a[u] = na ^ (m if vx else 0)
            self.b[u] = nb ^ (m if vz else 0)
        for d in (self.K, self.a, self.b):
            del d[v]
        self.graph = h

    def signal(self, form: int) -> Signal:
        return make_signal(self.var_of[j] for j in range(form.bit_length()) if form >> j & 1)


def _partner_pick(partner: dict[int, int], pending: set[int]) -> Callable[[Graph, int], int]:
    def pick(g: Graph, a: int) -> int:
        nb = g.neighbors(a)
        p = partner.get(a)
        if p is not None and p in nb:
            return p
        waiting = sorted(nb & pending)
        return waiting[0] if waiting else min(nb)
    return pick


def _run_plan(lattice: LatticeSpec, plan: Sequence[Sequence[tuple[Site, str]]], outputs: Sequence[Site],
              partner: dict[Site, Site] | None = None, allow_clifford: bool = False
              ) -> tuple[MeasurementPattern, Graph]:
    """Execute a plan of intended graph-level bases symbolically.

    Returns the pattern (physical bases plus derived corrections) and the
    graph left on the output sites, relabelled to output positions.
    """
    st = _Symbolic(lattice)
    idx = lattice.index
    part = {idx(a): idx(b) for a, b in (partner or {}).items()}
    rounds: list[list[MeasurementOp]] = []
    for r, plan_round in enumerate([pr for pr in plan if pr], start=1):
        ops = [MeasurementOp(site, st.physical_basis(idx(site), letter)) for site, letter in plan_round]
        pending = {idx(op.site) for op in ops}
        pick = _partner_pick(part, pending)
        for i, op in enumerate(ops, start=1):
            v = idx(op.site)
            pending.discard(v)
            st.measure(v, op.basis, (r, i), pick)
        rounds.append(ops)
    out_idx = [idx(s) for s in outputs]
    if sorted(out_idx) != st.graph.vertices():
        raise CompileError("unmeasured sites differ from the declared outputs")
    corrections: list[Correction] = []
    for site, v in zip(outputs, out_idx):
        k = st.K[v]
        if k.is_pauli:
            kx, kz = lc.pauli_bits(k)
            ax, bz = st.a[v] ^ kx, st.b[v] ^ kz
        elif allow_clifford:
            corrections += [Correction(site, gname, (CONST,)) for gname in k.inverse.gates]
            ax, bz = st.a[v], st.b[v]
        else:
            raise CompileError(f"output {site} ends with non-Pauli frame {k.name}")
        # state is K X^a Z^b |G>: undo K first, then the Pauli part
        if ax:
            corrections.append(Correction(site, "X", st.signal(ax)))
        if bz:
            corrections.append(Correction(site, "Z", st.signal(bz)))
    pos = {v: i for i, v in enumerate(out_idx)}
    final = Graph(range(len(out_idx)), [(pos[a], pos[b]) for a, b in st.graph.edges()])
    p = MeasurementPattern(lattice, rounds, corrections, list(outputs))
    p.validate()
    return p, final


# -- crossing gadget --------------------------------------------------------

CORNERS: tuple[Site, ...] = ((2, 2), (2, 4), (4, 2), (4, 4))
CROSS_ROW: tuple[Site, ...] = tuple((CENTER, c) for c in range(1, BLOCK + 1))
CROSS_COL: tuple[Site, ...] = tuple((r, CENTER) for r in range(1, BLOCK + 1))
GADGET_KEEP = frozenset(CROSS_ROW + CROSS_COL + CORNERS)


def _gadget_plan(origin: Site = (0, 0), omit: Sequence[Site] = ()) -> list[list[tuple[Site, str]]]:
    """Rounds for one 5x5 gadget: prune, corner Y, centre Y.  ``omit`` lists
    corners that are pruned instead, each leaving one cross edge."""
    r0, c0 = origin
    at = lambda s: (r0 + s[0], c0 + s[1])  # noqa: E731
    prune = [at((r, c)) for r in range(1, BLOCK + 1) for c in range(1, BLOCK + 1)
             if (r, c) not in GADGET_KEEP or (r, c) in omit]
    corners = [at(s) for s in CORNERS if s not in omit]
    return [[(s, "Z") for s in prune], [(s, "Y") for s in corners], [(at((CENTER, CENTER)), "Y")]]


def crossing_gadget() -> MeasurementPattern:
    """The 5x5 crossing fragment.

    Outputs are the row chain ``(3,1) (3,2) (3,4) (3,5)`` followed by the
    column chain ``(1,3) (2,3) (4,3) (5,3)``; after corrections the eight
    qubits hold two disjoint four-vertex path graph states.  The inner
    chain qubits carry static non-Pauli frames, so this fragment's
    corrections include unconditional ``S``/``H`` gates.
    """
    outputs = [s for s in CROSS_ROW if s != (CENTER, CENTER)] + [s for s in CROSS_COL if s != (CENTER, CENTER)]
    p, _ = _run_plan(LatticeSpec(BLOCK, BLOCK), _gadget_plan(), outputs, allow_clifford=True)
    return p


def gadget_target() -> Graph:
    return Graph(range(8), [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)])


# -- full compiler ----------------------------------------------------------

def _block_site(bi: int, bj: int, r: int, c: int) -> Site:
    return (BLOCK * bi + r, BLOCK * bj + c)


def _matching_complement(g: Graph) -> set[int]:
    """Vertices ``U`` (as indices) with ``G[U]`` a matching, taken greedily from the top."""
    n = len(g)
    chosen: set[int] = set()
    for v in reversed(range(n)):
        trial = chosen | {v}
        if all(sum(1 for u in trial if g.has_edge(w, u)) <= 1 for w in trial):
            chosen = trial
    return chosen


@dataclass
class _Layout:
    lattice: LatticeSpec
    plan: list[list[tuple[Site, str]]]
    outputs: list[Site]
    partner: dict[Site, Site]


def _standard_layout(g: Graph) -> _Layout:
    n = len(g)
    lattice = LatticeSpec(BLOCK * n, BLOCK * n)
    prune: list[Site] = []
    corner_y: list[Site] = []
    center_y: list[Site] = []
    arms: dict[int, list[list[Site]]] = {}
    outputs = [_block_site(i, i, CENTER, CENTER) for i in range(n)]
    for i in range(n):
        for j in range(n):
            at = lambda r, c: _block_site(i, j, r, c)  # noqa: E731
            cells = [(r, c) for r in range(1, BLOCK + 1) for c in range(1, BLOCK + 1)]
            if i < j:
                prune += [at(r, c) for r, c in cells]
            elif i == j:
                keep = {(CENTER, CENTER)}
                if i > 0:
                    keep |= {(CENTER, 1), (CENTER, 2)}
                if i < n - 1:
                    keep |= {(4, CENTER), (5, CENTER)}
                prune += [at(r, c) for r, c in cells if (r, c) not in keep]
            else:
                omit = [(2, 4)] if g.has_edge(g.vertices()[i], g.vertices()[j]) else []
                rounds = _gadget_plan((BLOCK * i, BLOCK * j), omit)
                prune += [s for s, _ in rounds[0]]
                corner_y += [s for s, _ in rounds[1]]
                center_y += [s for s, _ in rounds[2]]
    # arms walk outward from each output; the row arm of v_i runs left
    # through blocks (i, i-1) .. (i, 0), the column arm down through (i+1, i) .. (n-1, i)
    for i in range(n):
        row_arm: list[Site] = []
        if i > 0:
            row_arm += [_block_site(i, i, CENTER, 2), _block_site(i, i, CENTER, 1)]
            for j in reversed(range(i)):
                row_arm += [_block_site(i, j, CENTER, c) for c in (5, 4, 2, 1)]
        col_arm: list[Site] = []
        if i < n - 1:
            col_arm += [_block_site(i, i, 4, CENTER), _block_site(i, i, 5, CENTER)]
            for k in range(i + 1, n):
                col_arm += [_block_site(k, i, r, CENTER) for r in (1, 2, 4, 5)]
        arms[i] = [row_arm, col_arm]
    contraction: list[Site] = []
    partner: dict[Site, Site] = {}
    for i in range(n):
        for arm in arms[i]:
            for t in range(0, len(arm), 2):
                partner[arm[t]] = arm[t + 1]
            contraction += arm
    plan = [[(s, "Z") for s in prune], [(s, "Y") for s in corner_y],
            [(s, "Y") for s in center_y], [(s, "X") for s in contraction]]
    return _Layout(lattice, plan, outputs, partner)


def compile_graph(g: Graph, compact: bool = False) -> MeasurementPattern:
    """Measurement pattern whose corrected output is ``|g>``.

    Vertex ``i`` of the output is the ``i``-th smallest label of ``g``.
    """
    if len(g) < 1:
        raise ValueError("graph needs at least one vertex")
    layout = _compact_layout(g) if compact else _standard_layout(g)
    p, final = _run_plan(layout.lattice, layout.plan, layout.outputs, layout.partner)
    n, edges = g.indexed_edges()
    if final != Graph(range(n), edges):
        raise CompileError(f"layout produced {final.edges()} instead of {edges}")
    return p


def _compact_layout(g: Graph) -> _Layout:
    """Rows only for the vertices ``T`` whose complement ``U`` induces a matching.

    ``T`` vertices sit on the diagonal of a ``|T| x |T|`` block grid wired as
    in the standard layout, and each also sends a right arm across the ``U``
    columns.  ``U`` vertices sit in an extra bottom row of link blocks, send
    an arm upwards through every ``T`` row, and matched ``U`` pairs sit in
    adjacent columns joined by a short link.
    """
    verts = g.vertices()
    u_idx = _matching_complement(g)
    t_list = [i for i in range(len(verts)) if i not in u_idx]
    # matched pairs adjacent, then singles
    u_order: list[int] = []
    for i in sorted(u_idx):
        if i in u_order:
            continue
        u_order.append(i)
        mate = [j for j in sorted(u_idx) if j not in u_order and g.has_edge(verts[i], verts[j])]
        u_order += mate[:1]
    t, u = len(t_list), len(u_order)
    lattice = LatticeSpec(BLOCK * (t + 1), BLOCK * (t + u))
    has_edge = lambda i, j: g.has_edge(verts[i], verts[j])  # noqa: E731
    plan_z: list[Site] = []
    corner_y: list[Site] = []
    center_y: list[Site] = []
    outputs: dict[int, Site] = {}
    arms: list[list[Site]] = []
    cells = [(r, c) for r in range(1, BLOCK + 1) for c in range(1, BLOCK + 1)]

    def keep_only(bi: int, bj: int, keep: set[Site]) -> None:
        plan_z.extend(_block_site(bi, bj, r, c) for r, c in cells if (r, c) not in keep)

    def gadget(bi: int, bj: int, omit: list[Site]) -> None:
        rounds = _gadget_plan((BLOCK * bi, BLOCK * bj), omit)
        plan_z.extend(s for s, _ in rounds[0])
        corner_y.extend(s for s, _ in rounds[1])
        center_y.extend(s for s, _ in rounds[2])

    right = u > 0
    for bi, vi in enumerate(t_list):
        for bj in range(t + u):
            if bj < t:
                vj = t_list[bj]
                if bj == bi:
                    keep = {(CENTER, CENTER)}
                    if bi > 0:
                        keep |= {(CENTER, 1), (CENTER, 2)}
                    if bi < t - 1:
                        keep |= {(4, CENTER), (5, CENTER)}
                    if right:
                        keep |= {(CENTER, 4), (CENTER, 5)}
                    keep_only(bi, bj, keep)
                elif bj > bi:
                    if right:
                        # straight block: the right arm passes, centre Y keeps the length even
                        keep_only(bi, bj, set(CROSS_ROW))
                        center_y.append(_block_site(bi, bj, CENTER, CENTER))
                    else:
                        keep_only(bi, bj, set())
                else:
                    gadget(bi, bj, [(2, 4)] if has_edge(vi, vj) else [])
            else:
                vj = u_order[bj - t]
                gadget(bi, bj, [(4, 2)] if has_edge(vi, vj) else [])
    link = t
    for bj in range(t + u):
        if bj < t:
            keep_only(link, bj, set())
            continue
        c = bj - t
        keep = {(CENTER, CENTER)}
        if t > 0:
            keep |= {(2, CENTER), (1, CENTER)}
        vc = u_order[c]
        if c + 1 < u and has_edge(vc, u_order[c + 1]):
            keep |= {(CENTER, 4), (CENTER, 5)}
        if c > 0 and has_edge(u_order[c - 1], vc):
            keep |= {(CENTER, 1), (CENTER, 2)}
        keep_only(link, bj, keep)
    for bi, vi in enumerate(t_list):
        outputs[vi] = _block_site(bi, bi, CENTER, CENTER)
        row_arm: list[Site] = []
        if bi > 0:
            row_arm += [_block_site(bi, bi, CENTER, 2), _block_site(bi, bi, CENTER, 1)]
            for bj in reversed(range(bi)):
                row_arm += [_block_site(bi, bj, CENTER, cc) for cc in (5, 4, 2, 1)]
        col_arm: list[Site] = []
        if bi < t - 1:
            col_arm += [_block_site(bi, bi, 4, CENTER), _block_site(bi, bi, 5, CENTER)]
            for k in range(bi + 1, t):
                col_arm += [_block_site(k, bi, r, CENTER) for r in (1, 2, 4, 5)]
        right_arm: list[Site] = []
        if right:
            right_arm += [_block_site(bi, bi, CENTER, 4), _block_site(bi, bi, CENTER, 5)]
            for bj in range(bi + 1, t + u):
                right_arm += [_block_site(bi, bj, CENTER, cc) for cc in (1, 2, 4, 5)]
        arms += [row_arm, col_arm, right_arm]
    for c, vc in enumerate(u_order):
        bj = t + c
        outputs[vc] = _block_site(link, bj, CENTER, CENTER)
        up: list[Site] = []
        if t > 0:
            up += [_block_site(link, bj, 2, CENTER), _block_site(link, bj, 1, CENTER)]
            for k in reversed(range(t)):
                up += [_block_site(k, bj, r, CENTER) for r in (5, 4, 2, 1)]
        arms.append(up)
        if c + 1 < u and has_edge(vc, u_order[c + 1]):
            arms.append([_block_site(link, bj, CENTER, 4), _block_site(link, bj, CENTER, 5),
                         _block_site(link, bj + 1, CENTER, 1), _block_site(link, bj + 1, CENTER, 2)])
    contraction: list[Site] = []
    partner: dict[Site, Site] = {}
    for arm in arms:
        for k in range(0, len(arm), 2):
            partner[arm[k]] = arm[k + 1]
        contraction += arm
    plan = [[(s, "Z") for s in plan_z], [(s, "Y") for s in corner_y],
            [(s, "Y") for s in center_y], [(s, "X") for s in contraction]]
    return _Layout(lattice, plan, [outputs[i] for i in range(len(verts))], partner)


# -- text format ----------------------------------------------------------------

def _fmt_ids(sig: Signal) -> str:
    return ",".join("1" if i == CONST else f"m{i[0]}.{i[1]}" for i in sig)


def serialize(p: MeasurementPattern) -> str:
    out = [f"lattice {p.lattice.rows} {p.lattice.cols}"]
    out += [f"O {r} {c}" for r, c in p.outputs]
    for k, ops in enumerate(p.rounds, start=1):
        out.append(f"round {k}")
        for op in ops:
            rec = f"M {op.site[0]} {op.site[1]} {op.basis}"
            if op.flip:
                rec += " flip:" + _fmt_ids(op.flip)
            if op.sign:
                rec += " sign:" + _fmt_ids(op.sign)
            out.append(rec)
    out += [f"C {c.site[0]} {c.site[1]} {c.gate} {_fmt_ids(c.signal)}" for c in p.corrections]
    return "\n".join(out) + "\n"


_ID = re.compile(r"m(\d+)\.(\d+)$")


def _tokens(line: str) -> list[tuple[int, str]]:
    """Whitespace-separated tokens with their 1-based columns."""
    return [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]


def parse(text: str, path: str | None = None) -> MeasurementPattern:
    """Inverse of :func:`serialize`; errors carry line and column."""
    lattice: LatticeSpec | None = None
    rounds: list[list[MeasurementOp]] = []
    corrections: list[Correction] = []
    outputs: list[Site] = []

    def fail(msg: str, line: int, col: int):
        raise ParseError(msg, line, col, path)

    def ids(tok: str, col: int, line: int, current_round: int | None) -> Signal:
        out = []
        for part in tok.split(","):
            if part == "1":
                out.append(CONST)
                continue
            m = _ID.match(part)
            if not m:
                fail(f"bad outcome id {part!r}", line, col)
            ref = (int(m.group(1)), int(m.group(2)))
            limit = current_round if current_round is not None else len(rounds) + 1
            if not (1 <= ref[0] < limit) or not (1 <= ref[1] <= len(rounds[ref[0] - 1])):
                fail(f"signal {part} does not refer to an earlier measurement", line, col)
            out.append(ref)
        if len(set(out)) != len(out):
            fail("repeated id in signal", line, col)
        if tuple(out) != make_signal(out):
            fail("signal ids must be sorted", line, col)
        return tuple(out)

    def site(toks, line) -> Site:
        try:
            r, c = int(toks[1][1]), int(toks[2][1])
        except ValueError:
            fail("site coordinates must be integers", line, toks[1][0])
        if lattice is None:
            fail("record before 'lattice' header", line, 1)
        if not (1 <= r <= lattice.rows and 1 <= c <= lattice.cols):
            fail(f"site ({r}, {c}) outside the lattice", line, toks[1][0])
        return r, c

    in_corrections = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if not toks or toks[0][1].startswith("#"):
            continue
        kind = toks[0][1]
        if lattice is None:
            if kind != "lattice" or len(toks) != 3:
                fail("first record must be 'lattice R C'", lineno, 1)
            try:
                lattice = LatticeSpec(int(toks[1][1]), int(toks[2][1]))
            except ValueError:
                fail("lattice dimensions must be positive integers", lineno, toks[1][0])
            continue
        if kind == "O":
            if rounds or len(toks) != 3:
                fail("'O r c' records must precede the rounds", lineno, 1)
            outputs.append(site(toks, lineno))
        elif kind == "round":
            if in_corrections or len(toks) != 2 or toks[1][1] != str(len(rounds) + 1):
                fail(f"expected 'round {len(rounds) + 1}'", lineno, 1)
            rounds.append([])
        elif kind == "M":
            if not rounds or in_corrections:
                fail("measurement outside a round", lineno, 1)
            if not 4 <= len(toks) <= 6:
                fail("measurement record is 'M r c BASIS [flip:ids] [sign:ids]'", lineno, 1)
            s = site(toks, lineno)
            if toks[3][1] not in BASES:
                fail(f"unknown basis {toks[3][1]!r}", lineno, toks[3][0])
            flip: Signal = ()
            sign: Signal = ()
            seen = []
            for col, tok in toks[4:]:
                key, _, val = tok.partition(":")
                if key not in ("flip", "sign") or not val or key in seen or (key == "flip" and "sign" in seen):
                    fail(f"unexpected field {tok!r}", lineno, col)
                seen.append(key)
                sig = ids(val, col + len(key) + 1, lineno, len(rounds))
                if key == "flip":
                    flip = sig
                else:
                    sign = sig
            rounds[-1].append(MeasurementOp(s, toks[3][1], flip, sign))
        elif kind == "C":
            in_corrections = True
            if len(toks) != 5:
                fail("correction record is 'C r c GATE ids'", lineno, 1)
            s = site(toks, lineno)
            if toks[3][1] not in CORRECTION_GATES:
                fail(f"unknown correction gate {toks[3][1]!r}", lineno, toks[3][0])
            corrections.append(Correction(s, toks[3][1], ids(toks[4][1], toks[4][0], lineno, None)))
        else:
            fail(f"unknown record {kind!r}", lineno, toks[0][0])
    if lattice is None:
        raise ParseError("empty pattern file", 0, 0, path)
    p = MeasurementPattern(lattice, rounds, corrections, outputs)
    try:
        p.validate()
    except (ValueError, IndexError) as e:
        raise ParseError(str(e), 0, 0, path) from None
    return p


def empty_pattern() -> MeasurementPattern:
    """A 1x1 lattice with its single site as output."""
    return MeasurementPattern(LatticeSpec(1, 1), [], [], [(1, 1)])
