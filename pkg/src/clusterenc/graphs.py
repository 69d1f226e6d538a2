"""Simple undirected graphs with integer vertex labels."""

from __future__ import annotations

from typing import Iterable

from .symplectic import ParseError


class Graph:
    def __init__(self, vertices: Iterable[int] = (), edges: Iterable[tuple[int, int]] = ()):
        self._adj: dict[int, set[int]] = {v: set() for v in vertices}
        for a, b in edges:
            self.add_edge(a, b)

    @classmethod
    def from_adjacency(cls, adj: dict[int, Iterable[int]]) -> "Graph":
        g = cls(adj)
        for a, nbrs in adj.items():
            for b in nbrs:
                g.add_edge(a, b)
        return g

    @classmethod
    def path(cls, n: int) -> "Graph":
        return cls(range(n), [(i, i + 1) for i in range(n - 1)])

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(range(n), [(i, j) for i in range(n) for j in range(i + 1, n)])

    @classmethod
    def grid(cls, rows: int, cols: int) -> "Graph":
        """Vertex ``r*cols + c`` at 0-based ``(r, c)``."""
        g = cls(range(rows * cols))
        for r in range(rows):
            for c in range(cols):
                v = r * cols + c
                if c + 1 < cols:
                    g.add_edge(v, v + 1)
                if r + 1 < rows:
                    g.add_edge(v, v + cols)
        return g

    def copy(self) -> "Graph":
        g = Graph.__new__(Graph)
        g._adj = {v: set(n) for v, n in self._adj.items()}
        return g

    def __contains__(self, v: int) -> bool:
        return v in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self._adj == other._adj

    def __repr__(self) -> str:
        return f"Graph(vertices={self.vertices()}, edges={self.edges()})"

    def vertices(self) -> list[int]:
        return sorted(self._adj)

    def edges(self) -> list[tuple[int, int]]:
        return sorted((a, b) for a, n in self._adj.items() for b in n if a < b)

    def neighbors(self, v: int) -> set[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, a: int, b: int) -> bool:
        return b in self._adj.get(a, ())

    def add_vertex(self, v: int) -> None:
        self._adj.setdefault(v, set())

    def add_edge(self, a: int, b: int) -> None:
        if a == b:
            raise ValueError(f"self-loop at {a}")
        self._adj.setdefault(a, set()).add(b)
        self._adj.setdefault(b, set()).add(a)

    def toggle_edge(self, a: int, b: int) -> None:
        if b in self._adj[a]:
            self._adj[a].discard(b)
            self._adj[b].discard(a)
        else:
            self.add_edge(a, b)

    def remove_vertex(self, v: int) -> None:
        for u in self._adj.pop(v):
            self._adj[u].discard(v)

    def relabel(self, mapping: dict[int, int]) -> "Graph":
        return Graph((mapping[v] for v in self._adj),
                     ((mapping[a], mapping[b]) for a, b in self.edges()))

    def induced(self, vs: Iterable[int]) -> "Graph":
        keep = set(vs)
        return Graph(keep, [(a, b) for a, b in self.edges() if a in keep and b in keep])

    def indexed_edges(self) -> tuple[int, list[tuple[int, int]]]:
        """Vertex count and edges relabelled onto ``0..n-1`` in sorted label order."""
        pos = {v: i for i, v in enumerate(self.vertices())}
        return len(pos), [(pos[a], pos[b]) for a, b in self.edges()]


def local_complement(g: Graph, a: int) -> Graph:
    """Toggle every edge among the neighbours of ``a``."""
    if a not in g:
        raise KeyError(f"unknown vertex {a}")
    out = g.copy()
    nb = sorted(g.neighbors(a))
    for i, u in enumerate(nb):
        for w in nb[i + 1:]:
            out.toggle_edge(u, w)
    return out


def format_graph(g: Graph) -> str:
    """``n m`` header and 1-based ``i j`` edge lines; vertices must be ``0..n-1``."""
    if g.vertices() != list(range(len(g))):
        raise ValueError("graph text format needs vertices labelled 0..n-1")
    lines = [f"{len(g)} {len(g.edges())}"]
    lines += [f"{a + 1} {b + 1}" for a, b in g.edges()]
    return "\n".join(lines) + "\n"


def parse_graph(text: str, path: str | None = None) -> Graph:
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), start=1)
             if ln.strip() and not ln.strip().startswith("#")]
    if not lines:
        raise ParseError("empty graph file", 0, 0, path)
    lineno, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ParseError("header must be 'n m'", lineno, 1, path)
    n, m = map(int, parts)
    if len(lines) - 1 != m:
        raise ParseError(f"expected {m} edge lines, found {len(lines) - 1}", lineno, 1, path)
    g = Graph(range(n))
    for lineno, line in lines[1:]:
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ParseError("edge line must be 'i j'", lineno, 1, path)
        i, j = map(int, parts)
        if not (1 <= i < j <= n):
            raise ParseError(f"edge ({i}, {j}) needs 1 <= i < j <= {n}", lineno, 1, path)
        if g.has_edge(i - 1, j - 1):
            raise ParseError(f"duplicate edge ({i}, {j})", lineno, 1, path)
        g.add_edge(i - 1, j - 1)
    return g


def to_dot(g: Graph, name: str = "G", inputs: Iterable[int] = ()) -> str:
    inputs = set(inputs)
    out = [f"graph {name} {{"]
    for v in g.vertices():
        if v in inputs:
            out.append(f'  {v} [label="in{v}", shape=box, style=filled, fillcolor=lightgray];')
        else:
            out.append(f'  {v} [label="{v + 1}"];')
    out += [f"  {a} -- {b};" for a, b in g.edges()]
    out.append("}")
    return "\n".join(out) + "\n"
