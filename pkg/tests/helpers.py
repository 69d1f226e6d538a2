from __future__ import annotations

from pathlib import Path

import numpy as np

from clusterenc.graphs import Graph
from clusterenc.symplectic import CheckMatrix, PauliOp
from clusterenc.tableau import Tableau, prepare_graph_state

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text()


def random_graph(n: int, rng: np.random.Generator, p: float = 0.5) -> Graph:
    g = Graph(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                g.add_edge(i, j)
    return g


def random_state(n: int, rng: np.random.Generator) -> Tableau:
    """A random stabilizer state: graph state, random local Cliffords, a few CNOTs."""
    g = random_graph(n, rng)
    t = prepare_graph_state(*g.indexed_edges())
    for q in range(n):
        for gate in rng.choice(["H", "S", "X", "Z", "I"], 3):
            if gate != "I":
                t.apply(str(gate), q)
    for _ in range(n if n > 1 else 0):
        a, b = rng.choice(n, 2, replace=False)
        t.cnot(int(a), int(b))
    return t


def random_code(n: int, d: int, rng: np.random.Generator) -> CheckMatrix:
    """``d`` generators of a random stabilizer state, signs kept."""
    st = random_state(n, rng).stabilizers()[:d]
    return CheckMatrix(n, [PauliOp(n, p.x, p.z) for p in st], [p.sign for p in st])


def random_circuit(n: int, depth: int, rng: np.random.Generator) -> list[tuple[str, tuple[int, ...]]]:
    ops = []
    for _ in range(depth):
        if n > 1 and rng.random() < 0.35:
            a, b = (int(v) for v in rng.choice(n, 2, replace=False))
            ops.append((str(rng.choice(["CNOT", "CZ"])), (a, b)))
        else:
            ops.append((str(rng.choice(["H", "S", "SDG", "X", "Y", "Z"])), (int(rng.integers(n)),)))
    return ops
