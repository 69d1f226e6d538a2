"""Dense statevector oracle for small systems.

Amplitude index bit ``q`` is qubit ``q``.  Used only to cross-check the
tableau and the graph rewrite engine, so clarity wins over speed.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from .symplectic import DimensionError, PauliOp

MAX_QUBITS = 12

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j])
_SINGLE = {
    "H": _H,
    "S": _S,
    "SDG": _S.conj(),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1.0 + 0j, -1.0]),
}


class OracleTooLarge(ValueError):
    pass


def _guard(n: int) -> None:
    if n > MAX_QUBITS:
        raise OracleTooLarge(f"statevector oracle limited to {MAX_QUBITS} qubits, got {n}")


class StateVector:
    def __init__(self, n: int, amps: np.ndarray | None = None):
        _guard(n)
        self.n = n
        if amps is None:
            amps = np.zeros(2 ** n, dtype=complex)
            amps[0] = 1.0
        self.amps = np.asarray(amps, dtype=complex)

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps.copy())

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def apply1(self, gate: str | np.ndarray, q: int) -> "StateVector":
        m = _SINGLE[gate.upper()] if isinstance(gate, str) else gate
        v = self.amps.reshape(2 ** (self.n - 1 - q), 2, 2 ** q)
        self.amps = np.einsum("ab,ibj->iaj", m, v).reshape(-1)
        return self

    def cz(self, a: int, b: int) -> "StateVector":
        idx = np.arange(2 ** self.n)
        self.amps = np.where(((idx >> a) & (idx >> b) & 1) == 1, -self.amps, self.amps)
        return self

    def cnot(self, c: int, t: int) -> "StateVector":
        idx = np.arange(2 ** self.n)
        src = np.where((idx >> c) & 1 == 1, idx ^ (1 << t), idx)
        self.amps = self.amps[src]
        return self

    def apply(self, gate: str, *sites: int) -> "StateVector":
        g = gate.upper()
        if g == "CZ":
            return self.cz(*sites)
        if g in ("CNOT", "CX"):
            return self.cnot(*sites)
        return self.apply1(g, sites[0])

    def apply_pauli(self, p: PauliOp) -> "StateVector":
        self.amps = pauli_action(p, self.amps)
        return self

    def expectation(self, p: PauliOp) -> float:
        return float(np.real(np.vdot(self.amps, pauli_action(p, self.amps))))

    def project(self, p: PauliOp, outcome: int) -> float:
        """Project onto the ``(-1)**outcome`` eigenspace of ``p``; returns the probability."""
        pv = pauli_action(p, self.amps)
        new = 0.5 * (self.amps + (-1) ** outcome * pv)
        prob = float(np.vdot(new, new).real)
        if prob > 1e-12:
            new = new / np.sqrt(prob)
        self.amps = new
        return prob

    def measure(self, p: PauliOp, rng: np.random.Generator, forced: int | None = None) -> tuple[int, float]:
        """Sample (or force) an outcome; returns ``(bit, probability of +1 branch)``."""
        p0 = 0.5 * (1 + self.expectation(p))
        if forced is None:
            out = int(rng.random() >= p0)
        else:
            out = forced
        self.project(p, out)
        return out, p0

    def canonical(self) -> np.ndarray:
        """Amplitudes with global phase fixed: first nonzero entry real positive."""
        return canonical_phase(self.amps)


def pauli_action(p: PauliOp, amps: np.ndarray) -> np.ndarray:
    """``P|psi>`` computed by index arithmetic."""
    n = p.n
    _guard(n)
    idx = np.arange(2 ** n)
    # sigma(x,z) = i^{x.z} X^x Z^z ; Z^z acts first
    zsign = np.array([bin(b & p.z).count("1") & 1 for b in range(2 ** n)])
    yphase = bin(p.x & p.z).count("1")
    out = np.empty_like(amps)
    out[idx ^ p.x] = amps * ((-1.0) ** zsign)
    return (1j ** ((p.phase + yphase) % 4)) * out


def canonical_phase(amps: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    nz = np.nonzero(np.abs(amps) > tol)[0]
    if nz.size == 0:
        return amps.copy()
    ph = amps[nz[0]] / abs(amps[nz[0]])
    return amps / ph


def same_ray(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    """Equal up to global phase, both assumed normalised."""
    return abs(abs(np.vdot(a, b)) - 1.0) < tol and np.allclose(canonical_phase(a), canonical_phase(b), atol=tol)


def quadratic_form(n: int, edges: Iterable[tuple[int, int]], x: Sequence[int]) -> int:
    """``sum_{(i,j) in E} x_i x_j mod 2``."""
    if len(x) != n:
        raise DimensionError(f"bit vector has length {len(x)}, graph has {n} vertices")
    return sum(x[i] & x[j] for i, j in edges) & 1


def statevector_graph(n: int, edges: Sequence[tuple[int, int]]) -> StateVector:
    """``2^{-n/2} sum_x (-1)^{q(x)} |x>``."""
    _guard(n)
    edges = list(edges)
    amps = np.empty(2 ** n, dtype=complex)
    for b in range(2 ** n):
        bits = [(b >> q) & 1 for q in range(n)]
        amps[b] = (-1) ** quadratic_form(n, edges, bits)
    return StateVector(n, amps / np.sqrt(2 ** n))


def state_from_stabilizers(gens: Sequence[PauliOp]) -> StateVector:
    """The unique (up to phase) joint +1 eigenvector of ``gens``."""
    n = gens[0].n
    _guard(n)
    rng = np.random.default_rng(12345)
    v = rng.normal(size=2 ** n) + 1j * rng.normal(size=2 ** n)
    for g in gens:
        v = 0.5 * (v + pauli_action(g, v))
    v = v / np.linalg.norm(v)
    return StateVector(n, canonical_phase(v))


def to_statevector(t) -> StateVector:
    """Statevector of a tableau (global phase canonicalised)."""
    return state_from_stabilizers(t.stabilizers())
