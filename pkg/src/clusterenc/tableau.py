"""Stabilizer tableau simulator with destabilizers and sign bits.

Rows ``0..n-1`` are destabilizers, rows ``n..2n-1`` stabilizers.  Bits are
packed column-wise into ``uint64`` words so that every gate is a handful of
vectorised operations over all rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .local_clifford import LocalClifford
from .symplectic import BitMatrix, DimensionError, PauliOp, multiply, pauli_row, rref, symplectic_product

_ONE = np.uint64(1)


class ScriptContradiction(RuntimeError):
    """A forced outcome disagrees with a deterministic measurement."""


class ScriptExhausted(RuntimeError):
    pass


@dataclass
class OutcomeSource:
    """Supplies measurement outcomes: seeded random bits or a fixed script.

    In script mode every measurement consumes one bit, deterministic ones
    included; a scripted bit that contradicts a forced outcome raises.
    """

    mode: str = "random"
    seed: int | None = None
    script: Sequence[int] = ()
    _rng: np.random.Generator = field(init=False, repr=False)
    _pos: int = field(default=0, init=False, repr=False)

    def __post_init__(self):
        if self.mode not in ("random", "script"):
            raise ValueError(f"unknown outcome mode {self.mode!r}")
        self._rng = np.random.default_rng(self.seed)

    @classmethod
    def seeded(cls, seed: int | None) -> "OutcomeSource":
        return cls("random", seed=seed)

    @classmethod
    def forced(cls, bits: Iterable[int]) -> "OutcomeSource":
        return cls("script", script=tuple(int(b) & 1 for b in bits))

    def draw(self, forced: int | None = None) -> int:
        if self.mode == "random":
            if forced is not None:
                return forced
            return int(self._rng.integers(2))
        if self._pos >= len(self.script):
            raise ScriptExhausted(f"outcome script exhausted after {self._pos} bits")
        bit = self.script[self._pos]
        self._pos += 1
        if forced is not None and bit != forced:
            raise ScriptContradiction(
                f"scripted outcome {bit} at position {self._pos - 1} contradicts deterministic outcome {forced}")
        return bit


def _popcount_rows(a: np.ndarray) -> np.ndarray:
    return np.bitwise_count(a).sum(axis=-1, dtype=np.int64)


class Tableau:
    """Stabilizer state on ``n`` qubits."""

    def __init__(self, n: int):
        if n < 1:
            raise DimensionError("tableau needs at least one qubit")
        self.n = n
        self.words = (n + 63) // 64
        self.x = np.zeros((2 * n, self.words), dtype=np.uint64)
        self.z = np.zeros((2 * n, self.words), dtype=np.uint64)
        self.r = np.zeros(2 * n, dtype=np.uint8)
        for q in range(n):
            w, b = divmod(q, 64)
            self.x[q, w] = _ONE << np.uint64(b)
            self.z[n + q, w] = _ONE << np.uint64(b)

    # -- construction -----------------------------------------------------

    def copy(self) -> "Tableau":
        t = Tableau.__new__(Tableau)
        t.n, t.words = self.n, self.words
        t.x, t.z, t.r = self.x.copy(), self.z.copy(), self.r.copy()
        return t

    @classmethod
    def from_graph(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Tableau":
        """Graph state directly: stabilizers ``X_v Z_N(v)``, destabilizers ``Z_v``."""
        t = cls(n)
        t.x[:] = 0
        t.z[:] = 0
        for q in range(n):
            w, b = divmod(q, 64)
            t.z[q, w] = _ONE << np.uint64(b)
            t.x[n + q, w] = _ONE << np.uint64(b)
        for a, b in edges:
            if a == b:
                raise ValueError("self-loop")
            wa, ba = divmod(a, 64)
            wb, bb = divmod(b, 64)
            t.z[n + a, wb] ^= _ONE << np.uint64(bb)
            t.z[n + b, wa] ^= _ONE << np.uint64(ba)
        return t

    @classmethod
    def from_stabilizers(cls, gens: Sequence[PauliOp]) -> "Tableau":
        """Complete ``n`` independent commuting Hermitian generators with destabilizers."""
        if not gens:
            raise DimensionError("no generators")
        n = gens[0].n
        if len(gens) != n:
            raise DimensionError(f"need {n} generators, got {len(gens)}")
        stabs = list(gens)
        if BitMatrix(n, 2 * n, [pauli_row(g) for g in stabs]).rank() != n:
            raise ValueError("generators are dependent")
        for i in range(n):
            for j in range(i + 1, n):
                if symplectic_product(stabs[i], stabs[j]):
                    raise ValueError("generators do not commute")
        destabs = _destabilizers(stabs)
        t = cls(n)
        t.x[:] = 0
        t.z[:] = 0
        for i, p in enumerate(destabs + stabs):
            t._set_row(i, p)
        return t

    # -- row access -------------------------------------------------------

    def _set_row(self, i: int, p: PauliOp) -> None:
        for w in range(self.words):
            self.x[i, w] = np.uint64((p.x >> (64 * w)) & 0xFFFFFFFFFFFFFFFF)
            self.z[i, w] = np.uint64((p.z >> (64 * w)) & 0xFFFFFFFFFFFFFFFF)
        self.r[i] = p.sign

    def row(self, i: int) -> PauliOp:
        x = z = 0
        for w in range(self.words):
            x |= int(self.x[i, w]) << (64 * w)
            z |= int(self.z[i, w]) << (64 * w)
        return PauliOp(self.n, x, z, 2 * int(self.r[i]))

    def stabilizers(self) -> list[PauliOp]:
        return [self.row(self.n + i) for i in range(self.n)]

    def destabilizers(self) -> list[PauliOp]:
        return [self.row(i) for i in range(self.n)]

    # -- gates ------------------------------------------------------------

    def _col(self, q: int) -> tuple[int, np.uint64]:
        if not 0 <= q < self.n:
            raise IndexError(f"qubit {q} out of range for {self.n} qubits")
        w, b = divmod(q, 64)
        return w, np.uint64(b)

    def _bits(self, q: int):
        w, b = self._col(q)
        return ((self.x[:, w] >> b) & _ONE).astype(np.uint8), ((self.z[:, w] >> b) & _ONE).astype(np.uint8)

    def _toggle_x(self, q: int, mask: np.ndarray) -> None:
        w, b = self._col(q)
        self.x[:, w] ^= mask.astype(np.uint64) << b

    def _toggle_z(self, q: int, mask: np.ndarray) -> None:
        w, b = self._col(q)
        self.z[:, w] ^= mask.astype(np.uint64) << b

    def _flip_signs(self, rows: np.ndarray) -> None:
        self.r ^= rows

    def h(self, q: int) -> None:
        xq, zq = self._bits(q)
        self._flip_signs(xq & zq)
        diff = xq ^ zq
        self._toggle_x(q, diff)
        self._toggle_z(q, diff)

    def s(self, q: int) -> None:
        xq, zq = self._bits(q)
        self._flip_signs(xq & zq)
        self._toggle_z(q, xq)

    def pauli_x(self, q: int) -> None:
        self._flip_signs(self._bits(q)[1])

    def pauli_z(self, q: int) -> None:
        self._flip_signs(self._bits(q)[0])

    def pauli_y(self, q: int) -> None:
        xq, zq = self._bits(q)
        self._flip_signs(xq ^ zq)

    def cnot(self, c: int, t: int) -> None:
        if c == t:
            raise ValueError("CNOT needs distinct qubits")
        xc, zc = self._bits(c)
        xt, zt = self._bits(t)
        self._flip_signs(xc & zt & (xt ^ zc ^ 1))
        self._toggle_x(t, xc)
        self._toggle_z(c, zt)

    def cz(self, a: int, b: int) -> None:
        if a == b:
            raise ValueError("CZ needs distinct qubits")
        xa, za = self._bits(a)
        xb, zb = self._bits(b)
        self._flip_signs(xa & xb & (za ^ zb))
        self._toggle_z(a, xb)
        self._toggle_z(b, xa)

    _GATES1 = {"H": "h", "S": "s", "X": "pauli_x", "Y": "pauli_y", "Z": "pauli_z"}

    def apply(self, gate: str, *sites: int) -> "Tableau":
        gate = gate.upper()
        if gate in self._GATES1:
            if len(sites) != 1:
                raise ValueError(f"{gate} acts on one qubit")
            getattr(self, self._GATES1[gate])(sites[0])
        elif gate == "SDG":
            for _ in range(3):
                self.s(sites[0])
        elif gate in ("CNOT", "CX"):
            self.cnot(*sites)
        elif gate == "CZ":
            self.cz(*sites)
        else:
            raise ValueError(f"unknown gate {gate!r}")
        return self

    def apply_local(self, q: int, c: LocalClifford) -> None:
        for g in c.gates:
            self.apply(g, q)

    def apply_pauli(self, p: PauliOp) -> None:
        """Conjugate by a Pauli: flips signs of anticommuting rows."""
        self.r ^= self._anticommuting(p)

    # -- measurement ------------------------------------------------------

    def _packed(self, v: int) -> np.ndarray:
        return np.array([(v >> (64 * w)) & 0xFFFFFFFFFFFFFFFF for w in range(self.words)], dtype=np.uint64)

    def _anticommuting(self, p: PauliOp) -> np.ndarray:
        if p.n != self.n:
            raise DimensionError("Pauli size differs from tableau")
        px, pz = self._packed(p.x), self._packed(p.z)
        cnt = _popcount_rows((self.x & pz) ^ (self.z & px))
        return (cnt & 1).astype(np.uint8)

    def _rowsum_into(self, targets: np.ndarray, src: int) -> None:
        """``row[t] <- row[src] * row[t]`` for every target row, phases exact."""
        if targets.size == 0:
            return
        x1, z1 = self.x[src], self.z[src]
        x2, z2 = self.x[targets], self.z[targets]
        plus = (x1 & z1 & z2 & ~x2) | (x1 & ~z1 & z2 & x2) | (~x1 & z1 & x2 & ~z2)
        minus = (x1 & z1 & x2 & ~z2) | (x1 & ~z1 & z2 & ~x2) | (~x1 & z1 & x2 & z2)
        g = _popcount_rows(plus) - _popcount_rows(minus)
        tot = (2 * self.r[targets].astype(np.int64) + 2 * int(self.r[src]) + g) % 4
        self.r[targets] = (tot >> 1).astype(np.uint8)
        self.x[targets] = x2 ^ x1
        self.z[targets] = z2 ^ z1

    def _deterministic_value(self, p: PauliOp, anti: np.ndarray) -> int:
        """Sign of ``p`` within the group, given it commutes with all stabilizers."""
        acc = PauliOp(self.n)
        for i in np.nonzero(anti[: self.n])[0]:
            acc = multiply(acc, self.row(self.n + int(i)))
        if not acc.same_bits(p):
            raise AssertionError("observable not in stabilizer group")
        return ((acc.phase - p.phase) % 4) >> 1

    def expectation(self, p: PauliOp) -> int:
        """+1 if ``p`` itself (sign included) is in the group, -1 if ``-p`` is, else 0."""
        anti = self._anticommuting(p)
        if anti[self.n:].any():
            return 0
        return -1 if self._deterministic_value(p, anti) else 1

    def measure_observable(self, p: PauliOp, src: OutcomeSource | None = None,
                           _anti: np.ndarray | None = None) -> tuple[int, bool]:
        """Measure a Hermitian Pauli; returns ``(outcome bit, deterministic)``."""
        if p.phase & 1:
            raise ValueError("observable must be Hermitian")
        src = src or OutcomeSource.seeded(None)
        anti = self._anticommuting(p) if _anti is None else _anti
        stab_hits = np.nonzero(anti[self.n:])[0]
        if stab_hits.size == 0:
            val = self._deterministic_value(p, anti)
            return src.draw(val), True
        piv = self.n + int(stab_hits[0])
        others = np.nonzero(anti)[0]
        others = others[others != piv]
        self._rowsum_into(others, piv)
        self.x[piv - self.n] = self.x[piv]
        self.z[piv - self.n] = self.z[piv]
        self.r[piv - self.n] = self.r[piv]
        outcome = src.draw(None)
        self._set_row(piv, PauliOp(self.n, p.x, p.z, p.phase + 2 * outcome))
        return outcome, False

    def measure(self, basis: str, site: int, src: OutcomeSource | None = None) -> tuple[int, bool]:
        basis = basis.upper()
        xq, zq = self._bits(site)
        anti = {"X": zq, "Z": xq, "Y": xq ^ zq}[basis]
        return self.measure_observable(PauliOp.single(self.n, site, basis), src, anti)

    # -- comparison / extraction -----------------------------------------

    def equivalent(self, other: "Tableau") -> bool:
        if other.n != self.n:
            raise DimensionError("tableau sizes differ")
        return all(other.expectation(g) == 1 for g in self.stabilizers())

    def restrict(self, keep: Sequence[int], measured: dict[int, tuple[str, int]]) -> "Tableau":
        """State of the ``keep`` qubits once every other qubit sits in a measured eigenstate.

        ``measured`` maps each other qubit to ``(basis letter, outcome)``.
        """
        if set(keep) | set(measured) != set(range(self.n)) or set(keep) & set(measured):
            raise ValueError("keep and measured must partition the qubits")
        mx = mz = flip = 0
        for q, (letter, out) in measured.items():
            p = PauliOp.single(self.n, q, letter)
            mx |= p.x
            mz |= p.z
            if out:
                flip |= 1 << q
        keep_mask = _mask(keep)
        reduced: list[PauliOp] = []
        for st in self.stabilizers():
            supp = (st.x | st.z) & ~keep_mask
            if (st.x ^ mx) & supp or (st.z ^ mz) & supp:
                raise AssertionError("stabilizer not aligned with measured bases")
            sign = st.sign ^ (bin(supp & flip).count("1") & 1)
            nx = nz = 0
            for j, q in enumerate(keep):
                nx |= ((st.x >> q) & 1) << j
                nz |= ((st.z >> q) & 1) << j
            reduced.append(PauliOp(len(keep), nx, nz, 2 * sign))
        return Tableau.from_stabilizers(_independent(reduced))

    def check_matrix_text(self) -> str:
        from .symplectic import CheckMatrix, format_check_matrix

        st = self.stabilizers()
        return format_check_matrix(CheckMatrix(self.n, [p.unsigned() for p in st], [p.sign for p in st]))


def _mask(qs: Iterable[int]) -> int:
    m = 0
    for q in qs:
        m |= 1 << q
    return m


def _independent(paulis: Sequence[PauliOp]) -> list[PauliOp]:
    """A maximal independent subset, spanning the same signed group."""
    if not paulis:
        return []
    n = paulis[0].n
    out: list[PauliOp] = []
    basis: dict[int, int] = {}  # pivot bit -> row
    for p in paulis:
        v = pauli_row(p)
        for piv, row in basis.items():
            if v >> piv & 1:
                v ^= row
        if v:
            piv = v.bit_length() - 1
            for k in list(basis):
                if basis[k] >> piv & 1:
                    basis[k] ^= v
            basis[piv] = v
            out.append(p)
    return out


def _destabilizers(stabs: Sequence[PauliOp]) -> list[PauliOp]:
    """Paulis ``D_i`` with ``{D_i, S_j}`` anticommuting iff ``i == j`` and ``D``s mutually commuting."""
    n = stabs[0].n
    # solve D_i: symplectic products with stabs = e_i; then symplectic Gram-Schmidt among Ds
    m = BitMatrix(n, 2 * n, [s.z | (s.x << n) for s in stabs])  # product with (x|z) row
    from .symplectic import solve

    ds: list[PauliOp] = []
    for i in range(n):
        v = solve(m, 1 << i)
        assert v is not None
        ds.append(PauliOp(n, v & ((1 << n) - 1), v >> n))
    # make destabilizers commute: D_j <- D_j * S_i when D_i, D_j anticommute (i < j)
    for i in range(n):
        for j in range(i + 1, n):
            if symplectic_product(ds[i], ds[j]):
                ds[j] = multiply(ds[j], stabs[i]).unsigned()
    return [d.unsigned() for d in ds]


def prepare_graph_state(n: int, edges: Iterable[tuple[int, int]], via_gates: bool = False) -> Tableau:
    """Graph state on qubits ``0..n-1``; ``via_gates`` runs |0>, H, CZ literally."""
    edges = list(edges)
    if not via_gates:
        return Tableau.from_graph(n, edges)
    t = Tableau(n)
    for q in range(n):
        t.h(q)
    for a, b in edges:
        t.cz(a, b)
    return t


def tableau_equiv(a: Tableau, b: Tableau) -> bool:
    """Same stabilizer group, signs included."""
    return a.equivalent(b)


def verify_stabilized(t: Tableau, gens: Iterable[PauliOp]) -> bool:
    return all(t.expectation(g) == 1 for g in gens)


class ShotTableau(Tableau):
    """Several shots of one non-adaptive measurement sequence in lockstep.

    The X/Z bit content of a tableau under Pauli measurements does not
    depend on the outcomes, only the signs do, so ``r`` becomes a
    ``(2n, shots)`` array and everything else is shared.
    """

    @classmethod
    def from_graph(cls, n: int, edges: Iterable[tuple[int, int]], shots: int = 1) -> "ShotTableau":
        base = Tableau.from_graph(n, edges)
        t = cls.__new__(cls)
        t.n, t.words, t.x, t.z = base.n, base.words, base.x, base.z
        t.r = np.zeros((2 * n, shots), dtype=np.uint8)
        return t

    @property
    def shots(self) -> int:
        return self.r.shape[1]

    def shot(self, i: int) -> Tableau:
        t = Tableau.__new__(Tableau)
        t.n, t.words = self.n, self.words
        t.x, t.z, t.r = self.x.copy(), self.z.copy(), self.r[:, i].copy()
        return t

    def _flip_signs(self, rows: np.ndarray) -> None:
        self.r ^= rows[:, None]

    def _rowsum_into(self, targets: np.ndarray, src: int) -> None:
        if targets.size == 0:
            return
        x1, z1 = self.x[src], self.z[src]
        x2, z2 = self.x[targets], self.z[targets]
        plus = (x1 & z1 & z2 & ~x2) | (x1 & ~z1 & z2 & x2) | (~x1 & z1 & x2 & ~z2)
        minus = (x1 & z1 & x2 & ~z2) | (x1 & ~z1 & z2 & ~x2) | (~x1 & z1 & x2 & z2)
        g = (_popcount_rows(plus) - _popcount_rows(minus)) % 4
        # g is even for commuting rows, odd never happens between stabilizer-tableau rows here
        flip = (g >> 1).astype(np.uint8)
        self.r[targets] ^= self.r[src][None, :] ^ flip[:, None]
        self.x[targets] = x2 ^ x1
        self.z[targets] = z2 ^ z1

    def _group_sign(self, p: PauliOp, anti: np.ndarray) -> np.ndarray:
        acc = PauliOp(self.n)
        rows = [self.n + int(i) for i in np.nonzero(anti[: self.n])[0]]
        sign = np.zeros(self.shots, dtype=np.uint8)
        for i in rows:
            row = self.row_bits(i)
            acc = multiply(acc, row)
            sign ^= self.r[i]
        if not acc.same_bits(p):
            raise AssertionError("observable not in stabilizer group")
        return sign ^ np.uint8(((acc.phase - p.phase) % 4) >> 1)

    def row_bits(self, i: int) -> PauliOp:
        x = z = 0
        for w in range(self.words):
            x |= int(self.x[i, w]) << (64 * w)
            z |= int(self.z[i, w]) << (64 * w)
        return PauliOp(self.n, x, z)

    def measure_shots(self, basis: str, site: int, srcs: Sequence[OutcomeSource],
                      signs: np.ndarray | None = None) -> np.ndarray:
        """Measure ``(-1)^sign`` times the basis Pauli in every shot; returns outcome bits."""
        basis = basis.upper()
        xq, zq = self._bits(site)
        anti = {"X": zq, "Z": xq, "Y": xq ^ zq}[basis]
        p = PauliOp.single(self.n, site, basis)
        signs = np.zeros(self.shots, dtype=np.uint8) if signs is None else signs
        stab_hits = np.nonzero(anti[self.n:])[0]
        if stab_hits.size == 0:
            vals = self._group_sign(p, anti) ^ signs
            return np.array([s.draw(int(v)) for s, v in zip(srcs, vals)], dtype=np.uint8)
        piv = self.n + int(stab_hits[0])
        others = np.nonzero(anti)[0]
        others = others[others != piv]
        self._rowsum_into(others, piv)
        self.x[piv - self.n] = self.x[piv]
        self.z[piv - self.n] = self.z[piv]
        self.r[piv - self.n] = self.r[piv]
        bits = np.array([s.draw(None) for s in srcs], dtype=np.uint8)
        w, b = divmod(site, 64)
        self.x[piv] = 0
        self.z[piv] = 0
        if basis in ("X", "Y"):
            self.x[piv, w] = _ONE << np.uint64(b)
        if basis in ("Z", "Y"):
            self.z[piv, w] = _ONE << np.uint64(b)
        self.r[piv] = bits ^ signs
        return bits

    def apply_masked(self, gate: str, site: int, mask: np.ndarray) -> None:
        """Apply ``gate`` in the shots where ``mask`` is set.

        Non-Pauli gates change the shared bit content, so they must act on
        every shot or on none.
        """
        gate = gate.upper()
        xq, zq = self._bits(site)
        hit = {"X": zq, "Z": xq, "Y": xq ^ zq}.get(gate)
        if hit is None:
            if mask.any() and not mask.all():
                raise ValueError("non-Pauli gates must act on every shot or none")
            if mask.all():
                self.apply(gate, site)
            return
        self.r ^= hit[:, None] & mask.astype(np.uint8)[None, :]

    def expectation_shots(self, p: PauliOp) -> np.ndarray:
        anti = self._anticommuting(p)
        if anti[self.n:].any():
            return np.zeros(self.shots, dtype=np.int64)
        return 1 - 2 * self._group_sign(p, anti).astype(np.int64)


def tensor(a: Tableau, b: Tableau) -> Tableau:
    """``a`` on the low qubits, ``b`` above it."""
    n = a.n + b.n
    gens = [PauliOp(n, p.x, p.z, p.phase) for p in a.stabilizers()]
    gens += [PauliOp(n, p.x << a.n, p.z << a.n, p.phase) for p in b.stabilizers()]
    return Tableau.from_stabilizers(gens)
