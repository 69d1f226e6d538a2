"""Binary-symplectic algebra over GF(2).

Bit vectors are Python ints used as packed words: bit ``q`` is qubit (or
column) ``q``, counting from zero.  A Pauli operator is stored as
``i**phase * prod_q sigma(x_q, z_q)`` where ``sigma(1, 1) = Y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


class DimensionError(ValueError):
    """Operands have incompatible sizes."""


class ParseError(ValueError):
    """Malformed text input; carries the offending line and column."""

    def __init__(self, message: str, line: int = 0, column: int = 0, path: str | None = None):
        self.line = line
        self.column = column
        self.path = path
        where = f"{path or '<input>'}:{line}:{column}"
        super().__init__(f"{where}: {message}")


_ENCODE = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_DECODE = {v: k for k, v in _ENCODE.items()}


def encode_pauli(letter: str) -> tuple[int, int]:
    """Map a Pauli letter to its ``(x, z)`` bit pair."""
    return _ENCODE[letter]


def decode_pauli(x: int, z: int) -> str:
    return _DECODE[(x & 1, z & 1)]


def popcount(v: int) -> int:
    return bin(v).count("1")


def parity(v: int) -> int:
    return popcount(v) & 1


def _phase_of_product(x1: int, z1: int, x2: int, z2: int) -> int:
    """Exponent of i picked up by ``sigma(x1,z1) * sigma(x2,z2)``, summed over qubits."""
    plus = (x1 & z1 & z2 & ~x2) | (x1 & ~z1 & z2 & x2) | (~x1 & z1 & x2 & ~z2)
    minus = (x1 & z1 & x2 & ~z2) | (x1 & ~z1 & z2 & ~x2) | (~x1 & z1 & x2 & z2)
    return popcount(plus) - popcount(minus)


@dataclass(frozen=True)
class PauliOp:
    n: int
    x: int = 0
    z: int = 0
    phase: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise DimensionError("PauliOp needs at least one qubit")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask:
            raise DimensionError("bits set beyond qubit count")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def from_string(cls, s: str) -> "PauliOp":
        """Parse ``"+XIZ"``, ``"-iY"`` style strings; qubit 0 is leftmost."""
        phase = 0
        body = s.strip()
        if body.startswith("+"):
            body = body[1:]
        elif body.startswith("-"):
            phase = 2
            body = body[1:]
        if body.startswith("i"):
            phase += 1
            body = body[1:]
        x = z = 0
        for q, letter in enumerate(body):
            bx, bz = _ENCODE[letter.upper()]
            x |= bx << q
            z |= bz << q
        return cls(len(body), x, z, phase)

    @classmethod
    def single(cls, n: int, site: int, letter: str) -> "PauliOp":
        bx, bz = _ENCODE[letter]
        return cls(n, bx << site, bz << site)

    @classmethod
    def z_type(cls, n: int, support: Iterable[int]) -> "PauliOp":
        z = 0
        for q in support:
            z |= 1 << q
        return cls(n, 0, z)

    def letter(self, q: int) -> str:
        return decode_pauli(self.x >> q, self.z >> q)

    def __str__(self) -> str:
        prefix = ["+", "+i", "-", "-i"][self.phase]
        return prefix + "".join(self.letter(q) for q in range(self.n))

    @property
    def sign(self) -> int:
        """0 for +1, 1 for -1; only meaningful for Hermitian operators."""
        return self.phase >> 1

    @property
    def support(self) -> list[int]:
        s = self.x | self.z
        return [q for q in range(self.n) if s >> q & 1]

    @property
    def weight(self) -> int:
        return popcount(self.x | self.z)

    def is_z_type(self) -> bool:
        return self.x == 0

    def same_bits(self, other: "PauliOp") -> bool:
        return self.n == other.n and self.x == other.x and self.z == other.z

    def unsigned(self) -> "PauliOp":
        return PauliOp(self.n, self.x, self.z, 0)

    def negate(self) -> "PauliOp":
        return PauliOp(self.n, self.x, self.z, self.phase + 2)

    def __mul__(self, other: "PauliOp") -> "PauliOp":
        return multiply(self, other)


def _check(p: PauliOp, q: PauliOp) -> None:
    if p.n != q.n:
        raise DimensionError(f"qubit count mismatch: {p.n} vs {q.n}")


def symplectic_product(p: PauliOp, q: PauliOp) -> int:
    """1 if the operators anticommute, else 0."""
    _check(p, q)
    return parity((p.x & q.z) ^ (p.z & q.x))


def multiply(p: PauliOp, q: PauliOp) -> PauliOp:
    """Operator product ``p * q`` with exact phase tracking."""
    _check(p, q)
    ph = p.phase + q.phase + _phase_of_product(p.x, p.z, q.x, q.z)
    return PauliOp(p.n, p.x ^ q.x, p.z ^ q.z, ph)


def to_matrix(p: PauliOp):
    """Dense ``2**n x 2**n`` matrix; qubit 0 is the least significant index bit."""
    import numpy as np

    mats = {
        "I": np.eye(2, dtype=complex),
        "X": np.array([[0, 1], [1, 0]], dtype=complex),
        "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
        "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    }
    out = np.array([[1.0 + 0j]])
    for q in reversed(range(p.n)):
        out = np.kron(out, mats[p.letter(q)])
    return (1j ** p.phase) * out


@dataclass
class BitMatrix:
    """Dense GF(2) matrix; ``rows[i]`` packs row ``i`` with column ``c`` at bit ``c``."""

    nrows: int
    ncols: int
    rows: list[int] = field(default_factory=list)

    def __post_init__(self):
        if not self.rows:
            self.rows = [0] * self.nrows
        if len(self.rows) != self.nrows:
            raise DimensionError("row count mismatch")
        mask = (1 << self.ncols) - 1
        if any(r & ~mask for r in self.rows):
            raise DimensionError("bits set beyond column count")

    @classmethod
    def from_lists(cls, data: Sequence[Sequence[int]], ncols: int | None = None) -> "BitMatrix":
        if ncols is None:
            ncols = len(data[0]) if data else 0
        rows = []
        for line in data:
            if len(line) != ncols:
                raise DimensionError("ragged input")
            rows.append(sum((b & 1) << c for c, b in enumerate(line)))
        return cls(len(rows), ncols, rows)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    @classmethod
    def zeros(cls, r: int, c: int) -> "BitMatrix":
        return cls(r, c, [0] * r)

    def to_lists(self) -> list[list[int]]:
        return [[(r >> c) & 1 for c in range(self.ncols)] for r in self.rows]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return (self.rows[i] >> j) & 1

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.nrows, self.ncols, list(self.rows))

    def transpose(self) -> "BitMatrix":
        out = [0] * self.ncols
        for i, r in enumerate(self.rows):
            for j in range(self.ncols):
                if r >> j & 1:
                    out[j] |= 1 << i
        return BitMatrix(self.ncols, self.nrows, out)

    def __matmul__(self, other: "BitMatrix") -> "BitMatrix":
        if self.ncols != other.nrows:
            raise DimensionError("inner dimensions differ")
        out = []
        for r in self.rows:
            acc = 0
            j = 0
            while r:
                if r & 1:
                    acc ^= other.rows[j]
                r >>= 1
                j += 1
            out.append(acc)
        return BitMatrix(self.nrows, other.ncols, out)

    def __add__(self, other: "BitMatrix") -> "BitMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise DimensionError("shape mismatch")
        return BitMatrix(self.nrows, self.ncols, [a ^ b for a, b in zip(self.rows, other.rows)])

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and self == self.transpose()

    def rank(self) -> int:
        return len(rref(self)[1])


RowOp = tuple[str, int, int]


def rref(m: BitMatrix, column_order: Sequence[int] | None = None) -> tuple[BitMatrix, list[int], list[RowOp]]:
    """Reduced row echelon form over GF(2).

    Returns the reduced matrix, the pivot columns (one per leading row) and
    the row operations performed, as ``("swap", i, j)`` or ``("add", src, dst)``
    meaning ``row[dst] ^= row[src]``.  ``column_order`` sets the order in
    which columns are tried as pivots.
    """
    rows = list(m.rows)
    ops: list[RowOp] = []
    pivots: list[int] = []
    order = range(m.ncols) if column_order is None else column_order
    rank = 0
    for c in order:
        bit = 1 << c
        sel = next((i for i in range(rank, m.nrows) if rows[i] & bit), None)
        if sel is None:
            continue
        if sel != rank:
            rows[sel], rows[rank] = rows[rank], rows[sel]
            ops.append(("swap", sel, rank))
        for i in range(m.nrows):
            if i != rank and rows[i] & bit:
                rows[i] ^= rows[rank]
                ops.append(("add", rank, i))
        pivots.append(c)
        rank += 1
        if rank == m.nrows:
            break
    return BitMatrix(m.nrows, m.ncols, rows), pivots, ops


def apply_row_ops(m: BitMatrix, ops: Iterable[RowOp]) -> BitMatrix:
    rows = list(m.rows)
    for kind, a, b in ops:
        if kind == "swap":
            rows[a], rows[b] = rows[b], rows[a]
        else:
            rows[b] ^= rows[a]
    return BitMatrix(m.nrows, m.ncols, rows)


def solve(m: BitMatrix, rhs: int) -> int | None:
    """One solution ``v`` (packed over columns) of ``m v = rhs`` (packed over rows), or None."""
    aug = BitMatrix(m.nrows, m.ncols + 1,
                    [r | (((rhs >> i) & 1) << m.ncols) for i, r in enumerate(m.rows)])
    red, pivots, _ = rref(aug, column_order=range(m.ncols))
    v = 0
    for i, c in enumerate(pivots):
        if red.rows[i] >> m.ncols & 1:
            v |= 1 << c
    for i in range(len(pivots), m.nrows):
        if red.rows[i] >> m.ncols & 1:
            return None
    return v


def nullspace(m: BitMatrix) -> list[int]:
    """Basis of ``{v : m v = 0}`` as packed ints."""
    red, pivots, _ = rref(m)
    free = [c for c in range(m.ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = 1 << f
        for i, c in enumerate(pivots):
            if red.rows[i] >> f & 1:
                v |= 1 << c
        basis.append(v)
    return basis


def pauli_row(p: PauliOp) -> int:
    """Pack ``(x|z)`` into a single 2n-bit int: x in the low n bits."""
    return p.x | (p.z << p.n)


def row_pauli(n: int, row: int, phase: int = 0) -> PauliOp:
    mask = (1 << n) - 1
    return PauliOp(n, row & mask, (row >> n) & mask, phase)


@dataclass
class CheckMatrix:
    """``d`` generators on ``n`` qubits, one PauliOp per row.

    ``signs`` holds one bit per row (1 means the generator carries a minus
    sign); the generators' own phases are ignored in favour of it.
    """

    n: int
    rows: list[PauliOp]
    signs: list[int] | None = None

    def __post_init__(self):
        if any(r.n != self.n for r in self.rows):
            raise DimensionError("generator length differs from n")
        if self.signs is not None and len(self.signs) != len(self.rows):
            raise DimensionError("sign vector length differs from d")

    @property
    def d(self) -> int:
        return len(self.rows)

    @property
    def k(self) -> int:
        return self.n - self.d

    @classmethod
    def from_blocks(cls, xblock: BitMatrix, zblock: BitMatrix, signs: list[int] | None = None) -> "CheckMatrix":
        if xblock.nrows != zblock.nrows or xblock.ncols != zblock.ncols:
            raise DimensionError("X and Z blocks differ in shape")
        n = xblock.ncols
        return cls(n, [PauliOp(n, xr, zr) for xr, zr in zip(xblock.rows, zblock.rows)], signs)

    def x_block(self) -> BitMatrix:
        return BitMatrix(self.d, self.n, [r.x for r in self.rows])

    def z_block(self) -> BitMatrix:
        return BitMatrix(self.d, self.n, [r.z for r in self.rows])

    def as_bitmatrix(self) -> BitMatrix:
        return BitMatrix(self.d, 2 * self.n, [pauli_row(r) for r in self.rows])

    def generators(self) -> list[PauliOp]:
        """Hermitian generators with signs applied."""
        signs = self.signs or [0] * self.d
        return [PauliOp(self.n, r.x, r.z, 2 * s) for r, s in zip(self.rows, signs)]


def is_valid_stabilizer(m: CheckMatrix) -> bool:
    """Rows independent and pairwise commuting."""
    if m.d == 0 or m.d > m.n:
        return False
    if m.as_bitmatrix().rank() != m.d:
        return False
    return all(symplectic_product(m.rows[i], m.rows[j]) == 0
               for i in range(m.d) for j in range(i + 1, m.d))


def row_space_equal(a: Sequence[PauliOp], b: Sequence[PauliOp], n: int) -> bool:
    """GF(2) row spaces of the two generator lists coincide (signs ignored)."""
    ma = BitMatrix(len(a), 2 * n, [pauli_row(p) for p in a])
    mb = BitMatrix(len(b), 2 * n, [pauli_row(p) for p in b])
    ra, rb = ma.rank(), mb.rank()
    both = BitMatrix(len(a) + len(b), 2 * n, ma.rows + mb.rows)
    return ra == rb == both.rank()


# -- check-matrix text format -------------------------------------------------

def format_check_matrix(m: CheckMatrix) -> str:
    lines = [f"{m.n} {m.d}"]
    for i, r in enumerate(m.rows):
        xs = "".join(str(r.x >> q & 1) for q in range(m.n))
        zs = "".join(str(r.z >> q & 1) for q in range(m.n))
        line = f"{xs}|{zs}"
        if m.signs is not None:
            line += " -" if m.signs[i] else " +"
        lines.append(line)
    return "\n".join(lines) + "\n"


def _content_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, raw, stripped


def parse_check_matrix(text: str, path: str | None = None) -> CheckMatrix:
    lines = list(_content_lines(text))
    if not lines:
        raise ParseError("empty check-matrix file", 0, 0, path)
    lineno, raw, header = lines[0]
    parts = header.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ParseError("header must be 'n d'", lineno, 1, path)
    n, d = int(parts[0]), int(parts[1])
    if n < 1:
        raise ParseError("n must be positive", lineno, 1, path)
    body = lines[1:]
    if len(body) != d:
        raise ParseError(f"expected {d} generator lines, found {len(body)}", lineno, 1, path)
    rows: list[PauliOp] = []
    signs: list[int] = []
    any_sign = False
    for lineno, raw, line in body:
        col0 = raw.index(line[0]) + 1
        sign = 0
        if line.endswith(("+", "-")) and len(line.split()) > 1:
            any_sign = True
            sign = 1 if line[-1] == "-" else 0
            line = line[:-1]
        compact = "".join(line.split())
        if compact.count("|") != 1:
            raise ParseError("generator needs exactly one '|'", lineno, col0, path)
        xs, zs = compact.split("|")
        if len(xs) != n or len(zs) != n:
            raise ParseError(f"each block must have {n} bits", lineno, col0, path)
        x = z = 0
        for q, (bx, bz) in enumerate(zip(xs, zs)):
            if bx not in "01" or bz not in "01":
                bad = raw.find(bx if bx not in "01" else bz)
                raise ParseError("bits must be 0 or 1", lineno, bad + 1, path)
            x |= int(bx) << q
            z |= int(bz) << q
        rows.append(PauliOp(n, x, z))
        signs.append(sign)
    return CheckMatrix(n, rows, signs if any_sign else None)
