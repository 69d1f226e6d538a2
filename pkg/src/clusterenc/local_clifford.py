"""The 24-element single-qubit Clifford group, modulo global phase.

An element is stored by its conjugation action ``P -> C P C^dagger`` on X and
Z, each image being a signed Pauli letter.  Elements are interned: there is
exactly one instance per group element, so ``is``/``==`` agree.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .symplectic import PauliOp, multiply

# (x, z, sign) triples
Image = tuple[int, int, int]


@dataclass(frozen=True)
class LocalClifford:
    img_x: Image
    img_z: Image

    def conj(self, x: int, z: int) -> tuple[int, int, int]:
        """Image of ``sigma(x, z)`` as ``(x', z', sign)``; ``sigma(1,1) = Y``."""
        if not x and not z:
            return 0, 0, 0
        if x and not z:
            return self.img_x
        if z and not x:
            return self.img_z
        # Y = i X Z
        px = PauliOp(1, *self.img_x[:2], 2 * self.img_x[2])
        pz = PauliOp(1, *self.img_z[:2], 2 * self.img_z[2])
        prod = multiply(px, pz)
        return prod.x, prod.z, ((prod.phase + 1) % 4) >> 1

    def conj_letter(self, letter: str) -> tuple[str, int]:
        from .symplectic import decode_pauli, encode_pauli

        x, z, s = self.conj(*encode_pauli(letter))
        return decode_pauli(x, z), s

    def __matmul__(self, other: "LocalClifford") -> "LocalClifford":
        """Unitary product ``self * other``: ``other`` acts first."""
        return _COMPOSE[(self._idx, other._idx)]

    @property
    def inverse(self) -> "LocalClifford":
        return _INVERSE[self._idx]

    @property
    def is_pauli(self) -> bool:
        return self.img_x[:2] == (1, 0) and self.img_z[:2] == (0, 1)

    @property
    def preserves_z_axis(self) -> bool:
        return self.img_z[:2] == (0, 1)

    @property
    def gates(self) -> tuple[str, ...]:
        """Shortest H/S word realising this element, in circuit order."""
        return _WORDS[self._idx]

    @property
    def name(self) -> str:
        return _NAMES.get(self._idx, "C" + str(self._idx))

    @property
    def _idx(self) -> int:
        return _INDEX[(self.img_x, self.img_z)]

    def __repr__(self) -> str:
        return f"LocalClifford({self.name})"


def _compose_raw(a: LocalClifford, b: LocalClifford) -> LocalClifford:
    bx = b.img_x
    bz = b.img_z
    ax = a.conj(bx[0], bx[1])
    az = a.conj(bz[0], bz[1])
    return LocalClifford((ax[0], ax[1], ax[2] ^ bx[2]), (az[0], az[1], az[2] ^ bz[2]))


IDENTITY = LocalClifford((1, 0, 0), (0, 1, 0))
H = LocalClifford((0, 1, 0), (1, 0, 0))
S = LocalClifford((1, 1, 0), (0, 1, 0))

_ELEMENTS: list[LocalClifford] = [IDENTITY]
_WORDS_L: list[tuple[str, ...]] = [()]
_INDEX: dict[tuple[Image, Image], int] = {(IDENTITY.img_x, IDENTITY.img_z): 0}
_queue = deque([0])
while _queue:
    i = _queue.popleft()
    for gname, g in (("H", H), ("S", S)):
        nxt = _compose_raw(g, _ELEMENTS[i])
        key = (nxt.img_x, nxt.img_z)
        if key not in _INDEX:
            _INDEX[key] = len(_ELEMENTS)
            _ELEMENTS.append(nxt)
            _WORDS_L.append(_WORDS_L[i] + (gname,))
            _queue.append(_INDEX[key])
del _queue

ELEMENTS: tuple[LocalClifford, ...] = tuple(_ELEMENTS)
_WORDS = tuple(_WORDS_L)
_COMPOSE = {(a._idx, b._idx): ELEMENTS[_INDEX[(c.img_x, c.img_z)]]
            for a in ELEMENTS for b in ELEMENTS
            for c in [_compose_raw(a, b)]}
_INVERSE = {a._idx: next(b for b in ELEMENTS if _COMPOSE[(a._idx, b._idx)] is IDENTITY)
            for a in ELEMENTS}

IDENTITY = ELEMENTS[0]
H = ELEMENTS[_INDEX[(H.img_x, H.img_z)]]
S = ELEMENTS[_INDEX[(S.img_x, S.img_z)]]
PAULI_X = ELEMENTS[_INDEX[((1, 0, 0), (0, 1, 1))]]
PAULI_Z = ELEMENTS[_INDEX[((1, 0, 1), (0, 1, 0))]]
PAULI_Y = ELEMENTS[_INDEX[((1, 0, 1), (0, 1, 1))]]
S_DAG = ELEMENTS[_INDEX[((1, 1, 1), (0, 1, 0))]]
SQRT_X = ELEMENTS[_INDEX[((1, 0, 0), (1, 1, 1))]]
SQRT_X_DAG = ELEMENTS[_INDEX[((1, 0, 0), (1, 1, 0))]]
SQRT_Y = ELEMENTS[_INDEX[((0, 1, 1), (1, 0, 0))]]
SQRT_Y_DAG = ELEMENTS[_INDEX[((0, 1, 0), (1, 0, 1))]]
H_Y = ELEMENTS[_INDEX[((0, 1, 1), (1, 0, 1))]]  # H * Y

_NAMES = {e._idx: name for name, e in [
    ("I", IDENTITY), ("H", H), ("S", S), ("SDG", S_DAG), ("X", PAULI_X), ("Y", PAULI_Y),
    ("Z", PAULI_Z), ("SQRT_X", SQRT_X), ("SQRT_X_DAG", SQRT_X_DAG),
    ("SQRT_Y", SQRT_Y), ("SQRT_Y_DAG", SQRT_Y_DAG), ("H_Y", H_Y),
]}
BY_NAME = {name: ELEMENTS[i] for i, name in _NAMES.items()}


def pauli_frame(x: int, z: int) -> LocalClifford:
    """The Clifford given by conjugation with ``X^x Z^z``."""
    out = IDENTITY
    if x:
        out = PAULI_X @ out
    if z:
        out = PAULI_Z @ out
    return out


def pauli_bits(c: LocalClifford) -> tuple[int, int]:
    """``(x, z)`` exponents of a Pauli element (X^x Z^z up to phase)."""
    if not c.is_pauli:
        raise ValueError(f"{c!r} is not a Pauli")
    # X^x Z^z conjugates X -> (-1)^z X and Z -> (-1)^x Z
    return c.img_z[2], c.img_x[2]
