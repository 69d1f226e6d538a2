from __future__ import annotations

import numpy as np
import pytest

from clusterenc import local_clifford as lc
from clusterenc.statevector import StateVector, same_ray
from clusterenc.symplectic import PauliOp, to_matrix

GATE = {"H": np.array([[1, 1], [1, -1]]) / np.sqrt(2), "S": np.diag([1, 1j])}


def unitary(c: lc.LocalClifford) -> np.ndarray:
    u = np.eye(2, dtype=complex)
    for g in c.gates:
        u = GATE[g] @ u
    return u


def test_group_size_and_closure():
    assert len(lc.ELEMENTS) == 24
    assert len({(e.img_x, e.img_z) for e in lc.ELEMENTS}) == 24
    for a in lc.ELEMENTS:
        assert a @ a.inverse is lc.IDENTITY
        for b in lc.ELEMENTS[:6]:
            assert (a @ b) in lc.ELEMENTS


@pytest.mark.parametrize("c", lc.ELEMENTS, ids=lambda c: c.name)
def test_conjugation_matches_unitary(c):
    u = unitary(c)
    for letter in "XYZ":
        img, sign = c.conj_letter(letter)
        want = to_matrix(PauliOp.from_string(letter))
        got = to_matrix(PauliOp.from_string(img)) * (-1) ** sign
        assert np.allclose(u @ want @ u.conj().T, got)


@pytest.mark.parametrize("a", lc.ELEMENTS[::5], ids=lambda c: c.name)
@pytest.mark.parametrize("b", lc.ELEMENTS[::7], ids=lambda c: c.name)
def test_product_is_unitary_product(a, b):
    # right operand acts first
    ua, ub, uab = unitary(a), unitary(b), unitary(a @ b)
    assert same_ray((ua @ ub)[:, 0], uab[:, 0]) and same_ray((ua @ ub)[:, 1], uab[:, 1])


@pytest.mark.parametrize("name,x,z", [("I", 0, 0), ("X", 1, 0), ("Z", 0, 1), ("Y", 1, 1)])
def test_pauli_frame_bits(name, x, z):
    c = lc.pauli_frame(x, z)
    assert c is lc.BY_NAME[name] and c.is_pauli
    assert lc.pauli_bits(c) == (x, z)


def test_named_elements():
    assert lc.S @ lc.S is lc.PAULI_Z
    assert lc.S @ lc.S_DAG is lc.IDENTITY
    assert lc.H @ lc.PAULI_Y is lc.H_Y
    assert lc.H.gates == ("H",)
    with pytest.raises(ValueError):
        lc.pauli_bits(lc.H)


def test_gate_words_act_on_states():
    for c in lc.ELEMENTS:
        sv = StateVector(1)
        for g in c.gates:
            sv.apply1(g, 0)
        assert same_ray(sv.amps, unitary(c)[:, 0])
