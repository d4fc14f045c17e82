import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from scramblemetry.circuit import CLIFFORD_GATES, GATE_KINDS, ROTATIONS, Circuit, Gate, arity
from scramblemetry.circuit_io import build_unitary, circuit_to_tableau, classify, parse_circuit
from scramblemetry.errors import LimitError, ParseError
from scramblemetry.growth import growth_tilde
from scramblemetry.pauli import FreeUnitaryKind, PauliString, SignedPauli, random_free_unitary

from oracles import X, Y, Z, circuit_unitary, pauli_matrix

NE, CL, NS = FreeUnitaryKind.NON_ENTANGLING, FreeUnitaryKind.CLIFFORD, FreeUnitaryKind.NON_SCRAMBLING


def test_parse_examples():
    c = parse_circuit("qubits 1\nt 0")
    assert c == Circuit(1, (Gate("T", (0,)),))
    c = parse_circuit("qubits 2\nh 0\ncx 0 1")
    assert c.gates == (Gate("H", (0,)), Gate("CX", (0, 1)))


def test_parse_comments_case_and_angles():
    text = """
    # leading comment

    QUBITS 3   # header comment
    Rz 2 pi/4
    rx 0 -0.5
    ry 1 2*pi
    sWaP 0 2
    """
    c = parse_circuit(text)
    assert c.n == 3
    assert c.gates[0] == Gate("RZ", (2,), math.pi / 4)
    assert c.gates[1].angle == -0.5
    assert c.gates[2].angle == 2 * math.pi
    assert c.gates[3] == Gate("SWAP", (0, 2))


@pytest.mark.parametrize(
    "text, message, line, column",
    [
        ("qubits 2\ncx 0 2", "qubit index 2 out of range (n=2)", 2, 6),
        ("qubits 2\nfoo 0", "unknown gate 'foo'", 2, 1),
        ("qubits 2\ncx 0", "takes 2 qubit(s)", 2, 4),
        ("qubits 2\nh 0 1", "takes 1 qubit(s)", 2, 5),
        ("qubits 1\nrx 0", "missing angle", 2, 4),
        ("qubits 1\nrx 0 0.1 0.2", "extra token", 2, 10),
        ("qubits 1\nh 0 0.5", "takes no angle", 2, 5),
        ("qubits 2\ncx 1 1", "duplicate targets", 2, 6),
        ("qubit 2\nh 0", "malformed header", 1, 1),
        ("qubits 0\n", "malformed header", 1, 1),
        ("# nothing\n", "missing header", 1, 1),
        ("qubits 1\nrz 0 abc", "bad angle", 2, 6),
        ("qubits 1\nh x", "expected a qubit index", 2, 3),
    ],
)
def test_parse_diagnostics(text, message, line, column):
    with pytest.raises(ParseError) as err:
        parse_circuit(text)
    assert message in err.value.message
    assert (err.value.line, err.value.column) == (line, column)
    assert f"line {line}" in str(err.value)


gate_strategy = st.builds(
    lambda kind, qs, angle: Gate(kind, tuple(qs[: arity(kind)]), angle if kind in ROTATIONS else None),
    st.sampled_from(sorted(GATE_KINDS)),
    st.permutations(range(4)),
    st.floats(-10, 10, allow_nan=False),
)


@settings(max_examples=200, deadline=None)
@given(st.lists(gate_strategy, max_size=12))
def test_print_parse_round_trip(gates):
    c = Circuit(4, tuple(gates))
    assert parse_circuit(c.to_text()) == c


def test_build_unitary_examples():
    assert np.array_equal(build_unitary(Circuit(1)).matrix, np.eye(2))
    h = build_unitary(parse_circuit("qubits 1\nh 0")).matrix
    assert np.allclose(h, np.array([[1, 1], [1, -1]]) / math.sqrt(2), atol=0)
    hh = build_unitary(parse_circuit("qubits 1\nh 0\nh 0")).matrix
    assert np.max(np.abs(hh - np.eye(2))) <= 1e-12


def test_gate_conventions():
    assert np.array_equal(Gate("S", (0,)).matrix(), np.diag([1, 1j]))
    assert np.allclose(Gate("T", (0,)).matrix(), np.diag([1, np.exp(1j * math.pi / 4)]))
    th = 0.7
    assert np.allclose(Gate("RZ", (0,), th).matrix(), np.diag([np.exp(-1j * th / 2), np.exp(1j * th / 2)]))
    assert np.allclose(Gate("RX", (0,), th).matrix(), math.cos(th / 2) * np.eye(2) - 1j * math.sin(th / 2) * X)
    assert np.allclose(Gate("RY", (0,), th).matrix(), math.cos(th / 2) * np.eye(2) - 1j * math.sin(th / 2) * Y)
    # CX 0 1 on |q1 q0>: control is qubit 0 (least-significant bit)
    cx = build_unitary(parse_circuit("qubits 2\ncx 0 1")).matrix
    assert np.array_equal(cx @ np.eye(4)[:, 1], np.eye(4)[:, 3])
    assert np.array_equal(cx @ np.eye(4)[:, 2], np.eye(4)[:, 2])


def test_build_unitary_matches_basis_sum_oracle(rng):
    for seed in range(25):
        n = 1 + seed % 4
        kind = list(FreeUnitaryKind)[seed % 3]
        c = random_free_unitary(kind, n, 20, seed)
        extra = Circuit(n, (Gate("T", (0,)),) + ((Gate("CZ", (0, n - 1)),) if n > 1 else ()))
        c = c.then(extra)
        u = build_unitary(c).matrix
        assert np.allclose(u, circuit_unitary(c), atol=1e-12)
        assert np.max(np.abs(u.conj().T @ u - np.eye(2**n))) <= 1e-10


def test_build_unitary_limit():
    with pytest.raises(LimitError):
        build_unitary(Circuit(4), n_max=3)


def test_classify_examples():
    assert classify(parse_circuit("qubits 2\nh 0\nswap 0 1")) == {CL, NE, NS}
    assert classify(parse_circuit("qubits 1\nt 0")) == {NE}
    assert classify(parse_circuit("qubits 2\ncx 0 1")) == {CL}
    assert classify(parse_circuit("qubits 2\nt 0\ncx 0 1")) == set()
    assert classify(Circuit(2)) == {CL, NE, NS}


def test_tableau_examples():
    t = circuit_to_tableau(Circuit(2))
    assert t == t.identity(2)
    h = circuit_to_tableau(parse_circuit("qubits 1\nh 0"))
    assert h.x_images[0] == SignedPauli(PauliString.from_label("Z0", 1))
    assert h.z_images[0] == SignedPauli(PauliString.from_label("X0", 1))
    s = circuit_to_tableau(parse_circuit("qubits 1\ns 0"))
    # S^dag X S = -Y with S = diag(1, i)
    sm = np.diag([1, 1j])
    assert np.allclose(sm.conj().T @ X @ sm, -Y)
    assert s.x_images[0] == SignedPauli(PauliString.from_label("Y0", 1), 2)
    assert s.z_images[0] == SignedPauli(PauliString.from_label("Z0", 1))


def test_tableau_rejects_non_clifford():
    with pytest.raises(ValueError, match=r"non-Clifford gate 't 1' at line 3"):
        circuit_to_tableau(parse_circuit("qubits 2\nh 0\nt 1"))


@pytest.mark.parametrize("kind", sorted(CLIFFORD_GATES))
def test_each_clifford_gate_tableau_matches_dense(kind):
    n = 3
    targets = (2, 0) if arity(kind) == 2 else (1,)
    c = Circuit(n, (Gate(kind, targets),))
    t = circuit_to_tableau(c)
    u = circuit_unitary(c)
    for i in range(4**n):
        p = PauliString.from_index(n, i)
        assert np.allclose(u.conj().T @ p.dense() @ u, t.conjugate(p).dense())


def test_random_clifford_tableau_matches_dense_on_all_paulis():
    for seed in range(15):
        n = 1 + seed % 3
        c = random_free_unitary(CL, n, 25, seed).then(Circuit(n, tuple(
            Gate(k, (q,)) for k in ("SDG", "X", "Y", "Z", "I") for q in range(n))))
        t = circuit_to_tableau(c)
        u = build_unitary(c).matrix
        for i in range(4**n):
            p = PauliString.from_index(n, i)
            assert np.allclose(u.conj().T @ p.dense() @ u, t.conjugate(p).dense())


def test_classify_sound_for_growth_tilde():
    for seed in range(30):
        c = random_free_unitary(NS, 1 + seed % 4, 20, seed)
        assert NS in classify(c)
        assert abs(growth_tilde(build_unitary(c)).value) <= 1e-9
