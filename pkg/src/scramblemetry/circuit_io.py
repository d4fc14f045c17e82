"""Circuit text format, dense unitaries, free-class classification and tableaux.

Text format::

    # comment
    qubits 2
    h 0
    cx 0 1
    rz 1 0.785398     # angle in radians, or a multiple of pi such as pi/4

The first non-comment line is the header; gate names are case-insensitive.
"""
from __future__ import annotations

import math
import re
from pathlib import Path

import numpy as np

from .circuit import CLIFFORD_GATES, ROTATIONS, TWO_QUBIT, Circuit, Gate, GATE_KINDS, arity
from .errors import LimitError, ParseError
from .pauli import CliffordTableau, FreeUnitaryKind, PauliString, SignedPauli
from .spectrum import N_MAX, DenseOperator

_TOKEN = re.compile(r"\S+")
_PI_FORM = re.compile(r"^([+-]?)(?:(\d+(?:\.\d*)?|\.\d+)\*?)?pi(?:/(\d+(?:\.\d*)?))?$", re.IGNORECASE)


def _parse_angle(tok: str) -> float:
    try:
        value = float(tok)
    except ValueError:
        m = _PI_FORM.match(tok)
        if not m:
            raise ValueError(tok) from None
        sign, mult, div = m.groups()
        value = (float(mult) if mult else 1.0) * math.pi / (float(div) if div else 1.0)
        if sign == "-":
            value = -value
    if not math.isfinite(value):
        raise ValueError(tok)
    return value


def _is_int(tok: str) -> bool:
    return tok.isdigit()


def parse_circuit(text: str) -> Circuit:
    """Parse circuit text, raising :class:`ParseError` with line and column on failure."""
    n = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(body)]
        if not toks:
            continue
        if n is None:
            if len(toks) != 2 or toks[0][0].lower() != "qubits" or not _is_int(toks[1][0]) or int(toks[1][0]) < 1:
                raise ParseError("malformed header, expected 'qubits <n>' with n >= 1", lineno, toks[0][1])
            n = int(toks[1][0])
            continue
        gates.append(_parse_gate(toks, n, lineno))
    if n is None:
        raise ParseError("missing header 'qubits <n>'", 1, 1)
    return Circuit(n, tuple(gates))


def _parse_gate(toks, n, lineno) -> Gate:
    (name, col), args = toks[0], toks[1:]
    kind = name.upper()
    if kind not in GATE_KINDS:
        raise ParseError(f"unknown gate '{name}'", lineno, col)
    k = arity(kind)
    qubit_toks = args[:k]
    rest = args[k:]
    for tok, c in qubit_toks:
        if not _is_int(tok):
            if kind in ROTATIONS or len(qubit_toks) < k:
                raise ParseError(f"gate {name} takes {k} qubit(s); expected a qubit index, got '{tok}'", lineno, c)
            raise ParseError(f"expected a qubit index, got '{tok}'", lineno, c)
    if len(qubit_toks) < k:
        at = args[-1][1] if args else col
        raise ParseError(f"gate {name} takes {k} qubit(s), got {len(qubit_toks)}", lineno, at)
    angle = None
    if kind in ROTATIONS:
        if not rest:
            raise ParseError(f"missing angle for gate {name}", lineno, qubit_toks[-1][1])
        tok, c = rest[0]
        try:
            angle = _parse_angle(tok)
        except ValueError:
            raise ParseError(f"bad angle '{tok}'", lineno, c) from None
        if len(rest) > 1:
            raise ParseError(f"extra token '{rest[1][0]}' after angle", lineno, rest[1][1])
    elif rest:
        tok, c = rest[0]
        if _is_int(tok):
            raise ParseError(f"gate {name} takes {k} qubit(s), got {len(args)}", lineno, c)
        raise ParseError(f"gate {name} takes no angle, got '{tok}'", lineno, c)
    targets = tuple(int(t) for t, _ in qubit_toks)
    for (tok, c), q in zip(qubit_toks, targets):
        if q >= n:
            raise ParseError(f"qubit index {q} out of range (n={n})", lineno, c)
    if len(set(targets)) != len(targets):
        raise ParseError(f"duplicate targets for gate {name}", lineno, qubit_toks[1][1])
    return Gate(kind, targets, angle)


def load_circuit(path) -> Circuit:
    return parse_circuit(Path(path).read_text(encoding="utf-8"))


def format_circuit(c: Circuit) -> str:
    return c.to_text()


def apply_gate(m: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    """Left-multiply the ``2^n``-row array ``m`` by ``gate`` embedded on ``n`` qubits."""
    cols = m.shape[1:]
    t = m.reshape((2,) * n + cols)
    g = gate.matrix()
    k = len(gate.targets)
    # gate tensor axes: (out_hi .. out_lo, in_hi .. in_lo), low = first target
    axes = [n - 1 - q for q in reversed(gate.targets)]
    g = g.reshape((2,) * (2 * k))
    out = np.tensordot(g, t, axes=(list(range(k, 2 * k)), axes))
    out = np.moveaxis(out, list(range(k)), axes)
    return out.reshape(m.shape)


def build_unitary(c: Circuit, n_max: int = N_MAX) -> DenseOperator:
    """``U = G_k ... G_2 G_1`` for the circuit's gates in file order."""
    if c.n > n_max:
        raise LimitError(f"n={c.n} exceeds n_max={n_max}")
    u = np.eye(1 << c.n, dtype=complex)
    for g in c.gates:
        u = apply_gate(u, g, c.n)
    return DenseOperator(u)


def classify(c: Circuit) -> set[FreeUnitaryKind]:
    """Free classes implied by the gate alphabet alone (sufficient, not necessary)."""
    kinds = set()
    clifford = all(g.kind in CLIFFORD_GATES for g in c.gates)
    local = all(g.kind not in TWO_QUBIT or g.kind == "SWAP" for g in c.gates)
    if clifford:
        kinds.add(FreeUnitaryKind.CLIFFORD)
    if local:
        kinds.add(FreeUnitaryKind.NON_ENTANGLING)
    if clifford and local:
        kinds.add(FreeUnitaryKind.NON_SCRAMBLING)
    return kinds


def _sp(n, label, phase=0):
    return SignedPauli(PauliString.from_label(label, n), phase)


def gate_tableau(gate: Gate, n: int) -> CliffordTableau:
    """Heisenberg images ``G^dag P G`` of the generators for one Clifford gate."""
    if gate.kind not in CLIFFORD_GATES:
        raise ValueError(f"gate {gate.kind} is not Clifford")
    xs = [_sp(n, f"X{j}") for j in range(n)]
    zs = [_sp(n, f"Z{j}") for j in range(n)]
    a = gate.targets[0]
    kind = gate.kind
    if kind == "H":
        xs[a], zs[a] = _sp(n, f"Z{a}"), _sp(n, f"X{a}")
    elif kind == "S":
        xs[a] = _sp(n, f"Y{a}", 2)
    elif kind == "SDG":
        xs[a] = _sp(n, f"Y{a}")
    elif kind == "X":
        zs[a] = _sp(n, f"Z{a}", 2)
    elif kind == "Z":
        xs[a] = _sp(n, f"X{a}", 2)
    elif kind == "Y":
        xs[a], zs[a] = _sp(n, f"X{a}", 2), _sp(n, f"Z{a}", 2)
    elif kind == "CX":
        b = gate.targets[1]
        xs[a] = _sp(n, f"X{a} X{b}")
        zs[b] = _sp(n, f"Z{a} Z{b}")
    elif kind == "CZ":
        b = gate.targets[1]
        xs[a] = _sp(n, f"X{a} Z{b}")
        xs[b] = _sp(n, f"Z{a} X{b}")
    elif kind == "SWAP":
        b = gate.targets[1]
        xs[a], xs[b] = xs[b], xs[a]
        zs[a], zs[b] = zs[b], zs[a]
    return CliffordTableau(n, tuple(xs), tuple(zs))


def circuit_to_tableau(c: Circuit) -> CliffordTableau:
    """Clifford tableau of a circuit built only from Clifford gates.

    Raises:
        ValueError: naming the first non-Clifford gate and its position
            (1-based gate line in canonical text, i.e. header is line 1).
    """
    t = CliffordTableau.identity(c.n)
    for pos, g in enumerate(c.gates):
        if g.kind not in CLIFFORD_GATES:
            raise ValueError(f"non-Clifford gate '{g}' at line {pos + 2} (gate {pos + 1})")
        t = t.then(gate_tableau(g, c.n))
    return t
