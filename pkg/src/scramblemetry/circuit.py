"""Gate alphabet and the :class:`Circuit` container.

Gate matrix conventions (qubit 0 is the least-significant bit of a basis
index, and for two-qubit gates the first target is the low bit of the local
4x4 index):

* ``S = diag(1, i)``, ``T = diag(1, exp(i*pi/4))``
* ``RX(t) = exp(-i t X / 2)``, likewise for ``RY`` and ``RZ``, so that
  ``RZ(t) = diag(exp(-i t/2), exp(i t/2))``
* ``CX a b`` flips qubit ``b`` when qubit ``a`` is set.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

ONE_QUBIT = frozenset({"I", "X", "Y", "Z", "H", "S", "SDG", "T", "TDG", "RX", "RY", "RZ"})
TWO_QUBIT = frozenset({"CX", "CZ", "SWAP"})
ROTATIONS = frozenset({"RX", "RY", "RZ"})
CLIFFORD_GATES = frozenset({"I", "X", "Y", "Z", "H", "S", "SDG", "CX", "CZ", "SWAP"})
GATE_KINDS = ONE_QUBIT | TWO_QUBIT

_SQ2 = 1 / math.sqrt(2)
_FIXED = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
    "H": np.array([[_SQ2, _SQ2], [_SQ2, -_SQ2]], dtype=complex),
    "S": np.diag([1, 1j]).astype(complex),
    "SDG": np.diag([1, -1j]).astype(complex),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]),
    "TDG": np.diag([1, np.exp(-1j * np.pi / 4)]),
    # local index = b(first target) + 2*b(second target)
    "CX": np.eye(4, dtype=complex)[[0, 3, 2, 1]],
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "SWAP": np.eye(4, dtype=complex)[[0, 2, 1, 3]],
}
for _m in _FIXED.values():
    _m.setflags(write=False)


def arity(kind: str) -> int:
    return 2 if kind in TWO_QUBIT else 1


@dataclass(frozen=True)
class Gate:
    """One gate application.

    Attributes:
        kind: upper-case gate name, one of :data:`GATE_KINDS`.
        targets: qubit indices; for ``CX`` the first is the control.
        angle: rotation angle in radians, only for ``RX``/``RY``/``RZ``.
    """

    kind: str
    targets: tuple[int, ...]
    angle: Optional[float] = None

    def __post_init__(self):
        kind = self.kind.upper()
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if kind not in GATE_KINDS:
            raise ValueError(f"unknown gate '{self.kind}'")
        if len(self.targets) != arity(kind):
            raise ValueError(f"gate {kind} takes {arity(kind)} qubit(s), got {len(self.targets)}")
        if (self.angle is not None) != (kind in ROTATIONS):
            raise ValueError(f"angle must be given iff gate is a rotation (gate {kind})")
        if len(set(self.targets)) != len(self.targets):
            raise ValueError(f"duplicate targets for gate {kind}")
        if any(t < 0 for t in self.targets):
            raise ValueError("negative qubit index")
        if self.angle is not None:
            object.__setattr__(self, "angle", float(self.angle))

    def matrix(self) -> np.ndarray:
        """Local 2x2 or 4x4 matrix of the gate."""
        if self.kind in ROTATIONS:
            c, s = math.cos(self.angle / 2), math.sin(self.angle / 2)
            if self.kind == "RX":
                return np.array([[c, -1j * s], [-1j * s, c]])
            if self.kind == "RY":
                return np.array([[c, -s], [s, c]], dtype=complex)
            return np.diag([complex(c, -s), complex(c, s)])
        return _FIXED[self.kind]

    def __str__(self):
        parts = [self.kind.lower(), *map(str, self.targets)]
        if self.angle is not None:
            parts.append(format(self.angle, ".17g"))
        return " ".join(parts)


@dataclass(frozen=True)
class Circuit:
    """An ``n``-qubit gate sequence; the first gate acts first."""

    n: int
    gates: tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("circuit needs at least one qubit")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            for t in g.targets:
                if t >= self.n:
                    raise ValueError(f"qubit index {t} out of range (n={self.n})")

    def __len__(self):
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def then(self, other: "Circuit") -> "Circuit":
        """Concatenate: ``self`` acts first, then ``other``."""
        if other.n != self.n:
            raise ValueError("qubit count mismatch")
        return Circuit(self.n, self.gates + other.gates)

    def to_text(self) -> str:
        """Canonical text form, parseable by :func:`scramblemetry.circuit_io.parse_circuit`."""
        lines = [f"qubits {self.n}"] + [str(g) for g in self.gates]
        return "\n".join(lines) + "\n"
