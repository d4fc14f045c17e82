"""Symplectic Pauli-string algebra and Clifford tableaux.

A Hermitian ``n``-qubit Pauli string is stored as two ``n``-bit masks
``(x, z)`` and stands for the canonical operator

    P(x, z) = i^{|x & z|} X^x Z^z

so that ``Y = iXZ`` and every basis element is Hermitian with ``P**2 = I``.
Bit ``j`` of each mask refers to qubit ``j``. The flat Pauli index used by
spectra is ``(z << n) | x``.
"""
from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .circuit import Circuit, Gate
from .errors import DimensionError

_LETTERS = {(0, 0): "I", (1, 0): "X", (1, 1): "Y", (0, 1): "Z"}
_BITS = {v: k for k, v in _LETTERS.items()}
_PHASES = (1, 1j, -1, -1j)
_LABEL_TOKEN = re.compile(r"([IXYZ])\s*(\d+)")

# canonical single-qubit matrices, indexed by (x, z)
_P1 = {
    (0, 0): np.eye(2, dtype=complex),
    (1, 0): np.array([[0, 1], [1, 0]], dtype=complex),
    (1, 1): np.array([[0, -1j], [1j, 0]], dtype=complex),
    (0, 1): np.array([[1, 0], [0, -1]], dtype=complex),
}


@dataclass(frozen=True)
class PauliString:
    """Hermitian Pauli string on ``n`` qubits in symplectic form."""

    n: int
    x: int = 0
    z: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("PauliString needs n >= 1")
        mask = (1 << self.n) - 1
        if self.x & ~mask or self.z & ~mask or self.x < 0 or self.z < 0:
            raise ValueError(f"bit masks exceed {self.n} qubits")

    @classmethod
    def identity(cls, n: int) -> "PauliString":
        return cls(n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> "PauliString":
        bx, bz = _BITS[letter.upper()]
        return cls(n, bx << qubit, bz << qubit)

    @classmethod
    def from_index(cls, n: int, index: int) -> "PauliString":
        mask = (1 << n) - 1
        if not 0 <= index < 4**n:
            raise ValueError(f"Pauli index {index} out of range for n={n}")
        return cls(n, index & mask, index >> n)

    @classmethod
    def from_label(cls, label: str, n: int) -> "PauliString":
        """Parse a sparse label such as ``"X0 Z2"``, ``"X0Z2"`` or ``"I"``.

        Raises:
            ValueError: on malformed labels, repeated qubits or qubit indices
                outside ``range(n)``.
        """
        text = label.strip().replace("*", " ").upper()
        if text in ("", "I"):
            return cls(n)
        x = z = 0
        seen = set()
        pos = 0
        for m in _LABEL_TOKEN.finditer(text):
            if text[pos:m.start()].strip():
                raise ValueError(f"malformed Pauli label {label!r}")
            pos = m.end()
            letter, q = m.group(1), int(m.group(2))
            if q >= n:
                raise ValueError(f"qubit index {q} out of range (n={n}) in label {label!r}")
            if q in seen:
                raise ValueError(f"qubit {q} repeated in label {label!r}")
            seen.add(q)
            bx, bz = _BITS[letter]
            x |= bx << q
            z |= bz << q
        if text[pos:].strip() or not seen:
            raise ValueError(f"malformed Pauli label {label!r}")
        return cls(n, x, z)

    @property
    def index(self) -> int:
        return (self.z << self.n) | self.x

    @property
    def weight(self) -> int:
        return (self.x | self.z).bit_count()

    def letter(self, qubit: int) -> str:
        return _LETTERS[((self.x >> qubit) & 1, (self.z >> qubit) & 1)]

    @property
    def label(self) -> str:
        parts = [f"{self.letter(q)}{q}" for q in range(self.n) if self.letter(q) != "I"]
        return " ".join(parts) if parts else "I"

    def dense(self) -> np.ndarray:
        """``2^n x 2^n`` matrix; qubit 0 is the least-significant basis bit."""
        factors = [_P1[((self.x >> q) & 1, (self.z >> q) & 1)] for q in reversed(range(self.n))]
        return reduce(np.kron, factors)

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class SignedPauli:
    """``i^phase * pauli``; ``phase`` is taken mod 4."""

    pauli: PauliString
    phase: int = 0

    def __post_init__(self):
        object.__setattr__(self, "phase", self.phase % 4)

    @property
    def sign(self) -> complex:
        return _PHASES[self.phase]

    def dense(self) -> np.ndarray:
        return self.sign * self.pauli.dense()

    def __mul__(self, other: "SignedPauli") -> "SignedPauli":
        prod = multiply(self.pauli, other.pauli)
        return SignedPauli(prod.pauli, prod.phase + self.phase + other.phase)

    def __neg__(self):
        return SignedPauli(self.pauli, self.phase + 2)

    def __str__(self):
        return f"{('+', '+i', '-', '-i')[self.phase]}{self.pauli.label}"


def _check_same(p: PauliString, q: PauliString):
    if p.n != q.n:
        raise DimensionError(f"qubit counts differ: {p.n} vs {q.n}")


def weight(p: PauliString) -> int:
    """Number of non-identity tensor factors."""
    return p.weight


def multiply(p: PauliString, q: PauliString) -> SignedPauli:
    """Exact product ``p @ q`` as a signed canonical Pauli."""
    _check_same(p, q)
    x, z = p.x ^ q.x, p.z ^ q.z
    # X^a Z^b X^c Z^d = (-1)^{b.c} X^{a+c} Z^{b+d}, then re-absorb the i^{|x&z|} factors
    k = (p.x & p.z).bit_count() + (q.x & q.z).bit_count() + 2 * (p.z & q.x).bit_count()
    k -= (x & z).bit_count()
    return SignedPauli(PauliString(p.n, x, z), k)


def commutes(p: PauliString, q: PauliString) -> bool:
    """True iff the symplectic inner product of ``p`` and ``q`` is even."""
    _check_same(p, q)
    return ((p.x & q.z).bit_count() + (q.x & p.z).bit_count()) % 2 == 0


@dataclass(frozen=True)
class CliffordTableau:
    """Heisenberg images ``U^dag X_j U`` and ``U^dag Z_j U`` of a Clifford ``U``."""

    n: int
    x_images: tuple[SignedPauli, ...]
    z_images: tuple[SignedPauli, ...]

    def __post_init__(self):
        object.__setattr__(self, "x_images", tuple(self.x_images))
        object.__setattr__(self, "z_images", tuple(self.z_images))
        if len(self.x_images) != self.n or len(self.z_images) != self.n:
            raise ValueError("tableau needs exactly n X-images and n Z-images")
        for im in self.x_images + self.z_images:
            if im.pauli.n != self.n:
                raise DimensionError("tableau image acts on the wrong number of qubits")

    @classmethod
    def identity(cls, n: int) -> "CliffordTableau":
        return cls(
            n,
            tuple(SignedPauli(PauliString(n, 1 << j, 0)) for j in range(n)),
            tuple(SignedPauli(PauliString(n, 0, 1 << j)) for j in range(n)),
        )

    def is_symplectic(self) -> bool:
        """Do the images satisfy the Pauli commutation relations (and stay Hermitian)?"""
        xs = [im.pauli for im in self.x_images]
        zs = [im.pauli for im in self.z_images]
        for im in self.x_images + self.z_images:
            if im.phase % 2 or im.pauli.weight == 0:
                return False
        for i in range(self.n):
            for j in range(self.n):
                if not commutes(xs[i], xs[j]) or not commutes(zs[i], zs[j]):
                    return False
                if commutes(xs[i], zs[j]) != (i != j):
                    return False
        return True

    def conjugate(self, p) -> SignedPauli:
        return tableau_conjugate(self, p)

    def then(self, other: "CliffordTableau") -> "CliffordTableau":
        """Tableau of the circuit that applies ``self`` first and ``other`` second."""
        if other.n != self.n:
            raise DimensionError("tableau sizes differ")
        return CliffordTableau(
            self.n,
            tuple(tableau_conjugate(self, im) for im in other.x_images),
            tuple(tableau_conjugate(self, im) for im in other.z_images),
        )


def tableau_conjugate(t: CliffordTableau, p) -> SignedPauli:
    """Return ``U^dag p U`` for the Clifford ``U`` described by ``t``.

    ``p`` may be a :class:`PauliString` or a :class:`SignedPauli`.
    """
    phase = 0
    if isinstance(p, SignedPauli):
        phase, p = p.phase, p.pauli
    if p.n != t.n:
        raise DimensionError(f"tableau has n={t.n}, Pauli has n={p.n}")
    acc = SignedPauli(PauliString(t.n), phase + (p.x & p.z).bit_count())
    for j in range(t.n):
        if (p.x >> j) & 1:
            acc = acc * t.x_images[j]
    for j in range(t.n):
        if (p.z >> j) & 1:
            acc = acc * t.z_images[j]
    return acc


class FreeUnitaryKind(enum.Enum):
    """The three classes of free unitaries."""

    NON_ENTANGLING = "non_entangling"
    CLIFFORD = "clifford"
    NON_SCRAMBLING = "non_scrambling"


PRNG_NAME = "numpy.random.PCG64"

_ALPHABET = {
    FreeUnitaryKind.NON_ENTANGLING: ("RX", "RY", "RZ", "SWAP"),
    FreeUnitaryKind.CLIFFORD: ("H", "S", "CX", "SWAP"),
    FreeUnitaryKind.NON_SCRAMBLING: ("H", "S", "X", "Y", "Z", "SWAP"),
}


def random_free_unitary(kind: FreeUnitaryKind, n: int, depth: int, seed: int) -> Circuit:
    """Sample a random circuit from one free class.

    Each of the ``depth`` layers holds one gate drawn uniformly from the
    class alphabet, on uniformly drawn distinct targets; rotation angles are
    uniform in ``[0, 2*pi)``. Two-qubit gates are dropped from the alphabet
    when ``n == 1``. The generator is :data:`PRNG_NAME` seeded with ``seed``.
    """
    if not isinstance(kind, FreeUnitaryKind):
        raise ValueError(f"invalid free-unitary kind {kind!r}")
    if n < 1 or depth < 0:
        raise ValueError("need n >= 1 and depth >= 0")
    rng = np.random.Generator(np.random.PCG64(seed))
    alphabet = [g for g in _ALPHABET[kind] if n > 1 or g not in ("CX", "SWAP")]
    gates = []
    for _ in range(depth):
        name = alphabet[rng.integers(len(alphabet))]
        if name in ("CX", "SWAP"):
            targets = tuple(int(q) for q in rng.choice(n, size=2, replace=False))
        else:
            targets = (int(rng.integers(n)),)
        angle = float(rng.uniform(0, 2 * math.pi)) if name.startswith("R") else None
        gates.append(Gate(name, targets, angle))
    return Circuit(n, tuple(gates))
