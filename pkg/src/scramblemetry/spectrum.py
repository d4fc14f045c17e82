"""Dense operators, Pauli spectra and the Pauli transfer matrix.

The forward transform maps a ``2^n x 2^n`` matrix to its ``4^n`` Pauli
coefficients ``c_i = Tr[P_i O] / 2^n`` one qubit at a time, so it costs
``O(n 4^n)`` instead of the ``O(16^n)`` of the naive trace formula.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Union

import numpy as np

from .errors import DimensionError, LimitError, NormalizationError, NotUnitaryError, ParseError
from .pauli import PauliString

N_MAX = 10
PTM_N_MAX = 5
NORM_TOL = 1e-9
UNITARY_TOL = 1e-6


def _qubits_of(dim: int) -> int:
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim:
        raise DimensionError(f"dimension {dim} is not a power of two >= 2")
    return n


class DenseOperator:
    """Explicit ``2^n x 2^n`` complex matrix (qubit 0 = least-significant bit).

    The wrapped array is copied and frozen.
    """

    __slots__ = ("matrix", "n")

    def __init__(self, matrix):
        m = np.array(matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"expected a square matrix, got shape {m.shape}")
        self.n = _qubits_of(m.shape[0])
        m.setflags(write=False)
        self.matrix = m

    @property
    def dim(self) -> int:
        return 1 << self.n

    def unitarity_deviation(self) -> float:
        m = self.matrix
        return float(np.max(np.abs(m.conj().T @ m - np.eye(self.dim))))

    def dagger(self) -> "DenseOperator":
        return DenseOperator(self.matrix.conj().T)

    def __matmul__(self, other):
        return DenseOperator(self.matrix @ as_matrix(other))

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __repr__(self):
        return f"DenseOperator(n={self.n})"


Operand = Union[DenseOperator, np.ndarray]


def as_matrix(o) -> np.ndarray:
    return o.matrix if isinstance(o, DenseOperator) else np.asarray(o, dtype=complex)


def as_operator(o) -> DenseOperator:
    return o if isinstance(o, DenseOperator) else DenseOperator(o)


@dataclass(frozen=True, eq=False)
class PauliSpectrum:
    """Pauli-basis coefficients of an ``n``-qubit operator.

    ``coeffs[i]`` multiplies the canonical Pauli with flat index ``i``
    (see :mod:`scramblemetry.pauli`).
    """

    n: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex).reshape(-1)
        if c.size != 4**self.n:
            raise DimensionError(f"spectrum for n={self.n} needs {4**self.n} coefficients, got {c.size}")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def basis(cls, p: PauliString) -> "PauliSpectrum":
        c = np.zeros(4**p.n, dtype=complex)
        c[p.index] = 1
        return cls(p.n, c)

    @classmethod
    def from_label(cls, label: str, n: int) -> "PauliSpectrum":
        return cls.basis(PauliString.from_label(label, n))

    @property
    def probabilities(self) -> np.ndarray:
        return self.coeffs.real**2 + self.coeffs.imag**2

    @property
    def norm_squared(self) -> float:
        return float(math.fsum(self.probabilities))

    @property
    def normalized(self) -> bool:
        return abs(self.norm_squared - 1) <= NORM_TOL

    def tensor(self, other: "PauliSpectrum") -> "PauliSpectrum":
        """Spectrum of ``self (x) other`` with ``self`` on the low qubits."""
        d1, d2 = 1 << self.n, 1 << other.n
        c1 = self.coeffs.reshape(d1, d1)  # [z, x]
        c2 = other.coeffs.reshape(d2, d2)
        full = np.einsum("ac,bd->abcd", c2, c1)
        return PauliSpectrum(self.n + other.n, full.reshape(-1))

    def top(self, k: int = 16) -> list[tuple[PauliString, complex]]:
        """The ``k`` largest coefficients by magnitude (ties by lower index)."""
        order = np.lexsort((np.arange(self.coeffs.size), -self.probabilities))[:k]
        return [(PauliString.from_index(self.n, int(i)), complex(self.coeffs[i])) for i in order]

    def __repr__(self):
        return f"PauliSpectrum(n={self.n}, norm2={self.norm_squared:.12g})"


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """Real ``4^n x 4^n`` matrix ``R[i, j] = Tr[P_i U^dag P_j U] / 2^n``."""

    n: int
    entries: np.ndarray

    def apply(self, s: PauliSpectrum) -> PauliSpectrum:
        if s.n != self.n:
            raise DimensionError("transfer matrix and spectrum sizes differ")
        return PauliSpectrum(self.n, self.entries @ s.coeffs)


def _check_n(n: int, limit: int, what: str = "n_max"):
    if n > limit:
        raise LimitError(f"n={n} exceeds {what}={limit}")


def _forward(m: np.ndarray, n: int) -> np.ndarray:
    lead = m.shape[:-2]
    b = len(lead)
    t = m.reshape(lead + (2,) * (2 * n))
    for q in range(n):
        ra, ca = b + n - 1 - q, b + 2 * n - 1 - q
        t = np.moveaxis(t, (ra, ca), (-2, -1))
        a, bb, c, d = t[..., 0, 0], t[..., 0, 1], t[..., 1, 0], t[..., 1, 1]
        out = np.empty_like(t)
        out[..., 0, 0] = (a + d) / 2
        out[..., 0, 1] = (a - d) / 2
        out[..., 1, 0] = (bb + c) / 2
        out[..., 1, 1] = 0.5j * (bb - c)
        t = np.moveaxis(out, (-2, -1), (ra, ca))
    dim = 1 << n
    # axes are now (x-bits, z-bits); flat index wants z in the high half
    return np.swapaxes(t.reshape(lead + (dim, dim)), -1, -2).reshape(lead + (dim * dim,))


def _inverse(c: np.ndarray, n: int) -> np.ndarray:
    lead = c.shape[:-1]
    b = len(lead)
    dim = 1 << n
    t = np.ascontiguousarray(np.swapaxes(c.reshape(lead + (dim, dim)), -1, -2))
    t = t.reshape(lead + (2,) * (2 * n))
    for q in range(n):
        xa, za = b + n - 1 - q, b + 2 * n - 1 - q
        t = np.moveaxis(t, (xa, za), (-2, -1))
        ci, cz, cx, cy = t[..., 0, 0], t[..., 0, 1], t[..., 1, 0], t[..., 1, 1]
        out = np.empty_like(t)
        out[..., 0, 0] = ci + cz
        out[..., 1, 1] = ci - cz
        out[..., 0, 1] = cx - 1j * cy
        out[..., 1, 0] = cx + 1j * cy
        t = np.moveaxis(out, (-2, -1), (xa, za))
    return t.reshape(lead + (dim, dim))


def decompose(o: Operand, n_max: int = N_MAX) -> PauliSpectrum:
    """Pauli spectrum of a dense operator via the fast qubit-wise transform.

    Raises:
        LimitError: if the operator has more than ``n_max`` qubits.
    """
    m = as_matrix(o)
    n = _qubits_of(m.shape[0])
    _check_n(n, n_max)
    return PauliSpectrum(n, _forward(m, n))


def reconstruct(s: PauliSpectrum, n_max: int = N_MAX) -> DenseOperator:
    """Dense matrix ``sum_i c_i P_i``."""
    _check_n(s.n, n_max)
    return DenseOperator(_inverse(s.coeffs, s.n))


def normalize(s: PauliSpectrum) -> PauliSpectrum:
    norm2 = s.norm_squared
    if not norm2 > 0:
        raise NormalizationError("cannot normalize zero operator")
    return PauliSpectrum(s.n, s.coeffs / math.sqrt(norm2))


def check_unitary(u: Operand, tol: float = UNITARY_TOL) -> DenseOperator:
    op = as_operator(u)
    dev = op.unitarity_deviation()
    if dev > tol:
        raise NotUnitaryError(f"operator is not unitary (max |U^dag U - I| = {dev:.3g} > {tol:g})")
    return op


def conjugate_matrix(u: Operand, o: Operand) -> np.ndarray:
    """``U^dag O U`` as an array (no checks)."""
    um = as_matrix(u)
    return um.conj().T @ as_matrix(o) @ um


def conjugate(u: Operand, s: PauliSpectrum, n_max: int = N_MAX) -> PauliSpectrum:
    """Spectrum of ``U^dag O U`` where ``O`` has spectrum ``s``.

    Raises:
        NotUnitaryError: if ``u`` deviates from unitarity by more than 1e-6.
    """
    op = check_unitary(u)
    if op.n != s.n:
        raise DimensionError(f"unitary has n={op.n}, spectrum has n={s.n}")
    _check_n(s.n, n_max)
    return PauliSpectrum(s.n, _forward(conjugate_matrix(op, _inverse(s.coeffs, s.n)), s.n))


def transfer_matrix(u: Operand, ptm_n_max: int = PTM_N_MAX) -> TransferMatrix:
    """Pauli transfer matrix of ``O -> U^dag O U``; column ``j`` is the spectrum of ``U^dag P_j U``."""
    op = check_unitary(u)
    n = op.n
    _check_n(n, ptm_n_max, "ptm_n_max")
    basis = _inverse(np.eye(4**n, dtype=complex), n)  # basis[j] = P_j
    um = op.matrix
    images = um.conj().T @ basis @ um
    cols = _forward(images, n)  # cols[j, i] = coefficient i of U^dag P_j U
    return TransferMatrix(n, np.ascontiguousarray(cols.T.real))


def parse_dense_operator(text: str) -> DenseOperator:
    """Read the dense-operator text format.

    Line 1 is ``n <qubits>``; then ``2^n`` rows of ``2^n`` whitespace-separated
    complex entries such as ``0.5-0.25j``. Lines starting with ``#`` and blank
    lines are ignored.
    """
    rows = []
    n = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if n is None:
            parts = line.split()
            if len(parts) != 2 or parts[0] != "n" or not parts[1].isdigit() or int(parts[1]) < 1:
                raise ParseError("expected header 'n <qubits>'", lineno, 1)
            n = int(parts[1])
            continue
        try:
            rows.append([complex(tok) for tok in line.split()])
        except ValueError as exc:
            raise ParseError(f"bad complex entry ({exc})", lineno) from None
        if len(rows[-1]) != 1 << n:
            raise ParseError(f"row has {len(rows[-1])} entries, expected {1 << n}", lineno)
    if n is None:
        raise ParseError("missing header 'n <qubits>'", 1, 1)
    if len(rows) != 1 << n:
        raise ParseError(f"expected {1 << n} rows, got {len(rows)}")
    return DenseOperator(np.array(rows))


def format_dense_operator(o: Operand) -> str:
    op = as_operator(o)
    lines = [f"n {op.n}"]
    for row in op.matrix:
        lines.append(" ".join(f"{v.real:.17g}{v.imag:+.17g}j" for v in row))
    return "\n".join(lines) + "\n"


def load_dense_operator(path) -> DenseOperator:
    return parse_dense_operator(Path(path).read_text(encoding="utf-8"))


def save_dense_operator(o: Operand, path) -> None:
    Path(path).write_text(format_dense_operator(o), encoding="utf-8")


def random_spectrum(n: int, rng: np.random.Generator) -> PauliSpectrum:
    """Normalized spectrum with i.i.d. complex Gaussian coefficients."""
    c = rng.normal(size=4**n) + 1j * rng.normal(size=4**n)
    return PauliSpectrum(n, c / np.linalg.norm(c))
