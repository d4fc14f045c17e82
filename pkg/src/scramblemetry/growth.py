"""Scrambling power of unitaries.

``growth_tilde`` is exact: it maximizes the complexity gain over the ``3n``
weight-1 Paulis. The entanglement, magic and complexity growths are maxima
over every normalized operator; ``growth_search`` only certifies lower
bounds for them, by projected gradient ascent on the coefficient sphere,
and always reports the witness it found.
"""
from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import LimitError
from .measures import MeasureParams, _params, complexity, o_max_spectrum, weight_table
from .pauli import PauliString
from .spectrum import (
    N_MAX,
    PTM_N_MAX,
    PauliSpectrum,
    as_matrix,
    check_unitary,
    conjugate_matrix,
    decompose,
    transfer_matrix,
)

TIE_TOL = 1e-12
_TINY = 1e-300
THREADS_ENV = "SCRAMBLEMETRY_THREADS"


class GrowthKind(enum.Enum):
    ENTANGLEMENT = "E"
    MAGIC = "M"
    COMPLEXITY = "R"
    COMPLEXITY_TILDE = "RT"


class GrowthMethod(enum.Enum):
    EXACT = "EXACT"
    LOWER_BOUND = "LOWER_BOUND"


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 8
    max_iters: int = 500
    step: float = 0.1
    tol: float = 1e-8
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 0 or self.max_iters < 1 or not self.step > 0 or not self.tol > 0 or self.seed < 0:
            raise ValueError("search configuration values must be positive")


@dataclass(frozen=True, eq=False)
class GrowthReport:
    """Outcome of a growth computation.

    ``trace`` is the best value seen so far after each evaluation, so it is
    non-decreasing. ``seed_values`` maps every starting point to its
    objective before any ascent.
    """

    kind: GrowthKind
    value: float
    method: GrowthMethod
    witness: PauliSpectrum
    witness_label: str
    iterations: int
    a: float
    trace: tuple[float, ...] = ()
    seed_values: dict = field(default_factory=dict)


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV, "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def weight_one_paulis(n: int) -> list[PauliString]:
    """All ``3n`` weight-1 Pauli strings, in increasing flat-index order."""
    ps = [PauliString.single(n, q, letter) for q in range(n) for letter in "XYZ"]
    return sorted(ps, key=lambda p: p.index)


def _measure(kind: GrowthKind, probs: np.ndarray, n: int, ln_a: float) -> float:
    total = 0.0
    if kind is not GrowthKind.MAGIC:
        total += float(probs @ weight_table(n))
    if kind is not GrowthKind.ENTANGLEMENT:
        q = np.maximum(probs, _TINY)
        total -= float(probs @ np.log(q)) / ln_a
    return total


def _measure_grad(kind: GrowthKind, probs: np.ndarray, n: int, ln_a: float) -> np.ndarray:
    g = np.zeros_like(probs)
    if kind is not GrowthKind.MAGIC:
        g += weight_table(n)
    if kind is not GrowthKind.ENTANGLEMENT:
        g -= (np.log(np.maximum(probs, _TINY)) + 1) / ln_a
    return g


def seed_growth(u, kind: GrowthKind, p=None, n_max: int = N_MAX) -> tuple[float, list[PauliString]]:
    """Exact maximum of ``M(U^dag P U) - M(P)`` over weight-1 Paulis ``P``.

    ``M`` is the weight, entropy or complexity selected by ``kind``
    (``COMPLEXITY_TILDE`` behaves like ``COMPLEXITY``). Returns the value and
    every maximizing Pauli, ordered by flat index.
    """
    p = _params(p)
    op = check_unitary(u)
    if op.n > n_max:
        raise LimitError(f"n={op.n} exceeds n_max={n_max}")
    kind = GrowthKind.COMPLEXITY if kind is GrowthKind.COMPLEXITY_TILDE else kind
    base = {GrowthKind.ENTANGLEMENT: 1.0, GrowthKind.MAGIC: 0.0, GrowthKind.COMPLEXITY: 1.0}[kind]
    values = []
    paulis = weight_one_paulis(op.n)
    for P in paulis:
        s = decompose(conjugate_matrix(op, P.dense()), n_max)
        values.append(_measure(kind, s.probabilities, op.n, p.ln_a) - base)
    best = max(values)
    return best, [P for P, v in zip(paulis, values) if v >= best - TIE_TOL]


def growth_tilde(u, p=None, n_max: int = N_MAX) -> GrowthReport:
    """Exact complexity growth restricted to weight-1 Pauli inputs."""
    p = _params(p)
    value, argmax = seed_growth(u, GrowthKind.COMPLEXITY_TILDE, p, n_max)
    return GrowthReport(
        kind=GrowthKind.COMPLEXITY_TILDE,
        value=value,
        method=GrowthMethod.EXACT,
        witness=PauliSpectrum.basis(argmax[0]),
        witness_label=",".join(P.label for P in argmax),
        iterations=len(weight_one_paulis(argmax[0].n)),
        a=p.a,
        trace=(value,),
    )


class _Objective:
    """``f(c) = M(Rc) - M(c)`` and its gradient on complex unit vectors."""

    def __init__(self, ptm: np.ndarray, kind: GrowthKind, n: int, ln_a: float):
        self.r = ptm
        self.kind = kind
        self.n = n
        self.ln_a = ln_a

    def value(self, c):
        rc = self.r @ c
        return _measure(self.kind, np.abs(rc) ** 2, self.n, self.ln_a) - _measure(
            self.kind, np.abs(c) ** 2, self.n, self.ln_a
        )

    def gradient(self, c):
        rc = self.r @ c
        g_out = _measure_grad(self.kind, np.abs(rc) ** 2, self.n, self.ln_a)
        g_in = _measure_grad(self.kind, np.abs(c) ** 2, self.n, self.ln_a)
        return 2 * (self.r.T @ (rc * g_out)) - 2 * c * g_in


def _ascend(obj: _Objective, c: np.ndarray, cfg: SearchConfig):
    f = obj.value(c)
    trace = [f]
    step = cfg.step
    grad = obj.gradient(c)
    iters = 0
    for iters in range(1, cfg.max_iters + 1):
        # drop the radial part so the step moves along the sphere
        grad = grad - np.real(np.vdot(c, grad)) * c
        gnorm = np.linalg.norm(grad)
        if gnorm == 0:
            break
        trial = c + (step / gnorm) * grad
        trial /= np.linalg.norm(trial)
        ft = obj.value(trial)
        if ft > f:
            gain = ft - f
            c, f = trial, ft
            trace.append(f)
            if gain < cfg.tol:
                break
            grad = obj.gradient(c)
            step *= 1.5
        else:
            trace.append(f)
            step *= 0.5
            if step < 1e-14:
                break
    return f, c, trace, iters


def growth_search(
    u,
    kind: GrowthKind,
    p=None,
    cfg: SearchConfig | None = None,
    ptm_n_max: int = PTM_N_MAX,
) -> GrowthReport:
    """Certified lower bound on the entanglement, magic or complexity growth.

    Starting points are every weight-1 Pauli, the complexity maximizer and
    ``cfg.restarts`` random unit vectors; each is refined by projected
    gradient ascent with backtracking. The returned value is at least the
    objective of every starting point.
    """
    if kind is GrowthKind.COMPLEXITY_TILDE:
        raise ValueError("use growth_tilde for the exact weight-1 measure")
    p = _params(p)
    cfg = cfg or SearchConfig()
    op = check_unitary(u)
    n = op.n
    if n > ptm_n_max:
        raise LimitError(f"n={n} exceeds ptm_n_max={ptm_n_max}")
    obj = _Objective(transfer_matrix(op, ptm_n_max).entries, kind, n, p.ln_a)

    seeds = []
    for P in weight_one_paulis(n):
        c = np.zeros(4**n, dtype=complex)
        c[P.index] = 1
        seeds.append((P.label, c))
    seeds.append(("O_Max", o_max_spectrum(n, p).coeffs.copy()))
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    for k in range(cfg.restarts):
        c = rng.normal(size=4**n) + 1j * rng.normal(size=4**n)
        seeds.append((f"random[{k}]", c / np.linalg.norm(c)))

    def run(item):
        label, c = item
        return (label, obj.value(c)) + _ascend(obj, c, cfg)

    workers = min(worker_count(), len(seeds))
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            runs = list(pool.map(run, seeds))
    else:
        runs = [run(s) for s in seeds]

    best_val, best_vec, best_label = -math.inf, None, ""
    trace, iterations, seed_values = [], 0, {}
    for label, start, f, c, tr, it in runs:
        seed_values[label] = start
        iterations += it
        for v in tr:
            trace.append(max(v, trace[-1]) if trace else v)
        if f > best_val:
            best_val, best_vec, best_label = f, c, label
    return GrowthReport(
        kind=kind,
        value=best_val,
        method=GrowthMethod.LOWER_BOUND,
        witness=PauliSpectrum(n, best_vec),
        witness_label=f"ascent from {best_label}",
        iterations=iterations,
        a=p.a,
        trace=tuple(trace),
        seed_values=seed_values,
    )


def tensor_unitaries(u1, u2) -> np.ndarray:
    """``u1 (x) u2`` with ``u1`` on the low qubits."""
    return np.kron(as_matrix(u2), as_matrix(u1))


def maxitivity_check(u1, u2, p=None, n_max: int = N_MAX) -> tuple[float, float]:
    """``(growth_tilde(u1 (x) u2), max(growth_tilde(u1), growth_tilde(u2)))``."""
    m1, m2 = as_matrix(u1), as_matrix(u2)
    if (m1.shape[0] * m2.shape[0]).bit_length() - 1 > n_max:
        raise LimitError("combined unitary exceeds n_max")
    lhs = growth_tilde(tensor_unitaries(m1, m2), p, n_max).value
    rhs = max(growth_tilde(m1, p, n_max).value, growth_tilde(m2, p, n_max).value)
    return lhs, rhs
