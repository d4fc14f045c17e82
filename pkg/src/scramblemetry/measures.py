"""Operator measures: average Pauli weight, quantum Fourier entropy, operator complexity.

All three only see the distribution ``p_i = |c_i|^2`` of a normalized
spectrum, so they ignore coefficient phases. The logarithm base ``a`` is a
parameter (default 4, which makes the entropy range ``[0, n]``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NormalizationError
from .spectrum import PauliSpectrum

DEFAULT_BASE = 4.0
_TINY = 1e-300
_BETA_BRACKET = 50.0


@dataclass(frozen=True)
class MeasureParams:
    """Logarithm base ``a > 1``."""

    a: float = DEFAULT_BASE

    def __post_init__(self):
        a = float(self.a)
        if not a > 1 or not math.isfinite(a):
            raise ValueError(f"logarithm base must satisfy a > 1, got {self.a}")
        object.__setattr__(self, "a", a)

    @property
    def ln_a(self) -> float:
        return math.log(self.a)


@dataclass(frozen=True)
class MeasureReport:
    n: int
    a: float
    W: float
    S: float
    R: float


@dataclass(frozen=True)
class PlanePoint:
    label: str
    W: float
    S: float


def _params(p) -> MeasureParams:
    if p is None:
        return MeasureParams()
    if isinstance(p, MeasureParams):
        return p
    return MeasureParams(p)


@lru_cache(maxsize=16)
def weight_table(n: int) -> np.ndarray:
    """``weight_table(n)[i]`` is the Pauli weight of flat index ``i``."""
    idx = np.arange(4**n, dtype=np.uint64)
    mask = np.uint64((1 << n) - 1)
    support = (idx & mask) | (idx >> np.uint64(n))
    w = np.bitwise_count(support).astype(np.int64)
    w.setflags(write=False)
    return w


def _distribution(s: PauliSpectrum) -> np.ndarray:
    p = s.probabilities
    if abs(math.fsum(p) - 1) > 1e-9:
        raise NormalizationError(f"spectrum is not normalized (sum |c|^2 = {math.fsum(p):.12g})")
    return p


def weight_histogram(probs: np.ndarray, n: int) -> np.ndarray:
    """Total probability at each weight ``0..n``."""
    return np.bincount(weight_table(n), weights=probs, minlength=n + 1)


def _mean_weight(probs, n):
    hist = weight_histogram(probs, n)
    return float(math.fsum(hist * np.arange(n + 1)))


def _entropy(probs, ln_a):
    nz = probs[probs >= _TINY]
    # rounding can push a point mass a hair above 1
    return max(0.0, float(-math.fsum(nz * np.log(nz)) / ln_a))


def avg_weight(s: PauliSpectrum) -> float:
    """``sum_i |c_i|^2 W(P_i)`` of a normalized spectrum."""
    return _mean_weight(_distribution(s), s.n)


def fourier_entropy(s: PauliSpectrum, p=None) -> float:
    """Base-``a`` Shannon entropy of ``|c_i|^2``, with ``0 log 0 = 0``."""
    return _entropy(_distribution(s), _params(p).ln_a)


def complexity(s: PauliSpectrum, p=None) -> MeasureReport:
    """Average weight, Fourier entropy and their sum (the operator complexity)."""
    p = _params(p)
    probs = _distribution(s)
    w = _mean_weight(probs, s.n)
    h = _entropy(probs, p.ln_a)
    return MeasureReport(s.n, p.a, w, h, w + h)


def complexity_direct(s: PauliSpectrum, p=None) -> float:
    """``sum_i |c_i|^2 log_a(a^{W(P_i)} / |c_i|^2)`` evaluated term by term."""
    p = _params(p)
    probs = _distribution(s)
    nz = probs >= _TINY
    w = weight_table(s.n)[nz]
    q = probs[nz]
    return float(math.fsum(q * (w * p.ln_a - np.log(q))) / p.ln_a)


def o_max_spectrum(n: int, p=None) -> PauliSpectrum:
    """The complexity maximizer: ``sqrt(a^w / (1+3a)^n)`` on every weight-``w`` Pauli, zero phases."""
    if n < 1:
        raise ValueError("n must be >= 1")
    p = _params(p)
    w = weight_table(n)
    log_amp = 0.5 * (w * p.ln_a - n * math.log1p(3 * p.a))
    return PauliSpectrum(n, np.exp(log_amp).astype(complex))


def o_max_closed(n: int, p=None) -> MeasureReport:
    """Closed-form measure values of the maximizer."""
    if n < 1:
        raise ValueError("n must be >= 1")
    p = _params(p)
    w = 3 * p.a * n / (1 + 3 * p.a)
    r = n * math.log1p(3 * p.a) / p.ln_a
    return MeasureReport(n, p.a, w, r - w, r)


def complexity_bound(n: int, p=None) -> float:
    """Exact maximum ``n log_a(1+3a)`` of the operator complexity."""
    p = _params(p)
    return n * math.log1p(3 * p.a) / p.ln_a


def trivial_bound(n: int, p=None) -> float:
    """``(1 + log_a 4) n``, the sum of the individual maxima of W and S."""
    p = _params(p)
    return (1 + math.log(4) / p.ln_a) * n


def weight_census(n: int, w: int) -> int:
    """Number of ``n``-qubit Pauli strings of weight ``w``: ``C(n, w) 3^w``."""
    if not 0 <= w <= n:
        raise ValueError(f"weight {w} out of range [0, {n}]")
    return math.comb(n, w) * 3**w


def sn_identity_check(n: int, p=None) -> tuple[float, float]:
    """``(sum_w C(n,w) (3a)^w w, 3an(1+3a)^(n-1))`` by direct sum and closed form."""
    if n < 1:
        raise ValueError("n must be >= 1")
    a = _params(p).a
    lhs = math.fsum(math.comb(n, w) * (3 * a) ** w * w for w in range(n + 1))
    rhs = 3 * a * n * (1 + 3 * a) ** (n - 1)
    return lhs, rhs


def _gibbs_mean(beta: float, n: int) -> float:
    # mean weight under p_i ~ exp(beta W(P_i)); census gives Z = (1 + 3 e^beta)^n
    return n / (1 + math.exp(-(beta + math.log(3))))


def _gibbs_entropy(beta: float, n: int, ln_a: float) -> float:
    # ln Z - beta <W>, with ln Z = n log(1 + 3 e^beta) computed stably
    log_z = n * float(np.logaddexp(0.0, beta + math.log(3)))
    return (log_z - beta * _gibbs_mean(beta, n)) / ln_a


def frontier_beta(n: int, w_target: float, tol: float = 1e-12) -> float:
    """Inverse temperature whose weight-exponential distribution has mean ``w_target``."""
    lo, hi = -_BETA_BRACKET, _BETA_BRACKET
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        m = _gibbs_mean(mid, n)
        if abs(m - w_target) <= tol * max(1.0, n):
            return mid
        if m < w_target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def frontier_max_entropy(n: int, p=None, w_target: float = 0.0) -> float:
    """Largest Fourier entropy reachable by a normalized spectrum with average weight ``w_target``.

    The maximizer puts probability ``proportional to exp(beta * weight)`` on each
    Pauli; ``beta`` is found by bisection.
    """
    p = _params(p)
    if not 0 <= w_target <= n:
        raise ValueError(f"w_target={w_target} outside [0, {n}]")
    if w_target == 0:
        return 0.0
    if w_target == n:
        return n * math.log(3) / p.ln_a
    return _gibbs_entropy(frontier_beta(n, w_target), n, p.ln_a)


def frontier_point(n: int, beta: float, p=None) -> PlanePoint:
    """``(W, S)`` of the weight-exponential distribution at inverse temperature ``beta``."""
    p = _params(p)
    return PlanePoint(f"beta={beta:.17g}", _gibbs_mean(beta, n), _gibbs_entropy(beta, n, p.ln_a))


def landmark_points(n: int, p=None) -> list[PlanePoint]:
    """Reference operators on the weight/entropy plane.

    ``O1`` is a single weight-``n`` Pauli, ``O2`` the uniform mix of all
    weight-``n`` Paulis, ``O3`` the uniform mix of every Pauli, and ``O_Max``
    the complexity maximizer.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    p = _params(p)
    om = o_max_closed(n, p)
    return [
        PlanePoint("O1", float(n), 0.0),
        PlanePoint("O2", float(n), n * math.log(3) / p.ln_a),
        PlanePoint("O3", 0.75 * n, n * math.log(4) / p.ln_a),
        PlanePoint("O_Max", om.W, om.S),
    ]
