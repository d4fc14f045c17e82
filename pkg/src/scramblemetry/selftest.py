"""Built-in verification suite behind ``scramblemetry selftest``.

Each check returns a :class:`CheckResult` carrying the worst deviation it
saw against its tolerance; ``quick`` runs reduced sample counts.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import circuit_io, growth, measures, spectrum
from .pauli import FreeUnitaryKind, PauliString, random_free_unitary


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    tolerance: float
    seconds: float = 0.0
    detail: str = ""


BASES = (1.5, 2.0, 4.0, 10.0)


def _result(name, worst, tol, detail=""):
    return CheckResult(name, bool(worst <= tol), float(worst), tol, detail=detail)


def check_omax(rng, quick):
    worst = 0.0
    for n in range(1, 5 if quick else 7):
        for a in BASES:
            closed = measures.o_max_closed(n, a)
            rep = measures.complexity(measures.o_max_spectrum(n, a), a)
            worst = max(worst, abs(rep.W - closed.W), abs(rep.S - closed.S), abs(rep.R - closed.R))
    res = _result("omax_closed_form", worst, 1e-9)
    per_n = measures.o_max_closed(4, 4).R / 4
    if abs(per_n - 1.85022) > 1e-5:
        res.passed = False
    res.detail = f"R/n at a=4: {per_n:.17g}"
    return res


def check_global_bound(rng, quick):
    count = 50 if quick else 1000
    worst = -math.inf
    for n in range(1, 4 if quick else 6):
        for a in BASES:
            bound = measures.complexity_bound(n, a)
            for _ in range(count):
                r = measures.complexity(spectrum.random_spectrum(n, rng), a).R
                worst = max(worst, r - bound)
    return _result("global_complexity_bound", max(worst, 0.0), 1e-9)


def _invariance(name, kind, attr, rng, quick):
    worst = 0.0
    for k in range(20 if quick else 100):
        n = 1 + k % 5
        s = spectrum.random_spectrum(n, rng)
        c = random_free_unitary(kind, n, 12, int(rng.integers(2**31)))
        t = spectrum.conjugate(circuit_io.build_unitary(c), s)
        worst = max(worst, abs(getattr(measures.complexity(t), attr) - getattr(measures.complexity(s), attr)))
    return _result(name, worst, 1e-8)


def check_invariance_w(rng, quick):
    return _invariance("invariance_W_non_entangling", FreeUnitaryKind.NON_ENTANGLING, "W", rng, quick)


def check_invariance_s(rng, quick):
    return _invariance("invariance_S_clifford", FreeUnitaryKind.CLIFFORD, "S", rng, quick)


def check_invariance_r(rng, quick):
    return _invariance("invariance_R_non_scrambling", FreeUnitaryKind.NON_SCRAMBLING, "R", rng, quick)


def check_additivity(rng, quick):
    worst = 0.0
    for k in range(20 if quick else 100):
        n1 = int(rng.integers(1, 4))
        n2 = int(rng.integers(1, 6 - n1))
        s1, s2 = spectrum.random_spectrum(n1, rng), spectrum.random_spectrum(n2, rng)
        a = BASES[k % 4]
        r1, r2 = measures.complexity(s1, a), measures.complexity(s2, a)
        r12 = measures.complexity(s1.tensor(s2), a)
        worst = max(worst, abs(r12.W - r1.W - r2.W), abs(r12.S - r1.S - r2.S), abs(r12.R - r1.R - r2.R))
    return _result("additivity", worst, 1e-9)


def check_sn_identity(rng, quick):
    worst = 0.0
    for n in range(1, 21):
        for a in BASES:
            lhs, rhs = measures.sn_identity_check(n, a)
            worst = max(worst, abs(lhs - rhs) / abs(rhs))
    return _result("sn_identity", worst, 1e-12)


def check_census(rng, quick):
    bad = 0
    for n in range(1, 5):
        counts = np.bincount(
            [PauliString.from_index(n, i).weight for i in range(4**n)], minlength=n + 1
        )
        for w in range(n + 1):
            bad += int(counts[w] != measures.weight_census(n, w))
        bad += int(sum(measures.weight_census(n, w) for w in range(n + 1)) != 4**n)
    return _result("weight_census", float(bad), 0.0)


def _gate(kind, *targets):
    return circuit_io.Gate(kind, targets)


def check_tilde_values(rng, quick):
    t = growth.growth_tilde(_gate("T", 0).matrix()).value
    cx = growth.growth_tilde(_gate("CX", 0, 1).matrix()).value
    return _result("growth_tilde_values", max(abs(t - 0.5), abs(cx - 1.0)), 1e-9)


def check_tilde_free(rng, quick):
    worst = 0.0
    for k in range(20 if quick else 100):
        n = 1 + k % 5
        c = random_free_unitary(FreeUnitaryKind.NON_SCRAMBLING, n, 15, int(rng.integers(2**31)))
        worst = max(worst, abs(growth.growth_tilde(circuit_io.build_unitary(c)).value))
    return _result("growth_tilde_non_scrambling_zero", worst, 1e-9)


def _random_unitary(n, rng):
    z = rng.normal(size=(2**n, 2**n)) + 1j * rng.normal(size=(2**n, 2**n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def check_maxitivity(rng, quick):
    worst = 0.0
    for _ in range(10 if quick else 50):
        n1 = int(rng.integers(1, 4))
        n2 = int(rng.integers(1, 6 - n1))
        lhs, rhs = growth.maxitivity_check(_random_unitary(n1, rng), _random_unitary(n2, rng))
        worst = max(worst, abs(lhs - rhs))
    return _result("growth_tilde_maxitivity", worst, 1e-9)


def check_tilde_invariance(rng, quick):
    worst = 0.0
    for k in range(10 if quick else 50):
        n = 1 + k % 4
        u = _random_unitary(n, rng)
        v1, v2 = (
            circuit_io.build_unitary(random_free_unitary(FreeUnitaryKind.NON_SCRAMBLING, n, 10, int(rng.integers(2**31)))).matrix
            for _ in range(2)
        )
        worst = max(worst, abs(growth.growth_tilde(v1 @ u @ v2).value - growth.growth_tilde(u).value))
    return _result("growth_tilde_invariance", worst, 1e-8)


def check_search(rng, quick):
    worst = 0.0
    cfg = growth.SearchConfig(restarts=2, max_iters=60 if quick else 200, seed=int(rng.integers(2**31)))
    cases = [(growth.GrowthKind.ENTANGLEMENT, FreeUnitaryKind.NON_ENTANGLING),
             (growth.GrowthKind.MAGIC, FreeUnitaryKind.CLIFFORD),
             (growth.GrowthKind.COMPLEXITY, FreeUnitaryKind.NON_SCRAMBLING)]
    for kind, free in cases:
        for n in (1, 2) if quick else (1, 2, 3):
            u = circuit_io.build_unitary(random_free_unitary(free, n, 8, int(rng.integers(2**31))))
            worst = max(worst, abs(growth.growth_search(u, kind, cfg=cfg).value))
            v = _random_unitary(n, rng)
            rep = growth.growth_search(v, kind, cfg=cfg)
            seed_best = growth.seed_growth(v, kind)[0]
            worst = max(worst, seed_best - rep.value, max(rep.seed_values.values()) - rep.value)
            worst = max(worst, float(np.max(-np.diff(rep.trace), initial=0.0)))
    return _result("growth_search_lower_bound", max(worst, 0.0), 1e-9)


def check_transform(rng, quick):
    worst = 0.0
    for n in (1, 2) if quick else (1, 2, 3):
        paulis = [PauliString.from_index(n, i).dense() for i in range(4**n)]
        for j in range(4**n):
            m = np.zeros((2**n, 2**n), dtype=complex)
            m.flat[j] = 1
            naive = np.array([np.trace(P @ m) / 2**n for P in paulis])
            worst = max(worst, float(np.max(np.abs(spectrum.decompose(m).coeffs - naive))))
    return _result("fast_transform_oracle", worst, 1e-10)


def check_transfer(rng, quick):
    worst = 0.0
    for n in (1, 2) if quick else (1, 2, 3):
        ptm = spectrum.transfer_matrix(_random_unitary(n, rng)).entries
        worst = max(worst, float(np.max(np.abs(ptm.T @ ptm - np.eye(4**n)))))
        c = random_free_unitary(FreeUnitaryKind.CLIFFORD, n, 10, int(rng.integers(2**31)))
        ptm = spectrum.transfer_matrix(circuit_io.build_unitary(c)).entries
        rounded = np.round(ptm)
        worst = max(worst, float(np.max(np.abs(ptm - rounded))))
        if not (np.all(np.abs(rounded).sum(axis=0) == 1) and np.all(np.abs(rounded).sum(axis=1) == 1)):
            worst = max(worst, 1.0)
    return _result("transfer_matrix_orthogonal", worst, 1e-9)


def check_frontier(rng, quick):
    worst = 0.0
    for n in range(1, 6):
        worst = max(worst, abs(measures.frontier_max_entropy(n, 4, 0.75 * n) - n))
        worst = max(worst, abs(measures.frontier_max_entropy(n, 4, n) - n * math.log(3, 4)))
        for a in BASES:
            pt = measures.frontier_point(n, math.log(a), a)
            om = measures.o_max_closed(n, a)
            worst = max(worst, abs(pt.W - om.W), abs(pt.S - om.S))
            worst = max(worst, abs(measures.frontier_max_entropy(n, a, om.W) - om.S))
    return _result("frontier_consistency", worst, 1e-9)


CHECKS = (
    check_omax, check_global_bound, check_invariance_w, check_invariance_s, check_invariance_r,
    check_additivity, check_sn_identity, check_census, check_tilde_values, check_tilde_free,
    check_maxitivity, check_tilde_invariance, check_search, check_transform, check_transfer,
    check_frontier,
)


def run_selftest(level: str = "quick", seed: int = 0) -> list[CheckResult]:
    if level not in ("quick", "full"):
        raise ValueError(f"unknown selftest level {level!r}")
    quick = level == "quick"
    results = []
    for i, check in enumerate(CHECKS):
        rng = np.random.Generator(np.random.PCG64([seed, i]))
        start = time.perf_counter()
        try:
            res = check(rng, quick)
        except Exception as exc:  # a crashing check is a failed property
            name = check.__name__.removeprefix("check_")
            res = CheckResult(name, False, math.inf, 0.0, detail=f"{type(exc).__name__}: {exc}")
        res.seconds = time.perf_counter() - start
        results.append(res)
    return results
