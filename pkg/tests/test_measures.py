import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize

from scramblemetry.circuit_io import build_unitary
from scramblemetry.errors import NormalizationError
from scramblemetry.measures import (
    MeasureParams,
    avg_weight,
    complexity,
    complexity_direct,
    fourier_entropy,
    frontier_beta,
    frontier_max_entropy,
    frontier_point,
    landmark_points,
    o_max_closed,
    o_max_spectrum,
    sn_identity_check,
    weight_census,
)
from scramblemetry.pauli import FreeUnitaryKind, PauliString, random_free_unitary
from scramblemetry.spectrum import PauliSpectrum, conjugate, normalize, random_spectrum

from oracles import brute_measures, weight_of_index

BASES = (1.5, 2.0, 4.0, 10.0)
LOG4_13 = 1.8502198590705461  # ln 13 / ln 4


def uniform(n):
    return PauliSpectrum(n, np.full(4**n, 2.0**-n))


def uniform_weight_n(n):
    c = np.array([1.0 if weight_of_index(i, n) == n else 0.0 for i in range(4**n)])
    return normalize(PauliSpectrum(n, c))


def test_params_validation():
    assert MeasureParams().a == 4
    for bad in (1, 0.5, -2, float("inf")):
        with pytest.raises(ValueError):
            MeasureParams(bad)


def test_avg_weight_examples():
    assert avg_weight(PauliSpectrum.from_label("I", 2)) == 0
    assert abs(avg_weight(uniform(2)) - 1.5) < 1e-12
    s = PauliSpectrum(1, [1 / math.sqrt(2), 1 / math.sqrt(2), 0, 0])  # I and X
    assert abs(avg_weight(s) - brute_measures(s.coeffs, 1)[0]) < 1e-15
    assert abs(avg_weight(s) - 0.5) < 1e-12


def test_entropy_examples():
    for i in range(16):
        assert fourier_entropy(PauliSpectrum.basis(PauliString.from_index(2, i))) == 0
    assert abs(fourier_entropy(uniform(2)) - 2) < 1e-12
    assert abs(fourier_entropy(uniform_weight_n(2)) - 2 * math.log(3, 4)) < 1e-12
    assert abs(2 * math.log(3, 4) - 1.5849625007211563) < 1e-15


def test_complexity_examples():
    assert complexity(PauliSpectrum.from_label("I", 3)).R == 0
    for label in ("X0", "Y1", "Z2"):
        assert abs(complexity(PauliSpectrum.from_label(label, 3)).R - 1) < 1e-15
    r = complexity(o_max_spectrum(1))
    assert abs(r.R - LOG4_13) < 1e-12


def test_unnormalized_inputs_rejected():
    s = PauliSpectrum(1, [2, 0, 0, 0])
    for f in (avg_weight, fourier_entropy, complexity):
        with pytest.raises(NormalizationError):
            f(s)


def test_measures_against_brute_force(rng):
    for n in (1, 2, 3):
        for a in BASES:
            s = random_spectrum(n, rng)
            w, h, r = brute_measures(s.coeffs, n, a)
            rep = complexity(s, a)
            assert abs(rep.W - w) < 1e-12 and abs(rep.S - h) < 1e-12 and abs(rep.R - r) < 1e-12
            assert abs(rep.R - (rep.W + rep.S)) <= 1e-12
            assert abs(complexity_direct(s, a) - rep.R) <= 1e-9


def test_o_max_spectrum_n1():
    s = o_max_spectrum(1)
    p = s.probabilities
    assert abs(p[0] - 1 / 13) < 1e-15
    assert np.allclose(p[1:], 4 / 13)
    assert abs(math.fsum(p) - 1) <= 1e-12


def test_o_max_closed_examples():
    assert abs(o_max_closed(1).W - 12 / 13) < 1e-15
    assert abs(o_max_closed(2).R - 2 * LOG4_13) < 1e-12
    assert abs(o_max_closed(2).R - 3.7004397181410922) < 1e-12
    for a in BASES:
        for n in range(1, 7):
            om = o_max_closed(n, a)
            assert abs(om.W - 3 * a * n / (1 + 3 * a)) < 1e-12
            assert abs(om.S - (n * math.log(1 + 3 * a, a) - 3 * a * n / (1 + 3 * a))) < 1e-12
            assert om.R < (1 + math.log(4, a)) * n


@pytest.mark.parametrize("n", range(1, 9))
@pytest.mark.parametrize("a", BASES)
def test_o_max_consistency(n, a):
    rep = complexity(o_max_spectrum(n, a), a)
    om = o_max_closed(n, a)
    assert abs(rep.W - om.W) <= 1e-9 and abs(rep.S - om.S) <= 1e-9 and abs(rep.R - om.R) <= 1e-9
    assert o_max_spectrum(n, a).normalized


def test_o_max_is_the_maximizer_for_single_qubit():
    # exhaustive grid over (pI, pX+pY+pZ split evenly) plus random distributions
    best = max(
        -pi * math.log(pi, 4) - 3 * (q := (1 - pi) / 3) * math.log(q, 4) + (1 - pi)
        for pi in np.linspace(1e-9, 1 - 1e-9, 20001)
    )
    assert abs(best - LOG4_13) < 1e-6


def test_weight_census_examples_and_enumeration():
    assert weight_census(2, 0) == 1
    assert weight_census(2, 1) == 6
    assert weight_census(3, 3) == 27
    for n in range(1, 5):
        counts = {}
        for letters in itertools.product("IXYZ", repeat=n):
            w = sum(ch != "I" for ch in letters)
            counts[w] = counts.get(w, 0) + 1
        for w in range(n + 1):
            assert weight_census(n, w) == counts[w]
        assert sum(weight_census(n, w) for w in range(n + 1)) == 4**n
    with pytest.raises(ValueError):
        weight_census(2, 3)


def test_sn_identity_examples():
    assert sn_identity_check(1, 4) == (12, 12)
    lhs, rhs = sn_identity_check(2, 4)
    assert lhs == 312 and rhs == 312
    lhs, rhs = sn_identity_check(5, 1.5)
    direct = sum(math.comb(5, w) * 4.5**w * w for w in range(6))
    assert abs(lhs - direct) <= 1e-12 * direct
    assert abs(lhs - rhs) <= 1e-12 * rhs


def _frontier_per_qubit(n, w, a):
    u = w / n
    if u == 0:
        return 0.0
    h = -u * math.log(u / 3) - (0 if u == 1 else (1 - u) * math.log(1 - u))
    return n * h / math.log(a)


def _frontier_slsqp(n, w, a):
    wt = np.array([weight_of_index(i, n) for i in range(4**n)], dtype=float)
    fun = lambda p: float(np.sum(p * np.log(np.maximum(p, 1e-300)))) / math.log(a)
    cons = [{"type": "eq", "fun": lambda p: p.sum() - 1}, {"type": "eq", "fun": lambda p: p @ wt - w}]
    res = minimize(fun, np.full(4**n, 4.0**-n), bounds=[(0, 1)] * 4**n, constraints=cons, method="SLSQP",
                   options={"ftol": 1e-14, "maxiter": 500})
    return -res.fun


def test_frontier_examples():
    for n in (1, 2, 5):
        assert frontier_max_entropy(n, 4, 0) == 0
        assert abs(frontier_max_entropy(n, 4, 0.75 * n) - n) <= 1e-9
        assert abs(frontier_max_entropy(n, 4, n) - n * math.log(3, 4)) <= 1e-9
    with pytest.raises(ValueError):
        frontier_max_entropy(2, 4, 2.5)


@pytest.mark.parametrize("a", BASES)
def test_frontier_matches_closed_form_oracle(a):
    for n in (1, 2, 3, 7):
        for w in np.linspace(0, n, 23):
            assert abs(frontier_max_entropy(n, a, w) - _frontier_per_qubit(n, w, a)) <= 1e-9


def test_frontier_matches_direct_optimization():
    for n, w in [(1, 0.3), (1, 0.9), (2, 0.5), (2, 1.5), (2, 1.9)]:
        assert abs(frontier_max_entropy(n, 4, w) - _frontier_slsqp(n, w, 4)) < 1e-6


def test_frontier_shape_and_o_max_point():
    for a in BASES:
        n = 3
        ws = np.linspace(0, n, 301)
        vals = [frontier_max_entropy(n, a, w) for w in ws]
        peak = int(np.argmax(vals))
        assert abs(ws[peak] - 0.75 * n) <= ws[1] - ws[0]
        assert all(np.diff(vals[: peak + 1]) >= -1e-12)
        assert all(np.diff(vals[peak:]) <= 1e-12)
        pt = frontier_point(n, math.log(a), a)
        om = o_max_closed(n, a)
        assert abs(pt.W - om.W) <= 1e-9 and abs(pt.S - om.S) <= 1e-9
        assert abs(frontier_beta(n, om.W) - math.log(a)) < 1e-9


def test_frontier_dominates_random_spectra(rng):
    for n in range(1, 5):
        for a in BASES:
            for _ in range(100):
                s = random_spectrum(n, rng)
                rep = complexity(s, a)
                assert rep.S <= frontier_max_entropy(n, a, rep.W) + 1e-9


def test_landmarks_n1():
    pts = {p.label: p for p in landmark_points(1)}
    assert (pts["O1"].W, pts["O1"].S) == (1, 0)
    assert pts["O3"].W == 0.75 and abs(pts["O3"].S - 1) < 1e-15
    assert abs(pts["O_Max"].W - 12 / 13) < 1e-15
    assert abs(pts["O_Max"].S - (LOG4_13 - 12 / 13)) < 1e-12
    assert abs(pts["O2"].S - math.log(3, 4)) < 1e-15


def test_landmarks_match_their_operators():
    n = 2
    pts = {p.label: p for p in landmark_points(n)}
    o1 = complexity(PauliSpectrum.from_label("Z0 Z1", n))
    assert (o1.W, o1.S) == (pts["O1"].W, pts["O1"].S)
    o2 = complexity(uniform_weight_n(n))
    assert abs(o2.W - pts["O2"].W) < 1e-12 and abs(o2.S - pts["O2"].S) < 1e-12
    o3 = complexity(uniform(n))
    assert abs(o3.W - pts["O3"].W) < 1e-12 and abs(o3.S - pts["O3"].S) < 1e-12
    for p in landmark_points(n, 2.0):
        assert 0 <= p.W <= n and 0 <= p.S <= n * math.log(4, 2) + 1e-12


def test_faithfulness():
    rng = np.random.default_rng(5)
    for n in (1, 2, 3):
        for _ in range(50):
            c = rng.normal(size=4**n) + 1j * rng.normal(size=4**n)
            c[0] = 0
            s = PauliSpectrum(n, c / np.linalg.norm(c))
            assert avg_weight(s) >= 1 - 1e-12
            assert complexity(s).R >= 1 - 1e-12
    for n in (1, 2, 3):
        # pure weight-1 superposition: W = 1 exactly but R > 1 (not a single Pauli)
        c = np.zeros(4**n, dtype=complex)
        for q in range(n):
            c[PauliString.single(n, q, "X").index] = 1
        s = normalize(PauliSpectrum(n, c))
        assert abs(avg_weight(s) - 1) < 1e-12
        assert (complexity(s).R > 1 + 1e-6) == (n > 1)


@pytest.mark.parametrize(
    "kind, attr",
    [(FreeUnitaryKind.NON_ENTANGLING, "W"), (FreeUnitaryKind.CLIFFORD, "S"), (FreeUnitaryKind.NON_SCRAMBLING, "R")],
)
def test_invariance_under_free_circuits(rng, kind, attr):
    for k in range(100):
        n = 1 + k % 5
        s = random_spectrum(n, rng)
        u = build_unitary(random_free_unitary(kind, n, 12, k))
        assert abs(getattr(complexity(conjugate(u, s)), attr) - getattr(complexity(s), attr)) <= 1e-8


def test_entropy_changes_under_non_clifford_rotation():
    s = PauliSpectrum.from_label("X0", 1)
    u = build_unitary(random_free_unitary(FreeUnitaryKind.NON_ENTANGLING, 1, 5, 3))
    assert fourier_entropy(conjugate(u, s)) > 1e-3


def test_additivity(rng):
    for _ in range(100):
        n1 = int(rng.integers(1, 4))
        n2 = int(rng.integers(1, 6 - n1))
        a = float(rng.choice(BASES))
        s1, s2 = random_spectrum(n1, rng), random_spectrum(n2, rng)
        r1, r2, r12 = complexity(s1, a), complexity(s2, a), complexity(s1.tensor(s2), a)
        for attr in "WSR":
            assert abs(getattr(r12, attr) - getattr(r1, attr) - getattr(r2, attr)) <= 1e-9


def test_tensor_layout_matches_kron():
    from scramblemetry.spectrum import decompose, reconstruct

    rng = np.random.default_rng(1)
    s1, s2 = random_spectrum(1, rng), random_spectrum(2, rng)
    dense = np.kron(reconstruct(s2).matrix, reconstruct(s1).matrix)  # s1 on the low qubit
    assert np.allclose(decompose(dense).coeffs, s1.tensor(s2).coeffs)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.sampled_from(BASES), st.integers(0, 2**32 - 1))
def test_global_bound_property(n, a, seed):
    s = random_spectrum(n, np.random.default_rng(seed))
    rep = complexity(s, a)
    assert rep.R <= n * math.log(1 + 3 * a, a) + 1e-9
    assert 0 <= rep.W <= n and 0 <= rep.S <= n * math.log(4, a) + 1e-12
