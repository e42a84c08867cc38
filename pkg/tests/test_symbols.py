from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anyonkit.numerics import eigenphases
from anyonkit.symbols import (
    BUILTIN_NAMES,
    AnyonModel,
    SymbolError,
    apply_gauge,
    builtin,
    conjugate,
    derive_b_symbols,
    f_configurations,
    parse_fraction,
    verify_hexagon,
    verify_pentagon,
    verify_unitarity,
)

PHI = (1 + math.sqrt(5)) / 2


def e(x):
    """exp(i pi x)"""
    return cmath.exp(1j * math.pi * x)


def _models():
    out = [builtin(n) for n in BUILTIN_NAMES if n != "abelian"]
    out += [builtin("abelian", f"{mu}/{nu}") for nu in (1, 2, 3, 5) for mu in range(2 * nu)
            if math.gcd(mu, nu) == 1]
    out += [builtin("abelian", "2/5", reduced=True), builtin("fibonacci", conjugate_symbols=True)]
    return out


MODELS = _models()


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
def test_builtins_consistent(model):
    assert verify_pentagon(model) < 1e-12
    assert verify_hexagon(model) < 1e-12
    assert verify_hexagon(model, clockwise=True) < 1e-12
    assert verify_unitarity(model) < 1e-12


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
def test_trivial_f_and_b(model):
    # F with a vacuum among the upper labels is 1; B^{1bc}_d = R^{bc}_d; B^{a1c}_d = B^{ab1}_d = 1
    for (a, b, c, d, f, e_), val in model.F.items():
        if 0 in (a, b, c):
            assert val == pytest.approx(1.0, abs=1e-14)
    for (a, b, c, d, g, e_), val in model.B.items():
        if a == 0:
            assert val == pytest.approx(model.R[(b, c, d)], abs=1e-12)
        elif b == 0 or c == 0:
            assert val == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.name)
def test_r_unimodular(model):
    for val in model.R.values():
        assert abs(abs(val) - 1) < 1e-14


def test_fibonacci_b_golden(fibonacci):
    _, _, B = fibonacci.b_block("tau", "tau", "tau", "tau")
    expected = np.array([[e(-4 / 5) / PHI, e(3 / 5) / math.sqrt(PHI)],
                         [e(3 / 5) / math.sqrt(PHI), -1 / PHI]])
    assert np.max(np.abs(B - expected)) < 1e-12
    assert np.max(np.abs(B @ B.conj().T - np.eye(2))) < 1e-12
    assert np.allclose(np.sort(eigenphases(B)), [-0.6, 0.8], atol=1e-12)


def test_ising_b_golden(ising):
    _, _, B = ising.b_block("sigma", "sigma", "sigma", "sigma")
    expected = np.array([[e(1 / 8), e(-3 / 8)], [e(-3 / 8), e(1 / 8)]]) / math.sqrt(2)
    assert np.max(np.abs(B - expected)) < 1e-12


def test_fibonacci_f_involution(fibonacci):
    _, _, F = fibonacci.f_block("tau", "tau", "tau", "tau")
    assert np.max(np.abs(F @ F - np.eye(2))) < 1e-12
    assert np.linalg.det(F) == pytest.approx(-1.0, abs=1e-12)


@pytest.mark.parametrize("name, key, value", [
    ("fibonacci", ("tau", "tau", "1"), e(4 / 5)),
    ("fibonacci", ("tau", "tau", "tau"), e(-3 / 5)),
    ("ising", ("sigma", "sigma", "psi"), e(3 / 8)),
    ("ising", ("sigma", "sigma", "1"), e(-1 / 8)),
    ("fermion", ("psi", "psi", "1"), -1.0),
    ("boson", ("psi", "psi", "1"), 1.0),
])
def test_builtin_r_values(name, key, value):
    assert builtin(name).r(*key) == pytest.approx(value, abs=1e-15)


def test_b_matches_frf_inverse_oracle(fibonacci, ising):
    # independent evaluation through numpy products of dense blocks
    for model in (fibonacci, ising):
        B = derive_b_symbols(model)
        for a, b, c, d, std, fused in f_configurations(model.algebra):
            _, fused2, F2 = model.f_block(a, c, b, d)
            _, _, F1 = model.f_block(a, b, c, d)
            if F2.size == 0:
                continue
            R = np.diag([model.R[(b, c, f)] for f in fused2])
            ref = F1 @ R @ np.linalg.inv(F2)
            rows, cols, mat = model.b_block(a, b, c, d)
            assert np.max(np.abs(mat - ref)) < 1e-12


def test_pentagon_detects_perturbation(fibonacci):
    F = dict(fibonacci.F)
    F[(1, 1, 1, 1, 0, 0)] += 0.1
    bad = AnyonModel(fibonacci.algebra, F, fibonacci.R, "perturbed")
    assert verify_pentagon(bad) > 0.01


def test_hexagon_detects_wrong_r(fibonacci):
    R = dict(fibonacci.R)
    R[(1, 1, 1)] = e(3 / 5)
    bad = AnyonModel(fibonacci.algebra, fibonacci.F, R, "bad-R")
    assert verify_hexagon(bad) > 0.1
    assert verify_hexagon(bad, clockwise=True) > 0.1


def test_conjugated_fibonacci_r(fibonacci):
    conj = conjugate(fibonacci)
    assert conj.r("tau", "tau", "1") == pytest.approx(e(-4 / 5))
    assert verify_hexagon(conj) < 1e-12


@pytest.mark.parametrize("nu", range(1, 7))
def test_abelian_hexagon_identity(nu):
    for mu in range(2 * nu):
        if math.gcd(mu, nu) != 1:
            continue
        m = builtin("abelian", Fraction(mu, nu))
        n = m.algebra.size
        R = lambda a, b: m.R[(a, b, (a + b) % n)]
        worst = max(abs(R(a, c) * R(a, b) - R(a, (b + c) % n))
                    for a in range(n) for b in range(n) for c in range(n))
        assert worst < 1e-12
        assert verify_hexagon(m) < 1e-12


def _random_gauge(model, rng):
    alg = model.algebra
    u = {}
    for a in range(alg.size):
        for b in range(alg.size):
            for c in alg.products(a, b):
                if a and b:
                    u[(a, b, c)] = cmath.exp(2j * math.pi * rng.random())
    return u


@settings(max_examples=15, deadline=None)
@given(seed=st.integers(0, 2**31), name=st.sampled_from(["fibonacci", "ising", "abelian(1/3)"]))
def test_gauge_preserves_consistency_and_braid_spectra(seed, name):
    model = builtin(name)
    gauged = apply_gauge(model, _random_gauge(model, np.random.default_rng(seed)))
    assert verify_pentagon(gauged) < 1e-12
    assert verify_hexagon(gauged) < 1e-12
    assert verify_hexagon(gauged, clockwise=True) < 1e-12
    assert verify_unitarity(gauged) < 1e-12
    n = model.algebra.size
    for a in range(n):
        for b in range(n):
            for d in range(n):
                _, _, B0 = model.b_block(a, b, b, d)
                _, _, B1 = gauged.b_block(a, b, b, d)
                if B0.size:
                    assert np.allclose(np.sort(eigenphases(B0)), np.sort(eigenphases(B1)), atol=1e-9)


def test_identity_gauge(fibonacci):
    same = apply_gauge(fibonacci, {})
    assert all(same.F[k] == v for k, v in fibonacci.F.items())
    assert all(same.R[k] == v for k, v in fibonacci.R.items())


def test_symmetric_gauge_example(fibonacci):
    g = apply_gauge(fibonacci, {("tau", "tau", "tau"): 1j})
    assert g.r("tau", "tau", "tau") == pytest.approx(fibonacci.r("tau", "tau", "tau"))
    assert g.F[(1, 1, 1, 1, 0, 1)] == pytest.approx(-fibonacci.F[(1, 1, 1, 1, 0, 1)])
    assert verify_pentagon(g) < 1e-12


@pytest.mark.parametrize("eta", [1j, e(0.3), -1.0])
def test_eta_gauge_matches_apply_gauge(fibonacci, eta):
    direct = builtin("fibonacci", eta=eta)
    via = apply_gauge(fibonacci, {("tau", "tau", "tau"): cmath.sqrt(eta)})
    for k, v in direct.F.items():
        assert via.F[k] == pytest.approx(v, abs=1e-14)
    assert verify_pentagon(direct) < 1e-12 and verify_hexagon(direct) < 1e-12


def test_gauge_rejects_non_unimodular(fibonacci):
    with pytest.raises(SymbolError, match="unimodular"):
        apply_gauge(fibonacci, {("tau", "tau", "tau"): 2.0})


def test_missing_entry_rejected(fibonacci):
    F = dict(fibonacci.F)
    del F[(1, 1, 1, 1, 1, 1)]
    with pytest.raises(SymbolError):
        AnyonModel(fibonacci.algebra, F, fibonacci.R)


@pytest.mark.parametrize("bad", ["nonsense", "abelian(2/4)", "abelian(5/2)", "abelian"])
def test_builtin_errors(bad):
    with pytest.raises(ValueError):
        builtin(bad)


def test_builtin_inline_alpha():
    assert builtin("abelian(3/5)").R == builtin("abelian", "3/5").R
    assert builtin("abelian:3/5").R == builtin("abelian", Fraction(3, 5)).R


def test_parse_fraction():
    assert parse_fraction("-1/8") == Fraction(-1, 8)
    with pytest.raises(ValueError, match="lowest"):
        parse_fraction("2/4")


def test_clifford_twist(clifford, ising):
    assert clifford.twist == Fraction(-1, 8)
    assert clifford.R == ising.R
