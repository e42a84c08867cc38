from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from anyonkit.braid import sigma_p
from anyonkit.exchange import (
    EigenphaseSpectrum,
    default_strand,
    direct_operator,
    exchange_block,
    exchange_direct,
    exchange_parameters,
    exchange_reduced,
    merge_spectra,
    popcorn_alpha,
    reduced_spectrum,
    spectrum,
)
from anyonkit.fusion import fib
from anyonkit.reps import abelian_rep, burau3_unitary, clifford_rep, splitting_rep
from anyonkit.symbols import apply_gauge, builtin


def entries(spec):
    return {round(p, 9): m for p, m in spec.entries}


def test_spectrum_identity():
    assert spectrum(np.eye(4)).entries == ((0.0, 4),)


def test_spectrum_rejects_non_unitary():
    with pytest.raises(ValueError):
        spectrum(np.diag([1.0, 2.0]))


def test_spectrum_minus_one_maps_to_one():
    s = spectrum(np.diag([-1.0, cmath.exp(-1j * math.pi * (1 - 1e-9))]))
    assert s.entries == ((1.0, 2),)


def test_spectrum_helpers():
    s = EigenphaseSpectrum(((-0.5, 1), (0.25, 2)))
    assert s.dim == 3 and s.multiplicity(0.25) == 2 and s.multiplicity(1.5) == 1
    assert s.scaled(3).dim == 9
    assert entries(s.rotated(0.75)) == {0.25: 1, 1.0: 2}
    assert s.beta() == 0.25
    assert merge_spectra([s, s]).matches(s.scaled(2))
    with pytest.raises(ValueError):
        EigenphaseSpectrum(()).beta()


def test_fibonacci_u0_direct(fibonacci):
    assert entries(spectrum(exchange_direct(splitting_rep(fibonacci, "tau", 2), 0))) == {0.8: 2, -0.6: 3}


def test_fibonacci_u1_direct(fibonacci):
    assert entries(spectrum(direct_operator(fibonacci, "tau", 1))) == {0.8: 3, 0.2: 2, -0.2: 3}


@pytest.mark.parametrize("p", range(0, 6))
def test_fibonacci_reduced_multiplicities(fibonacci, p):
    blocks = {fibonacci.labels[b.c]: b.multiplicity for b in exchange_reduced(fibonacci, "tau", p)}
    expected = {"1": fib(p - 1), "tau": fib(p)}
    assert blocks == {k: v for k, v in expected.items() if v}


def test_ising_psi_block(ising):
    U, space = exchange_block(ising, "sigma", "psi")
    assert entries(spectrum(U)) == {-0.625: 3, 0.875: 3}
    assert space.dim == 6


def test_ising_psi_strands_trivial(ising):
    U, _ = exchange_block(ising, "psi", "sigma")
    assert np.max(np.abs(U - np.eye(U.shape[0]))) < 1e-12


def test_exchange_direct_range(fibonacci):
    with pytest.raises(ValueError):
        exchange_direct(splitting_rep(fibonacci, "tau", 3), 2)


def test_direct_operator_cap(fibonacci):
    with pytest.raises(ValueError, match="max_p"):
        direct_operator(fibonacci, "tau", 13)


@pytest.mark.parametrize("name", ["fibonacci", "ising", "clifford", "abelian(2/5)"])
@pytest.mark.parametrize("p", range(0, 6))
def test_reduced_matches_direct(name, p):
    model = builtin(name)
    t = default_strand(model)
    direct = spectrum(direct_operator(model, t, p))
    total, _ = reduced_spectrum(model, t, p)
    assert total.matches(direct, tol=1e-9)
    blocks = exchange_reduced(model, t, p)
    assert sum(b.multiplicity * b.matrix.shape[0] for b in blocks) == direct.dim


@pytest.mark.parametrize("sector", [("1", None), ("tau", "tau"), (None, "1")])
@pytest.mark.parametrize("p", range(0, 5))
def test_reduced_matches_direct_by_sector(fibonacci, sector, p):
    direct = spectrum(direct_operator(fibonacci, "tau", p, sector))
    total, _ = reduced_spectrum(fibonacci, "tau", p, sector)
    assert total.matches(direct, tol=1e-9)


CLIFFORD = {
    0: {0.25: None, -0.25: None},
    1: {0.5: None, -0.5: None},
    2: {0.25: None, -0.25: None, 0.75: None, -0.75: None},
    3: {0.0: None, 1.0: None},
}


@pytest.mark.parametrize("p", range(0, 4))
def test_clifford_spectra(clifford, p):
    assert set(entries(reduced_spectrum(clifford, "sigma", p)[0])) == set(CLIFFORD[p])


@pytest.mark.parametrize("l", range(1, 5))
def test_clifford_period_four(clifford, l):
    a = reduced_spectrum(clifford, "sigma", l)[0]
    b = reduced_spectrum(clifford, "sigma", l + 4)[0]
    assert a.phases == pytest.approx(b.phases, abs=1e-9)


@pytest.mark.parametrize("alpha", [Fraction(1, 4), Fraction(1, 3), Fraction(3, 5)])
@pytest.mark.parametrize("p", range(0, 7))
def test_abelian_consistency(alpha, p):
    U = exchange_direct(abelian_rep(alpha, p + 2), p)
    phase = (1 + 2 * p) * alpha % 2
    expected = float(phase if phase <= 1 else phase - 2)
    (got, m), = spectrum(U).entries
    assert m == 1 and got == pytest.approx(expected, abs=1e-12)


def test_abelian_three_fifths_cycle():
    phases = [spectrum(exchange_direct(abelian_rep(Fraction(3, 5), p + 2), p)).entries[0][0]
              for p in range(10)]
    assert phases[:5] == pytest.approx([0.6, -0.2, 1.0, 0.2, -0.6], abs=1e-12)
    assert phases[5:] == pytest.approx(phases[:5], abs=1e-12)


def test_burau_u1_spectrum():
    for alpha in (0.05, 0.15, 0.3):
        s = spectrum(exchange_direct(burau3_unitary(alpha), 1))
        expect = sorted([3 * alpha, 3 * alpha - 1])
        assert sorted(s.phases) == pytest.approx(expect, abs=1e-12)


@pytest.mark.parametrize("name, betas", [
    ("fibonacci", [0.6, 0.2, 0.2, 0.2, 0.2]),
    ("ising", [0.125] * 6),
    ("clifford", [0.25, 0.5, 0.25, 0.0, 0.25, 0.5]),
])
def test_exchange_parameters(name, betas):
    params = exchange_parameters(builtin(name), len(betas) + 1)
    assert params.beta == pytest.approx(betas, abs=1e-9)
    assert params.alpha == pytest.approx([min(betas[:k + 1]) for k in range(len(betas))], abs=1e-9)
    assert list(params.alpha) == sorted(params.alpha, reverse=True)
    assert params.N == len(betas) + 1


def test_exchange_parameters_from_rep():
    params = exchange_parameters(clifford_rep(6), 6)
    assert params.beta == pytest.approx([0.25, 0.5, 0.25, 0.0, 0.25], abs=1e-9)
    assert params.alpha_n(6) == 0.0
    with pytest.raises(ValueError):
        exchange_parameters(clifford_rep(4), 6)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 2**31))
def test_beta_gauge_invariant(seed):
    rng = np.random.default_rng(seed)
    fibonacci = builtin("fibonacci")
    u = {(1, 1, c): cmath.exp(2j * math.pi * rng.random()) for c in (0, 1)}
    gauged = apply_gauge(fibonacci, u)
    assert exchange_parameters(gauged, 5).beta == pytest.approx(
        exchange_parameters(fibonacci, 5).beta, abs=1e-9)


def test_default_strand():
    assert [builtin(n).labels[default_strand(builtin(n))] for n in
            ("fibonacci", "ising", "clifford", "abelian(1/3)", "fermion")] == [
        "tau", "sigma", "sigma", "a", "psi"]


@pytest.mark.parametrize("alpha, star", [(Fraction(1, 3), Fraction(1, 3)), (Fraction(2, 3), 0),
                                         (Fraction(1), 1), (Fraction(0), 0), (Fraction(1, 2), Fraction(1, 2))])
def test_popcorn_examples(alpha, star):
    assert popcorn_alpha(alpha, 50)[1] == star


def test_popcorn_alpha_n():
    assert popcorn_alpha(Fraction(2, 3), 2) == (Fraction(2, 3), 0)
    assert popcorn_alpha(Fraction(2, 3), 3)[0] == 0
    assert all(popcorn_alpha(1, N)[0] == 1 for N in range(2, 10))


@pytest.mark.parametrize("nu", range(1, 10))
def test_popcorn_odd_numerator(nu):
    for mu in range(0, 2 * nu + 1):
        alpha = Fraction(mu, nu)
        if alpha.denominator != nu:
            continue
        star = popcorn_alpha(alpha, 2)[1]
        # brute force over a long range of p as an independent check
        brute = min(min(((2 * p + 1) * alpha) % 2, 2 - ((2 * p + 1) * alpha) % 2) for p in range(4 * nu))
        assert star == brute
        assert (star > 0) == (alpha.numerator % 2 == 1)
        assert popcorn_alpha(alpha, nu + 1)[0] == star
