import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import random_three_level, tree_theorem_stationary
from nonequibath import (
    DisconnectedSystem,
    FieldSpec,
    LevelSystem,
    Regime,
    ThreeLevelParams,
    ZeroOccupation,
    build_generator,
    double_einstein_quotient,
    einstein_relation_2level,
    inversion_condition,
    normalized_stationary_3level,
    occupation,
    regime_classifier,
    stationary_3level,
    stationary_state,
)

FULL = np.ones((3, 3)) - np.eye(3)
NO12 = np.array([[0, 0, 1], [0, 0, 1], [1, 1, 0]], dtype=float)


def params(d12=1.0, d13=1.0, d23=1.0, I=(1.0, 1.0, 1.0), betas=(2.0, 2.5, 3.0), omegas=(1.0, 3.0, 2.0)):
    return ThreeLevelParams(omegas, d12, d13, d23, *I, *betas)


def test_gibbs_closed_form_is_boltzmann():
    p = params(betas=(1.0, 3.0, 2.0))
    np.testing.assert_allclose(normalized_stationary_3level(p),
                               np.exp(-np.array([0, 1, 3])) / np.exp(-np.array([0, 1, 3])).sum(),
                               rtol=1e-14)


def test_double_einstein_example():
    rho1, rho2, _ = stationary_3level(params(d12=0.0, betas=(1.0, 2.5, 3.0)))
    assert rho2 / rho1 == pytest.approx(math.exp(0.5), rel=1e-14)
    assert math.exp(0.5) == pytest.approx(1.64872, abs=1e-5)


def test_closed_form_matches_tree_theorem_and_solve(rng):
    for _ in range(100):
        system, field, _, _ = random_three_level(rng)
        gen = build_generator(system, field)
        closed = normalized_stationary_3level(ThreeLevelParams.from_model(system, field))
        np.testing.assert_allclose(closed, stationary_state(gen), rtol=1e-10)
        np.testing.assert_allclose(closed, tree_theorem_stationary(gen.matrix), rtol=1e-12)


def test_from_model_extracts_labels():
    system = LevelSystem([0, 1, 3], FULL)
    field = FieldSpec.from_betas([(1, 0.5, 2.0), (3, 0.7, 2.5), (2, 0.9, 3.0)])
    p = ThreeLevelParams.from_model(system, field)
    assert p.omegas == (1.0, 3.0, 2.0)
    assert (p.I1, p.I2, p.I3) == (0.5, 0.7, 0.9)
    assert (p.beta1, p.beta2, p.beta3) == (2.0, 2.5, 3.0)
    assert p.regime_gap == 2.5


def test_from_model_forbidden_line_without_field_entry():
    system = LevelSystem([0, 1, 3], NO12)
    field = FieldSpec.from_betas([(3, 1.0, 2.5), (2, 1.0, 3.0)])
    p = ThreeLevelParams.from_model(system, field)
    assert p.I1 == 0 and p.beta1 == math.inf
    rho = normalized_stationary_3level(p)
    assert rho[1] / rho[0] == pytest.approx(double_einstein_quotient(2.5, 3.0), rel=1e-12)


def test_disconnected():
    with pytest.raises(DisconnectedSystem):
        stationary_3level(params(d12=0.0, d13=0.0))


def test_invalid_params():
    with pytest.raises(ValueError):
        params(omegas=(1.0, 3.5, 2.0))
    with pytest.raises(ValueError):
        params(d13=-1.0)


def test_einstein_relation_2level(rng):
    assert einstein_relation_2level(1.0) == 2.0
    assert einstein_relation_2level(occupation(0.3)) == pytest.approx(math.exp(0.3), rel=1e-14)
    with pytest.raises(ZeroOccupation):
        einstein_relation_2level(0.0)
    for _ in range(10):
        beta, I = rng.uniform(0.1, 5), rng.uniform(0.1, 10)
        field = FieldSpec.from_betas([(1.0, I, beta)])
        rho = stationary_state(build_generator(LevelSystem([0, 1], [[0, 1], [1, 0]]), field))
        assert rho[0] / rho[1] == pytest.approx(einstein_relation_2level(occupation(beta)), rel=1e-12)


def test_double_einstein_quotient_values():
    assert double_einstein_quotient(1.7, 1.7) == 1.0
    assert double_einstein_quotient(2.5, 3.0) == pytest.approx(math.exp(0.5), rel=1e-15)
    beta0, w1, w3 = 0.8, 1.0, 2.0
    assert double_einstein_quotient(beta0 * (w1 + w3), beta0 * w3) == pytest.approx(math.exp(-beta0 * w1), rel=1e-14)
    N2, N3 = occupation(2.5), occupation(3.0)
    assert double_einstein_quotient(2.5, 3.0) == pytest.approx(N2 / (N2 + 1) * (N3 + 1) / N3, rel=1e-13)


def test_double_einstein_independent_of_other_couplings(rng):
    base = params(d12=0.0, betas=(1.3, 2.5, 3.0))
    q0 = np.divide(*stationary_3level(base)[1::-1])
    for _ in range(20):
        d13, d23, I1 = rng.uniform(0.1, 10, size=3)
        p = params(d12=0.0, d13=d13, d23=d23, I=(I1, 1.0, 1.0), betas=(1.3, 2.5, 3.0))
        rho1, rho2, _ = stationary_3level(p)
        assert rho2 / rho1 == pytest.approx(q0, rel=1e-12)
        assert rho2 / rho1 == pytest.approx(double_einstein_quotient(2.5, 3.0), rel=1e-12)


def test_inversion_condition():
    assert inversion_condition(3.0, 2.5)
    assert not inversion_condition(2.0, 2.0)
    beta0 = 1.2
    assert not inversion_condition(beta0 * 2.0, beta0 * 3.0)


@given(st.floats(0.01, 10.0), st.floats(0.01, 10.0))
def test_inversion_implies_double_einstein_above_one(beta3, beta2):
    if inversion_condition(beta3, beta2):
        assert double_einstein_quotient(beta2, beta3) > 1


def test_regime_classifier_examples():
    assert regime_classifier(2.0, 2.5, 3.0) is Regime.EMISSION
    assert regime_classifier(0.5, 2.0, 0.5) is Regime.ABSORPTION
    assert regime_classifier(1.0, 3.0, 2.0) is Regime.EQUILIBRIUM
    assert regime_classifier(1.0, 3.0, 2.0 + 1e-13) is Regime.EQUILIBRIUM
    assert regime_classifier(1.0, 3.0, 2.0 + 1e-13, tol=0.0) is Regime.EMISSION


@given(st.floats(1e-3, 10.0), st.floats(1e-2, 10.0), st.floats(1e-2, 10.0))
def test_gibbs_is_equilibrium(beta0, w1, w3):
    b1, b3 = beta0 * w1, beta0 * w3
    b2 = beta0 * (w1 + w3)
    s = b1 + b3 - b2
    # floating-point Gibbs inputs land within a few ulps of zero
    assert abs(s) <= 4 * np.spacing(b2)
    assert regime_classifier(b1, b2, b3, tol=8 * np.spacing(b2)) is Regime.EQUILIBRIUM
