import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from treerepeater.errors import DomainError, InfeasibleConfigError
from treerepeater.qkd import (ErrorParams, binary_entropy, check_density_matrix, depolarize,
                              flip_probability, key_fraction, key_fraction_unclamped, pure_state,
                              qber_from_error, zero_rate_threshold)

KET0, KET1 = [1, 0], [0, 1]
PLUS, MINUS = [1, 1], [1, -1]
PLUS_I, MINUS_I = [1, 1j], [1, -1j]


def test_binary_entropy_values():
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.11) == pytest.approx(0.499915958164527996, rel=1e-13)  # mpmath
    with pytest.raises(DomainError):
        binary_entropy(1.01)


@given(st.integers(0, 2 ** 40))
def test_binary_entropy_symmetric(k):
    x = k / 2 ** 40  # dyadic, so 1 - x is exact
    assert math.isclose(binary_entropy(x), binary_entropy(1.0 - x), rel_tol=1e-12, abs_tol=1e-300)


def test_binary_entropy_exact_symmetry_on_dyadics():
    for x in np.linspace(0, 1, 1025):
        assert binary_entropy(float(x)) == binary_entropy(float(1 - x))


def test_qber():
    assert qber_from_error(0.0) == 0.0
    assert qber_from_error(6e-5) == pytest.approx(4e-5, rel=1e-15)
    assert qber_from_error(1.0) == pytest.approx(2 / 3, rel=1e-15)
    assert ErrorParams(1e-5, 5).eps_p == pytest.approx(6e-5, rel=1e-15)


def test_error_params_reject_excess():
    with pytest.raises(InfeasibleConfigError):
        ErrorParams(0.1, 10)
    with pytest.raises(DomainError):
        ErrorParams(-0.1, 0)


def test_key_fraction_values():
    assert key_fraction(0.0) == 1.0
    assert key_fraction_unclamped(0.15) == pytest.approx(-0.125809391675273920, rel=1e-12)  # mpmath
    assert key_fraction(0.15) == 0.0
    f = key_fraction(4e-5)
    assert f == pytest.approx(0.998976862465983466, rel=1e-12)  # mpmath
    assert round(f, 3) == 0.999
    with pytest.raises(DomainError):
        key_fraction(0.7)


def test_threshold():
    # mpmath findroot on the same expression: 0.126193083276821175
    assert zero_rate_threshold() == pytest.approx(0.126193083276821175, abs=1e-10)


def test_key_fraction_monotone_grid():
    grid = np.linspace(0, 2 / 3, 1000)
    values = [key_fraction(float(q)) for q in grid]
    assert all(b <= a for a, b in zip(values, values[1:]))


def test_depolarize_fixed_points():
    rho = pure_state([0.6, 0.8j])
    np.testing.assert_allclose(depolarize(rho, 0.0), rho, atol=0)
    mixed = np.eye(2) / 2
    for eps in (0.1, 0.5, 1.0):
        np.testing.assert_allclose(depolarize(mixed, eps), mixed, atol=1e-15)


def test_depolarize_rejects_bad_state():
    with pytest.raises(DomainError):
        depolarize(np.eye(2), 0.1)  # trace 2
    with pytest.raises(DomainError):
        depolarize(np.array([[0.5, 1], [0, 0.5]]), 0.1)  # not Hermitian
    with pytest.raises(DomainError):
        depolarize(np.array([[1.5, 0], [0, -0.5]]), 0.1)  # negative eigenvalue


@pytest.mark.parametrize("ket, orth", [(PLUS, MINUS), (PLUS_I, MINUS_I), (KET0, KET1)])
def test_flip_probability_matches_qber(ket, orth):
    rng = np.random.default_rng(2024)
    rho = pure_state(ket)
    for eps in rng.random(1000):
        flip = flip_probability(depolarize(rho, float(eps)), orth)
        assert abs(flip - qber_from_error(float(eps))) <= 1e-12


@given(st.floats(0.0, 1.0), st.floats(0, 2 * math.pi), st.floats(0, math.pi), st.floats(0.0, 1.0))
def test_depolarize_preserves_state_properties(eps, phi, theta, purity):
    ket = [math.cos(theta / 2), complex(math.cos(phi), math.sin(phi)) * math.sin(theta / 2)]
    rho = purity * pure_state(ket) + (1 - purity) * np.eye(2) / 2
    out = depolarize(rho, eps)
    assert abs(np.trace(out) - 1.0) < 1e-15
    np.testing.assert_allclose(out, out.conj().T, rtol=0, atol=1e-15)
    assert np.linalg.eigvalsh(out).min() >= -1e-12
    check_density_matrix(out)
