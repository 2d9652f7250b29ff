import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

import pointreg as pr
from pointreg.embedding import (
    TestFunction,
    TwoScale,
    delta_embed,
    delta_family,
    heaviside_embed,
    pair_with_test,
    power_heaviside_family,
    term_eval,
)
from pointreg.errors import DomainError, RegimeError


# -- TwoScale -------------------------------------------------------------------


def test_two_scale_validation():
    with pytest.raises(DomainError):
        TwoScale(0.0, 1e-3)
    with pytest.raises(DomainError):
        TwoScale(0.1, -1e-3)


def test_regime_contract():
    assert TwoScale(0.1, 0.01).in_regime
    assert not TwoScale(0.1, 0.02).in_regime
    with pytest.raises(RegimeError):
        TwoScale(0.1, 0.02).require_regime()


# -- elementary embeddings --------------------------------------------------------


def test_delta_embed_peak_value():
    k = pr.gaussian()
    assert delta_embed(k, 0.01, 0.0) == pytest.approx(
        100.0 / math.sqrt(math.pi), rel=1e-12
    )


def test_delta_embed_sign_convention_asymmetric():
    # delta_eps(x) = rho(-x/eps)/eps, not rho(x/eps)/eps
    k = pr.asymmetric_bump()
    eps = 0.05
    xs = np.linspace(-0.06, 0.06, 20)
    expected = k.eval(-xs / eps) / eps
    got = delta_embed(k, eps, xs)
    assert np.array_equal(got, expected)
    # and it differs from the unreflected convention somewhere
    assert np.max(np.abs(got - k.eval(xs / eps) / eps)) > 1.0


def test_delta_embed_unit_mass():
    k = pr.gaussian()
    eps = 0.01
    val, _ = quad(lambda x: delta_embed(k, eps, x), -1, 1, limit=400)
    assert abs(val - 1.0) < 1e-8


def test_delta_embed_tail():
    k = pr.gaussian()
    assert abs(delta_embed(k, 1e-3, 0.5)) < 1e-300


def test_delta_embed_rejects_bad_eps():
    with pytest.raises(DomainError):
        delta_embed(pr.gaussian(), 0.0, 0.0)


def test_heaviside_embed_limits():
    k = pr.gaussian()
    eps = 0.01
    assert heaviside_embed(k, eps, 0.0) == pytest.approx(0.5, abs=1e-10)
    assert heaviside_embed(k, eps, 1.0) == pytest.approx(1.0, abs=1e-12)
    assert heaviside_embed(k, eps, -1.0) == 0.0


def test_heaviside_derivative_is_delta():
    k = pr.gaussian()
    eps = 0.02
    xs = np.linspace(-0.05, 0.05, 15)
    h = eps / 100.0

    def H(x):
        return heaviside_embed(k, eps, x)

    # 5-point stencil keeps truncation error below the stated tolerance
    fd = (H(xs - 2 * h) - 8 * H(xs - h) + 8 * H(xs + h) - H(xs + 2 * h)) / (
        12 * h
    )
    d = delta_embed(k, eps, xs)
    scale = np.max(np.abs(d))
    assert np.max(np.abs(fd - d)) < 1e-6 * scale


# -- term families -----------------------------------------------------------------


def test_power_heaviside_far_field():
    k = pr.gaussian()
    term = power_heaviside_family(k, TwoScale(0.1, 1e-4), n=2)
    assert term_eval(term, 1.0) == pytest.approx(1.0, rel=1e-6)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_power_heaviside_vanishes_at_origin(n):
    a = 0.1
    eps = a / 100.0
    k = pr.gaussian()
    term = power_heaviside_family(k, TwoScale(a, eps), n=n)
    bound = 10.0 * float(k.decay(a / (2.0 * eps))) / a**n
    assert abs(term_eval(term, 0.0)) <= bound


def test_power_heaviside_n0_is_heaviside_embed():
    k = pr.gaussian()
    a, eps = 0.1, 1e-3
    term = power_heaviside_family(k, TwoScale(a, eps), n=0)
    rs = np.linspace(0.0, 0.3, 25)
    expected = heaviside_embed(k, eps, rs - a)
    got = term_eval(term, rs)
    assert np.max(np.abs(got - expected)) < 1e-10


def test_delta_family_prefactor_and_order():
    k = pr.gaussian()
    a, eps = 0.1, 1e-3
    d1 = delta_family(k, TwoScale(a, eps), k=1, prefactor=2.0)
    r = 0.1005
    z = (a - r) / eps
    expected = 2.0 * k.eval_derivative(z, order=1) / eps**2
    assert term_eval(d1, r) == pytest.approx(expected, rel=1e-12)
    with pytest.raises(DomainError):
        delta_family(k, TwoScale(a, eps), k=-1)


def test_families_finite_everywhere():
    k = pr.compact_bump()
    ts = TwoScale(0.05, 5e-4)
    rs = np.linspace(0.0, 1.0, 101)
    for fam in (
        power_heaviside_family(k, ts, n=3),
        delta_family(k, ts, k=0),
        delta_family(k, ts, k=1),
    ):
        assert np.all(np.isfinite(term_eval(fam, rs)))


# -- pairing -----------------------------------------------------------------------


GRID = [1e-3, 1e-3 / math.sqrt(10.0), 1e-4]


def _test_fn():
    return TestFunction(profile=lambda r: np.exp(-(r**2)), support_radius=8.0)


def test_pairing_delta_recovers_test_value():
    k = pr.gaussian()
    a = 0.1
    d0 = delta_family(k, TwoScale(a, GRID[0]), k=0)
    res = pair_with_test(d0, _test_fn(), GRID)
    assert not res.diverged
    assert res.value == pytest.approx(math.exp(-(a**2)), abs=1e-6)


def test_pairing_coulomb_potential_closed_form():
    # 4 pi * integral_a^inf r e^{-r^2} dr = 2 pi e^{-a^2}
    k = pr.gaussian()
    a = 0.1
    h1 = power_heaviside_family(k, TwoScale(a, GRID[0]), n=1)
    res = pair_with_test(
        h1, _test_fn(), GRID, weight=lambda r: 4.0 * math.pi * r**2
    )
    assert not res.diverged
    assert res.value == pytest.approx(2.0 * math.pi * math.exp(-(a**2)), rel=1e-6)


def test_pairing_delta_squared_diverges_with_exponent_minus_one():
    k = pr.gaussian()
    a = 0.1
    d0 = delta_family(k, TwoScale(a, GRID[0]), k=0)

    def second_factor(r, eps):
        return term_eval(d0.with_scales(TwoScale(a, eps)), r)

    res = pair_with_test(d0, _test_fn(), GRID, weight=second_factor)
    assert res.diverged
    assert res.fitted_exponent == pytest.approx(-1.0, abs=0.01)


def test_pairing_grid_validation():
    k = pr.gaussian()
    d0 = delta_family(k, TwoScale(0.1, 1e-3), k=0)
    with pytest.raises(DomainError):
        pair_with_test(d0, _test_fn(), [1e-3, 1e-4])
    with pytest.raises(DomainError):
        pair_with_test(d0, _test_fn(), [1e-4, 5e-4, 1e-3])
    with pytest.raises(RegimeError):
        pair_with_test(d0, _test_fn(), [0.5, 0.1, 0.05])


def test_test_function_compact_support():
    t = _test_fn()
    assert t(10.0) == 0.0
    assert t(0.0) == 1.0


# -- property tests -----------------------------------------------------------------


@given(
    a=st.floats(0.02, 0.5),
    ratio=st.floats(20.0, 500.0),
    r=st.floats(0.0, 2.0),
)
@settings(max_examples=40, deadline=None)
def test_power_heaviside_nonnegative_and_bounded(a, ratio, r):
    # for a nonnegative kernel the smoothed r^-2 cutoff profile lies in [0, r^-2-ish]
    k = pr.gaussian()
    eps = a / ratio
    val = term_eval(power_heaviside_family(k, TwoScale(a, eps), n=2), r)
    assert val >= 0.0
    # integrand support is w >= a, so the profile never exceeds max(a, r - 9 eps)^-2
    cap = 1.0 / max(a, r - 9.0 * eps, 1e-12) ** 2
    assert val <= cap * (1.0 + 1e-9)


@given(a=st.floats(0.05, 0.3), scale=st.floats(0.1, 10.0))
@settings(max_examples=30, deadline=None)
def test_delta_family_scaling_linearity(a, scale):
    k = pr.compact_bump()
    ts = TwoScale(a, a / 50.0)
    base = delta_family(k, ts, k=0)
    scaled = delta_family(k, ts, k=0, prefactor=scale)
    r = a * 1.001
    assert term_eval(scaled, r) == pytest.approx(
        scale * term_eval(base, r), rel=1e-12
    )
