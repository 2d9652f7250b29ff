import math

import numpy as np
import pytest

import pointreg as pr
from pointreg.embedding import (
    TestFunction,
    TwoScale,
    delta_family,
    pair_with_test,
    power_heaviside_family,
    term_eval,
)
from pointreg.errors import DomainError
from pointreg.fields import (
    ElectronParams,
    charge_density,
    coulomb_field,
    coulomb_potential,
    cross_profile,
    dipole_field,
    dipole_h1h2,
    sphere_direction,
)

A, EPS = 0.1, 1e-3
TS = TwoScale(A, EPS)


@pytest.fixture(scope="module")
def kernel():
    return pr.gaussian()


@pytest.fixture(scope="module")
def params():
    return ElectronParams()


# -- basic structure -----------------------------------------------------------


def test_electron_params_validation():
    with pytest.raises(DomainError):
        ElectronParams(c=0.0)
    p = ElectronParams(mu=(0.0, 0.0, 2.0))
    assert p.mu_mag == 2.0


def test_sphere_direction_unit():
    for theta, phi in [(0.3, 1.0), (1.2, 4.0), (2.9, 0.1)]:
        u = sphere_direction(theta, phi)
        assert abs(np.linalg.norm(u) - 1.0) < 1e-14


def test_profile_equals_sum_of_decomposition(kernel, params):
    prof = charge_density(params, TS, kernel)
    rs = np.linspace(0.05, 0.3, 40)
    total = np.zeros_like(rs)
    for coef, term in prof.decomposition:
        c = coef(rs) if callable(coef) else coef
        total = total + c * term_eval(term, rs)
    assert np.max(np.abs(prof(rs) - total)) == 0.0


# -- coulomb potential / field ----------------------------------------------------


def test_coulomb_potential_classical_limit(kernel, params):
    prof = coulomb_potential(params, TS, kernel)
    for r in (1.0, 2.0, 5.0):
        assert prof(r) == pytest.approx(1.0 / r, rel=1e-6)


def test_coulomb_potential_vanishes_at_origin(kernel, params):
    prof = coulomb_potential(params, TS, kernel)
    assert abs(prof(0.0)) < 1e-300


def test_zero_charge_gives_zero(kernel):
    p0 = ElectronParams(e=0.0)
    rs = np.linspace(0.0, 1.0, 21)
    assert np.all(coulomb_potential(p0, TS, kernel)(rs) == 0.0)
    assert np.all(coulomb_field(p0, TS, kernel)(rs) == 0.0)
    assert np.all(charge_density(p0, TS, kernel)(rs) == 0.0)


def test_coulomb_field_classical_limit(kernel, params):
    # eps = 1e-4 keeps the O(eps^2) smoothing correction below 1e-6
    prof = coulomb_field(params, TwoScale(A, 1e-4), kernel)
    for r in (1.0, 3.0):
        assert prof(r) == pytest.approx(1.0 / r**2, rel=1e-6)


def test_coulomb_field_peak_value(kernel, params):
    # at r = a the field is A2(a) - rho(0)/(eps a)
    prof = coulomb_field(params, TS, kernel)
    h2 = power_heaviside_family(kernel, TS, n=2)
    expected = term_eval(h2, A) - kernel.eval(0.0) / (EPS * A)
    assert prof(A) == pytest.approx(expected, rel=1e-12)


def test_field_is_minus_gradient_of_potential(kernel, params):
    phi = coulomb_potential(params, TS, kernel)
    E = coulomb_field(params, TS, kernel)
    rs = np.linspace(A / 2.0, 10.0 * A, 20)
    h = EPS / 50.0
    # 5-point stencil: truncation at the r = a peak would otherwise exceed tol
    fd = -(phi(rs - 2 * h) - 8 * phi(rs - h) + 8 * phi(rs + h) - phi(rs + 2 * h)) / (
        12.0 * h
    )
    Ev = E(rs)
    tol = np.maximum(1e-8, 1e-4 * np.abs(Ev))
    assert np.all(np.abs(fd - Ev) < tol)


# -- charge density -----------------------------------------------------------------


def test_divergence_consistency(kernel, params):
    # 4 pi rho = E' + 2 E / r with E the assembled smoothed field
    E = coulomb_field(params, TS, kernel)
    rho = charge_density(params, TS, kernel)
    rs = np.linspace(A / 2.0, 10.0 * A, 20)
    h = EPS / 50.0
    Ep = (E(rs - 2 * h) - 8 * E(rs - h) + 8 * E(rs + h) - E(rs + 2 * h)) / (
        12.0 * h
    )
    div = Ep + 2.0 * E(rs) / rs
    got = rho(rs)
    tol = np.maximum(1e-8, 1e-4 * np.abs(got) + 1e-4 * np.abs(div))
    assert np.all(np.abs(div - got) < tol)


def test_total_charge(kernel, params):
    # pairing 4 pi r^2 rho(r) against a plateau covering r <= 2a gives e
    rho = charge_density(params, TS, kernel)
    from pointreg.quadrature import QuadratureSpec, integrate_radial

    spec = QuadratureSpec().with_peaks([A], EPS)
    val, _ = integrate_radial(lambda r: r**2 * rho(r), spec)
    assert val == pytest.approx(1.0, abs=1e-4)


def test_charge_density_pairing_recovers_point_charge(kernel, params):
    # integral of r^2 rho T -> e T(a) as eps -> 0 (4 pi folded out)
    T = TestFunction(profile=lambda r: np.exp(-(r**2)), support_radius=8.0)
    grid = [1e-3, 1e-3 / math.sqrt(10.0), 1e-4]
    from pointreg.quadrature import QuadratureSpec, integrate_radial

    vals = []
    for eps in grid:
        prof = charge_density(params, TwoScale(A, eps), kernel)
        spec = QuadratureSpec().with_peaks([A], eps)
        v, _ = integrate_radial(lambda r: r**2 * prof(r) * float(T(r)), spec)
        vals.append(v)
    design = np.vander(np.asarray(grid), N=3, increasing=True)
    coef, *_ = np.linalg.lstsq(design, np.asarray(vals), rcond=None)
    # finite-cutoff limit: the smoothed-delta-derivative term contributes
    # a T'(a) on top of T(a); both reduce to T(0) as the cutoff shrinks
    Tprime_a = -2.0 * A * math.exp(-(A**2))
    expected = float(T(A)) + A * Tprime_a
    assert coef[0] == pytest.approx(expected, abs=1e-6)
    # and the cutoff -> 0 limit recovers the point-charge value T(0)
    assert expected == pytest.approx(float(T(0.0)), abs=3 * A)


def test_charge_density_finite_for_positive_r(kernel, params):
    rho = charge_density(params, TS, kernel)
    rs = np.geomspace(1e-6, 10.0, 60)
    assert np.all(np.isfinite(rho(rs)))


# -- dipole field ---------------------------------------------------------------------


def test_dipole_h1_h2_classical_limits(kernel, params):
    h1, h2 = dipole_h1h2(params, TwoScale(A, 1e-4), kernel)
    for r in (1.0, 2.0):
        assert h1(r) == pytest.approx(1.0 / r**3, rel=1e-6)
        assert h2(r) == pytest.approx(-2.0 / r**3, rel=1e-6)


def test_dipole_field_on_axis(kernel, params):
    # u parallel to mu: H = 2 mu h1 -> 2 mu / r^3
    z = np.array([0.0, 0.0, 1.0])
    r = 2.0
    H = dipole_field(params, TS, kernel, z, r)
    assert np.linalg.norm(H - 2.0 * z / r**3) < 1e-6


def test_dipole_field_equatorial(kernel, params):
    # u perpendicular to mu: H = mu (h1 + h2) -> -mu / r^3
    x = np.array([1.0, 0.0, 0.0])
    r = 2.0
    H = dipole_field(params, TS, kernel, x, r)
    mu = params.mu_vec
    assert np.linalg.norm(H + mu / r**3) < 1e-6


def test_dipole_field_zero_moment(kernel):
    p0 = ElectronParams(mu=(0.0, 0.0, 0.0))
    H = dipole_field(p0, TS, kernel, np.array([0.0, 0.0, 1.0]), 0.5)
    assert np.all(H == 0.0)


def test_dipole_field_rejects_negative_radius(kernel, params):
    with pytest.raises(DomainError):
        dipole_field(params, TS, kernel, np.array([0.0, 0.0, 1.0]), -1.0)


# -- cross profile ---------------------------------------------------------------------


def test_cross_profile_classical_limit(kernel, params):
    for r in (1.0, 2.0):
        assert cross_profile(params, TS, kernel, r) == pytest.approx(
            1.0 / r**5, rel=1e-5
        )


def test_cross_profile_finite_at_peak(kernel, params):
    assert np.isfinite(cross_profile(params, TS, kernel, A))


# -- classical limit suite (all profiles, r >= 10 a, eps <= a/100) ----------------------


def test_classical_limit_suite(kernel, params):
    ts = TwoScale(A, A / 100.0)
    rs = np.linspace(10.0 * A, 30.0 * A, 10)
    phi = coulomb_potential(params, ts, kernel)(rs)
    E = coulomb_field(params, ts, kernel)(rs)
    h1, h2 = dipole_h1h2(params, ts, kernel)
    assert np.max(np.abs(phi - 1.0 / rs) * rs) < 1e-5
    assert np.max(np.abs(E - 1.0 / rs**2) * rs**2) < 1e-5
    assert np.max(np.abs(h1(rs) - 1.0 / rs**3) * rs**3) < 1e-5
    assert np.max(np.abs(h2(rs) + 2.0 / rs**3) * rs**3 / 2.0) < 1e-5
