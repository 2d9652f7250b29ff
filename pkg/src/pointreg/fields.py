"""Physical field profiles of the smoothed point charge and point dipole.

Profiles are kept as explicit decompositions (coefficient x family) so the
downstream integrals can expand products term by term; the evaluator of a
profile is always the sum of its decomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .embedding import (
    SingularTermFamily,
    TwoScale,
    delta_family,
    power_heaviside_family,
    term_eval,
)
from .errors import DomainError
from .kernels import Regularizer

__all__ = [
    "ElectronParams",
    "RadialProfile",
    "sphere_direction",
    "coulomb_potential",
    "coulomb_field",
    "charge_density",
    "dipole_h1h2",
    "dipole_field",
    "cross_profile",
]

Coefficient = float | Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class ElectronParams:
    """Charge, magnetic moment and speed of light (Gaussian units, c = 1)."""

    e: float = 1.0
    mu: tuple[float, float, float] = (0.0, 0.0, 1.0)
    c: float = 1.0

    def __post_init__(self):
        if self.c <= 0:
            raise DomainError("c must be positive")

    @property
    def mu_vec(self) -> np.ndarray:
        return np.asarray(self.mu, dtype=float)

    @property
    def mu_mag(self) -> float:
        return float(np.linalg.norm(self.mu_vec))


@dataclass(frozen=True)
class RadialProfile:
    """Scalar radial profile with its term decomposition."""

    decomposition: tuple[tuple[Coefficient, SingularTermFamily], ...]

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        scalar = r.ndim == 0
        r = np.atleast_1d(r)
        total = np.zeros_like(r)
        for coef, term in self.decomposition:
            c = coef(r) if callable(coef) else coef
            total = total + c * term_eval(term, r)
        return float(total[0]) if scalar else total


def sphere_direction(theta: float, phi: float) -> np.ndarray:
    """Unit vector from polar angles."""
    st = math.sin(theta)
    return np.array([st * math.cos(phi), st * math.sin(phi), math.cos(theta)])


def _over_r(r):
    # families vanish at r = 0 much faster than 1/r blows up; keep the
    # assembled product finite there
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore"):
        return np.where(r > 0.0, 1.0 / np.maximum(r, 1e-300), 0.0)


def coulomb_potential(
    p: ElectronParams, ts: TwoScale, kernel: Regularizer
) -> RadialProfile:
    """Smoothed Coulomb potential e/r with cutoff a: a single n=1 term."""
    term = power_heaviside_family(kernel, ts, n=1)
    return RadialProfile(decomposition=((p.e, term),))


def coulomb_field(
    p: ElectronParams, ts: TwoScale, kernel: Regularizer
) -> RadialProfile:
    """Radial electric field: e [ (r^-2 cutoff)_eps - (1/a)(delta_a)_eps ]."""
    h2 = power_heaviside_family(kernel, ts, n=2)
    d = delta_family(kernel, ts, k=0, prefactor=1.0 / ts.a)
    return RadialProfile(decomposition=((p.e, h2), (-p.e, d)))


def charge_density(
    p: ElectronParams, ts: TwoScale, kernel: Regularizer
) -> RadialProfile:
    """4 pi x charge density of the smoothed point charge (five terms).

    Point values are defined for r > 0 only; the assembled evaluator
    returns 0 at r = 0 where every family is exponentially small.
    """
    a = ts.a
    h2 = power_heaviside_family(kernel, ts, n=2)
    h3 = power_heaviside_family(kernel, ts, n=3)
    d0 = delta_family(kernel, ts, k=0)
    # the k = 1 family is eps^-2 rho'((a-r)/eps), i.e. minus the derivative
    # of the k = 0 family; the smoothed delta'(r - a) enters with +1/a here
    d1 = delta_family(kernel, ts, k=1)
    e = p.e
    return RadialProfile(
        decomposition=(
            (lambda r, e=e: 2.0 * e * _over_r(r), h2),
            (-2.0 * e, h3),
            (e / a**2, d0),
            (lambda r, e=e, a=a: -2.0 * e / a * _over_r(r), d0),
            (e / a, d1),
        )
    )


def dipole_h1h2(
    p: ElectronParams, ts: TwoScale, kernel: Regularizer
) -> tuple[RadialProfile, RadialProfile]:
    """The two radial profiles of the dipole field split.

    h1 = (1/r)(r^-2 cutoff)_eps; h2 = (1/a^2)(delta_a)_eps - 2 (r^-3 cutoff)_eps.
    """
    h_n2 = power_heaviside_family(kernel, ts, n=2)
    h_n3 = power_heaviside_family(kernel, ts, n=3)
    d0 = delta_family(kernel, ts, k=0, prefactor=1.0 / ts.a**2)
    h1 = RadialProfile(decomposition=((lambda r: _over_r(r), h_n2),))
    h2 = RadialProfile(decomposition=((1.0, d0), (-2.0, h_n3)))
    return h1, h2


def dipole_field(
    p: ElectronParams,
    ts: TwoScale,
    kernel: Regularizer,
    u_hat: np.ndarray,
    r: float,
) -> np.ndarray:
    """Magnetic field of the smoothed point dipole at radius r, direction u."""
    if r < 0:
        raise DomainError("r must be >= 0")
    u = np.asarray(u_hat, dtype=float)
    mu = p.mu_vec
    h1, h2 = dipole_h1h2(p, ts, kernel)
    mu_par = u * (mu @ u)
    return (mu + mu_par) * h1(r) + (mu - mu_par) * h2(r)


def cross_profile(
    p: ElectronParams, ts: TwoScale, kernel: Regularizer, r
) -> float | np.ndarray:
    """Scalar radial profile multiplying e (mu x u) in E x H.

    [(r^-2 cutoff)_eps - (1/a)(delta_a)_eps]
      x [2 (r^-3 cutoff)_eps - (1/r)(r^-2 cutoff)_eps - (1/a^2)(delta_a)_eps]
    """
    h2 = power_heaviside_family(kernel, ts, n=2)
    h3 = power_heaviside_family(kernel, ts, n=3)
    d0 = delta_family(kernel, ts, k=0)
    a = ts.a
    r = np.asarray(r, dtype=float)
    f_h2 = term_eval(h2, r)
    f_h3 = term_eval(h3, r)
    f_d = term_eval(d0, r)
    first = f_h2 - f_d / a
    second = 2.0 * f_h3 - _over_r(r) * f_h2 - f_d / a**2
    return first * second
