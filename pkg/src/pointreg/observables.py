"""The named radial integrals and their closed-form leading terms.

Two independent routes exist for every quantity:

* numeric: term-expanded quadrature (separate cutoff^2, mixed and delta^2
  integrals, summed), with the single-integrand brute-force path used as an
  oracle in the tests;
* analytic: a coefficient map over (power of a, power of eps), instantiated
  only at comparison time.

Note on asymmetry: for a non-even kernel the delta^2 change of variables
r = a - eps z reflects the kernel, so the first-moment correction enters
with a minus sign:

    integral r^n (delta_a)_eps^2 dr = a^n M20/eps - n a^(n-1) M21 + O(eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .embedding import (
    SingularTermFamily,
    TwoScale,
    delta_family,
    power_heaviside_family,
    term_eval,
    term_eval_derivative,
)
from .errors import DomainError, PoleError
from .kernels import Regularizer, moment
from .quadrature import QuadratureSpec, integrate_radial

__all__ = [
    "AsymptoticValue",
    "IdentityTag",
    "moment_Mn_numeric",
    "moment_Mn_analytic",
    "Rn_numeric",
    "Rn_analytic",
    "delta_sq_weighted",
    "delta_sq_prediction",
    "identity_residual",
]


@dataclass(frozen=True)
class AsymptoticValue:
    """Finite map (pow_a, pow_eps) -> coefficient with an O(eps^q) tag."""

    coefficients: tuple[tuple[tuple[int, int], float], ...]
    remainder_order: int = 1

    @classmethod
    def from_dict(cls, coeffs: dict, remainder_order: int = 1) -> "AsymptoticValue":
        items = tuple(sorted(coeffs.items()))
        keys = [k for k, _ in items]
        if len(set(keys)) != len(keys):
            raise DomainError("duplicate coefficient keys")
        for _, c in items:
            if not math.isfinite(c):
                raise DomainError("non-finite coefficient")
        return cls(coefficients=items, remainder_order=remainder_order)

    def as_dict(self) -> dict:
        return dict(self.coefficients)

    def instantiate(self, a: float, eps: float) -> float:
        return math.fsum(
            c * a**pa * eps**pe for (pa, pe), c in self.coefficients
        )

    def scaled(self, factor: float) -> "AsymptoticValue":
        return AsymptoticValue(
            coefficients=tuple((k, factor * c) for k, c in self.coefficients),
            remainder_order=self.remainder_order,
        )


class IdentityTag(Enum):
    SEN8 = "sen8"
    SFO7 = "sfo7"
    DIP13 = "dip13"
    DIP14 = "dip14"
    ELE12 = "ele12"
    ELE13 = "ele13"


def _default_spec(spec: QuadratureSpec | None, ts: TwoScale) -> QuadratureSpec:
    base = spec if spec is not None else QuadratureSpec()
    return base.with_peaks([ts.a], ts.eps)


def _families(kernel: Regularizer, ts: TwoScale):
    h2 = power_heaviside_family(kernel, ts, n=2)
    h3 = power_heaviside_family(kernel, ts, n=3)
    d0 = delta_family(kernel, ts, k=0)
    return h2, h3, d0


# -- moments of the squared monopole field --------------------------------------


def moment_Mn_numeric(
    n: int,
    ts: TwoScale,
    kernel: Regularizer,
    spec: QuadratureSpec | None = None,
    return_parts: bool = False,
):
    """n-th radial moment of the squared monopole field, term-expanded.

    Three separate integrals (cutoff^2, mixed, delta^2) are evaluated with
    the peak panel at r = a and summed.
    """
    if n > 2:
        raise PoleError("moments are defined for n <= 2 (n = 3 is the pole)")
    ts.require_regime()
    spec = _default_spec(spec, ts)
    h2, _, d0 = _families(kernel, ts)
    a = ts.a

    sq, _ = integrate_radial(lambda r: r**n * term_eval(h2, r) ** 2, spec)
    mixed, _ = integrate_radial(
        lambda r: -2.0 * r**n * term_eval(h2, r) * term_eval(d0, r) / a, spec
    )
    dsq, _ = integrate_radial(lambda r: r**n * (term_eval(d0, r) / a) ** 2, spec)
    parts = (sq, mixed, dsq)
    total = math.fsum(parts)
    return (total, parts) if return_parts else total


def moment_Mn_analytic(
    n: int, ts: TwoScale, kernel: Regularizer
) -> AsymptoticValue:
    """Leading terms: a^(n-3) [1/(3-n) - 1 - n M21] + a^(n-2) M20 / eps."""
    if n == 3:
        raise PoleError("n = 3 hits the 1/(3-n) pole (logarithmic case)")
    if n > 2:
        raise PoleError("analytic moment expansion is stated for n <= 2")
    m20 = moment(kernel, 2, 0).value
    m21 = moment(kernel, 2, 1).value
    return AsymptoticValue.from_dict(
        {
            (n - 3, 0): 1.0 / (3 - n) - 1.0 - n * m21,
            (n - 2, -1): m20,
        }
    )


# -- radial integrals of the E x H profile ---------------------------------------


def Rn_numeric(
    n: int,
    ts: TwoScale,
    kernel: Regularizer,
    spec: QuadratureSpec | None = None,
    return_parts: bool = False,
):
    """Term-expanded radial integral of r^n x (E x H scalar profile)."""
    if n not in (2, 3):
        raise DomainError("R_n is evaluated for n in {2, 3}")
    ts.require_regime()
    spec = _default_spec(spec, ts)
    h2, h3, d0 = _families(kernel, ts)
    a = ts.a

    hh, _ = integrate_radial(
        lambda r: 2.0 * r**n * term_eval(h2, r) * term_eval(h3, r)
        - r ** (n - 1) * term_eval(h2, r) ** 2,
        spec,
    )
    mixed, _ = integrate_radial(
        lambda r: (
            -2.0 * r**n / a * term_eval(h3, r)
            + (a * r ** (n - 1) - r**n) / a**2 * term_eval(h2, r)
        )
        * term_eval(d0, r),
        spec,
    )
    dsq, _ = integrate_radial(
        lambda r: r**n / a**3 * term_eval(d0, r) ** 2, spec
    )
    parts = (hh, mixed, dsq)
    total = math.fsum(parts)
    return (total, parts) if return_parts else total


def Rn_analytic(n: int, ts: TwoScale, kernel: Regularizer) -> AsymptoticValue:
    """Leading terms a^(n-3) M20/eps - (n-3)/(n-4) a^(n-4) (even kernel)."""
    if n == 4:
        raise PoleError("n = 4 hits the (n-3)/(n-4) pole")
    m20 = moment(kernel, 2, 0).value
    return AsymptoticValue.from_dict(
        {
            (n - 3, -1): m20,
            (n - 4, 0): -(n - 3) / (n - 4),
        }
    )


# -- weighted delta^2 integrals ---------------------------------------------------


def delta_sq_weighted(
    F: Callable[[float], float],
    ts: TwoScale,
    kernel: Regularizer,
    spec: QuadratureSpec | None = None,
) -> float:
    """Integral of F(r) x (delta_a)_eps^2 over [0, inf)."""
    ts.require_regime()
    spec = _default_spec(spec, ts)
    d0 = delta_family(kernel, ts, k=0)
    value, _ = integrate_radial(lambda r: F(r) * term_eval(d0, r) ** 2, spec)
    return value


def delta_sq_prediction(
    F: Callable[[float], float],
    ts: TwoScale,
    kernel: Regularizer,
    Fprime: Callable[[float], float] | None = None,
) -> float:
    """Leading prediction M20 F(a)/eps - M21 F'(a) (minus: see module note)."""
    a, eps = ts.a, ts.eps
    m20 = moment(kernel, 2, 0).value
    m21 = moment(kernel, 2, 1).value
    if Fprime is not None:
        fp = Fprime(a)
    else:
        h = 1e-6 * a
        fp = (F(a + h) - F(a - h)) / (2.0 * h)
    return m20 * F(a) / eps - m21 * fp


# -- integration-by-parts identities ----------------------------------------------


def identity_residual(
    tag: IdentityTag,
    ts: TwoScale,
    kernel: Regularizer,
    r_samples,
    n: int = 2,
) -> float:
    """Max normalized residual |LHS - RHS| / (1 + |LHS|) over the samples.

    Derivative sides use 5-point finite differences of quadrature-evaluated
    families, so the two sides never share an algebraic path.
    """
    r = np.asarray(r_samples, dtype=float)
    if np.any(r <= 0):
        raise DomainError("identity samples must be positive radii")
    a, eps = ts.a, ts.eps
    h2 = power_heaviside_family(kernel, ts, n=2)
    h3 = power_heaviside_family(kernel, ts, n=3)
    h4 = power_heaviside_family(kernel, ts, n=4)
    d0 = delta_family(kernel, ts, k=0)

    A2 = term_eval(h2, r)
    A3 = term_eval(h3, r)
    A4 = term_eval(h4, r)
    D = term_eval(d0, r)

    def d_dr(func):
        step = eps / 80.0
        return (
            func(r - 2 * step)
            - 8.0 * func(r - step)
            + 8.0 * func(r + step)
            - func(r + 2 * step)
        ) / (12.0 * step)

    if tag is IdentityTag.SEN8:
        lhs = d_dr(lambda x: term_eval(h2, x) ** 2)
        rhs = 2.0 * A2 * D / a**2 - 4.0 * A2 * A3
    elif tag is IdentityTag.SFO7:
        def E(x):
            return term_eval(h2, x) - term_eval(d0, x) / a

        Ev = E(r)
        Ep = d_dr(E)
        lhs = Ev * (Ep + 2.0 * Ev / r)
        rhs = d_dr(lambda x: (x**2 * E(x)) ** 2) / (2.0 * r**4)
    elif tag is IdentityTag.DIP13:
        lhs = r * d_dr(lambda x: term_eval(h2, x) ** 2)
        rhs = 2.0 * r * A2 * D / a**2 - 4.0 * r * A2 * A3
    elif tag is IdentityTag.DIP14:
        lhs = a * r**2 * d_dr(lambda x: term_eval(h3, x) ** 2)
        rhs = 2.0 * a * r**2 * A3 * D / a**3 - 6.0 * a * r**2 * A3 * A4
    elif tag is IdentityTag.ELE12:
        lhs = a**2 * r**n * d_dr(lambda x: term_eval(h3, x) ** 2)
        rhs = 2.0 * r**n / a * A3 * D - 6.0 * a**2 * r**n * A3 * A4
    elif tag is IdentityTag.ELE13:
        poly = a * r ** (n - 1) - r**n
        lhs = 0.5 * poly * d_dr(lambda x: term_eval(h2, x) ** 2)
        rhs = poly / a**2 * A2 * D - 2.0 * poly * A2 * A3
    else:  # pragma: no cover
        raise DomainError(f"unknown identity tag {tag}")

    return float(np.max(np.abs(lhs - rhs) / (1.0 + np.abs(lhs))))
