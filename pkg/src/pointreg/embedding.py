"""Smooth two-scale families for the singular building blocks.

Every singular object used downstream is one of two families, each indexed
by a cutoff length ``a`` and a smoothing width ``eps``:

* power-heaviside: the smoothed version of r^(-n) * step(r - a), evaluated
  as  integral over y >= (a-r)/eps of rho(y) (r + eps y)^(-n) dy, i.e. with
  the substitution w = r + eps y the integrand lives on [a, inf) and is
  never singular;
* delta-derivative: prefactor * eps^(-1-k) * rho^(k)((a-r)/eps), the k-th
  kernel-derivative bump at r = a (k = 0 is the smoothed shifted delta).

The smoothing convention is delta_eps(x) = rho(-x/eps)/eps, i.e. the kernel
argument is (y - x)/eps, which flips the kernel for asymmetric rho.
"""

from __future__ import annotations

import inspect
from dataclasses import dataclass, replace
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from . import backend
from .errors import DomainError, RegimeError
from .kernels import Regularizer

__all__ = [
    "TwoScale",
    "SingularTermFamily",
    "TestFunction",
    "PairingResult",
    "power_heaviside_family",
    "delta_family",
    "delta_embed",
    "heaviside_embed",
    "term_eval",
    "term_eval_derivative",
    "pair_with_test",
]

REGIME_RATIO = 10.0  # observables require eps <= a / 10


@dataclass(frozen=True)
class TwoScale:
    """Cutoff length ``a`` and smoothing width ``eps`` (both lengths > 0)."""

    a: float
    eps: float

    def __post_init__(self):
        if self.a <= 0 or self.eps <= 0:
            raise DomainError("TwoScale requires a > 0 and eps > 0")

    @property
    def in_regime(self) -> bool:
        return self.eps <= self.a / REGIME_RATIO

    def require_regime(self):
        if not self.in_regime:
            raise RegimeError(
                f"eps = {self.eps} exceeds a/{REGIME_RATIO:g} for a = {self.a}"
            )


@dataclass(frozen=True)
class SingularTermFamily:
    """One smoothed building block, evaluable at any radius r >= 0."""

    kind: str  # "power-heaviside" | "delta-derivative"
    regularizer: Regularizer
    scales: TwoScale
    n: int = 0  # inverse power of r (power-heaviside)
    k: int = 0  # kernel-derivative order (delta-derivative)
    prefactor: float = 1.0

    def __call__(self, r):
        return term_eval(self, r)

    def with_scales(self, scales: TwoScale) -> "SingularTermFamily":
        return replace(self, scales=scales)


def power_heaviside_family(
    kernel: Regularizer, scales: TwoScale, n: int, prefactor: float = 1.0
) -> SingularTermFamily:
    return SingularTermFamily(
        kind="power-heaviside",
        regularizer=kernel,
        scales=scales,
        n=n,
        prefactor=prefactor,
    )


def delta_family(
    kernel: Regularizer, scales: TwoScale, k: int = 0, prefactor: float = 1.0
) -> SingularTermFamily:
    if k < 0:
        raise DomainError("derivative order k must be >= 0")
    return SingularTermFamily(
        kind="delta-derivative",
        regularizer=kernel,
        scales=scales,
        k=k,
        prefactor=prefactor,
    )


# -- elementary embeddings ----------------------------------------------------


def delta_embed(kernel: Regularizer, eps: float, x):
    """Smoothed Dirac delta at 0: rho(-x/eps)/eps (note the reflection)."""
    if eps <= 0:
        raise DomainError("eps must be positive")
    x = np.asarray(x, dtype=float)
    return kernel.eval(-x / eps) / eps


def heaviside_embed(kernel: Regularizer, eps: float, x):
    """Smoothed unit step at 0: integral of rho over [-x/eps, inf)."""
    if eps <= 0:
        raise DomainError("eps must be positive")
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    ylo, yhi = kernel.support
    out = np.empty_like(x)
    for i, xi in enumerate(x):
        lo = max(-xi / eps, ylo)
        if lo >= yhi:
            out[i] = 0.0
        elif lo <= ylo:
            out[i] = 1.0 * kernel.scale if kernel.kind != "tabulated" else _full(kernel)
        else:
            out[i], _ = quad(
                kernel.eval, lo, yhi, limit=200, epsabs=1e-13, epsrel=1e-12
            )
    return float(out[0]) if scalar else out


def _full(kernel):
    value, _ = quad(kernel.eval, *kernel.support, limit=200)
    return value


# -- family evaluation ---------------------------------------------------------


def term_eval(term: SingularTermFamily, r):
    """Evaluate a family at radii r >= 0 (scalar or array)."""
    a, eps = term.scales.a, term.scales.eps
    if term.kind == "power-heaviside":
        value = backend.power_heaviside(term.regularizer, term.n, a, eps, r)
        return term.prefactor * value
    # delta-derivative
    z = (a - np.asarray(r, dtype=float)) / eps
    value = term.regularizer.eval_derivative(z, order=term.k)
    return term.prefactor * value / eps ** (1 + term.k)


def term_eval_derivative(term: SingularTermFamily, r, step: float | None = None):
    """d/dr of a family by 5-point central differences.

    Used by the integration-by-parts identity checks, where the derivative
    must come from a path independent of the identities themselves.
    """
    a, eps = term.scales.a, term.scales.eps
    h = step if step is not None else eps / 20.0
    r = np.asarray(r, dtype=float)
    f = lambda x: term_eval(term, np.maximum(x, 0.0))
    return (f(r - 2 * h) - 8 * f(r - h) + 8 * f(r + h) - f(r + 2 * h)) / (12 * h)


# -- pairing with test functions -----------------------------------------------


@dataclass(frozen=True)
class TestFunction:
    """Compactly supported radial test profile."""

    __test__ = False  # not a pytest case despite the name

    profile: Callable[[np.ndarray], np.ndarray]
    support_radius: float

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        return np.where(r > self.support_radius, 0.0, self.profile(r))


@dataclass(frozen=True)
class PairingResult:
    value: float
    error_estimate: float
    diverged: bool
    fitted_exponent: float | None
    samples: tuple[tuple[float, float], ...]


def _pairing_integral(terms, test, weight, eps, weight_takes_eps):
    total = 0.0
    for coef, term in terms:
        scaled = term.with_scales(TwoScale(term.scales.a, eps))

        def integrand(r, scaled=scaled, coef=coef):
            v = coef * term_eval(scaled, r) * test(r)
            if weight is not None:
                v *= weight(r, eps) if weight_takes_eps else weight(r)
            return v

        a = scaled.scales.a
        w = 12.0 * eps
        hi = test.support_radius
        pieces = sorted({0.0, min(max(a - w, 0.0), hi), min(a + w, hi), hi})
        for lo_p, hi_p in zip(pieces, pieces[1:]):
            if hi_p > lo_p:
                val, _ = quad(integrand, lo_p, hi_p, limit=300)
                total += val
    return total


def pair_with_test(
    terms: SingularTermFamily | Sequence[tuple[float, SingularTermFamily]],
    test: TestFunction,
    eps_grid: Sequence[float],
    weight: Callable[[np.ndarray], np.ndarray] | None = None,
) -> PairingResult:
    """Pair a family (or linear combination) with a test function and
    extrapolate eps -> 0.

    The integral is evaluated on each grid eps (strictly decreasing, all in
    regime), then fitted with value = c0 + c1*eps + c2*eps^2.  If the values
    grow like eps^(-q) with q >= 1 (log-log slope <= -0.9) the family is
    flagged as divergent and the fitted exponent is reported instead.

    ``weight`` multiplies the integrand; it may take (r,) or (r, eps) so
    that eps-dependent weights (e.g. the second factor of a squared delta)
    can be expressed.
    """
    if isinstance(terms, SingularTermFamily):
        terms = [(1.0, terms)]
    terms = list(terms)
    if not terms:
        raise DomainError("nothing to pair")
    eps_grid = [float(e) for e in eps_grid]
    if len(eps_grid) < 3:
        raise DomainError("need >= 3 eps values for extrapolation")
    if any(e2 >= e1 for e1, e2 in zip(eps_grid, eps_grid[1:])):
        raise DomainError("eps grid must be strictly decreasing")
    a = terms[0][1].scales.a
    if any(e > a / REGIME_RATIO * (1 + 1e-12) for e in eps_grid):
        raise RegimeError("all grid eps must satisfy eps <= a/10")

    weight_takes_eps = False
    if weight is not None:
        try:
            weight_takes_eps = (
                len(inspect.signature(weight).parameters) >= 2
            )
        except (TypeError, ValueError):
            weight_takes_eps = False

    values = [
        _pairing_integral(terms, test, weight, e, weight_takes_eps)
        for e in eps_grid
    ]
    samples = tuple(zip(eps_grid, values))

    # divergence detection on the magnitude trend
    log_e = np.log(eps_grid)
    mags = np.abs(values)
    diverged = False
    exponent = None
    if mags[-1] > 0 and mags[0] > 0:
        slope = float(
            np.polyfit(log_e, np.log(np.maximum(mags, 1e-300)), 1)[0]
        )
        if slope <= -0.9:
            diverged = True
            exponent = slope

    design = np.vander(np.asarray(eps_grid), N=3, increasing=True)
    coef, res, *_ = np.linalg.lstsq(design, np.asarray(values), rcond=None)
    fitted = design @ coef
    err = float(np.max(np.abs(fitted - values)))
    return PairingResult(
        value=float(coef[0]),
        error_estimate=err,
        diverged=diverged,
        fitted_exponent=exponent,
        samples=samples,
    )
