"""Radial and spherical quadrature plus asymptotic-coefficient fitting.

All plumbing: nearly-singular radial integrals on [0, inf) are pre-split
around each kernel peak so the adaptive panels never straddle the eps-scale
bump, the sphere rule is a product Gauss-Legendre(cos theta) x uniform(phi)
grid, and leading (1/eps, const, eps, ...) coefficients are extracted by
least squares over an eps grid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

from .errors import ConditioningError, IntegrationError

__all__ = [
    "QuadratureSpec",
    "SphereGrid",
    "AsymptoticFit",
    "integrate_radial",
    "integrate_sphere",
    "fit_asymptotics",
    "fit_power_law",
]

PEAK_WINDOW_FACTOR = 12.0  # half-window in units of peak_width


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and peak structure for one radial integral."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 200
    peak_locations: tuple[float, ...] = ()
    peak_width: float = 1e-3
    # optional tail envelope |f(r)| <= coef * r^(-power) for r >= start;
    # when set, the semi-infinite tail is truncated where its contribution
    # drops below abs_tol/10 instead of using the infinite-interval transform
    tail_envelope: tuple[float, float, float] | None = None

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0 or self.peak_width <= 0:
            raise ValueError("tolerances and peak_width must be positive")

    def with_peaks(self, locations, width) -> "QuadratureSpec":
        return QuadratureSpec(
            abs_tol=self.abs_tol,
            rel_tol=self.rel_tol,
            max_subdivisions=self.max_subdivisions,
            peak_locations=tuple(float(p) for p in locations),
            peak_width=float(width),
            tail_envelope=self.tail_envelope,
        )


def _tail_cut(spec: QuadratureSpec) -> float | None:
    if spec.tail_envelope is None:
        return None
    coef, power, start = spec.tail_envelope
    if power <= 1.0:
        return None
    # choose R with coef * R^(1-power) / (power-1) < abs_tol / 10
    target = spec.abs_tol / 10.0
    radius = (coef / ((power - 1.0) * target)) ** (1.0 / (power - 1.0))
    return max(radius, start)


def integrate_radial(
    f: Callable[[float], float], spec: QuadratureSpec
) -> tuple[float, float]:
    """Adaptive integral of f over [0, inf) with peak-aware domain splitting.

    Returns (value, error_estimate); raises IntegrationError (carrying the
    best estimate) when the requested tolerance is not met.
    """
    window = PEAK_WINDOW_FACTOR * spec.peak_width
    edges = {0.0}
    for p in sorted(spec.peak_locations):
        edges.add(max(p - window, 0.0))
        edges.add(p + window)
    edges = sorted(edges)

    pieces = []
    total = 0.0
    err = 0.0
    for lo, hi in zip(edges, edges[1:]):
        if hi <= lo:
            continue
        v, e = _finite_panel(f, lo, hi, spec)
        pieces.append(v)
        err += e

    # semi-infinite tail
    start = edges[-1]
    cut = _tail_cut(spec)
    if cut is not None and cut > start:
        v, e = _finite_panel(f, start, cut, spec)
    else:
        v, e = quad(
            f, start, np.inf, limit=spec.max_subdivisions,
            epsabs=spec.abs_tol, epsrel=spec.rel_tol,
        )
    pieces.append(v)
    err += abs(e)

    total = math.fsum(pieces)
    bound = max(spec.abs_tol, spec.rel_tol * abs(total))
    if err > 10.0 * bound:
        raise IntegrationError(
            f"radial quadrature error estimate {err:.3e} exceeds tolerance {bound:.3e}",
            value=total,
            error_estimate=err,
        )
    return total, err


def _finite_panel(f, lo, hi, spec):
    # peak panels get the z = (r - p)/width substitution for conditioning
    for p in spec.peak_locations:
        if lo <= p <= hi and (hi - lo) <= 2.01 * PEAK_WINDOW_FACTOR * spec.peak_width:
            w = spec.peak_width

            def g(z):
                return f(p + w * z) * w

            return quad(
                g, (lo - p) / w, (hi - p) / w, limit=spec.max_subdivisions,
                epsabs=spec.abs_tol, epsrel=spec.rel_tol, points=[0.0],
            )
    return quad(
        f, lo, hi, limit=spec.max_subdivisions,
        epsabs=spec.abs_tol, epsrel=spec.rel_tol,
    )


# -- sphere ---------------------------------------------------------------------


@dataclass(frozen=True)
class SphereGrid:
    """Product quadrature on the unit sphere; weights sum to 4 pi."""

    order: int
    nodes: np.ndarray = field(repr=False, default=None)  # (N, 3) unit vectors
    weights: np.ndarray = field(repr=False, default=None)  # (N,)

    @classmethod
    def build(cls, order: int = 16) -> "SphereGrid":
        if order < 1:
            raise ValueError("order must be >= 1")
        x, w = np.polynomial.legendre.leggauss(order)  # x = cos(theta)
        n_phi = 2 * order
        phi = 2.0 * np.pi * np.arange(n_phi) / n_phi
        w_phi = 2.0 * np.pi / n_phi

        cos_t = np.repeat(x, n_phi)
        sin_t = np.sqrt(1.0 - cos_t**2)
        phis = np.tile(phi, order)
        nodes = np.column_stack(
            [sin_t * np.cos(phis), sin_t * np.sin(phis), cos_t]
        )
        weights = np.repeat(w, n_phi) * w_phi
        return cls(order=order, nodes=nodes, weights=weights)


def integrate_sphere(g: Callable[[np.ndarray], float | np.ndarray], grid: SphereGrid):
    """Sum of w_i * g(u_i) over the grid; g maps a unit vector to a scalar
    or a 3-vector."""
    probe = np.asarray(g(grid.nodes[0]), dtype=float)
    if probe.ndim == 0:
        acc = 0.0
        vals = [w * float(g(u)) for u, w in zip(grid.nodes, grid.weights)]
        return math.fsum(vals)
    acc = np.zeros(3)
    for u, w in zip(grid.nodes, grid.weights):
        acc = acc + w * np.asarray(g(u), dtype=float)
    return acc


# -- asymptotic fits -------------------------------------------------------------


@dataclass(frozen=True)
class AsymptoticFit:
    powers: tuple[int, ...]
    coefficients: tuple[float, ...]
    residual: float

    def coefficient(self, power: int) -> float:
        return self.coefficients[self.powers.index(power)]


def fit_asymptotics(
    samples: Sequence[tuple[float, float]], model_powers: Sequence[int]
) -> AsymptoticFit:
    """Least-squares coefficients of sum c_q eps^q through the samples.

    Requires len(samples) > len(model_powers) and an eps span of at least
    one decade; otherwise the design is declared ill-conditioned.
    """
    powers = tuple(int(p) for p in model_powers)
    eps = np.asarray([s[0] for s in samples], dtype=float)
    vals = np.asarray([s[1] for s in samples], dtype=float)
    if eps.size < len(powers) + 1:
        raise ConditioningError(
            f"need at least {len(powers) + 1} samples for powers {powers}"
        )
    if eps.min() <= 0:
        raise ConditioningError("eps samples must be positive")
    if eps.max() / eps.min() < 10.0 * (1.0 - 1e-9):
        raise ConditioningError("eps samples must span at least one decade")

    design = np.column_stack([eps**p for p in powers])
    # row scaling keeps the small-eps rows (which pin the negative powers)
    # from being drowned by absolute-size differences
    row_w = 1.0 / np.maximum(np.abs(vals), 1.0)
    coef, *_ = np.linalg.lstsq(design * row_w[:, None], vals * row_w, rcond=None)
    residual = float(np.max(np.abs(design @ coef - vals)))
    return AsymptoticFit(powers=powers, coefficients=tuple(coef), residual=residual)


def fit_power_law(samples: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """(exponent, coefficient) of v ~ coef * eps^exponent by log-log fit."""
    eps = np.asarray([s[0] for s in samples], dtype=float)
    vals = np.asarray([abs(s[1]) for s in samples], dtype=float)
    if eps.size < 2:
        raise ConditioningError("need >= 2 samples for a power-law fit")
    if np.any(vals <= 0):
        raise ConditioningError("power-law fit needs non-zero values")
    slope, intercept = np.polyfit(np.log(eps), np.log(vals), 1)
    return float(slope), float(math.exp(intercept))
