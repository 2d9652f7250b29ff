"""Regularizing kernels: normalization, parity, decay bounds and moments.

A kernel rho is a smooth, rapidly decaying function with unit integral.  It
smooths singular objects by convolution at scale eps; every closed-form
result downstream depends on it only through the moments

    moment(rho, p, n) = integral of  y^n * rho(y)^p  dy.

Three analytic kernels are shipped (a Gaussian, an even compact bump and a
shifted, hence asymmetric, compact bump) plus tabulated kernels loaded from
two-column CSV.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.interpolate import CubicSpline

from .errors import DomainError, InterpolationRangeError, NormalizationError

__all__ = [
    "Regularizer",
    "MomentValue",
    "TailBound",
    "gaussian",
    "compact_bump",
    "asymmetric_bump",
    "tabulated",
    "tabulated_from_csv",
    "kernel_by_name",
    "moment",
    "normalize",
    "SHIPPED_KERNELS",
]

# integral of exp(-1/(1-u^2)) over (-1, 1); cross-checked by quadrature in
# the test suite
BUMP_NORM = 0.44399381616807937

# Gaussian tail beyond this many widths is < 1e-35 and is treated as zero.
GAUSSIAN_CUT = 9.0


@dataclass(frozen=True)
class TailBound:
    """Integrable envelope B with |rho(z)| <= B(|z|) for |z| >= r0."""

    kind: str  # "gaussian" | "compact"
    r0: float
    width: float = 1.0
    shift: float = 0.0

    def __call__(self, radius):
        radius = np.asarray(radius, dtype=float)
        if self.kind == "compact":
            return np.where(radius >= self.r0, 0.0, np.inf)
        # loose Gaussian envelope exp(-z^2/2) in kernel units, recentered
        z = np.maximum((radius - abs(self.shift)) / self.width, 0.0)
        return np.exp(-0.5 * z * z)


@dataclass(frozen=True)
class MomentValue:
    power: int
    order: int
    value: float


@dataclass(frozen=True)
class Regularizer:
    """Immutable kernel description.

    ``scale`` is an overall multiplier so that :func:`normalize` can return
    a rescaled copy; shipped constructors already produce unit-integral
    kernels.  ``table`` (z-grid, values) is only set for tabulated kernels.
    """

    kind: str  # "gaussian" | "compact-bump" | "asymmetric-bump" | "tabulated"
    width: float = 1.0
    shift: float = 0.0
    scale: float = 1.0
    table: tuple[tuple[float, ...], tuple[float, ...]] | None = None
    parity: str = "even"  # "even" | "general"
    peak_halfwidth: float = 1.0
    decay: TailBound | None = None

    # -- geometry -----------------------------------------------------------

    @property
    def support(self) -> tuple[float, float]:
        """Interval outside which the kernel is (numerically) zero."""
        if self.kind == "gaussian":
            half = GAUSSIAN_CUT * self.width
        elif self.kind in ("compact-bump", "asymmetric-bump"):
            half = self.width
        else:
            return (self.table[0][0], self.table[0][-1])
        return (self.shift - half, self.shift + half)

    @property
    def peak_center(self) -> float:
        if self.kind == "tabulated":
            z = np.asarray(self.table[0])
            v = np.asarray(self.table[1])
            return float(z[np.argmax(np.abs(v))])
        return self.shift

    # -- evaluation ---------------------------------------------------------

    def __call__(self, z):
        return self.eval(z)

    def eval(self, z):
        """Pointwise kernel value; vectorized over z."""
        z = np.asarray(z, dtype=float)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        if self.kind == "gaussian":
            u = (z - self.shift) / self.width
            out = self.scale * np.exp(-u * u) / (self.width * math.sqrt(math.pi))
        elif self.kind in ("compact-bump", "asymmetric-bump"):
            out = _bump(z, self.width, self.shift, self.scale)
        else:
            lo, hi = self.support
            if np.any(z < lo) or np.any(z > hi):
                raise InterpolationRangeError(
                    f"tabulated kernel queried outside [{lo}, {hi}]"
                )
            out = self.scale * _table_spline(self.table)(z)
        return float(out[0]) if scalar else out

    def eval_derivative(self, z, order=1):
        """d^order rho / dz^order; analytic for shipped kernels."""
        if order == 0:
            return self.eval(z)
        z = np.asarray(z, dtype=float)
        scalar = z.ndim == 0
        z = np.atleast_1d(z)
        if self.kind == "gaussian":
            u = (z - self.shift) / self.width
            base = self.scale * np.exp(-u * u) / (self.width * math.sqrt(math.pi))
            if order == 1:
                out = base * (-2.0 * u) / self.width
            elif order == 2:
                out = base * (4.0 * u * u - 2.0) / self.width**2
            else:
                raise DomainError(f"analytic derivative order {order} not supported")
        elif self.kind in ("compact-bump", "asymmetric-bump"):
            if order != 1:
                raise DomainError(f"analytic derivative order {order} not supported")
            u = (z - self.shift) / self.width
            out = np.zeros_like(z)
            inside = np.abs(u) < 1.0
            ui = u[inside]
            w = 1.0 - ui * ui
            out[inside] = (
                _bump(z[inside], self.width, self.shift, self.scale)
                * (-2.0 * ui / (w * w))
                / self.width
            )
        else:
            if order != 1:
                raise DomainError(f"analytic derivative order {order} not supported")
            # central differences, step tied to the peak scale
            h = self.peak_halfwidth / 1e3
            lo, hi = self.support
            zc = np.clip(z, lo + h, hi - h)
            out = (self.eval(zc + h) - self.eval(zc - h)) / (2.0 * h)
        return float(out[0]) if scalar else out


def _bump(z, width, shift, scale):
    u = (np.asarray(z, dtype=float) - shift) / width
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = scale / (width * BUMP_NORM) * np.exp(-1.0 / (1.0 - ui * ui))
    return out


@lru_cache(maxsize=32)
def _table_spline(table):
    z = np.asarray(table[0], dtype=float)
    v = np.asarray(table[1], dtype=float)
    if z.ndim != 1 or z.size < 4 or np.any(np.diff(z) <= 0):
        raise DomainError("tabulated kernel needs >= 4 strictly increasing z nodes")
    return CubicSpline(z, v)


# -- shipped kernels ---------------------------------------------------------


def gaussian(width: float = 1.0, shift: float = 0.0) -> Regularizer:
    """rho(z) = exp(-((z - shift)/width)^2) / (width sqrt(pi))."""
    if width <= 0:
        raise DomainError("width must be positive")
    return Regularizer(
        kind="gaussian",
        width=width,
        shift=shift,
        parity="even" if shift == 0.0 else "general",
        peak_halfwidth=width,
        decay=TailBound("gaussian", r0=2.0 * width + abs(shift), width=width, shift=shift),
    )


def compact_bump(width: float = 1.0) -> Regularizer:
    """Even bump proportional to exp(-1/(1-(z/width)^2)) on (-width, width)."""
    if width <= 0:
        raise DomainError("width must be positive")
    return Regularizer(
        kind="compact-bump",
        width=width,
        parity="even",
        peak_halfwidth=0.5 * width,
        decay=TailBound("compact", r0=width),
    )


def asymmetric_bump(shift: float = 0.3, width: float = 1.0) -> Regularizer:
    """Compact bump recentered at ``shift``; first moments no longer vanish."""
    if width <= 0:
        raise DomainError("width must be positive")
    if shift == 0.0:
        raise DomainError("asymmetric bump needs a non-zero shift")
    return Regularizer(
        kind="asymmetric-bump",
        width=width,
        shift=shift,
        parity="general",
        peak_halfwidth=0.5 * width,
        decay=TailBound("compact", r0=width + abs(shift)),
    )


def tabulated(z, values, parity: str = "general") -> Regularizer:
    z = tuple(float(x) for x in z)
    values = tuple(float(v) for v in values)
    table = (z, values)
    _table_spline(table)  # validates the grid
    peak = z[int(np.argmax(np.abs(values)))]
    halfwidth = max((z[-1] - z[0]) / 10.0, 1e-12)
    kernel = Regularizer(
        kind="tabulated",
        table=table,
        parity=parity,
        peak_halfwidth=halfwidth,
        shift=peak,
        decay=TailBound("compact", r0=max(abs(z[0]), abs(z[-1]))),
    )
    return normalize(kernel)


def tabulated_from_csv(path, parity: str = "general") -> Regularizer:
    """Load a kernel from two-column CSV rows (z, rho(z))."""
    zs, vs = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            zs.append(float(row[0]))
            vs.append(float(row[1]))
    return tabulated(zs, vs, parity=parity)


SHIPPED_KERNELS = {
    "gaussian": gaussian,
    "bump": compact_bump,
    "asym": asymmetric_bump,
}


def kernel_by_name(name: str, **params) -> Regularizer:
    if name not in SHIPPED_KERNELS:
        raise DomainError(
            f"unknown kernel {name!r}; shipped kernels: {sorted(SHIPPED_KERNELS)}"
        )
    return SHIPPED_KERNELS[name](**params)


# -- moments and normalization ----------------------------------------------


def _raw_integral(kernel: Regularizer, p: int, n: int) -> float:
    lo, hi = kernel.support
    peak = kernel.peak_center

    def integrand(z):
        return z**n * kernel.eval(z) ** p

    points = [peak] if lo < peak < hi else None
    value, err = quad(
        integrand, lo, hi, points=points, limit=400, epsabs=1e-13, epsrel=1e-12
    )
    return value


@lru_cache(maxsize=4096)
def _moment_cached(kernel: Regularizer, p: int, n: int) -> float:
    return _raw_integral(kernel, p, n)


def moment(kernel: Regularizer, p: int, n: int) -> MomentValue:
    """MomentValue for integral of y^n rho(y)^p dy; cached per (kernel, p, n)."""
    if p < 1 or n < 0:
        raise DomainError("moment requires p >= 1 and n >= 0")
    return MomentValue(power=p, order=n, value=_moment_cached(kernel, p, n))


def normalize(kernel: Regularizer) -> Regularizer:
    """Rescale so the kernel integrates to exactly one."""
    total = _raw_integral(kernel, 1, 0)
    if not math.isfinite(total) or abs(total) < 1e-300:
        raise NormalizationError("kernel integral is zero or non-finite")
    if abs(total - 1.0) < 1e-14:
        return kernel
    return replace(kernel, scale=kernel.scale / total)
