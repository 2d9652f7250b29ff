"""Physical observables of the pole-dipole singularity.

Every observable is reported as numeric value + instantiated closed-form
prediction + relative deviation.  The "limits" are always finite-(a, eps)
numbers; divergent classical quantities only ever appear as fitted scaling
exponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .embedding import TwoScale, delta_family, power_heaviside_family, term_eval
from .fields import ElectronParams
from .kernels import Regularizer, moment
from .observables import (
    AsymptoticValue,
    Rn_analytic,
    Rn_numeric,
    delta_sq_weighted,
    moment_Mn_analytic,
    moment_Mn_numeric,
)
from .quadrature import (
    QuadratureSpec,
    SphereGrid,
    fit_power_law,
    integrate_radial,
    integrate_sphere,
)

__all__ = [
    "ObservableReport",
    "self_energy_electric",
    "self_energy_magnetic",
    "dipole_delta_volume_integral",
    "radial_self_force",
    "hidden_momentum",
    "spin",
    "comparison_report",
]

DEVIATION_FLOOR = 1e-30


@dataclass(frozen=True)
class ObservableReport:
    name: str  # U_ele | U_mag | F_r | P_vec | S_vec | mc2
    numeric: float | tuple[float, float, float]
    analytic: AsymptoticValue
    analytic_value: float | tuple[float, float, float]
    relative_deviation: float
    params: ElectronParams
    scales: TwoScale
    kernel_kind: str
    extras: tuple[tuple[str, float], ...] = ()

    def extra(self, key: str) -> float:
        return dict(self.extras)[key]

    def to_row(self) -> dict:
        num = self.numeric
        ana = self.analytic_value
        return {
            "observable": self.name,
            "kernel": self.kernel_kind,
            "a": self.scales.a,
            "eps": self.scales.eps,
            "numeric": list(num) if isinstance(num, tuple) else num,
            "analytic": list(ana) if isinstance(ana, tuple) else ana,
            "rel_dev": self.relative_deviation,
        }


def _rel_dev(numeric, analytic) -> float:
    n = np.asarray(numeric, dtype=float)
    a = np.asarray(analytic, dtype=float)
    return float(
        np.linalg.norm(n - a) / max(np.linalg.norm(a), DEVIATION_FLOOR)
    )


def _report(name, numeric, analytic, a_value, p, ts, kernel, extras=()):
    return ObservableReport(
        name=name,
        numeric=numeric,
        analytic=analytic,
        analytic_value=a_value,
        relative_deviation=_rel_dev(numeric, a_value),
        params=p,
        scales=ts,
        kernel_kind=kernel.kind,
        extras=tuple(extras),
    )


def self_energy_electric(
    p: ElectronParams,
    ts: TwoScale,
    kernel: Regularizer,
    spec: QuadratureSpec | None = None,
) -> ObservableReport:
    """U_ele = (e^2/2) x second moment of the squared monopole field."""
    numeric = 0.5 * p.e**2 * moment_Mn_numeric(2, ts, kernel, spec)
    analytic = moment_Mn_analytic(2, ts, kernel).scaled(0.5 * p.e**2)
    return _report(
        "U_ele", numeric, analytic, analytic.instantiate(ts.a, ts.eps),
        p, ts, kernel,
    )


def self_energy_magnetic(
    p: ElectronParams,
    ts: TwoScale,
    kernel: Regularizer,
    spec: QuadratureSpec | None = None,
) -> ObservableReport:
    """Dipole self-energy via the three rearranged radial integrals.

    The cutoff-sector subtotal (everything except the delta^2 integral) is
    attached under extras["h_sector"]; it must vanish against the scale of
    its individual terms, 2/(3 a^3).
    """
    ts.require_regime()
    base = spec if spec is not None else QuadratureSpec()
    qspec = base.with_peaks([ts.a], ts.eps)
    a = ts.a
    h2 = power_heaviside_family(kernel, ts, n=2)
    h3 = power_heaviside_family(kernel, ts, n=3)
    d0 = delta_family(kernel, ts, k=0)

    hh, _ = integrate_radial(
        lambda r: term_eval(h2, r) ** 2
        - 4.0 / 3.0 * r * term_eval(h2, r) * term_eval(h3, r)
        + 4.0 / 3.0 * r**2 * term_eval(h3, r) ** 2,
        qspec,
    )
    mixed, _ = integrate_radial(
        lambda r: (
            2.0 / 3.0 * r * term_eval(h2, r)
            - 4.0 / 3.0 * r**2 * term_eval(h3, r)
        )
        * term_eval(d0, r)
        / a**2,
        qspec,
    )
    dsq, _ = integrate_radial(
        lambda r: r**2 / (3.0 * a**4) * term_eval(d0, r) ** 2, qspec
    )

    mu2 = p.mu_mag**2
    numeric = mu2 * math.fsum((hh, mixed, dsq))
    m20 = moment(kernel, 2, 0).value
    m21 = moment(kernel, 2, 1).value
    analytic = AsymptoticValue.from_dict(
        {(-2, -1): mu2 * m20 / 3.0, (-3, 0): -2.0 * mu2 * m21 / 3.0}
    )
    return _report(
        "U_mag", numeric, analytic, analytic.instantiate(a, ts.eps),
        p, ts, kernel,
        extras=(
            ("h_sector", mu2 * (hh + mixed)),
            ("h_sector_scale", mu2 * 2.0 / (3.0 * a**3)),
        ),
    )


def dipole_delta_volume_integral(
    p: ElectronParams,
    ts: TwoScale,
    kernel: Regularizer,
    spec: QuadratureSpec | None = None,
    grid: SphereGrid | None = None,
) -> np.ndarray:
    """Volume integral of (mu - u(mu.u)) x (1/a^2)(delta_a)_eps; -> (8 pi/3) mu."""
    ts.require_regime()
    base = spec if spec is not None else QuadratureSpec()
    qspec = base.with_peaks([ts.a], ts.eps)
    grid = grid if grid is not None else SphereGrid.build()
    d0 = delta_family(kernel, ts, k=0, prefactor=1.0 / ts.a**2)
    radial, _ = integrate_radial(lambda r: r**2 * term_eval(d0, r), qspec)
    mu = p.mu_vec
    angular = integrate_sphere(lambda u: mu - u * (mu @ u), grid)
    return radial * angular


def radial_self_force(
    p: ElectronParams,
    ts: TwoScale,
    kernel: Regularizer,
    spec: QuadratureSpec | None = None,
    grid: SphereGrid | None = None,
) -> ObservableReport:
    """Radial self-force e^2 x first moment of the squared monopole field.

    extras carry the norm of the assembled total force vector (angular
    integral of u F_r), which must vanish.
    """
    grid = grid if grid is not None else SphereGrid.build()
    f_r = p.e**2 * moment_Mn_numeric(1, ts, kernel, spec)
    analytic = moment_Mn_analytic(1, ts, kernel).scaled(p.e**2)
    total_vec = integrate_sphere(lambda u: u * f_r, grid)
    return _report(
        "F_r", f_r, analytic, analytic.instantiate(ts.a, ts.eps),
        p, ts, kernel,
        extras=(("total_force_norm", float(np.linalg.norm(total_vec))),),
    )


def hidden_momentum(
    p: ElectronParams,
    ts: TwoScale,
    kernel: Regularizer,
    spec: QuadratureSpec | None = None,
    grid: SphereGrid | None = None,
) -> ObservableReport:
    """Field momentum of the crossed monopole/dipole fields; expected zero.

    extras carry the finite radial factor R_2 and its prediction so the
    zero is exhibited as (large radial number) x (vanishing angular
    integral).
    """
    grid = grid if grid is not None else SphereGrid.build()
    r2 = Rn_numeric(2, ts, kernel, spec)
    r2_pred = Rn_analytic(2, ts, kernel).instantiate(ts.a, ts.eps)
    mu = p.mu_vec
    angular = integrate_sphere(lambda u: np.cross(mu, u), grid)
    vec = p.e / (4.0 * math.pi * p.c) * r2 * angular
    analytic = AsymptoticValue.from_dict({(0, 0): 0.0})
    return ObservableReport(
        name="P_vec",
        numeric=tuple(vec),
        analytic=analytic,
        analytic_value=(0.0, 0.0, 0.0),
        relative_deviation=float(np.linalg.norm(vec)),
        params=p,
        scales=ts,
        kernel_kind=kernel.kind,
        extras=(
            ("radial_factor", r2),
            ("radial_factor_pred", r2_pred),
            ("norm", float(np.linalg.norm(vec))),
        ),
    )


def spin(
    p: ElectronParams,
    ts: TwoScale,
    kernel: Regularizer,
    spec: QuadratureSpec | None = None,
    grid: SphereGrid | None = None,
) -> ObservableReport:
    """Field angular momentum; prediction (2e/3c) mu M20/eps."""
    grid = grid if grid is not None else SphereGrid.build()
    r3 = Rn_numeric(3, ts, kernel, spec)
    mu = p.mu_vec
    angular = integrate_sphere(lambda u: np.cross(u, np.cross(mu, u)), grid)
    vec = p.e / (4.0 * math.pi * p.c) * r3 * angular
    m20 = moment(kernel, 2, 0).value
    factor = 2.0 * p.e / (3.0 * p.c)
    analytic = AsymptoticValue.from_dict({(0, -1): factor * m20})
    pred = tuple(analytic.instantiate(ts.a, ts.eps) * mu)
    return _report(
        "S_vec", tuple(vec), analytic, pred, p, ts, kernel,
        extras=(("radial_factor", r3),),
    )


# -- cross-framework comparison ----------------------------------------------------


def comparison_report(
    p: ElectronParams,
    ts_list: Sequence[TwoScale],
    kernels: Sequence[Regularizer],
    spec: QuadratureSpec | None = None,
    eps_fit_points: int = 5,
) -> list[dict]:
    """Tabulate U_ele, U_mag, S in both the moment form and the delta^2
    integral form, with their mutual deviation and eps-scaling exponents."""
    rows = []
    for kernel in kernels:
        m20 = moment(kernel, 2, 0).value
        m21 = moment(kernel, 2, 1).value
        for ts in sorted(ts_list, key=lambda t: (t.a, t.eps)):
            ts.require_regime()
            a, eps = ts.a, ts.eps
            w1 = delta_sq_weighted(lambda r: 1.0, ts, kernel, spec)

            u_ele_m = self_energy_electric(p, ts, kernel, spec)
            u_mag_m = self_energy_magnetic(p, ts, kernel, spec)
            s_m = spin(p, ts, kernel, spec)

            u_ele_d = 0.5 * p.e**2 * w1
            u_mag_d = p.mu_mag**2 / (3.0 * a**2) * w1
            s_d = 2.0 * p.e * p.mu_mag / (3.0 * p.c) * w1

            # eps-scaling of the delta^2 integral over a geometric grid
            ratio = math.sqrt(10.0)
            eps_grid = [eps / ratio**k for k in range(eps_fit_points)]
            samples = [
                (e, delta_sq_weighted(lambda r: 1.0, TwoScale(a, e), kernel, spec))
                for e in eps_grid
            ]
            exponent, _ = fit_power_law(samples)

            s_num = float(np.linalg.norm(np.asarray(s_m.numeric)))
            rows.append(
                {
                    "kernel": kernel.kind,
                    "a": a,
                    "eps": eps,
                    "M20": m20,
                    "M21": m21,
                    "U_ele_moment": float(u_ele_m.numeric),
                    "U_ele_deltasq": u_ele_d,
                    "U_ele_mutual_dev": _rel_dev(u_ele_m.numeric, u_ele_d),
                    "U_mag_moment": float(u_mag_m.numeric),
                    "U_mag_deltasq": u_mag_d,
                    "U_mag_mutual_dev": _rel_dev(u_mag_m.numeric, u_mag_d),
                    "S_moment": s_num,
                    "S_deltasq": s_d,
                    "S_mutual_dev": _rel_dev(s_num, s_d),
                    "mc2": float(u_ele_m.numeric) + float(u_mag_m.numeric),
                    "eps_exponent": exponent,
                }
            )
    return rows
