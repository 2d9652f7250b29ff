"""Batch driver: kernel/parameter sweeps with CSV/JSON reports.

Subcommands: moments, electron, convergence, identities, kernel-info.
Exit codes: 0 ok, 1 threshold violation, 2 config error, 3 numerical
failure (quadrature non-convergence or ill-conditioned fit).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from .electron import (
    comparison_report,
    hidden_momentum,
    radial_self_force,
    self_energy_electric,
    self_energy_magnetic,
    spin,
)
from .embedding import REGIME_RATIO, TwoScale
from .errors import (
    ConditioningError,
    ConfigError,
    DomainError,
    IntegrationError,
    PointregError,
)
from .fields import ElectronParams
from .kernels import kernel_by_name, moment, tabulated_from_csv
from .observables import (
    IdentityTag,
    Rn_analytic,
    Rn_numeric,
    identity_residual,
    moment_Mn_analytic,
    moment_Mn_numeric,
)
from .quadrature import QuadratureSpec, SphereGrid, fit_power_law

EXIT_OK = 0
EXIT_THRESHOLD = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3

OBSERVABLES = ("U_ele", "U_mag", "F_r", "P_vec", "S_vec")


@dataclass
class RunConfig:
    kernels: list[dict] = field(default_factory=lambda: [{"name": "gaussian"}])
    a_values: list[float] = field(default_factory=lambda: [0.05, 0.1])
    eps_values: list[float] | None = None  # default: a/100 per a
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    sphere_order: int = 16
    observables: list[str] = field(default_factory=lambda: list(OBSERVABLES))
    identity_tags: list[str] = field(
        default_factory=lambda: [t.name for t in IdentityTag]
    )
    moment_threshold: float = 1e-3
    out: str | None = None
    format: str = "csv"
    allow_out_of_regime: bool = False
    deterministic: bool = True
    e: float = 1.0
    mu: list[float] = field(default_factory=lambda: [0.0, 0.0, 1.0])
    c: float = 1.0

    @classmethod
    def load(cls, args) -> "RunConfig":
        cfg = cls()
        if args.config:
            try:
                with open(args.config) as fh:
                    data = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config {args.config}: {exc}")
            unknown = set(data) - set(cfg.__dict__)
            if unknown:
                raise ConfigError(f"unknown config keys: {sorted(unknown)}")
            cfg.__dict__.update(data)
        # flag overrides
        if getattr(args, "kernel", None):
            cfg.kernels = [{"name": args.kernel}]
        if getattr(args, "a", None):
            cfg.a_values = _parse_list(args.a)
        if getattr(args, "eps", None):
            cfg.eps_values = _parse_list(args.eps)
        if getattr(args, "out", None):
            cfg.out = args.out
        if getattr(args, "format", None):
            cfg.format = args.format
        if getattr(args, "allow_out_of_regime", False):
            cfg.allow_out_of_regime = True
        if getattr(args, "observable", None):
            cfg.observables = [args.observable]
        cfg.validate()
        return cfg

    def validate(self):
        if not self.kernels:
            raise ConfigError("at least one kernel required")
        if not self.a_values:
            raise ConfigError("at least one a value required")
        if self.format not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.format!r}")
        bad = [o for o in self.observables if o not in OBSERVABLES]
        if bad:
            raise ConfigError(f"unknown observables: {bad}")
        if not self.observables and not self.identity_tags:
            raise ConfigError("nothing selected to run")
        for a, eps in self.scale_pairs():
            if eps > a / REGIME_RATIO and not self.allow_out_of_regime:
                raise ConfigError(
                    f"eps = {eps} out of regime for a = {a} "
                    f"(need eps <= a/{REGIME_RATIO:g}; pass --allow-out-of-regime)"
                )

    def scale_pairs(self):
        if self.eps_values is None:
            return [(a, a / 100.0) for a in self.a_values]
        return [(a, e) for a in self.a_values for e in self.eps_values]

    def build_kernels(self):
        out = []
        for entry in self.kernels:
            entry = dict(entry)
            name = entry.pop("name")
            if name == "tabulated":
                out.append((name, tabulated_from_csv(entry.pop("path"), **entry)))
            else:
                out.append((name, kernel_by_name(name, **entry)))
        return out

    def quad_spec(self):
        return QuadratureSpec(abs_tol=self.abs_tol, rel_tol=self.rel_tol)

    def electron_params(self):
        return ElectronParams(e=self.e, mu=tuple(self.mu), c=self.c)


def _parse_list(text):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad numeric list {text!r}: {exc}")


_SORT_KEYS = ("observable", "quantity", "sweep", "identity", "kernel", "a", "eps")


def _sorted_rows(rows):
    def key(row):
        return tuple(
            str(row[k]) if not isinstance(row.get(k), float) else row[k]
            for k in _SORT_KEYS
            if k in row
        )

    return sorted(rows, key=key)


def _emit(rows, cfg: RunConfig):
    rows = _sorted_rows(rows)
    if cfg.out is None:
        for row in rows:
            print(json.dumps(row))
        return
    if cfg.format == "json":
        with open(cfg.out, "w") as fh:
            json.dump(rows, fh, indent=2)
            fh.write("\n")
    else:
        fieldnames = list(rows[0]) if rows else []
        with open(cfg.out, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=fieldnames)
            writer.writeheader()
            for row in rows:
                writer.writerow(
                    {
                        k: (json.dumps(v) if isinstance(v, (list, tuple)) else v)
                        for k, v in row.items()
                    }
                )


def _provenance(kernel):
    return {
        "M20": moment(kernel, 2, 0).value,
        "M21": moment(kernel, 2, 1).value,
    }


# -- subcommands ---------------------------------------------------------------


def run_moments(cfg: RunConfig) -> int:
    spec = cfg.quad_spec()
    rows = []
    worst = 0.0
    for name, kernel in cfg.build_kernels():
        prov = _provenance(kernel)
        for a, eps in sorted(cfg.scale_pairs()):
            ts = TwoScale(a, eps)
            regime_ok = ts.in_regime
            for label, n, num_fn, ana_fn in (
                ("M1", 1, moment_Mn_numeric, moment_Mn_analytic),
                ("M2", 2, moment_Mn_numeric, moment_Mn_analytic),
                ("R2", 2, Rn_numeric, Rn_analytic),
                ("R3", 3, Rn_numeric, Rn_analytic),
            ):
                if not regime_ok:
                    rows.append(
                        {"quantity": label, "kernel": name, "a": a, "eps": eps,
                         "numeric": None, "analytic": None, "rel_dev": None,
                         "regime_warning": True, **prov}
                    )
                    continue
                numeric = num_fn(n, ts, kernel, spec)
                analytic = ana_fn(n, ts, kernel).instantiate(a, eps)
                dev = abs(numeric - analytic) / abs(analytic)
                worst = max(worst, dev)
                rows.append(
                    {"quantity": label, "kernel": name, "a": a, "eps": eps,
                     "numeric": numeric, "analytic": analytic, "rel_dev": dev,
                     "regime_warning": False, **prov}
                )
    _emit(rows, cfg)
    return EXIT_OK if worst < cfg.moment_threshold else EXIT_THRESHOLD


def run_electron(cfg: RunConfig) -> int:
    spec = cfg.quad_spec()
    grid = SphereGrid.build(cfg.sphere_order)
    p = cfg.electron_params()
    runners = {
        "U_ele": lambda ts, k: self_energy_electric(p, ts, k, spec),
        "U_mag": lambda ts, k: self_energy_magnetic(p, ts, k, spec),
        "F_r": lambda ts, k: radial_self_force(p, ts, k, spec, grid),
        "P_vec": lambda ts, k: hidden_momentum(p, ts, k, spec, grid),
        "S_vec": lambda ts, k: spin(p, ts, k, spec, grid),
    }
    rows = []
    for name, kernel in cfg.build_kernels():
        prov = _provenance(kernel)
        for a, eps in sorted(cfg.scale_pairs()):
            ts = TwoScale(a, eps)
            for obs in sorted(cfg.observables):
                if not ts.in_regime:
                    rows.append(
                        {"observable": obs, "kernel": name, "a": a, "eps": eps,
                         "numeric": None, "analytic": None, "rel_dev": None,
                         "regime_warning": True, **prov}
                    )
                    continue
                report = runners[obs](ts, kernel)
                row = report.to_row()
                row["regime_warning"] = False
                row.update(prov)
                rows.append(row)
    _emit(rows, cfg)
    return EXIT_OK


def run_convergence(cfg: RunConfig) -> int:
    spec = cfg.quad_spec()
    grid = SphereGrid.build(cfg.sphere_order)
    p = cfg.electron_params()
    pairs = cfg.scale_pairs()
    eps_by_a: dict[float, list[float]] = {}
    for a, eps in pairs:
        eps_by_a.setdefault(a, []).append(eps)
    rows = []
    passed = True
    for name, kernel in cfg.build_kernels():
        prov = _provenance(kernel)
        # spin eps-sweep per a
        for a, eps_list in sorted(eps_by_a.items()):
            if len(eps_list) < 3:
                raise ConditioningError(
                    f"need >= 3 eps values per sweep, got {sorted(eps_list)}"
                )
            samples = []
            for eps in sorted(eps_list, reverse=True):
                s = spin(p, TwoScale(a, eps), kernel, spec, grid)
                samples.append((eps, float(np.linalg.norm(np.asarray(s.numeric)))))
            exponent, coef = fit_power_law(samples)
            ok = abs(exponent + 1.0) <= 0.01
            passed = passed and ok
            rows.append(
                {"sweep": "spin_eps", "kernel": name, "a": a,
                 "exponent": exponent, "expected": -1.0, "coefficient": coef,
                 "ok": ok, **prov}
            )
        # U_ele a-sweep at the smallest shared eps
        a_sorted = sorted(eps_by_a)
        if len(a_sorted) >= 2:
            eps = min(min(v) for v in eps_by_a.values())
            samples = [
                (a, float(self_energy_electric(p, TwoScale(a, eps), kernel, spec).numeric))
                for a in a_sorted
            ]
            exponent, coef = fit_power_law(samples)
            ok = abs(exponent) <= 0.02
            passed = passed and ok
            rows.append(
                {"sweep": "U_ele_a", "kernel": name, "eps": eps,
                 "exponent": exponent, "expected": 0.0, "coefficient": coef,
                 "ok": ok, **prov}
            )
    _emit(rows, cfg)
    return EXIT_OK if passed else EXIT_THRESHOLD


def run_identities(cfg: RunConfig) -> int:
    rows = []
    worst = 0.0
    for name, kernel in cfg.build_kernels():
        prov = _provenance(kernel)
        for a, eps in sorted(cfg.scale_pairs()):
            ts = TwoScale(a, eps)
            radii = np.linspace(a / 2.0, 10.0 * a, 20)
            for tag_name in sorted(cfg.identity_tags):
                tag = IdentityTag[tag_name]
                res = identity_residual(tag, ts, kernel, radii)
                worst = max(worst, res)
                rows.append(
                    {"identity": tag_name, "kernel": name, "a": a, "eps": eps,
                     "residual": res, **prov}
                )
    _emit(rows, cfg)
    return EXIT_OK if worst < 1e-5 else EXIT_THRESHOLD


def run_kernel_info(cfg: RunConfig) -> int:
    rows = []
    for name, kernel in cfg.build_kernels():
        lo, hi = kernel.support
        rows.append(
            {
                "kernel": name,
                "kind": kernel.kind,
                "parity": kernel.parity,
                "support_lo": lo,
                "support_hi": hi,
                "peak_halfwidth": kernel.peak_halfwidth,
                "normalization": moment(kernel, 1, 0).value,
                **_provenance(kernel),
            }
        )
    _emit(rows, cfg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pointreg",
        description="Smoothed point-singularity observables and reports",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd in ("moments", "electron", "convergence", "identities", "kernel-info"):
        sp = sub.add_parser(cmd)
        sp.add_argument("--config", help="JSON config file")
        sp.add_argument("--kernel", help="kernel name (gaussian|bump|asym)")
        sp.add_argument("--a", help="comma-separated cutoff lengths")
        sp.add_argument("--eps", help="comma-separated smoothing widths")
        sp.add_argument("--out", help="output file path")
        sp.add_argument("--format", choices=("csv", "json"))
        sp.add_argument("--allow-out-of-regime", action="store_true")
        sp.add_argument("--deterministic", action="store_true", default=True)
        if cmd == "electron":
            sp.add_argument("--observable", choices=OBSERVABLES)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig.load(args)
        runner = {
            "moments": run_moments,
            "electron": run_electron,
            "convergence": run_convergence,
            "identities": run_identities,
            "kernel-info": run_kernel_info,
        }[args.command]
        return runner(cfg)
    except (ConfigError, DomainError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IntegrationError, ConditioningError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except PointregError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
