"""Pure-numpy reference implementation of the hot quadrature kernel.

Evaluates the smoothed power-cutoff profile

    prof_n(r) = integral over y in [max((a-r)/eps, ylo), yhi] of
                rho(y) * (r + eps*y)^(-n) dy

with a fixed composite Gauss-Legendre rule.  The compiled core in
``pointreg._core`` implements the identical scheme; both must agree to
rounding for the analytic kernel kinds.
"""

from __future__ import annotations

import numpy as np

from .rules import composite_rule

KIND_GAUSSIAN = 0
KIND_BUMP = 1


def rho_values(kind, width, shift, amp, y):
    """Kernel values used by the reference integrator (analytic kinds only)."""
    u = (y - shift) / width
    if kind == KIND_GAUSSIAN:
        return amp * np.exp(-u * u)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = amp * np.exp(-1.0 / (1.0 - ui * ui))
    return out


def power_heaviside(kind, width, shift, amp, ylo, yhi, n, a, eps, r, rho=None):
    """Batch profile evaluation; ``rho`` overrides the analytic kernel."""
    r = np.asarray(r, dtype=float)
    scalar = r.ndim == 0
    r = np.atleast_1d(r).astype(float)

    nodes, weights = composite_rule()
    lo = np.maximum((a - r) / eps, ylo)
    span = yhi - lo
    active = span > 0.0

    out = np.zeros_like(r)
    if np.any(active):
        lo_a = lo[active]
        span_a = span[active]
        y = lo_a[:, None] + span_a[:, None] * nodes[None, :]
        if rho is None:
            rv = rho_values(kind, width, shift, amp, y)
        else:
            rv = rho(y)
        vals = rv * (r[active][:, None] + eps * y) ** (-n)
        out[active] = span_a * (vals @ weights)
    return float(out[0]) if scalar else out
