"""Backend selection for the hot quadrature kernel.

The compiled extension ``pointreg._core`` is preferred when importable;
otherwise the pure-numpy reference is used.  Set POINTREG_BACKEND=python
to force the fallback (e.g. for the backend benchmark), or
POINTREG_BACKEND=compiled to fail loudly if the extension is missing.
Tabulated kernels always go through the reference path.
"""

from __future__ import annotations

import os

import numpy as np

from . import _ref
from .rules import composite_rule

_requested = os.environ.get("POINTREG_BACKEND", "auto").lower()

_core = None
if _requested in ("auto", "compiled"):
    try:
        from pointreg import _core  # type: ignore[no-redef]
    except ImportError:
        _core = None
        if _requested == "compiled":
            raise

BACKEND = "compiled" if _core is not None else "python"

_KIND_IDS = {
    "gaussian": _ref.KIND_GAUSSIAN,
    "compact-bump": _ref.KIND_BUMP,
    "asymmetric-bump": _ref.KIND_BUMP,
}


def _descriptor(kernel):
    """(kind_id, width, shift, amp, ylo, yhi) for analytic kernels, else None."""
    kind_id = _KIND_IDS.get(kernel.kind)
    if kind_id is None:
        return None
    import math

    if kernel.kind == "gaussian":
        amp = kernel.scale / (kernel.width * math.sqrt(math.pi))
    else:
        from pointreg.kernels import BUMP_NORM

        amp = kernel.scale / (kernel.width * BUMP_NORM)
    ylo, yhi = kernel.support
    return kind_id, kernel.width, kernel.shift, amp, ylo, yhi


def power_heaviside(kernel, n, a, eps, r):
    """Evaluate the (r^-n, cutoff a) smoothed profile at radii ``r``.

    Returns a float for scalar input, an ndarray otherwise.
    """
    desc = _descriptor(kernel)
    if desc is None or _core is None:
        if desc is None:
            ylo, yhi = kernel.support
            return _ref.power_heaviside(
                0, 1.0, 0.0, 1.0, ylo, yhi, n, a, eps, r, rho=kernel.eval
            )
        kind_id, width, shift, amp, ylo, yhi = desc
        return _ref.power_heaviside(kind_id, width, shift, amp, ylo, yhi, n, a, eps, r)

    kind_id, width, shift, amp, ylo, yhi = desc
    r_arr = np.asarray(r, dtype=float)
    scalar = r_arr.ndim == 0
    nodes, weights = composite_rule()
    out = _core.power_heaviside(
        kind_id, width, shift, amp, ylo, yhi, n, a, eps,
        np.atleast_1d(r_arr), nodes, weights,
    )
    return float(out[0]) if scalar else out


def reference_power_heaviside(kernel, n, a, eps, r):
    """Always-pure-python path, exposed for cross-checks and benchmarks."""
    desc = _descriptor(kernel)
    if desc is None:
        ylo, yhi = kernel.support
        return _ref.power_heaviside(
            0, 1.0, 0.0, 1.0, ylo, yhi, n, a, eps, r, rho=kernel.eval
        )
    kind_id, width, shift, amp, ylo, yhi = desc
    return _ref.power_heaviside(kind_id, width, shift, amp, ylo, yhi, n, a, eps, r)
