"""Shared composite Gauss-Legendre rule on [0, 1].

Both backends integrate with exactly these nodes/weights so that results
match across implementations.  8 panels x 32 nodes resolves the shipped
kernels (including the non-analytic bump edges) to ~1e-15 relative.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

PANELS = 8
NODES_PER_PANEL = 32


@lru_cache(maxsize=1)
def composite_rule():
    """(nodes, weights) on [0, 1]; integral f = span * sum(w * f(lo + span*x))."""
    x, w = np.polynomial.legendre.leggauss(NODES_PER_PANEL)
    x = 0.5 * (x + 1.0) / PANELS  # one panel mapped to [0, 1/PANELS]
    w = 0.5 * w / PANELS
    nodes = np.concatenate([x + i / PANELS for i in range(PANELS)])
    weights = np.concatenate([w] * PANELS)
    return nodes, weights
