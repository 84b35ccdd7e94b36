"""Small shared quadrature rules (composite Gauss-Legendre panels)."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=64)
def _gl_reference(n_nodes: int):
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    return x, w


def gl_panels(a: float, b: float, n_panels: int, n_nodes: int = 12):
    """Nodes and weights of a composite Gauss-Legendre rule on [a, b]."""
    x, w = _gl_reference(n_nodes)
    edges = np.linspace(a, b, n_panels + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mids[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def gl_panels_geometric(a: float, b: float, n_panels: int, n_nodes: int = 16):
    """Composite Gauss-Legendre rule with geometrically growing panels on [a, b].

    Suited to integrands with most mass near ``a`` and slow power-law decay;
    ``a`` may be 0 (the first panel edge is placed at b * ratio^-n).
    """
    if b <= a:
        raise ValueError("need b > a")
    start = max(a, b * 1e-8) if a == 0.0 else a
    edges = np.geomspace(start, b, n_panels + 1)
    if a < edges[0]:
        edges = np.concatenate([[a], edges])
    x, w = _gl_reference(n_nodes)
    mids = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1:] - edges[:-1])
    nodes = (mids[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights
