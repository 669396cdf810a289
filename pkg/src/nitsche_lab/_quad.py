"""Shared quadrature helpers: periodic trapezoid and composite Gauss-Legendre."""

from __future__ import annotations

from typing import Callable

import numpy as np

__all__ = ["theta_grid", "trapezoid_mean", "gauss_legendre_panels", "radial_integral"]


def theta_grid(M: int) -> np.ndarray:
    """M uniform angles on [0, 2pi), the nodes of the periodic trapezoid rule."""
    return np.arange(M) * (2.0 * np.pi / M)


def trapezoid_mean(values: np.ndarray, axis: int = -1) -> np.ndarray:
    """Mean over a periodic uniform grid (exact on trig polynomials of degree < M)."""
    return np.mean(values, axis=axis)


def gauss_legendre_panels(
    lo: float, hi: float, panels: int, order: int = 16
) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes/weights on [lo, hi] split into equal panels."""
    x, w = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = np.diff(edges) / 2.0
    mid = (edges[:-1] + edges[1:]) / 2.0
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def radial_integral(
    f: Callable[[np.ndarray], np.ndarray],
    lo: float,
    hi: float,
    rtol: float = 1e-10,
    start_panels: int = 2,
    max_panels: int = 256,
    order: int = 16,
) -> float:
    """Integral of a smooth f on [lo, hi]; panel doubling until relative change < rtol."""
    panels = start_panels
    nodes, weights = gauss_legendre_panels(lo, hi, panels, order)
    prev = float(np.dot(weights, f(nodes)))
    while panels < max_panels:
        panels *= 2
        nodes, weights = gauss_legendre_panels(lo, hi, panels, order)
        cur = float(np.dot(weights, f(nodes)))
        if abs(cur - prev) <= rtol * max(1.0, abs(cur)):
            return cur
        prev = cur
    return prev
