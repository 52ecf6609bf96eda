"""Small numerical helpers: Richardson extrapolation and difference stencils."""

from __future__ import annotations

from typing import Callable, Sequence

import numpy as np


def richardson(values: Sequence[float], ratio: float = 2.0,
               powers: Sequence[int] | None = None) -> tuple[float, float]:
    """Extrapolate ``values[k] = g(h0 / ratio**k)`` to ``h -> 0``.

    ``powers`` lists the exponents of the error expansion (default 2, 4, 6, ...).
    Returns the extrapolated value and the last correction as an error estimate.
    """
    if powers is None:
        powers = [2 * (k + 1) for k in range(len(values))]
    table = [list(map(float, values))]
    while len(table[-1]) > 1:
        prev = table[-1]
        fac = ratio ** powers[len(table) - 1]
        table.append([(fac * prev[i + 1] - prev[i]) / (fac - 1.0) for i in range(len(prev) - 1)])
    best = table[-1][0]
    err = abs(best - table[-2][-1]) if len(table) > 1 else float("inf")
    return best, err


def central_derivative(g: Callable[[float], float], x0: float, h: float) -> float:
    """Fourth-order central first derivative on the stencil x0 +- h, x0 +- 2h."""
    return (g(x0 - 2 * h) - 8 * g(x0 - h) + 8 * g(x0 + h) - g(x0 + 2 * h)) / (12 * h)


def one_sided_derivative(g: Callable[[float], float], x0: float, h: float) -> float:
    """Fourth-order forward first derivative (use a negative ``h`` for backward)."""
    c = np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0
    return float(sum(ck * g(x0 + k * h) for k, ck in enumerate(c)) / h)


def derivative_richardson(g: Callable[[float], float], x0: float, h0: float,
                          levels: int = 2, one_sided: int = 0) -> tuple[float, float]:
    """First derivative of ``g`` at ``x0`` with step halving and extrapolation.

    ``one_sided`` is 0 for the central stencil, +1 for forward, -1 for backward.
    """
    vals = []
    for k in range(levels):
        h = h0 / 2 ** k
        if one_sided:
            vals.append(one_sided_derivative(g, x0, one_sided * h))
        else:
            vals.append(central_derivative(g, x0, h))
    powers = [4, 5, 6, 7] if one_sided else [4, 6, 8, 10]
    return richardson(vals, ratio=2.0, powers=powers)


def rot90_ccw(w) -> np.ndarray:
    return np.array([-w[1], w[0]])


def rot90_cw(w) -> np.ndarray:
    return np.array([w[1], -w[0]])


def unit(w) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    n = np.linalg.norm(w)
    if n == 0.0:
        raise ZeroDivisionError("zero vector has no direction")
    return w / n
