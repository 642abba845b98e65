"""Hermite interpolation through Newton divided differences with repeated nodes."""
from __future__ import annotations

from math import factorial

import numpy as np

from .polyengine import Poly


def hermite_interpolant(points, multiplicities, derivative) -> Poly:
    """Polynomial matching ``derivative(x, m)`` for m < multiplicity at each point.

    ``derivative(x, m)`` returns the m-th derivative of the target at x.
    The result has degree sum(multiplicities) - 1.
    """
    order = np.argsort(points)
    z, data = [], {}
    for idx in order:
        x, mult = float(points[idx]), int(multiplicities[idx])
        data[x] = [derivative(x, m) / factorial(m) for m in range(mult)]
        z.extend([x] * mult)
    N = len(z)
    table = np.zeros((N, N))
    for i, x in enumerate(z):
        table[i, 0] = data[x][0]
    for j in range(1, N):
        for i in range(j, N):
            if z[i] == z[i - j]:
                table[i, j] = data[z[i]][j]
            else:
                table[i, j] = (table[i, j - 1] - table[i - 1, j - 1]) / (z[i] - z[i - j])
    coef = np.diag(table)
    p = Poly([coef[-1]])
    for j in range(N - 2, -1, -1):
        p = p * Poly([-z[j], 1.0]) + coef[j]
    return p


def multiplicity_of(points, tol: float = 1e-12):
    """Collapse a list of points into (distinct points, multiplicities)."""
    out: list[list[float]] = []
    for x in sorted(points):
        if out and abs(x - out[-1][0]) <= tol:
            out[-1][1] += 1
        else:
            out.append([x, 1])
    return [p for p, _ in out], [m for _, m in out]
