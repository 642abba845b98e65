"""Improvements over the universal bound.

Test functions P_j(n, s) detect when a degree-j polynomial helps, the
constructive ``higher_degree_bound`` realizes such an improvement, and
``pair_covering`` swaps tangency at off-grid nodes for interpolation at the
two neighbouring inner products.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, NumericFailure
from .interp import hermite_interpolant, multiplicity_of
from .polyengine import Poly, SpaceParams, kraw_table, kraw_to_poly
from .quadrature import QuadratureRule, rule as build_rule
from .ulb import (CHECK_TOL, BoundReport, Potential, certificate_value, check_below,
                  coeffs_sign_ok, dense_below, hermite_nodes, ulb)

NEGATIVE_TOL = 1e-9


def rule_test_function(r: QuadratureRule, j: int) -> float:
    """1/M + sum w_i Q_j(node_i) for an already built rule."""
    return float(1.0 / r.M + r.apply(kraw_table(r.space, j, r.nodes)[j]))


def test_function(space: SpaceParams, M: float, j: int,
                  rule: QuadratureRule | None = None) -> float:
    """P_j(n, s) for the rule attached to M."""
    if j < 0 or j > space.n:
        raise DomainError(f"test function index {j} outside [0, n]")
    return rule_test_function(build_rule(space, M) if rule is None else rule, j)


@dataclass
class TestFunctionScan:
    values: list = field(default_factory=list)  # (j, P_j)
    first_negative: int | None = None

    def to_dict(self) -> dict:
        return {"values": [[j, p] for j, p in self.values],
                "first_negative": self.first_negative}


def scan_test_functions(space: SpaceParams, M: float, j_max: int,
                        rule: QuadratureRule | None = None) -> TestFunctionScan:
    if j_max > space.n:
        raise DomainError(f"j_max={j_max} exceeds n={space.n}")
    r = build_rule(space, M) if rule is None else rule
    scan = TestFunctionScan()
    for j in range(r.tau + 1, j_max + 1):
        p = rule_test_function(r, j)
        scan.values.append((j, p))
        if scan.first_negative is None and p < -NEGATIVE_TOL:
            scan.first_negative = j
    return scan


# --- higher degree improvement ----------------------------------------------------

def _chebyshev_points(lo, hi, m=64):
    x = np.cos(np.pi * (np.arange(m) + 0.5) / m)
    return np.sort(lo + (hi - lo) * (x + 1) / 2)


def max_epsilon(pot: Potential, space: SpaceParams, j: int, top: float = 1 - 1e-6) -> float:
    """Largest eps with (h - eps Q_j)^{(m)} >= 0 at the sample points, m = 0..j."""
    qj = kraw_to_poly(np.eye(j + 1)[j], space)
    pts = _chebyshev_points(-1.0, top)
    eps = np.inf
    for m in range(j + 1):
        d = qj.deriv(m)(pts) if m else qj(pts)
        h = pot(pts, space.n, m)
        pos = d > 0
        if np.any(pos):
            eps = min(eps, float(np.min(h[pos] / d[pos])))
    return eps


def higher_degree_bound(space: SpaceParams, M: float, pot: Potential, j: int,
                        rule: QuadratureRule | None = None, eps: float | None = None,
                        tol: float = CHECK_TOL) -> BoundReport:
    """Improve the ULB with f = eps Q_j + g, g the Hermite interpolant of h - eps Q_j.

    The bound is ULB - M eps P_j(n, s).  ``eps`` defaults to the largest value
    keeping the sampled derivatives of h - eps Q_j nonnegative, halved until
    the certificate passes A1 on T_n and A2.
    """
    r = build_rule(space, M) if rule is None else rule
    p_j = test_function(space, r.M, j, r)
    base = ulb(space, r.M, pot, r).value
    qj = kraw_to_poly(np.eye(j + 1)[j], space)
    pts, mult = hermite_nodes(r)

    def build(e):
        g = hermite_interpolant(pts, mult,
                                lambda x, m: pot(x, space.n, m) - e * qj.deriv(m)(x))
        return g + e * qj

    if eps is not None:
        f = build(eps)
        value, kraw = certificate_value(f, space, r.M)
        return BoundReport(value, "higher_degree", f, kraw,
                           a1_ok=check_below(f, pot, space, tol=tol),
                           a2_ok=coeffs_sign_ok(kraw, 1, tol=tol),
                           extra={"j": j, "eps": eps, "P_j": p_j, "ulb": base})
    if p_j >= -NEGATIVE_TOL:
        raise DomainError(f"P_{j}(n,s) = {p_j:.3g} is not negative; no improvement")
    e = max_epsilon(pot, space, j)
    if not np.isfinite(e) or e <= 0:
        raise NumericFailure(f"no admissible eps for Q_{j} (sampled bound {e})")
    for _ in range(60):
        f = build(e)
        value, kraw = certificate_value(f, space, r.M)
        a1 = check_below(f, pot, space, tol=tol)
        a2 = coeffs_sign_ok(kraw, 1, tol=tol)
        if a1 and a2 and value > base:
            return BoundReport(value, "higher_degree", f, kraw, a1_ok=a1, a2_ok=a2,
                               notes="" if dense_below(f, pot, space, tol=tol)
                               else "f exceeds h between grid points",
                               extra={"j": j, "eps": e, "P_j": p_j, "ulb": base})
        e /= 2
    raise NumericFailure(f"no eps in the halving sequence gives a valid degree-{j} certificate")


# --- pair covering -----------------------------------------------------------------

def covering_points(r: QuadratureRule, tol: float = 1e-12) -> tuple[list[float], list[int]]:
    """Interpolation points replacing each interior node by its grid bracket.

    A node in [t_j, t_{j+1}) contributes both ends; a node on the grid
    contributes its grid point twice.  Points shared by two brackets become
    Hermite (double) conditions, which keeps the degree at tau.
    """
    grid = r.space.grid
    pts = []
    interior = r.nodes if r.branch == "odd" else r.nodes[1:]
    for a in interior:
        j = int(np.searchsorted(grid, a, side="right")) - 1
        if abs(a - grid[j]) <= tol:
            pts += [grid[j], grid[j]]
        elif j + 1 < len(grid) and abs(a - grid[j + 1]) <= tol:
            pts += [grid[j + 1], grid[j + 1]]
        else:
            pts += [grid[j], grid[j + 1]]
    if r.branch == "even":
        pts.append(-1.0)
    return multiplicity_of(pts, tol)


def pair_covering(space: SpaceParams, M: float, pot: Potential,
                  rule: QuadratureRule | None = None,
                  tol: float = CHECK_TOL) -> BoundReport:
    r = build_rule(space, M) if rule is None else rule
    pts, mult = covering_points(r)
    f = hermite_interpolant(pts, mult, lambda x, m: pot(x, space.n, m))
    if not check_below(f, pot, space, tol=tol):
        raise NumericFailure("pair-covering polynomial exceeds h on T_n")
    value, kraw = certificate_value(f, space, r.M)
    interior = r.nodes if r.branch == "odd" else r.nodes[1:]
    on_grid = bool(all(np.min(np.abs(space.grid - a)) <= 1e-12 for a in interior))
    return BoundReport(value, "pair_cover", f, kraw, a1_ok=True,
                       a2_ok=coeffs_sign_ok(kraw, 1, tol=tol),
                       notes="A2 is checked numerically, not guaranteed",
                       extra={"tau": r.tau, "points": [float(p) for p in pts],
                              "multiplicities": mult, "nodes_on_grid": on_grid,
                              "ulb": ulb(space, r.M, pot, r).value,
                              "a1_dense": dense_below(f, pot, space, tol=tol)})
