"""Levenshtein's quadrature rule with a 1/M mass at t = 1.

For M in (R(n,2k-1), R(n,2k)] the rule has k nodes alpha_0 < ... < alpha_{k-1} = s
and is exact up to degree 2k-1; for M in (R(n,2k), R(n,2k+1)] it has k+1
nodes -1 = beta_0 < ... < beta_k = s and is exact up to degree 2k.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import interval, lev, solve_s, split_tau
from .errors import DomainError, NumericFailure
from .polyengine import (Poly, SpaceParams, adjacent_eval, find_roots, kraw_table,
                         mean, scan_step)

# points this close to s are left out of the scan for the remaining nodes
_NEAR_S = 1e-10


@dataclass(frozen=True)
class QuadratureRule:
    space: SpaceParams
    M: float
    tau: int
    branch: str
    k: int
    s: float
    nodes: np.ndarray
    weights: np.ndarray

    def apply(self, values_at_nodes) -> float:
        return float(np.dot(self.weights, values_at_nodes))

    def to_dict(self) -> dict:
        return {"branch": self.branch, "k": self.k, "s": self.s,
                "nodes": [float(x) for x in self.nodes],
                "weights": [float(w) for w in self.weights]}


def _bracket(space, family, k, s):
    pk_s = adjacent_eval(space, *family, k, s)
    pk1_s = adjacent_eval(space, *family, k - 1, s)

    def f(t):
        return (adjacent_eval(space, *family, k, t) * pk1_s
                - pk_s * adjacent_eval(space, *family, k - 1, t))
    return f


def rule_from_s(space: SpaceParams, tau: int, s: float, M: float | None = None,
                tol: float = 1e-12) -> QuadratureRule:
    """Build the rule for a given end node s in I_tau; M defaults to L_tau(n, s)."""
    branch, k = split_tau(tau)
    bounds = interval(space, tau, tol)
    if M is None:
        M = lev(space, tau, s, bounds)
    family = (1, 0) if branch == "odd" else (1, 1)
    f = _bracket(space, family, k, s)
    if k > 1:
        step = scan_step(space.n, k)
        try:
            inner = find_roots(f, -1.0, s - _NEAR_S, expected=k - 1, step=step,
                               extra_points=space.grid, tol=tol)
        except NumericFailure:
            # at the left end of an odd interval the smallest node is exactly -1
            pts = space.grid[space.grid <= s]
            if branch != "odd" or abs(f(-1.0)) > 1e-9 * np.max(np.abs(f(pts))):
                raise
            rest = find_roots(f, -1.0 + 1e-9, s - _NEAR_S, expected=k - 2, step=step,
                              extra_points=space.grid, tol=tol) if k > 2 else np.empty(0)
            inner = np.concatenate([[-1.0], rest])
        if len(inner) != k - 1:
            raise NumericFailure(f"expected {k - 1} nodes below s, found {len(inner)}")
    else:
        inner = np.empty(0)
    nodes = np.concatenate([inner, [s]])
    if branch == "even":
        if len(inner) and inner[0] <= -1.0:
            raise NumericFailure("interior node collided with -1")
        nodes = np.concatenate([[-1.0], nodes])
    if np.any(np.diff(nodes) <= 0):
        raise NumericFailure("quadrature nodes are not strictly increasing")
    m = len(nodes)
    # exactness against Q_0..Q_{m-1}: delta_{j0} = 1/M + sum_i w_i Q_j(node_i)
    V = kraw_table(space, m - 1, nodes)
    rhs = -np.full(m, 1.0 / M)
    rhs[0] += 1.0
    try:
        w = np.linalg.solve(V, rhs)
    except np.linalg.LinAlgError as exc:
        raise NumericFailure("singular weight system") from exc
    if not np.all(np.isfinite(w)):
        raise NumericFailure("non-finite quadrature weights")
    if np.any(w < -1e-12):
        raise NumericFailure(f"negative quadrature weight {w.min():.3g}")
    return QuadratureRule(space, float(M), tau, branch, k, float(s), nodes, w)


def rule(space: SpaceParams, M: float, tau: int | None = None,
         tol: float = 1e-12) -> QuadratureRule:
    """Quadrature rule for cardinality M (strength from the Rao intervals)."""
    tau, s = solve_s(space, M, tau, tol)
    return rule_from_s(space, tau, s, M, tol)


def verify_rule(r: QuadratureRule, f: Poly) -> float:
    """Residual |f_0 - f(1)/M - sum w_i f(node_i)| for deg f <= tau."""
    if f.degree() > r.tau:
        raise DomainError(f"degree {f.degree()} exceeds the rule's strength {r.tau}")
    return abs(mean(f, r.space) - f(1.0) / r.M - r.apply(f(r.nodes)))


def rho0M_product(r: QuadratureRule) -> float:
    """rho_0 M from the nodes alone (binary odd branch).

    -prod(1 - a_i^2) / (a_0 prod(a_0^2 - a_i^2)), i = 1..k-1; used as a
    cross-check of the linear solve.
    """
    if r.space.q != 2 or r.branch != "odd":
        raise DomainError("product formula needs q = 2 and the odd branch")
    a0, rest = r.nodes[0], r.nodes[1:]
    return float(-np.prod(1 - rest ** 2) / (a0 * np.prod(a0 ** 2 - rest ** 2)))
