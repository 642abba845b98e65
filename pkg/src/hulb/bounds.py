"""Rao and Levenshtein bounds and the cardinality-to-strength map."""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NumericFailure
from .polyengine import SpaceParams, adjacent_eval, greatest_zero, kraw_eval

# slack when testing s against the ends of I_tau
ENDPOINT_SLACK = 1e-10


def rao(space: SpaceParams, tau: int) -> int:
    """Rao lower bound R(n, tau) on the size of a tau-design, exactly."""
    n, q = space.n, space.q
    if int(tau) != tau or tau < 1 or tau > 2 * n:
        raise DomainError(f"tau={tau} outside [1, 2n]")
    if tau % 2:
        k = (tau + 1) // 2
        return q * sum(comb(n - 1, i) * (q - 1) ** i for i in range(k))
    k = tau // 2
    return sum(comb(n, i) * (q - 1) ** i for i in range(k + 1))


def split_tau(tau: int) -> tuple[str, int]:
    """('odd', k) for tau = 2k-1 and ('even', k) for tau = 2k."""
    return ("odd", (tau + 1) // 2) if tau % 2 else ("even", tau // 2)


def interval(space: SpaceParams, tau: int, tol: float = 1e-12) -> tuple[float, float]:
    """Ends of I_tau: [t_{k-1}^{1,1}, t_k^{1,0}] (odd) or [t_k^{1,0}, t_k^{1,1}] (even)."""
    branch, k = split_tau(tau)
    if branch == "odd":
        return greatest_zero(space, 1, 1, k - 1, tol), greatest_zero(space, 1, 0, k, tol)
    return greatest_zero(space, 1, 0, k, tol), greatest_zero(space, 1, 1, k, tol)


@dataclass(frozen=True)
class StrengthAssignment:
    tau: int
    branch: str
    k: int
    interval: tuple[float, float]


def max_tau(space: SpaceParams) -> int:
    """Largest tau whose cardinality range (R(n,tau), R(n,tau+1)] is nonempty."""
    tau = 1
    while tau + 1 <= 2 * space.n and rao(space, tau) < space.size:
        tau += 1
    return tau - 1


def tau_for(space: SpaceParams, M: int, tol: float = 1e-12) -> StrengthAssignment:
    """The unique tau with M in (R(n, tau), R(n, tau+1)]."""
    if M <= space.q:
        raise DomainError(f"M must exceed q (M={M}, q={space.q})")
    if M > space.size:
        raise DomainError(f"M={M} exceeds q^n={space.size}")
    tau = 1
    while rao(space, tau + 1) < M:
        tau += 1
    branch, k = split_tau(tau)
    return StrengthAssignment(tau, branch, k, interval(space, tau, tol))


def lev(space: SpaceParams, tau: int, s: float, bounds: tuple[float, float] | None = None) -> float:
    """Levenshtein bound L_tau(n, s) for s in I_tau."""
    n, q = space.n, space.q
    lo, hi = interval(space, tau) if bounds is None else bounds
    if not lo - ENDPOINT_SLACK <= s <= hi + ENDPOINT_SLACK:
        raise DomainError(f"s={s} outside I_{tau} = [{lo}, {hi}]")
    branch, k = split_tau(tau)
    if branch == "odd":
        head = sum(comb(n, j) * (q - 1) ** j for j in range(k))
        return (1.0 - adjacent_eval(space, 1, 0, k - 1, s) / kraw_eval(space, k, s)) * head
    head = sum(comb(n - 1, j) * (q - 1) ** j for j in range(k))
    return q * (1.0 - adjacent_eval(space, 1, 1, k - 1, s)
                / adjacent_eval(space, 0, 1, k, s)) * head


def solve_s(space: SpaceParams, M: float, tau: int | None = None,
            tol: float = 1e-12) -> tuple[int, float]:
    """Solve M = L_tau(n, s) for s in I_tau.

    ``tau`` defaults to ``tau_for(M)``; passing it explicitly lets a caller
    place M = R(n, tau) at the left end of I_tau instead of the right end of
    the previous interval.
    """
    if tau is None:
        tau = tau_for(space, M, tol).tau
    elif not rao(space, tau) <= M <= rao(space, tau + 1):
        raise DomainError(f"M={M} outside [R(n,{tau}), R(n,{tau + 1})]")
    lo, hi = interval(space, tau, tol)
    lo_val, hi_val = float(rao(space, tau)), float(rao(space, tau + 1))
    if M == hi_val:
        s = hi
    elif M == lo_val:
        s = lo
    else:
        try:
            s = brentq(lambda x: lev(space, tau, x, (lo, hi)) - M, lo, hi,
                       xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500)
        except ValueError as exc:
            raise NumericFailure(f"L_{tau}(n, s) = {M} not bracketed on I_{tau}") from exc
    resid = abs(lev(space, tau, s, (lo, hi)) - M)
    if resid > 1e-9 * M:
        raise NumericFailure(f"|L_{tau}(n,s) - M| = {resid:.3g} after solve")
    return tau, float(s)
