"""Binary design machinery: the mass gamma_0 M, extreme inner product
estimates and the lower/upper energy strip for 2-designs in H(n, 2).

All of it relies on H(n, 2) being antipodal, so q = 2 is enforced.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import sqrt

import numpy as np
from scipy.optimize import brentq

from .bounds import rao, tau_for
from .errors import DomainError, NumericFailure
from .interp import hermite_interpolant
from .polyengine import Poly, SpaceParams, kernel_T
from .quadrature import QuadratureRule, rule as build_rule
from .ulb import BoundReport, Potential, lp_lower_value, lp_upper_value, ulb

PARITIES = ("even", "odd", "conservative")


def _binary(n: int) -> SpaceParams:
    return SpaceParams(n, 2)


def _even_rule(n: int, M: int) -> QuadratureRule:
    space = _binary(n)
    a = tau_for(space, M)
    if a.branch != "even":
        raise DomainError(f"M={M} lies in an odd-strength interval (tau={a.tau})")
    if M >= rao(space, a.tau + 1):
        raise DomainError(f"M={M} is the interval end R(n,{a.tau + 1}); gamma_0 M = 1 there")
    return build_rule(space, M)


def gamma0M_kernel(n: int, M: int, rule: QuadratureRule | None = None) -> float:
    """gamma_0 M from the Christoffel-Darboux kernel expression."""
    r = _even_rule(n, M) if rule is None else rule
    space, k, s = r.space, r.k, r.s
    ts1, tsm = kernel_T(space, k, s, 1.0), kernel_T(space, k, s, -1.0)
    g0 = ts1 / (kernel_T(space, k, -1.0, -1.0) * ts1 - kernel_T(space, k, -1.0, 1.0) * tsm)
    return float(g0 * r.M)


def gamma0M(n: int, M: int, rule: QuadratureRule | None = None) -> float:
    """Mass gamma_0 M at t = -1 of the even rule; lies in (0, 1) inside the interval."""
    r = _even_rule(n, M) if rule is None else rule
    from_weight = float(r.weights[0] * r.M)
    from_kernel = gamma0M_kernel(n, M, r)
    if abs(from_weight - from_kernel) > 1e-8:
        raise NumericFailure(f"gamma_0 M disagrees: weight {from_weight}, kernel {from_kernel}")
    return from_weight


def xi_lower(n: int, M: int, rule: QuadratureRule | None = None) -> float:
    """Smallest root in (-1, beta_1) of prod (t - beta_i)^2 = gamma_0 M prod (-1 - beta_i)^2."""
    r = _even_rule(n, M) if rule is None else rule
    betas = r.nodes[1:]
    g = gamma0M(n, M, r)

    def f(t):
        return float(np.prod((t - betas) ** 2))

    target = g * f(-1.0)
    if g >= 1.0:
        return -1.0
    try:
        return float(brentq(lambda t: f(t) - target, -1.0, float(betas[0]), xtol=1e-14))
    except ValueError as exc:
        raise NumericFailure("no root of the xi equation in (-1, beta_1)") from exc


# --- extreme inner products of 2-designs -------------------------------------------

def _check_two_design_range(n: int, M: int):
    if not n + 1 <= M <= 2 * n:
        raise DomainError(f"M={M} outside [n+1, 2n] = [{n + 1}, {2 * n}]")


def _pick(parity, even, odd, conservative):
    if parity not in PARITIES:
        raise DomainError(f"parity must be one of {PARITIES}")
    return {"even": even, "odd": odd, "conservative": conservative}[parity]


def ell_lower_2designs(n: int, M: int, parity: str = "conservative", check: bool = True) -> float:
    """Lower estimate of the smallest inner product of a binary 2-design.

    ``parity`` is that of n - d~, d~ the largest distance in the design.
    """
    if check:
        _check_two_design_range(n, M)
    even = 1 - sqrt(2 * M / n)
    odd = 1 - sqrt(2 * (n * M - 2)) / n
    return _pick(parity, even, odd, min(even, odd))


def s_upper_2designs(n: int, M: int, parity: str = "conservative", check: bool = True) -> float:
    """Upper estimate of the largest inner product; ``parity`` is that of d."""
    if check:
        _check_two_design_range(n, M)
    even = -1 + sqrt(2 * (M - 2) / n)
    odd = -1 + sqrt(2 * (M - 2) * (n * M - 2) / M) / n
    return _pick(parity, even, odd, max(even, odd))


@dataclass(frozen=True)
class DesignWindow:
    n: int
    M: int
    ell: float
    s: float
    parity: dict

    def __post_init__(self):
        if not -1.0 <= self.ell <= self.s <= 1.0:
            raise DomainError(f"empty window [{self.ell}, {self.s}]")


def design_window(n: int, M: int, ell_parity: str = "conservative",
                  s_parity: str = "conservative") -> DesignWindow:
    return DesignWindow(n, M, ell_lower_2designs(n, M, ell_parity),
                        s_upper_2designs(n, M, s_parity),
                        {"ell": ell_parity, "s": s_parity})


# --- energy strip ---------------------------------------------------------------------

def lower_2design(n: int, M: int, pot: Potential, parity: str = "conservative") -> BoundReport:
    """Lower bound for the energy of binary 2-designs using the estimate of ell.

    The certificate is the quadratic through (ell, h(ell)) tangent to h at a_0.
    """
    space = _binary(n)
    ell = ell_lower_2designs(n, M, parity)
    lin = M * ell + 1 - ell
    den = M * (1 + n * ell ** 2) - n * (1 - ell) ** 2
    if abs(den) < 1e-14 or abs(lin) < 1e-14:
        raise NumericFailure("degenerate 2-design lower bound (vanishing denominator)")
    a0 = (n * (1 - ell) - M) / (n * lin)
    value = (n * lin ** 2 * pot(a0, n) + M * (M - n - 1) * pot(ell, n)) / den
    f = hermite_interpolant([ell, a0], [1, 2], lambda x, m: pot(x, n, m))
    cert = lp_lower_value(f, space, M, pot, design_tau=2, window=(ell, 1.0))
    extra = {"ell": ell, "a0": a0, "certificate_value": cert.value}
    if rao(space, 2) <= M <= rao(space, 3):
        extra["ulb_even"] = ulb(space, M, pot, build_rule(space, M, tau=2)).value
    return BoundReport(value, "window_lower", f, cert.kraw, cert.a1_ok, cert.a2_ok,
                       extra=extra)


def strict_even_bound(n: int, M: int, pot: Potential, ell: float,
                      rule: QuadratureRule | None = None) -> BoundReport:
    """Even-branch bound with the simple node moved from -1 up to ``ell``."""
    if ell <= -1.0:
        raise DomainError("ell must exceed -1 for an improvement")
    r = _even_rule(n, M) if rule is None else rule
    betas = r.nodes[1:]
    if ell >= betas[0]:
        raise DomainError(f"ell={ell} must lie below beta_1={betas[0]}")
    space = r.space
    G = hermite_interpolant([ell, *betas], [1] + [2] * len(betas),
                            lambda x, m: pot(x, n, m))
    cert = lp_lower_value(G, space, r.M, pot, design_tau=r.tau, window=(ell, 1.0))
    base = ulb(space, r.M, pot, r).value
    return BoundReport(cert.value, "window_lower", G, cert.kraw, cert.a1_ok, cert.a2_ok,
                       extra={"ell": ell, "ulb": base,
                              "gap_identity": float(r.M * r.weights[0]
                                                    * (G(-1.0) - pot(-1.0, n)))})


def upper_2design(n: int, M: int, pot: Potential, ell_parity: str = "conservative",
                  s_parity: str = "conservative") -> BoundReport:
    """Upper bound for the energy of binary 2-designs from the chord of h on [ell, s]."""
    ell = ell_lower_2designs(n, M, ell_parity)
    s = s_upper_2designs(n, M, s_parity)
    if s <= ell:
        raise DomainError(f"s={s} <= ell={ell}")
    h_l, h_s = pot(ell, n), pot(s, n)
    value = ((M - 1) * (s * h_l - ell * h_s) + h_l - h_s) / (s - ell)
    slope = (h_s - h_l) / (s - ell)
    g = Poly([h_l - slope * ell, slope])
    cert = lp_upper_value(g, _binary(n), M, 2, pot, (ell, s))
    return BoundReport(value, "window_upper", g, cert.kraw, cert.a1_ok, cert.a2_ok,
                       extra={"ell": ell, "s": s, "certificate_value": cert.value})


def strip_asymptotic(xi_hat: float, pot: Potential) -> tuple[float, float, float]:
    """(h(0) xi, c1, c2): limits of lower_2design / n and upper_2design ~ c1 n + c2."""
    if not 1.0 < xi_hat < 2.0:
        raise DomainError("xi_hat must lie in (1, 2)")
    if pot.kind == "riesz" and not pot.scale:
        raise DomainError("asymptotic constants need an n-independent potential")
    r2 = sqrt(2 * xi_hat)
    h_l, h_s = pot(1 - r2, 1), pot(r2 - 1, 1)
    c1 = xi_hat * ((r2 - 1) * h_l - (1 - r2) * h_s) / (2 * (r2 - 1))
    c2 = ((2 - r2) * h_l - r2 * h_s) / (2 * (r2 - 1))
    return pot(0.0, 1) * xi_hat, c1, c2
