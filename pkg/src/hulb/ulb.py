"""Potentials, the universal lower bound and generic LP certificate checks."""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

from .errors import DomainError, NumericFailure
from .interp import hermite_interpolant
from .polyengine import Poly, SpaceParams, kraw_coefficients
from .quadrature import QuadratureRule, rule as build_rule

CHECK_TOL = 1e-9


@dataclass(frozen=True)
class Potential:
    """Absolutely monotone kernel h(t) on [-1, 1).

    ``riesz``: h(t) = (c (1 - t) / 2)^(-alpha) with c = ``scale`` or the word
    length n; ``exp``: h(t) = exp(alpha t); ``poly``: sum coeffs[i] t^i.
    """

    kind: str
    alpha: float = 1.0
    coeffs: tuple = ()
    scale: float | None = None

    def __post_init__(self):
        if self.kind not in ("riesz", "exp", "poly"):
            raise DomainError(f"unknown potential kind {self.kind!r}")
        if self.kind != "poly" and not self.alpha > 0:
            raise DomainError("potential parameter alpha must be positive")

    @classmethod
    def riesz(cls, alpha: float, scale: float | None = None) -> "Potential":
        return cls("riesz", float(alpha), scale=scale)

    @classmethod
    def exponential(cls, alpha: float) -> "Potential":
        return cls("exp", float(alpha))

    @classmethod
    def polynomial(cls, coeffs) -> "Potential":
        return cls("poly", coeffs=tuple(float(c) for c in coeffs))

    @classmethod
    def parse(cls, text: str) -> "Potential":
        """``riesz:<alpha>[:<scale>]``, ``exp:<alpha>`` or ``poly:<c0,c1,...>``."""
        kind, _, rest = text.partition(":")
        try:
            if kind == "riesz":
                alpha, _, scale = rest.partition(":")
                return cls.riesz(float(alpha), float(scale) if scale else None)
            if kind == "exp":
                return cls.exponential(float(rest))
            if kind == "poly":
                return cls.polynomial(float(c) for c in rest.split(","))
        except ValueError as exc:
            raise DomainError(f"bad potential {text!r}: {exc}") from exc
        raise DomainError(f"bad potential {text!r}")

    @property
    def label(self) -> str:
        if self.kind == "riesz":
            return f"riesz:{self.alpha:g}" + (f":{self.scale:g}" if self.scale else "")
        if self.kind == "exp":
            return f"exp:{self.alpha:g}"
        return "poly:" + ",".join(f"{c:g}" for c in self.coeffs)

    def __call__(self, t, n: int, order: int = 0):
        t_arr = np.asarray(t, dtype=float)
        if self.kind == "riesz":
            if np.any(t_arr >= 1.0):
                raise DomainError("Riesz potential has a pole at t = 1")
            c = float(self.scale if self.scale else n)
            z = c * (1.0 - t_arr) / 2.0
            rising = prod(self.alpha + j for j in range(order))
            out = (c / 2.0) ** order * rising * z ** (-self.alpha - order)
        elif self.kind == "exp":
            out = self.alpha ** order * np.exp(self.alpha * t_arr)
        else:
            out = Poly(self.coeffs or (0.0,)).deriv(order)(t_arr)
        return float(out) if np.ndim(out) == 0 else out


def potential_eval(pot: Potential, space: SpaceParams, t, order: int = 0):
    return pot(t, space.n, order)


@dataclass
class BoundReport:
    """A bound value, its certificate polynomial and condition flags.

    Flags are True (pass), False (fail) or None (not checked).
    """

    value: float
    method: str
    certificate: Poly | None = None
    kraw: np.ndarray | None = None
    a1_ok: bool | None = None
    a2_ok: bool | None = None
    notes: str = ""
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        flag = {True: "pass", False: "fail", None: "not-checked"}
        out = {"value": float(self.value), "method": self.method,
               "a1_ok": flag[self.a1_ok], "a2_ok": flag[self.a2_ok],
               "certificate": (None if self.certificate is None
                               else [float(c) for c in self.certificate.coef]),
               "kraw": None if self.kraw is None else [float(c) for c in self.kraw]}
        if self.notes:
            out["notes"] = self.notes
        out.update(self.extra)
        return out


# --- condition checks ----------------------------------------------------------

def _below(f_vals, h_vals, tol):
    return bool(np.all(f_vals <= h_vals + tol * np.maximum(1.0, np.abs(h_vals))))


def inner_grid(space: SpaceParams, lo: float = -1.0, hi: float = 1.0) -> np.ndarray:
    """Points of T_n in [lo, hi], excluding t = 1 (no pair of distinct words sits there)."""
    g = space.grid[:-1]
    return g[(g >= lo - 1e-12) & (g <= hi + 1e-12)]


def check_below(f: Poly, pot: Potential, space: SpaceParams, lo=-1.0, hi=1.0,
                tol: float = CHECK_TOL) -> bool:
    """A1-type check f <= h on T_n ∩ [lo, hi]."""
    pts = inner_grid(space, lo, hi)
    return _below(f(pts), pot(pts, space.n), tol)


def check_above(g: Poly, pot: Potential, space: SpaceParams, lo=-1.0, hi=1.0,
                tol: float = CHECK_TOL) -> bool:
    pts = inner_grid(space, lo, hi)
    h = pot(pts, space.n)
    return bool(np.all(g(pts) >= h - tol * np.maximum(1.0, np.abs(h))))


def dense_below(f: Poly, pot: Potential, space: SpaceParams, lo: float = -1.0,
                tol: float = CHECK_TOL) -> bool:
    """f <= h on a 10n-point grid of [lo, 1); informational only."""
    pts = np.linspace(lo, 1.0, 10 * space.n, endpoint=False)
    return _below(f(pts), pot(pts, space.n), tol)


def coeffs_sign_ok(kraw, start: int, sign: int = 1, tol: float = CHECK_TOL) -> bool:
    tail = sign * np.asarray(kraw[start:], dtype=float)
    return bool(np.all(tail >= -tol))


def certificate_value(f: Poly, space: SpaceParams, M: float) -> tuple[float, np.ndarray]:
    """(f_0 M - f(1), Krawtchouk coefficients of f)."""
    kraw = kraw_coefficients(f, space)
    return float(kraw[0] * M - f(1.0)), kraw


# --- bounds --------------------------------------------------------------------

def ulb(space: SpaceParams, M: float, pot: Potential,
        rule: QuadratureRule | None = None) -> BoundReport:
    """Universal lower bound M sum w_i h(node_i) on the h-energy of M-point codes."""
    r = build_rule(space, M) if rule is None else rule
    value = r.M * r.apply(pot(r.nodes, space.n))
    return BoundReport(value, "ulb", extra={"tau": r.tau, "rule": r.to_dict()})


def hermite_nodes(r: QuadratureRule) -> tuple[list[float], list[int]]:
    """Interpolation data of the optimal degree-tau polynomial for a rule."""
    if r.branch == "odd":
        return list(r.nodes), [2] * len(r.nodes)
    return list(r.nodes), [1] + [2] * (len(r.nodes) - 1)


def hermite_certificate(space: SpaceParams, M: float, pot: Potential,
                        rule: QuadratureRule | None = None,
                        tol: float = CHECK_TOL) -> BoundReport:
    """Hermite interpolant of h at the quadrature nodes, checked against A1 and A2."""
    r = build_rule(space, M) if rule is None else rule
    pts, mult = hermite_nodes(r)
    f = hermite_interpolant(pts, mult, lambda x, m: pot(x, space.n, m))
    value, kraw = certificate_value(f, space, r.M)
    expected = ulb(space, r.M, pot, r).value
    if abs(value - expected) > 1e-9 * max(1.0, abs(expected)):
        raise NumericFailure(f"certificate value {value} != ULB {expected}")
    dense = dense_below(f, pot, space, tol=tol)
    return BoundReport(value, "ulb", f, kraw,
                       a1_ok=check_below(f, pot, space, tol=tol),
                       a2_ok=coeffs_sign_ok(kraw, 1, tol=tol),
                       notes="" if dense else "f exceeds h between grid points",
                       extra={"tau": r.tau, "a1_dense": dense})


def lp_lower_value(f: Poly, space: SpaceParams, M: float, pot: Potential,
                   design_tau: int | None = None, window=None,
                   tol: float = CHECK_TOL) -> BoundReport:
    """Lower bound f_0 M - f(1) with A1 (on T_n, or T_n ∩ window) and A2/A2' flags."""
    value, kraw = certificate_value(f, space, M)
    lo, hi = (-1.0, 1.0) if window is None else window
    start = 1 if design_tau is None else design_tau + 1
    return BoundReport(value, "lp_generic", f, kraw,
                       a1_ok=check_below(f, pot, space, lo, hi, tol),
                       a2_ok=coeffs_sign_ok(kraw, start, tol=tol))


def lp_upper_value(g: Poly, space: SpaceParams, M: float, tau: int, pot: Potential,
                   window: tuple[float, float], tol: float = CHECK_TOL) -> BoundReport:
    """Upper bound g_0 M - g(1) for tau-designs with B1 on T_n ∩ window and B2."""
    lo, hi = window
    if not -1.0 <= lo <= hi < 1.0:
        raise DomainError(f"window {window} must satisfy -1 <= ell <= s < 1")
    value, kraw = certificate_value(g, space, M)
    return BoundReport(value, "lp_generic", g, kraw,
                       a1_ok=check_above(g, pot, space, lo, hi, tol),
                       a2_ok=coeffs_sign_ok(kraw, tau + 1, sign=-1, tol=tol))

