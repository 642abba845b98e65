"""Krawtchouk and adjacent polynomials on the Hamming space H(n, q).

Everything is evaluated in the inner-product variable ``t = 1 - 2z/n``; the
distance variable ``z = n(1 - t)/2`` is only used internally so that one
recurrence serves every family.  Binomial sums are kept as Python integers
and converted to float at the last step.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import brentq

from .errors import DomainError, NumericFailure

Poly = Polynomial

ADJACENT_FAMILIES = ((1, 0), (1, 1), (0, 1))


@dataclass(frozen=True)
class SpaceParams:
    """Word length ``n`` and alphabet size ``q`` (not necessarily a prime power)."""

    n: int
    q: int

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")
        if int(self.q) != self.q or self.q < 2:
            raise DomainError(f"q must be an integer >= 2, got {self.q!r}")

    @property
    def grid(self) -> np.ndarray:
        """The inner products T_n = {-1 + 2i/n}, increasing."""
        return -1.0 + 2.0 * np.arange(self.n + 1) / self.n

    @property
    def size(self) -> int:
        return self.q ** self.n

    def r(self, i: int) -> int:
        """Dimension r_i = (q-1)^i C(n, i) of the i-th harmonic space."""
        return (self.q - 1) ** i * comb(self.n, i)

    def z_of(self, t):
        return self.n * (1.0 - np.asarray(t, dtype=float)) / 2.0


@dataclass(frozen=True)
class Measure:
    space: SpaceParams
    points: np.ndarray
    masses: np.ndarray


@lru_cache(maxsize=64)
def measure(space: SpaceParams) -> Measure:
    """Discrete orthogonality measure of the Krawtchouk system.

    The mass at ``t_i`` is ``q^{-n} C(n, i) (q-1)^i`` where ``t_i = 1 - 2i/n``.
    Integer division keeps the masses correctly rounded for large ``n``.
    """
    n, q = space.n, space.q
    total = q ** n
    masses = np.array([comb(n, i) * (q - 1) ** i / total for i in range(n + 1)])
    # index i counts distance, so reverse to align with the increasing grid
    return Measure(space, space.grid, masses[::-1].copy())


def integrate(values_on_grid, space: SpaceParams) -> float:
    """Integral of a function against mu_n given its values on T_n."""
    return float(np.dot(measure(space).masses, values_on_grid))


def mean(poly: Poly, space: SpaceParams) -> float:
    """The constant Krawtchouk coefficient f_0 of ``poly`` (any degree)."""
    return integrate(poly(space.grid), space)


# --- evaluation ------------------------------------------------------------

def krawtchouk_K(N: int, q: int, i: int, x):
    """Unnormalized K_i^{(N,q)}(x) by the three-term recurrence.

    Valid for real ``x`` and any ``i >= 0``: the recurrence is an identity of
    the generating function, so degrees beyond ``N`` give the polynomial that
    vanishes on {0, ..., N}.
    """
    x = np.asarray(x, dtype=float)
    prev = np.ones_like(x)
    if i == 0:
        return prev
    cur = N * (q - 1) - q * x
    for m in range(1, i):
        prev, cur = cur, ((m + (q - 1) * (N - m) - q * x) * cur
                          - (q - 1) * (N - m + 1) * prev) / (m + 1)
    return cur


def _check_degree(space, i, top):
    if int(i) != i or i < 0 or i > top:
        raise DomainError(f"degree {i} outside [0, {top}] for n={space.n}")


def kraw_table(space: SpaceParams, m: int, t) -> np.ndarray:
    """Rows Q_0..Q_m of the normalized Krawtchouk polynomials at ``t``.

    Uses the recurrence divided through by r_i, which never overflows:
    Q_{i+1} = ([i + (q-1)(n-i) - qz] Q_i - i Q_{i-1}) / ((q-1)(n-i)).
    """
    n, q = space.n, space.q
    _check_degree(space, m, n)
    z = space.z_of(t)
    out = np.empty((m + 1,) + z.shape)
    out[0] = 1.0
    if m >= 1:
        out[1] = (n * (q - 1) - q * z) / (n * (q - 1))
    for i in range(1, m):
        out[i + 1] = (((i + (q - 1) * (n - i) - q * z) * out[i] - i * out[i - 1])
                      / ((q - 1) * (n - i)))
    return out


def kraw_eval(space: SpaceParams, i: int, t, normalized: bool = True):
    """K_i^{(n,q)}(z) at z = n(1-t)/2, or Q_i = K_i / r_i when ``normalized``."""
    _check_degree(space, i, space.n)
    if normalized:
        out = kraw_table(space, i, t)[i]
    else:
        out = krawtchouk_K(space.n, space.q, i, space.z_of(t))
    return float(out) if np.ndim(out) == 0 else out


def adjacent_normalizer(space: SpaceParams, a: int, b: int, i: int) -> int:
    n, q = space.n, space.q
    if (a, b) == (1, 0):
        return sum(comb(n, j) * (q - 1) ** j for j in range(i + 1))
    if (a, b) == (1, 1):
        return sum(comb(n - 1, j) * (q - 1) ** j for j in range(i + 1))
    if (a, b) == (0, 1):
        return comb(n - 1, i) * (q - 1) ** i
    raise DomainError(f"no adjacent family ({a},{b})")


def adjacent_top_degree(space: SpaceParams, a: int, b: int) -> int:
    # One past n-a-b is the polynomial vanishing on every mass point of the
    # family's measure; the even branch needs it when M is within reach of q^n.
    return space.n - a - b + 1 if (a, b) == (1, 1) else space.n - a - b


def adjacent_eval(space: SpaceParams, a: int, b: int, i: int, t):
    """Adjacent polynomial Q_i^{(a,b,n,q)}(t); normalized so its value at t=1 is 1."""
    if (a, b) not in ADJACENT_FAMILIES:
        raise DomainError(f"no adjacent family ({a},{b})")
    _check_degree(space, i, adjacent_top_degree(space, a, b))
    n, q = space.n, space.q
    z = space.z_of(t)
    if (a, b) == (1, 0):
        num = krawtchouk_K(n - 1, q, i, z - 1)
    elif (a, b) == (1, 1):
        num = krawtchouk_K(n - 2, q, i, z - 1)
    else:
        num = krawtchouk_K(n - 1, q, i, z)
    out = num / float(adjacent_normalizer(space, a, b, i))
    return float(out) if np.ndim(out) == 0 else out


# --- roots -----------------------------------------------------------------

def scan_step(n: int, i: int) -> float:
    return min(2.0 / (20 * n * max(i, 1)), 1e-3)


def find_roots(func, lo: float, hi: float, expected: int, step: float,
               extra_points=(), tol: float = 1e-12) -> np.ndarray:
    """All sign-change roots of a vectorized ``func`` on [lo, hi].

    Scans a uniform grid (plus ``extra_points``) and refines each bracket with
    Brent's method.  If fewer than ``expected`` roots turn up, the scan is
    repeated once ten times finer before giving up.
    """
    for attempt in range(2):
        h = step / 10 ** attempt
        m = max(int(np.ceil((hi - lo) / h)), 1)
        xs = np.linspace(lo, hi, m + 1)
        extra = [p for p in extra_points if lo < p < hi]
        if extra:
            xs = np.union1d(xs, extra)
        ys = np.asarray(func(xs), dtype=float)
        roots = list(xs[ys == 0.0])
        for j in np.nonzero(ys[:-1] * ys[1:] < 0)[0]:
            roots.append(brentq(lambda x: float(func(np.array(x))), xs[j], xs[j + 1],
                                xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500))
        roots = np.sort(np.array(roots, dtype=float))
        if len(roots) >= expected:
            return roots
    raise NumericFailure(
        f"found {len(roots)} roots on [{lo}, {hi}], expected {expected}")


def greatest_zero(space: SpaceParams, a: int, b: int, i: int, tol: float = 1e-12) -> float:
    """Greatest zero t_i^{a,b} of the adjacent polynomial; t_0^{1,1} = -1."""
    if i == 0 and (a, b) == (1, 1):
        return -1.0
    if i < 1:
        raise DomainError("greatest zero needs degree >= 1")
    roots = find_roots(lambda t: adjacent_eval(space, a, b, i, t), -1.0, 1.0,
                       expected=i, step=scan_step(space.n, i),
                       extra_points=space.grid, tol=tol)
    return float(roots[-1])


# --- Krawtchouk expansion ----------------------------------------------------

@dataclass(frozen=True)
class KrawExpansion:
    """Coefficients f_0..f_m of sum f_i Q_i^{(n,q)}."""

    f: np.ndarray
    space: SpaceParams

    def __call__(self, t):
        m = len(self.f) - 1
        out = np.tensordot(self.f, kraw_table(self.space, m, t), axes=1)
        return float(out) if np.ndim(out) == 0 else out


def grid_coefficients(values_on_grid, space: SpaceParams, m: int | None = None) -> np.ndarray:
    """f_i = r_i <f, Q_i> for i = 0..m from the values of f on T_n.

    Defined for any function on T_n; it is the expansion of the unique
    polynomial of degree <= n that agrees with f there.
    """
    m = space.n if m is None else m
    mu = measure(space)
    table = kraw_table(space, m, mu.points)
    r = np.array([float(space.r(i)) for i in range(m + 1)])
    return r * (table @ (mu.masses * np.asarray(values_on_grid, dtype=float)))


def expand(poly: Poly, space: SpaceParams) -> KrawExpansion:
    deg = poly.degree()
    if deg > space.n:
        raise DomainError(f"degree {deg} exceeds n={space.n}; expansion not unique")
    return KrawExpansion(grid_coefficients(poly(space.grid), space, deg), space)


def kraw_coefficients(poly: Poly, space: SpaceParams) -> np.ndarray:
    """Krawtchouk coefficients of ``poly`` as a function on T_n (any degree)."""
    return grid_coefficients(poly(space.grid), space, min(poly.degree(), space.n))


def kraw_polys(space: SpaceParams, m: int) -> list[Poly]:
    """Monomial forms of Q_0..Q_m, built with the normalized recurrence."""
    n, q = space.n, space.q
    _check_degree(space, m, n)
    z = Poly([n / 2.0, -n / 2.0])
    out = [Poly([1.0])]
    if m >= 1:
        out.append((n * (q - 1) - q * z) / (n * (q - 1)))
    for i in range(1, m):
        out.append(((i + (q - 1) * (n - i) - q * z) * out[i] - i * out[i - 1])
                   / ((q - 1) * (n - i)))
    return out


def kraw_to_poly(f, space: SpaceParams) -> Poly:
    """Monomial form of sum f_i Q_i."""
    polys = kraw_polys(space, len(f) - 1)
    total = Poly([0.0])
    for c, p in zip(f, polys):
        total = total + float(c) * p
    return total


# --- Christoffel-Darboux kernel ----------------------------------------------

def kernel_T(space: SpaceParams, k: int, u, v) -> float:
    """T_k(u, v) = sum_{i<=k} r_i Q_i(u) Q_i(v)."""
    if k < 0 or k > space.n - 1:
        raise DomainError(f"kernel degree {k} outside [0, n-1]")
    r = np.array([float(space.r(i)) for i in range(k + 1)])
    qu = kraw_table(space, k, np.asarray(u, float))
    qv = kraw_table(space, k, np.asarray(v, float))
    return float(np.sum(r * qu * qv))


def kernel_T_ratio(space: SpaceParams, k: int, u: float, v: float) -> float:
    """Closed (Christoffel-Darboux) form of T_k(u, v) for u != v.

    The constant is c = 2 (q-1)^{k+1} C(n-1, k) / q.
    """
    if u == v:
        raise DomainError("ratio form needs u != v")
    if k < 0 or k > space.n - 1:
        raise DomainError(f"kernel degree {k} outside [0, n-1]")
    n, q = space.n, space.q
    c = 2 * (q - 1) ** (k + 1) * comb(n - 1, k) / q
    qu = kraw_table(space, k + 1, u)
    qv = kraw_table(space, k + 1, v)
    return float(c * (qu[k + 1] * qv[k] - qv[k + 1] * qu[k]) / (u - v))
