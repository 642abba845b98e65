"""Reference computations that avoid the library's code paths.

- Krawtchouk values from the explicit alternating sum (exact rationals).
- Quadrature rules as Gauss / Gauss-Radau rules of the signed moment
  functional L(f) = sum_t f(t) mu(t) - f(1)/M, built from exact moments with
  mpmath at high precision.  No Levenshtein bound and no adjacent polynomials.
- Interpolating certificates from a confluent Vandermonde solve.
- Energies and strengths by brute force over pairs and column subsets.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial

import mpmath as mp
import numpy as np

mp.mp.dps = 60


def kraw_exact(n: int, q: int, i: int, d: int) -> int:
    return sum((-1) ** j * (q - 1) ** (i - j) * comb(d, j) * comb(n - d, i - j)
               for j in range(i + 1))


def Q_exact(n: int, q: int, i: int, d: int) -> Fraction:
    return Fraction(kraw_exact(n, q, i, d), (q - 1) ** i * comb(n, i))


def rao_direct(n: int, q: int, tau: int) -> int:
    """Rao bound by counting: even tau = ball of radius k, odd = q * ball in n-1."""
    k = (tau + 1) // 2
    if tau % 2 == 0:
        return sum(comb(n, i) * (q - 1) ** i for i in range(k + 1))
    return q * sum(comb(n - 1, i) * (q - 1) ** i for i in range(k))


def masses(n: int, q: int):
    """(t_d, mass_d) with exact rationals, d = distance."""
    return [(Fraction(n - 2 * d, n), Fraction(comb(n, d) * (q - 1) ** d, q ** n))
            for d in range(n + 1)]


def moments(n: int, q: int, M: int, top: int, shift: int = 0):
    """L((1+t)^shift t^j) for j = 0..top, exact."""
    out = []
    for j in range(top + 1):
        val = sum(m * t ** j * (1 + t) ** shift for t, m in masses(n, q))
        val -= Fraction(2 ** shift, M)
        out.append(val)
    return out


def _mpf(x: Fraction):
    return mp.mpf(x.numerator) / x.denominator


def _orthogonal_roots(mom, k):
    """Roots of the degree-k monic orthogonal polynomial for moments ``mom``."""
    H = mp.matrix(k, k)
    rhs = mp.matrix(k, 1)
    for i in range(k):
        for j in range(k):
            H[i, j] = _mpf(mom[i + j])
        rhs[i] = -_mpf(mom[i + k])
    c = mp.lu_solve(H, rhs)
    coeffs = [mp.mpf(1)] + [c[j] for j in range(k - 1, -1, -1)]
    roots = mp.polyroots(coeffs, maxsteps=400, extraprec=400)
    return sorted(mp.re(r) for r in roots)


def rule_oracle(n: int, q: int, M: int, tau: int):
    """(nodes, weights) as mpf lists."""
    k = (tau + 1) // 2
    if tau % 2:
        nodes = _orthogonal_roots(moments(n, q, M, 2 * k), k)
    else:
        nodes = [mp.mpf(-1)] + _orthogonal_roots(moments(n, q, M, 2 * k, shift=1), k)
    mom = moments(n, q, M, len(nodes) - 1)
    V = mp.matrix(len(nodes), len(nodes))
    for j in range(len(nodes)):
        for i, x in enumerate(nodes):
            V[j, i] = x ** j
    w = mp.lu_solve(V, mp.matrix([_mpf(m) for m in mom]))
    return nodes, [w[i] for i in range(len(nodes))]


def riesz(alpha, c):
    """h(t) = (c(1-t)/2)^-alpha and its derivatives, in mpmath."""
    def h(t, m=0):
        z = c * (1 - t) / 2
        return (mp.mpf(c) / 2) ** m * mp.rf(alpha, m) * z ** (-alpha - m)
    return h


def exponential(alpha):
    return lambda t, m=0: mp.mpf(alpha) ** m * mp.e ** (alpha * t)


def ulb_oracle(n, q, M, tau, h):
    nodes, w = rule_oracle(n, q, M, tau)
    return M * mp.fsum(wi * h(x) for x, wi in zip(nodes, w))


def confluent_interpolant(points, mults, h):
    """Monomial coefficients of the Hermite interpolant via a confluent Vandermonde solve."""
    N = sum(mults)
    A = mp.matrix(N, N)
    b = mp.matrix(N, 1)
    row = 0
    for x, m in zip(points, mults):
        x = mp.mpf(x)
        for d in range(m):
            for p in range(d, N):
                A[row, p] = mp.ff(p, d) * x ** (p - d)
            b[row] = h(x, d)
            row += 1
    c = mp.lu_solve(A, b)
    return [c[i] for i in range(N)]


def lp_value_oracle(coeffs, n, q, M):
    """f_0 M - f(1) with f_0 = sum f(t) mu(t) evaluated exactly on the grid."""
    def f(t):
        return mp.fsum(c * t ** i for i, c in enumerate(coeffs))
    f0 = mp.fsum(f(_mpf(t)) * _mpf(m) for t, m in masses(n, q))
    return f0 * M - f(mp.mpf(1))


def energy_bruteforce(rows, h_of_t):
    rows = [tuple(r) for r in rows]
    n = len(rows[0])
    total = 0.0
    for x in rows:
        for y in rows:
            if x != y:
                d = sum(a != b for a, b in zip(x, y))
                total += h_of_t(1 - 2 * d / n)
    return total / len(rows)


def oa_strength(rows, q) -> int:
    """Largest tau such that every tau columns show every tuple equally often."""
    rows = np.asarray(rows)
    M, n = rows.shape
    tau = 0
    for t in range(1, n + 1):
        if M % q ** t:
            break
        need = M // q ** t
        ok = True
        for cols in itertools.combinations(range(n), t):
            _, counts = np.unique(rows[:, cols], axis=0, return_counts=True)
            if len(counts) != q ** t or np.any(counts != need):
                ok = False
                break
        if not ok:
            break
        tau = t
    return tau


def hadamard_oa(columns=(1, 2, 4, 8, 3, 5, 6, 9, 15)):
    """16 x 9 binary array: rows x in F_2^4, column c gives the bit parity of x & c.

    The columns are distinct nonzero functionals (so any two are independent,
    giving strength 2) and include the unit vectors (so the rows are distinct).
    """
    rows = []
    for x in range(16):
        rows.append([bin(x & c).count("1") % 2 for c in columns])
    return np.array(rows)


def fact(k):
    return factorial(k)
