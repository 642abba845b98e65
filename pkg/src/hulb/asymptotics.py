"""Binary limits as n grows with M_n ~ (c + delta) n^floor(tau/2), and probes
that check finite-n rules against them."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import factorial, floor
from typing import NamedTuple

import numpy as np

from .bounds import tau_for
from .errors import DomainError, NumericFailure
from .polyengine import SpaceParams
from .quadrature import rho0M_product, rule as build_rule
from .ulb import Potential, ulb


@dataclass(frozen=True)
class AsymptoticRegime:
    k: int
    parity: str
    delta: float = 0.0

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("k must be >= 1")
        if self.parity not in ("odd", "even"):
            raise DomainError("parity must be odd or even")
        if self.delta < 0:
            raise DomainError("delta must be >= 0")

    @property
    def tau(self) -> int:
        return 2 * self.k - 1 if self.parity == "odd" else 2 * self.k

    @property
    def base(self) -> float:
        """The constant c in M_n ~ (c + delta) n^e."""
        return 2 / factorial(self.k - 1) if self.parity == "odd" else 1 / factorial(self.k)

    @property
    def exponent(self) -> int:
        return self.tau // 2

    def M_n(self, n: int) -> int:
        """Round-half-up of (c + delta) n^e."""
        return int(floor((self.base + self.delta) * n ** self.exponent + 0.5))

    @property
    def shrink(self) -> float:
        """1 + delta (k-1)!; the odd-branch node alpha_0 tends to -1/shrink."""
        return 1 + self.delta * factorial(self.k - 1)


def node_limits(regime: AsymptoticRegime) -> list[float]:
    """Limits of the nodes in increasing order (even branch: beta_0 = -1 included)."""
    if regime.parity == "odd":
        return [-1 / regime.shrink] + [0.0] * (regime.k - 1)
    return [-1.0] + [0.0] * regime.k


def rho0M_limit(regime: AsymptoticRegime) -> float:
    if regime.parity != "odd":
        raise DomainError("the rho_0 M limit is given for the odd branch only")
    return regime.shrink ** (2 * regime.k - 1)


class Bracket(NamedTuple):
    lo: float
    hi: float
    expression: str


def _fixed(pot: Potential):
    if pot.kind == "riesz" and not pot.scale:
        raise DomainError("limits need an n-independent potential; give riesz a scale")
    return lambda t: pot(t, 1)


def energy_floor(regime: AsymptoticRegime, pot: Potential):
    """(slope, constant) of the lower bound slope * M_n + constant.

    Odd: constant is c3.  Even: the constant involves the finite-n mass
    g = gamma_0 M_n in (0, 1), so a Bracket over that range is returned.
    """
    h = _fixed(pot)
    h0 = float(h(0.0))
    if regime.parity == "odd":
        rho = rho0M_limit(regime)
        return h0, float(rho * (h(-1 / regime.shrink) - h0) - h0)
    ends = sorted([-h0, float(h(-1.0)) - 2 * h0])
    return h0, Bracket(ends[0], ends[1], "g*(h(-1)-h(0)) - h(0), g in (0,1)")


# --- probes ------------------------------------------------------------------------

def probe_row(regime: AsymptoticRegime, n: int, pot: Potential) -> dict:
    space = SpaceParams(n, 2)
    M = regime.M_n(n)
    row = {"n": n, "M": M}
    try:
        a = tau_for(space, M)
    except DomainError as exc:
        return {**row, "skipped": str(exc)}
    if a.tau != regime.tau:
        return {**row, "skipped": f"M_n falls in the tau={a.tau} interval"}
    try:
        r = build_rule(space, M)
        limits = np.array(node_limits(regime))
        row["nodes"] = [float(x) for x in r.nodes]
        row["node_error"] = float(np.max(np.abs(r.nodes - limits)))
        if regime.parity == "odd":
            row["alpha0_error"] = float(abs(r.nodes[0] - limits[0]))
            row["rho0M"] = rho0M_product(r)
            row["rho0M_error"] = float(abs(row["rho0M"] - rho0M_limit(regime)))
        else:
            row["gamma0M"] = float(r.weights[0] * M)
        h = _fixed(pot)
        row["ulb_over_M"] = float(ulb(space, M, pot, r).value / M)
        row["h0"] = float(h(0.0))
    except (DomainError, NumericFailure) as exc:
        row["error"] = str(exc)
    return row


def convergence_probe(regime: AsymptoticRegime, n_list, pot: Potential,
                      parallel: int = 1) -> list[dict]:
    """One row per n: nodes, rho_0 M or gamma_0 M, ULB/M and distances to the limits."""
    n_list = list(n_list)
    if any(b <= a for a, b in zip(n_list, n_list[1:])):
        raise DomainError("n_list must be increasing")
    _fixed(pot)
    if parallel > 1 and len(n_list) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as ex:
            return list(ex.map(probe_row, [regime] * len(n_list), n_list,
                               [pot] * len(n_list)))
    return [probe_row(regime, n, pot) for n in n_list]
