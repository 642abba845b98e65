"""Command-line front end: ``hulb <subcommand> [options]``.

Exit codes: 0 success, 1 usage error, 2 domain error, 3 numeric failure.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from decimal import ROUND_DOWN, Decimal

import numpy as np

from . import asymptotics, bounds, codes, quadrature, refine, window
from .errors import DomainError, NumericFailure
from .polyengine import SpaceParams
from .ulb import Potential, hermite_certificate, ulb as universal_bound


@dataclass(frozen=True)
class RunConfig:
    format: str = "table"
    tol_root: float = 1e-12
    tol_check: float = 1e-9
    parallel: bool = False

    def __post_init__(self):
        if self.format not in ("table", "json"):
            raise DomainError("format must be table or json")
        if not (self.tol_root > 0 and self.tol_check > 0):
            raise DomainError("tolerances must be positive")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


# --- output ----------------------------------------------------------------------

def _plain(obj):
    """Convert a report into JSON-ready data with reals at 12 significant digits."""
    if hasattr(obj, "to_dict"):
        obj = obj.to_dict()
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return float(f"{x:.12g}") if math.isfinite(x) else None
    return obj


def _trunc(x) -> str:
    if isinstance(x, bool) or x is None:
        return str(x).lower() if isinstance(x, bool) else "-"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return str(Decimal(repr(x)).quantize(Decimal("0.0001"), rounding=ROUND_DOWN))
    if isinstance(x, list):
        return ", ".join(f"[{_trunc(v)}]" if isinstance(v, list) else _trunc(v) for v in x)
    return str(x)


def _flatten(d, prefix=""):
    for k, v in d.items():
        if isinstance(v, dict):
            yield from _flatten(v, f"{prefix}{k}.")
        else:
            yield f"{prefix}{k}", v


def _columns(rows: list[dict]) -> str:
    keys = list(dict.fromkeys(k for r in rows for k in r))
    cells = [[_trunc(r.get(k)) for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    lines = ["  ".join(k.rjust(w) for k, w in zip(keys, widths))]
    lines += ["  ".join(c.rjust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


def emit(report, cfg: RunConfig) -> str:
    data = _plain(report)
    if cfg.format == "json":
        return json.dumps(data, indent=2)
    if isinstance(data, list):
        return _columns(data)
    parts, tables = [], []
    for k, v in _flatten(data):
        if isinstance(v, list) and v and all(isinstance(r, dict) for r in v):
            tables.append(f"{k}:\n{_columns(v)}")
        else:
            parts.append((k, _trunc(v)))
    width = max((len(k) for k, _ in parts), default=0)
    return "\n".join([f"{k.ljust(width)}  {v}" for k, v in parts] + tables)


# --- subcommands ----------------------------------------------------------------------

def _space(a):
    return SpaceParams(a.n, a.q)


def cmd_rao(a, cfg):
    return {"n": a.n, "q": a.q, "tau": a.tau, "value": bounds.rao(_space(a), a.tau)}


def cmd_lev(a, cfg):
    return {"n": a.n, "q": a.q, "tau": a.tau, "s": a.s,
            "value": bounds.lev(_space(a), a.tau, a.s)}


def cmd_tau(a, cfg):
    s = bounds.tau_for(_space(a), a.M, tol=cfg.tol_root)
    return {"tau": s.tau, "branch": s.branch, "k": s.k, "interval": list(s.interval)}


def cmd_quad(a, cfg):
    return quadrature.rule(_space(a), a.M, a.tau, tol=cfg.tol_root)


def cmd_ulb(a, cfg):
    space = _space(a)
    r = quadrature.rule(space, a.M, a.tau, tol=cfg.tol_root)
    rep = hermite_certificate(space, a.M, a.pot, r, tol=cfg.tol_check)
    rep.extra["rule"] = r.to_dict()
    return rep


def cmd_testfn(a, cfg):
    space = _space(a)
    j_max = a.j_max if a.j_max is not None else space.n
    return refine.scan_test_functions(space, a.M, j_max,
                                      quadrature.rule(space, a.M, tol=cfg.tol_root))


def cmd_paircover(a, cfg):
    space = _space(a)
    return refine.pair_covering(space, a.M, a.pot,
                                quadrature.rule(space, a.M, tol=cfg.tol_root), tol=cfg.tol_check)


def cmd_improve(a, cfg):
    space = _space(a)
    r = quadrature.rule(space, a.M, tol=cfg.tol_root)
    j = a.j
    if j is None:
        j = refine.scan_test_functions(space, a.M, space.n, r).first_negative
        if j is None:
            raise DomainError("no negative test function up to degree n")
    return refine.higher_degree_bound(space, a.M, a.pot, j, r, a.eps, tol=cfg.tol_check)


def cmd_window(a, cfg):
    if a.q != 2:
        raise DomainError("window bounds need q = 2")
    ell = window.ell_lower_2designs(a.n, a.M, a.ell_parity)
    s = window.s_upper_2designs(a.n, a.M, a.s_parity)
    try:
        g = window.gamma0M(a.n, a.M)
    except DomainError:
        g = None
    return {"ell": ell, "s": s,
            "lower": window.lower_2design(a.n, a.M, a.pot, a.ell_parity).value,
            "upper": window.upper_2design(a.n, a.M, a.pot, a.ell_parity, a.s_parity).value,
            "gamma0M": g}


def cmd_asymp(a, cfg):
    regime = asymptotics.AsymptoticRegime(a.k, a.parity, a.delta)
    rows = asymptotics.convergence_probe(regime, a.n_list, a.pot,
                                         parallel=os.cpu_count() or 1 if cfg.parallel else 1)
    for r in rows:
        r.pop("nodes", None)
    slope, const = asymptotics.energy_floor(regime, a.pot)
    const = {"lo": const.lo, "hi": const.hi} if isinstance(const, tuple) else const
    out = {"k": a.k, "parity": a.parity, "delta": a.delta,
           "node_limits": asymptotics.node_limits(regime),
           "slope": slope, "constant": const, "rows": rows}
    if a.parity == "odd":
        out["rho0M_limit"] = asymptotics.rho0M_limit(regime)
    return out


def cmd_energy(a, cfg):
    try:
        code = codes.load_code(a.file)
    except OSError as exc:
        raise DomainError(f"cannot read {a.file}: {exc}") from exc
    out = {"n": code.space.n, "q": code.space.q, "M": code.M,
           "energy": codes.energy(code, a.pot)}
    if code.M >= 2:
        dist, s, ell, d = codes.inner_product_stats(code)
        out.update({"s": s, "ell": ell, "d": d, "A": dist.to_dict()["A"],
                    "strength": codes.strength(code)})
        if code.M > code.space.q and not a.no_bound:
            out["ulb"] = universal_bound(code.space, code.M, a.pot).value
    return out


# --- parser ----------------------------------------------------------------------------

def _pot(text):
    try:
        return Potential.parse(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _int_list(text):
    try:
        return [int(x) for x in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers: {text!r}") from exc


def _default_tol_check():
    env = os.environ.get("HULB_TOL")
    if env is None:
        return 1e-9
    try:
        return float(env)
    except ValueError:
        raise UsageError(f"HULB_TOL must be a number, got {env!r}")


def build_parser() -> argparse.ArgumentParser:
    common = Parser(add_help=False)
    common.add_argument("--format", choices=("table", "json"), default="table")
    common.add_argument("--tol-root", type=float, default=1e-12,
                        help="root-finding tolerance (default 1e-12)")
    common.add_argument("--tol-check", type=float, default=None,
                        help="certificate check tolerance (default 1e-9, or $HULB_TOL)")
    common.add_argument("--parallel", action="store_true", help="use worker processes for sweeps")

    space = Parser(add_help=False)
    space.add_argument("--n", type=int, required=True, help="word length")
    space.add_argument("--q", type=int, default=2, help="alphabet size (default 2)")

    code_size = Parser(add_help=False)
    code_size.add_argument("--M", type=int, required=True, help="code cardinality")

    pot = Parser(add_help=False)
    pot.add_argument("--pot", type=_pot, default=_pot("riesz:1"),
                     help="riesz:<alpha>[:<scale>], exp:<alpha> or poly:<c0,c1,...> "
                          "(default riesz:1, i.e. h = (n(1-t)/2)^-1)")

    p = Parser(prog="hulb", description="Energy bounds for codes in Hamming spaces.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=Parser)

    def add(name, func, help_text, parents):
        sp = sub.add_parser(name, help=help_text, description=help_text,
                            parents=[common, *parents])
        sp.set_defaults(func=func)
        return sp

    sp = add("rao", cmd_rao, "Rao bound R(n, tau) on the size of a tau-design.", [space])
    sp.add_argument("--tau", type=int, required=True)
    sp = add("lev", cmd_lev, "Levenshtein bound L_tau(n, s) on codes with maximal inner product s.",
             [space])
    sp.add_argument("--tau", type=int, required=True)
    sp.add_argument("--s", type=float, required=True)
    add("tau", cmd_tau, "Strength tau with M in (R(n, tau), R(n, tau+1)] and its s-interval.",
        [space, code_size])
    sp = add("quad", cmd_quad, "Levenshtein quadrature rule (nodes and weights) for M points.",
             [space, code_size])
    sp.add_argument("--tau", type=int, default=None, help="override the strength")
    sp = add("ulb", cmd_ulb, "Universal lower bound on h-energy with its Hermite certificate.",
             [space, code_size, pot])
    sp.add_argument("--tau", type=int, default=None, help="override the strength")
    sp = add("testfn", cmd_testfn,
             "Test functions P_j(n, s) for j > tau; a negative value signals an improvement.",
             [space, code_size])
    sp.add_argument("--j-max", type=int, default=None, help="largest j (default n)")
    add("paircover", cmd_paircover,
        "Pair-covering bound: interpolate h at the grid points bracketing each node.",
        [space, code_size, pot])
    sp = add("improve", cmd_improve,
             "Higher-degree improvement of the universal bound using one Krawtchouk polynomial.",
             [space, code_size, pot])
    sp.add_argument("--j", type=int, default=None, help="degree (default first negative P_j)")
    sp.add_argument("--eps", type=float, default=None, help="fixed epsilon (default automatic)")
    sp = add("window", cmd_window,
             "Binary 2-designs: inner product estimates and the lower/upper energy strip.",
             [space, code_size, pot])
    sp.add_argument("--ell-parity", choices=window.PARITIES, default="conservative")
    sp.add_argument("--s-parity", choices=window.PARITIES, default="conservative")
    sp = add("asymp", cmd_asymp,
             "Binary asymptotics with M_n ~ (c + delta) n^floor(tau/2): limits and a probe.", [])
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--parity", choices=("odd", "even"), required=True)
    sp.add_argument("--delta", type=float, default=0.0)
    sp.add_argument("--n-list", type=_int_list, default=[50, 100, 200, 400])
    sp.add_argument("--pot", type=_pot, default=_pot("riesz:1:2"),
                    help="n-independent potential (default riesz:1:2, i.e. h = 1/(1-t))")
    sp = add("energy", cmd_energy,
             "Energy, distance distribution, extreme inner products and strength of a code file.",
             [pot])
    sp.add_argument("--file", required=True, help="code file: optional 'n q M' header, one word per line")
    sp.add_argument("--no-bound", action="store_true", help="skip the universal bound comparison")
    return p


def run(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        try:
            args = build_parser().parse_args(argv)
        except SystemExit as exc:  # --help
            return exc.code or 0
        tol_check = args.tol_check if args.tol_check is not None else _default_tol_check()
        cfg = RunConfig(args.format, args.tol_root, tol_check, args.parallel)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        report = args.func(args, cfg)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    print(emit(report, cfg))
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
