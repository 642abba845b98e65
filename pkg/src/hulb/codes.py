"""Explicit codes: parsing, distance distribution, energy and design strength."""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from math import comb
from pathlib import Path

import numpy as np

from .errors import DomainError
from .polyengine import SpaceParams, kraw_table
from .ulb import Potential

ZERO_TOL = 1e-8
EXHAUSTIVE_LIMIT = 4096


class CodeParseError(DomainError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


@dataclass(frozen=True)
class Code:
    space: SpaceParams
    rows: np.ndarray  # M x n, symbols in 0..q-1

    def __post_init__(self):
        rows = np.asarray(self.rows)
        if rows.ndim != 2 or rows.shape[1] != self.space.n or rows.shape[0] < 1:
            raise DomainError(f"rows must form an M x {self.space.n} array with M >= 1")
        if rows.min() < 0 or rows.max() >= self.space.q:
            raise DomainError(f"symbols must lie in 0..{self.space.q - 1}")
        if len(np.unique(rows, axis=0)) != len(rows):
            raise DomainError("duplicate rows")

    @property
    def M(self) -> int:
        return len(self.rows)

    @classmethod
    def from_rows(cls, rows, q: int = 2) -> "Code":
        rows = np.asarray(rows, dtype=np.int64)
        return cls(SpaceParams(rows.shape[1], q), rows)


@dataclass(frozen=True)
class DistanceDistribution:
    """A_d = (number of ordered pairs at distance d) / M."""

    counts: tuple  # ordered pair counts, index d
    M: int

    @property
    def A(self) -> np.ndarray:
        return np.asarray(self.counts, dtype=float) / self.M

    def to_dict(self) -> dict:
        return {"A": [float(a) for a in self.A]}


# --- parsing -----------------------------------------------------------------------

def _content_lines(text: str):
    for num, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield num, line


def _ints(num, tokens):
    try:
        return [int(x) for x in tokens]
    except ValueError as exc:
        raise CodeParseError(num, f"non-integer token in {' '.join(tokens)!r}") from exc


def parse_code(text: str) -> Code:
    """Parse the text format: optional header "n q M", then one word per line.

    For q <= 10 a word is n contiguous digits, otherwise n whitespace-separated
    integers.  Lines starting with '#' are comments.
    """
    lines = list(_content_lines(text))
    if not lines:
        raise CodeParseError(1, "no code words")
    header = None
    first_num, first = lines[0]
    toks = first.split()
    if len(toks) == 3 and len(lines) > 1:
        rest = lines[1:]
        if all(len(line.split()) == 1 for _, line in rest) or str(len(rest)) == toks[2]:
            header = _ints(first_num, toks)
            lines = rest
    if header is not None:
        n, q, M = header
        if n < 1 or q < 2 or M < 1:
            raise CodeParseError(first_num, f"bad header values n={n} q={q} M={M}")
        if M != len(lines):
            raise CodeParseError(first_num, f"header says M={M} but {len(lines)} words follow")
    else:
        n = q = None
    words, seen = [], {}
    for num, line in lines:
        tokens = line.split()
        if q is not None and q > 10 or len(tokens) > 1:
            word = _ints(num, tokens)
        else:
            if not line.isdigit():
                bad = next(c for c in line if not c.isdigit())
                raise CodeParseError(num, f"bad symbol {bad!r}")
            word = [int(c) for c in line]
        if n is None:
            n = len(word)
        if len(word) != n:
            raise CodeParseError(num, f"word has length {len(word)}, expected {n}")
        if q is not None:
            bad = [s for s in word if s >= q or s < 0]
            if bad:
                raise CodeParseError(num, f"symbol '{bad[0]}' not in 0..{q - 1}")
        key = tuple(word)
        if key in seen:
            raise CodeParseError(num, f"duplicate of line {seen[key]}")
        seen[key] = num
        words.append(word)
    rows = np.asarray(words, dtype=np.int64)
    if q is None:
        q = max(2, int(rows.max()) + 1)
    return Code(SpaceParams(n, q), rows)


def load_code(path) -> Code:
    return parse_code(Path(path).read_text(encoding="ascii"))


# --- distances -----------------------------------------------------------------------

def _pair_counts(a: np.ndarray, b: np.ndarray, n: int, chunk: int = 256) -> np.ndarray:
    counts = np.zeros(n + 1, dtype=np.int64)
    for i in range(0, len(a), chunk):
        d = (a[i:i + chunk, None, :] != b[None, :, :]).sum(-1)
        counts += np.bincount(d.ravel(), minlength=n + 1)
    return counts


def distance_distribution(code: Code) -> DistanceDistribution:
    counts = _pair_counts(code.rows, code.rows, code.space.n)
    return DistanceDistribution(tuple(int(c) for c in counts), code.M)


def energy(code: Code, pot: Potential) -> float:
    """(1/M) sum over ordered pairs x != y of h(1 - 2 d(x, y) / n)."""
    n = code.space.n
    dist = distance_distribution(code)
    d = np.nonzero(dist.counts[1:])[0] + 1
    if len(d) == 0:
        return 0.0
    return float(np.sum(dist.A[d] * pot(1 - 2 * d / n, n)))


def inner_product_stats(code: Code):
    """(distance distribution, s(C), ell(C), d(C)) over distinct pairs."""
    if code.M < 2:
        raise DomainError("inner product statistics need M >= 2")
    n = code.space.n
    dist = distance_distribution(code)
    d = np.nonzero(dist.counts[1:])[0] + 1
    d_min, d_max = int(d.min()), int(d.max())
    return dist, 1 - 2 * d_min / n, 1 - 2 * d_max / n, d_min


# --- strength --------------------------------------------------------------------------

def krawtchouk_int(n: int, q: int, i: int, d: int) -> int:
    """Exact K_i(d) = sum_j (-1)^j (q-1)^(i-j) C(d, j) C(n-d, i-j)."""
    return sum((-1) ** j * (q - 1) ** (i - j) * comb(d, j) * comb(n - d, i - j)
               for j in range(i + 1))


def dual_transform(code: Code) -> list[int]:
    """M * sum_d A_d K_i(d) for i = 0..n; exact integers."""
    n, q = code.space.n, code.space.q
    counts = distance_distribution(code).counts
    return [sum(c * krawtchouk_int(n, q, i, d) for d, c in enumerate(counts) if c)
            for i in range(n + 1)]


def _warn_index(code: Code, tau: int):
    if tau and code.M % code.space.q ** min(tau, code.space.n):
        warnings.warn(f"M={code.M} is not a multiple of q^tau; index M/q^tau is not integral",
                      stacklevel=3)


def strength(code: Code) -> int:
    """Largest tau with vanishing transform at 1..tau, capped at n."""
    B = dual_transform(code)
    tau = 0
    # B holds M^2 sum A_d K_i(d); the pair-count scale is M times the per-point one
    while tau < code.space.n and abs(B[tau + 1]) <= ZERO_TOL * code.M * code.M:
        tau += 1
    _warn_index(code, tau)
    return tau


def strength_exhaustive(code: Code) -> int:
    """Strength by the design definition: sum_y Q_r(<x, y>) = 0 for every x in
    H(n, q) and r = 1..tau.  Only for q^n <= 4096."""
    space = code.space
    n, q = space.n, space.q
    if q ** n > EXHAUSTIVE_LIMIT:
        raise DomainError(f"q^n = {q ** n} exceeds the exhaustive limit {EXHAUSTIVE_LIMIT}")
    points = np.array(list(itertools.product(range(q), repeat=n)), dtype=np.int64)
    d = (points[:, None, :] != code.rows[None, :, :]).sum(-1)
    Q = kraw_table(space, n, 1 - 2 * d / n)  # (n+1, q^n, M)
    sums = np.abs(Q.sum(-1)).max(-1)
    tau = 0
    while tau < n and sums[tau + 1] <= ZERO_TOL * code.M:
        tau += 1
    return tau
