import itertools
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from hulb.codes import (Code, CodeParseError, dual_transform, distance_distribution, energy,
                        inner_product_stats, load_code, parse_code, strength,
                        strength_exhaustive)
from hulb.errors import DomainError
from hulb.polyengine import SpaceParams
from hulb.refine import pair_covering
from hulb.ulb import Potential, ulb

H = Potential.riesz(1, 2)  # h(t) = 1/(1-t)
EVEN3 = "000\n011\n101\n110\n"


def linear_code(gen):
    gen = np.asarray(gen)
    return np.array([(np.array(m) @ gen) % 2
                     for m in itertools.product([0, 1], repeat=len(gen))])


SIMPLEX = linear_code(np.array([[int(b) for b in format(x, "03b")] for x in range(1, 8)]).T)
HAMMING8 = linear_code([[1, 0, 0, 0, 0, 1, 1, 1], [0, 1, 0, 0, 1, 0, 1, 1],
                        [0, 0, 1, 0, 1, 1, 0, 1], [0, 0, 0, 1, 1, 1, 1, 0]])


def test_parse_plain_and_header():
    c = parse_code(EVEN3)
    assert (c.space.n, c.space.q, c.M) == (3, 2, 4)
    c = parse_code("# a comment\n3 2 4\n000\n011\n\n101\n110\n")
    assert c.M == 4 and c.rows.tolist()[1] == [0, 1, 1]
    c = parse_code("2 12 2\n0 11\n5 3\n")
    assert c.space.q == 12 and c.rows.tolist() == [[0, 11], [5, 3]]
    c = parse_code("012\n210\n")
    assert c.space.q == 3


def test_parse_errors_name_the_line():
    with pytest.raises(CodeParseError, match="line 3") as err:
        parse_code("3 2 3\n000\n021\n111\n")
    assert err.value.line == 3 and "'2'" in str(err.value)
    with pytest.raises(CodeParseError, match="line 4: duplicate of line 2"):
        parse_code("000\n011\n101\n011\n")
    with pytest.raises(CodeParseError, match="header says M=5"):
        parse_code("3 2 5\n000\n011\n101\n110\n")
    with pytest.raises(CodeParseError, match="length"):
        parse_code("000\n01\n")
    with pytest.raises(CodeParseError, match="bad symbol"):
        parse_code("0a0\n")
    with pytest.raises(CodeParseError):
        parse_code("# only comments\n")
    assert issubclass(CodeParseError, DomainError)


def test_load_code(tmp_path):
    p = tmp_path / "c.txt"
    p.write_text(EVEN3)
    assert load_code(p).M == 4


def test_code_validation():
    with pytest.raises(DomainError):
        Code.from_rows([[0, 1], [0, 1]])
    with pytest.raises(DomainError):
        Code.from_rows([[0, 2]])
    assert Code.from_rows([[0, 1, 1]]).M == 1


def test_energy_examples():
    assert energy(parse_code(EVEN3), H) == pytest.approx(9 / 4)
    full = Code.from_rows([[0, 0], [0, 1], [1, 0], [1, 1]])
    for pot in (H, Potential.exponential(1.3)):
        assert energy(full, pot) == pytest.approx(2 * pot(0.0, 2) + pot(-1.0, 2))
    assert energy(Code.from_rows([[1, 0, 1]]), H) == 0.0


def test_stats_examples():
    dist, s, ell, d = inner_product_stats(parse_code(EVEN3))
    assert dist.A.tolist() == [1, 0, 3, 0]
    assert s == pytest.approx(-1 / 3) and ell == pytest.approx(-1 / 3) and d == 2
    dist, s, ell, d = inner_product_stats(Code.from_rows([[0, 0, 0, 0], [1, 1, 1, 1], [0, 0, 1, 1]]))
    assert (s, ell, d) == (0.0, -1.0, 2)
    with pytest.raises(DomainError):
        inner_product_stats(Code.from_rows([[0, 1]]))


def test_strength_examples():
    assert strength(parse_code(EVEN3)) == 2
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert strength(Code.from_rows([[0] * 5, [1] * 5])) == 1
    full = Code.from_rows(list(itertools.product([0, 1], repeat=4)))
    assert strength(full) == 4 == strength_exhaustive(full)
    assert strength(Code.from_rows(SIMPLEX)) == 2
    assert strength(Code.from_rows(HAMMING8)) == 3
    assert strength(Code.from_rows([[0, 0, 0], [0, 0, 1], [1, 1, 1]])) == 0
    rows = oracles.hadamard_oa()
    assert strength(Code.from_rows(rows)) == 2 == strength_exhaustive(Code.from_rows(rows))


def test_non_integral_index_warns(monkeypatch):
    # a genuine design always has integral index, so fake a transform that vanishes at 1
    code = Code.from_rows([[0, 0, 0], [0, 1, 1], [1, 0, 1]])
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert strength(code) == oracles.oa_strength(code.rows, 2)
    monkeypatch.setattr("hulb.codes.dual_transform", lambda c: [9, 0, 5, 1])
    with pytest.warns(UserWarning, match="not integral"):
        assert strength(code) == 1


def test_exhaustive_limit():
    with pytest.raises(DomainError):
        strength_exhaustive(Code.from_rows([[0] * 13, [1] * 13]))


def test_dual_transform_is_nonnegative_and_starts_at_M_squared():
    for rows in (SIMPLEX, HAMMING8, oracles.hadamard_oa()):
        B = dual_transform(Code.from_rows(rows))
        assert B[0] == len(rows) ** 2 and min(B) >= 0


@pytest.mark.parametrize("rows", [parse_code(EVEN3).rows, SIMPLEX, HAMMING8])
def test_sharp_codes_attain_the_bound(rows):
    code = Code.from_rows(rows)
    for pot in (Potential.riesz(0.5), Potential.riesz(1), Potential.riesz(2),
                Potential.exponential(0.5), Potential.exponential(1)):
        e = energy(code, pot)
        assert abs(e - ulb(code.space, code.M, pot).value) <= 1e-12 * max(1, e)


@st.composite
def random_code(draw):
    q = draw(st.sampled_from([2, 3, 4]))
    n = draw(st.integers(2, {2: 8, 3: 5, 4: 4}[q]))
    size = q ** n
    M = draw(st.integers(2, min(size, 40)))
    idx = draw(st.lists(st.integers(0, size - 1), min_size=M, max_size=M, unique=True))
    rows = np.array([np.unravel_index(i, (q,) * n) for i in idx], dtype=np.int64)
    return Code(SpaceParams(n, q), rows)


@settings(max_examples=60, deadline=None)
@given(random_code())
def test_strength_three_ways(code):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        tau = strength(code)
    assert tau == strength_exhaustive(code) == oracles.oa_strength(code.rows, code.space.q)


@settings(max_examples=60, deadline=None)
@given(random_code())
def test_energy_matches_bruteforce(code):
    n = code.space.n
    for pot, ref in ((Potential.riesz(1), oracles.riesz(1, n)),
                     (Potential.exponential(0.7), oracles.exponential(0.7))):
        expected = oracles.energy_bruteforce(code.rows.tolist(), lambda t: float(ref(t)))
        assert energy(code, pot) == pytest.approx(expected, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(random_code())
def test_energy_above_bounds(code):
    if code.M <= code.space.q:
        return
    for pot in (Potential.riesz(1), Potential.exponential(1)):
        e = energy(code, pot)
        assert e >= ulb(code.space, code.M, pot).value - 1e-9 * e
        assert e >= pair_covering(code.space, code.M, pot).value - 1e-9 * e


def test_distance_distribution_counts():
    dist = distance_distribution(Code.from_rows(HAMMING8))
    assert dist.counts == (16, 0, 0, 0, 14 * 16, 0, 0, 0, 16)
    assert dist.to_dict()["A"] == [1, 0, 0, 0, 14, 0, 0, 0, 1]
