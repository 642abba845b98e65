import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from hulb.bounds import interval, lev, max_tau, rao, solve_s, split_tau, tau_for
from hulb.errors import DomainError
from hulb.polyengine import SpaceParams, greatest_zero


def test_rao_examples():
    assert rao(SpaceParams(10, 2), 3) == 20
    assert rao(SpaceParams(10, 2), 4) == 56
    assert rao(SpaceParams(9, 2), 5) == 74
    assert rao(SpaceParams(9, 2), 6) == 130
    for n in (1, 4, 9):
        for q in (2, 3, 5):
            assert rao(SpaceParams(n, q), 1) == q


@given(st.integers(1, 70), st.integers(2, 5), st.data())
def test_rao_matches_counting(n, q, data):
    tau = data.draw(st.integers(1, 2 * n))
    value = rao(SpaceParams(n, q), tau)
    assert isinstance(value, int)
    assert value == oracles.rao_direct(n, q, tau)


def test_rao_range():
    with pytest.raises(DomainError):
        rao(SpaceParams(4, 2), 0)
    with pytest.raises(DomainError):
        rao(SpaceParams(4, 2), 9)


def test_tau_examples():
    assert tau_for(SpaceParams(10, 2), 40).tau == 3
    a = tau_for(SpaceParams(9, 2), 128)
    assert (a.tau, a.branch, a.k) == (5, "odd", 3)
    assert tau_for(SpaceParams(2, 2), 4).tau == 2


def test_tau_errors():
    with pytest.raises(DomainError, match="M must exceed q"):
        tau_for(SpaceParams(10, 2), 1)
    with pytest.raises(DomainError):
        tau_for(SpaceParams(10, 2), 2)
    with pytest.raises(DomainError):
        tau_for(SpaceParams(4, 2), 17)


@pytest.mark.parametrize("n,q", [(6, 2), (9, 2), (7, 3), (5, 4)])
def test_tau_is_step_function(n, q):
    space = SpaceParams(n, q)
    prev = None
    for M in range(q + 1, q ** n + 1):
        tau = tau_for(space, M).tau
        assert rao(space, tau) < M <= rao(space, tau + 1)
        if prev is not None and tau != prev:
            assert tau == prev + 1 and M - 1 == rao(space, tau)
        prev = tau


def test_split_tau():
    assert split_tau(5) == ("odd", 3)
    assert split_tau(4) == ("even", 2)


def test_lev_examples():
    assert lev(SpaceParams(3, 2), 1, -1 / 3) == pytest.approx(4)
    S10 = SpaceParams(10, 2)
    assert lev(S10, 3, greatest_zero(S10, 1, 0, 2)) == pytest.approx(rao(S10, 4), rel=1e-9)
    S9 = SpaceParams(9, 2)
    assert lev(S9, 4, greatest_zero(S9, 1, 1, 2)) == pytest.approx(rao(S9, 5), rel=1e-9)


def test_lev_outside_interval():
    S = SpaceParams(10, 2)
    lo, hi = interval(S, 3)
    with pytest.raises(DomainError):
        lev(S, 3, hi + 0.05)


@pytest.mark.parametrize("n,q", [(8, 2), (12, 2), (9, 3), (7, 4), (16, 2)])
def test_endpoint_identities(n, q):
    space = SpaceParams(n, q)
    for tau in range(1, min(6, max_tau(space)) + 1):
        branch, k = split_tau(tau)
        lo, hi = interval(space, tau)
        if branch == "odd":
            assert lev(space, tau, lo) == pytest.approx(rao(space, tau), rel=1e-9)
            assert lev(space, tau, hi) == pytest.approx(rao(space, tau + 1), rel=1e-9)
        else:
            assert lev(space, tau, lo) == pytest.approx(rao(space, tau), rel=1e-9)
            assert lev(space, tau, hi) == pytest.approx(rao(space, tau + 1), rel=1e-9)


@pytest.mark.parametrize("n,q", [(10, 2), (9, 3), (13, 2)])
def test_intervals_tile(n, q):
    space = SpaceParams(n, q)
    ends = [interval(space, tau) for tau in range(1, max_tau(space) + 1)]
    assert ends[0][0] == -1.0
    for (a, b), (c, d) in zip(ends, ends[1:]):
        assert a < b and b == pytest.approx(c, abs=1e-12)


@pytest.mark.parametrize("n,q,tau", [(10, 2, 3), (9, 2, 5), (9, 3, 4), (12, 2, 2)])
def test_lev_increasing(n, q, tau):
    space = SpaceParams(n, q)
    lo, hi = interval(space, tau)
    s = np.linspace(lo, hi, 60)[1:-1]
    vals = [lev(space, tau, x) for x in s]
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_solve_s_examples():
    tau, s = solve_s(SpaceParams(3, 2), 4)
    assert tau == 1 and s == pytest.approx(-1 / 3, abs=1e-12)
    S = SpaceParams(10, 2)
    tau, s = solve_s(S, 40)
    assert tau == 3
    assert s == pytest.approx(0.149858728, abs=1e-8)
    assert lev(S, 3, s) == pytest.approx(40, rel=1e-9)
    for k in (1, 2):
        tau, s = solve_s(S, rao(S, 2 * k))
        assert tau == 2 * k - 1
        assert s == pytest.approx(greatest_zero(S, 1, 0, k), abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 14), st.integers(2, 4), st.data())
def test_solve_s_residual(n, q, data):
    space = SpaceParams(n, q)
    M = data.draw(st.integers(q + 1, min(q ** n, 5000)))
    tau, s = solve_s(space, M)
    assert abs(lev(space, tau, s) - M) <= 1e-9 * M
