import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import cf_long_division, vertex_sets_match
from polygonflow.errors import DivisionPointOutOfRange
from polygonflow.harmonic import predict_vertex_vectors, predicted_trace, rotation_number
from polygonflow.periodicity import (
    continued_fraction,
    convergents,
    empirical_period,
    exact_period,
    exact_witness,
    near_periods,
    period_report,
    rational_approximations,
    rational_multiple_of_pi,
    set_distance,
    xi_for_phase,
)

# (n, p, q) with |p/q| < 1/n, the reachable phase range
CONSTRUCTED = [(4, 1, 5), (3, 1, 8), (5, 1, 8), (7, 1, 8), (6, -1, 7), (9, 2, 19)]


def test_cf_simple():
    assert continued_fraction(2.75) == [2, 1, 3]
    assert continued_fraction(0.5) == [0, 2]


def test_cf_pi():
    with mpmath.workdps(60):
        num, den = mpmath.mpf(mpmath.pi).man_exp[0], 2 ** (-mpmath.mpf(mpmath.pi).man_exp[1])
    want = cf_long_division(int(num), int(den), 5)
    got = continued_fraction(math.pi, max_terms=5)
    assert got == want == [3, 7, 15, 1, 292]
    cs = convergents(got)
    assert Fraction(22, 7) in cs and Fraction(355, 113) in cs


def test_cf_rejects_bad_input():
    with pytest.raises(ValueError):
        continued_fraction(float("nan"))
    with pytest.raises(ValueError):
        continued_fraction(1.5, max_terms=0)


@given(st.integers(0, 10_000), st.integers(1, 10_000))
def test_cf_of_rationals(p, q):
    got = convergents(continued_fraction(p / q))
    assert got[-1] == Fraction(p, q) or abs(float(got[-1]) - p / q) < 1e-12


@given(st.floats(0.0, 50.0), st.integers(1, 5000))
def test_dirichlet_bound(target, qmax):
    for r in rational_approximations(target, qmax):
        assert r.q <= qmax
        assert r.error < 1.0 / r.q ** 2 or r.error == 0.0


def test_rational_multiple_examples():
    r = rational_multiple_of_pi(math.pi / 6)
    assert (r.p, r.q) == (1, 6)
    r = rational_multiple_of_pi(0.0)
    assert (r.p, r.q) == (0, 1)
    r = rational_multiple_of_pi(-3 * math.pi / 7)
    assert (r.p, r.q) == (-3, 7)
    assert rational_multiple_of_pi(0.5, q_max=50, tol=1e-12) is None


def test_rational_multiple_guards():
    with pytest.raises(ValueError):
        rational_multiple_of_pi(1.0, q_max=0)
    with pytest.raises(ValueError):
        rational_multiple_of_pi(1.0, tol=0.0)


@pytest.mark.parametrize("n", [3, 6, 10, 20])
def test_midpoint_period_two(n):
    assert exact_period(n, 0.5) == 2
    for k in (0, 5, 31):
        u0, v0 = predict_vertex_vectors(0.3, 1.2, n, 0.5, k)
        u2, v2 = predict_vertex_vectors(0.3, 1.2, n, 0.5, k + 2)
        assert vertex_sets_match(u0, v0, u2, v2, 1e-9) is not None


def test_xi_for_phase_guards():
    with pytest.raises(DivisionPointOutOfRange):
        xi_for_phase(8, math.pi / 8)
    with pytest.raises(DivisionPointOutOfRange):
        xi_for_phase(3, math.pi / 3)
    assert xi_for_phase(10, 0.0) == 0.5


@pytest.mark.parametrize("n,p,q", CONSTRUCTED)
def test_constructed_exact_period(n, p, q):
    xi = xi_for_phase(n, p * math.pi / q)
    w = exact_witness(n, xi)
    assert (w.p, w.q) == (p, q)
    assert exact_period(n, xi) == 2 * q
    phase = rotation_number(n, xi).phase
    assert abs(math.remainder(2 * q * phase, 2 * math.pi)) < 1e-12


def test_no_exact_period_for_quarter():
    assert exact_period(20, 0.25, q_max=1000) is None


def test_near_periods_midpoint():
    near = near_periods(12, 0.5)
    assert [(c.period, c.deviation) for c in near] == [(2, 0.0)]


def test_near_periods_n20_quarter():
    near = near_periods(20, 0.25, q_max=1000)
    assert len(near) >= 3
    phi = abs(rotation_number(20, 0.25).phase)
    assert 39.7 < math.pi / phi < 39.8
    devs = [c.deviation for c in near]
    assert all(b < a for a, b in zip(devs, devs[1:]))
    for c in near:
        assert abs(phi / math.pi - c.p / c.q) < 1 / c.q ** 2


def test_empirical_midpoint():
    emp = empirical_period(predicted_trace(0.3, 1.2, 10, 0.5, 12))
    assert emp.period == 2


@pytest.mark.parametrize("n,p,q", CONSTRUCTED)
def test_empirical_period_and_offset(n, p, q):
    xi = xi_for_phase(n, p * math.pi / q)
    tr = predicted_trace(0.3, 1.2, n, xi, 4 * q + 4)
    emp = empirical_period(tr, tol=1e-8)
    # vertex i moves by k (pi/n + arg z), so the set first recurs at 2q / gcd(q + p n, 2q)
    assert emp.period == 2 * q // math.gcd(q + p * n, 2 * q)
    d, s = set_distance(tr, 1, 1 + 2 * q)
    assert d < 1e-9 and s == q % n
    ref = vertex_sets_match(tr.xs[1], tr.ys[1], tr.xs[1 + 2 * q], tr.ys[1 + 2 * q], 1e-9)
    assert ref == q % n
    if emp.period == 2 * q:
        assert emp.offset == q % n


def test_empirical_absent_for_generic_phase():
    assert empirical_period(predicted_trace(0.3, 1.2, 10, 0.37, 30), tol=1e-10) is None


def test_empirical_needs_snapshots():
    with pytest.raises(ValueError):
        empirical_period(predicted_trace(0.3, 1.2, 10, 0.37, 1))


@pytest.mark.parametrize("n,xi", [(20, 0.25), (10, 0.37), (7, 0.61)] +
                         [(n, xi_for_phase(n, p * math.pi / q)) for n, p, q in CONSTRUCTED])
def test_exact_period_iff_sets_recur(n, xi):
    per = exact_period(n, xi)
    phi = abs(rotation_number(n, xi).phase)
    candidates = [per] if per else [c.period for c in near_periods(n, xi, 200) if c.deviation > 0]
    for ell in candidates:
        u0, v0 = predict_vertex_vectors(0.3, 1.2, n, xi, 3)
        u1, v1 = predict_vertex_vectors(0.3, 1.2, n, xi, 3 + ell)
        found = vertex_sets_match(u0, v0, u1, v1, 1e-9)
        assert (found is not None) is (per is not None), (ell, phi)


def test_report_dict():
    rep = period_report(10, 0.5, 100, predicted_trace(0.3, 1.2, 10, 0.5, 8)).to_dict()
    assert rep["exact"] == {"period": 2, "p": 0, "q": 1}
    assert rep["empirical"]["period"] == 2
    assert rep["near"][0]["period"] == 2
    rep = period_report(20, 0.25, 1000).to_dict()
    assert rep["exact"] is None and rep["empirical"] is None
