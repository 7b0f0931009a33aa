import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, optimize, special

from conftest import EULER_GAMMA
from cyclecap.asym import (
    TruncationReason,
    ei_asymptotic,
    eval_I,
    eval_T,
    expand_m,
    expand_v,
    solve_xi,
    xi_two_term,
)
from cyclecap.errors import DomainError
from cyclecap.exact import Constraint
from cyclecap.saddle import moments


def xi_oracle(u):
    return optimize.brentq(lambda s: math.expm1(s) - u * s, math.log(u), 2 * math.log(u) + 1, xtol=1e-15)


def I_quad(z):
    return integrate.quad(lambda t: math.expm1(t) / t if t else 1.0, 0, z, epsabs=0, epsrel=1e-13, limit=200)[0]


def T_quad(K, z):
    def f(t):
        if t == 0:
            return 0.0
        s = t / K
        return math.expm1(t) / t * (s / -math.expm1(-s) - 1)

    return integrate.quad(f, 0, z, epsabs=0, epsrel=1e-12, limit=400)[0]


def test_xi_example():
    xi = solve_xi(10).xi
    assert xi == pytest.approx(3.6150, abs=1e-4)
    assert xi == pytest.approx(xi_oracle(10), rel=1e-13)


def test_xi_at_one():
    assert solve_xi(1).xi == 0.0
    with pytest.raises(DomainError):
        solve_xi(0.5)


def test_xi_invariants_random():
    rng = np.random.default_rng(7)
    us = np.exp(rng.uniform(math.log(1.001), math.log(1e12), 10_000))
    for u in us:
        xi = solve_xi(float(u)).xi
        assert math.log(u) < xi <= 2 * math.log(u)
        assert abs(math.expm1(xi) / (u * xi) - 1) <= 1e-12


def test_xi_oracle_agreement():
    for u in (1.5, 3.0, 1e2, 1e5, 1e9):
        assert solve_xi(u).xi == pytest.approx(xi_oracle(u), rel=1e-13)


def test_I_derivative_at_xi_is_u():
    # I'(z) = (e^z - 1)/z, so I'(xi(u)) = u
    for u in (5.0, 50.0, 500.0):
        xi = solve_xi(u).xi
        h = 1e-4
        d = (-eval_I(xi + 2 * h) + 8 * eval_I(xi + h) - 8 * eval_I(xi - h) + eval_I(xi - 2 * h)) / (12 * h)
        assert abs(d / u - 1) < 1e-9


@pytest.mark.parametrize("z", [0.0, 1e-8, 0.5, 1.0, 5.0, 30.0, 100.0])
def test_I_against_quadrature(z):
    assert eval_I(z) == pytest.approx(I_quad(z), rel=1e-12, abs=1e-300)


def test_I_example():
    assert eval_I(1.0) == pytest.approx(1.3179021514544038, rel=1e-15)
    # I(z) = Ei(z) - gamma - log z
    assert eval_I(20.0) == pytest.approx(special.expi(20.0) - EULER_GAMMA - math.log(20.0), rel=1e-13)


def test_I_domain():
    with pytest.raises(DomainError):
        eval_I(-1.0)
    with pytest.raises(OverflowError):
        eval_I(701.0)


def test_xi_two_term_error_shrinks():
    errs = []
    for u in (1e2, 1e4, 1e6):
        xi = solve_xi(u).xi
        errs.append(abs(xi_two_term(u) - xi) / xi)
    assert errs == sorted(errs, reverse=True)
    assert errs[-1] < 0.02


@pytest.mark.parametrize("K, z", [(10, 5.0), (3, 9.0), (100, 50.0), (1, 0.5)])
def test_T_against_quadrature(K, z):
    assert eval_T(K, z) == pytest.approx(T_quad(K, z), rel=1e-9)


def test_T_example():
    assert eval_T(10, 5) == pytest.approx(7.604287806822715, rel=1e-10)


def test_T_bound_on_grid():
    for K in np.geomspace(5, 500, 8):
        for z in np.linspace(0, math.pi * K, 8):
            scaled = eval_T(float(K), float(z), scaled=True)
            assert 0 <= scaled <= 1.0001 / K * (1 + 1e-12)


def test_T_domain():
    with pytest.raises(DomainError):
        eval_T(1, 4.0)
    with pytest.raises(DomainError):
        eval_T(0, 0.0)


@pytest.mark.parametrize("x, order", [(20.0, 3), (30.0, 5), (50.0, 10)])
def test_ei_asymptotic_tracks_ei(x, order):
    exact = special.expi(x)
    approx = ei_asymptotic(x, order)
    # remainder is at most on the order of the first omitted term
    bound = math.exp(x) / x * math.factorial(order + 1) / x ** (order + 1)
    assert abs(approx - exact) <= 2 * bound


def test_ei_asymptotic_example():
    x = 20.0
    direct = math.exp(x) / x * (1 + 1 / x + 2 / x**2 + 6 / x**3)
    assert ei_asymptotic(x, 3) == pytest.approx(direct, rel=1e-15)


def test_expansion_terms_structure():
    c = Constraint(10**6, 1000)
    em = expand_m(c, max_order=4)
    xi = em.xi
    assert em.first_index == 0 and em.truncation_reason is TruncationReason.REQUESTED_ORDER
    for k, term in enumerate(em.terms):
        assert term == pytest.approx(1000 * math.factorial(k) / xi**k, rel=1e-14)
    ev = expand_v(c, max_order=5)
    assert ev.first_index == 2 and len(ev.terms) == 4
    for i, term in enumerate(ev.terms):
        k = i + 2
        assert term == pytest.approx(1000 * (math.factorial(k) - 1) / xi**k, rel=1e-13)


def test_optimal_truncation_stops_at_smallest_term():
    for u in (5, 30, 1000, 10**5):
        c = Constraint(u * 10, 10)
        em = expand_m(c)
        assert em.truncation_reason is TruncationReason.OPTIMAL_STOP
        k_next = em.truncation_index + 1
        nxt = em.u * math.factorial(k_next) / em.xi**k_next
        assert abs(nxt) >= abs(em.terms[-1])
        assert all(abs(b) < abs(a) for a, b in zip(em.terms, em.terms[1:]))


def test_optimal_index_grows_with_u():
    idx = [expand_m(Constraint(u * 10, 10)).truncation_index for u in (3, 10, 100, 10**4, 10**6)]
    assert idx == sorted(idx)


def test_expansion_domain():
    with pytest.raises(DomainError):
        expand_m(Constraint(20, 10))
    with pytest.raises(DomainError):
        expand_v(Constraint(10**4, 10), max_order=1)


def test_expansion_m_matches_saddle():
    c = Constraint(10**6, 1000)
    mp = moments(c)
    assert abs(expand_m(c).value - mp.m) / mp.m < 0.05


def test_expansion_v_matches_saddle():
    # Expected to fail: at n/alpha = 1000 the truncated v series sits about
    # 12% below the saddle-point variance.
    c = Constraint(10**6, 1000)
    mp = moments(c)
    assert abs(expand_v(c).value - mp.v) / mp.v < 0.10


@given(st.floats(1.01, 1e8))
def test_xi_property(u):
    xi = solve_xi(u).xi
    assert math.log(u) < xi <= 2 * math.log(u) + 1e-15


@pytest.mark.parametrize("u", [2.0, 10.0, 1e3, 1e6])
def test_I_prime_at_xi(u):
    xi = solve_xi(u).xi
    if xi + 1e-3 > 700:
        pytest.skip("beyond double range")
    h = 1e-4 * max(1.0, xi)
    d = (-eval_I(xi + 2 * h) + 8 * eval_I(xi + h) - 8 * eval_I(xi - h) + eval_I(xi - 2 * h)) / (12 * h)
    assert abs(d / u - 1) < 1e-9


def test_ei_agreement_improves_with_x():
    errs = []
    for x in (10.0, 20.0, 40.0, 80.0):
        ei = eval_I(x) + math.log(x) + EULER_GAMMA
        errs.append(abs(ei_asymptotic(x, 3) / ei - 1))
    assert errs == sorted(errs, reverse=True)


def test_ei_order_zero():
    assert ei_asymptotic(7.0, 0) == pytest.approx(math.exp(7.0) / 7.0, rel=1e-15)


@pytest.mark.parametrize("n", [10**4, 10**5, 10**6, 10**7])
def test_xi_paths_agree(n):
    from cyclecap.saddle import saddle_log

    a = math.ceil(math.sqrt(n))
    gap = abs(a * saddle_log(n, a, 1.0) - solve_xi(n / a).xi)
    assert gap <= 10 * math.log(n / a + 1) / a


@pytest.mark.parametrize("N", [1, 2, 3])
def test_scaled_remainder_decreases(N):
    rem = []
    for n in (10**4, 10**6, 10**8):
        a = math.ceil(n**0.6)
        m = moments(Constraint(n, a)).m
        xi = solve_xi(n / a).xi
        partial = math.fsum(math.factorial(k) / xi**k for k in range(N + 1))
        rem.append(abs(m * a / n - partial) * xi**N)
    assert rem[0] > rem[1] > rem[2]
