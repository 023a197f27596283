import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from lagroot.errors import PreconditionError
from lagroot.exact import GaussianRational as G, abs_lower, sqrt_lower
from lagroot.inversion import (
    PI_LOWER,
    PI_UPPER,
    coefficient_tail_bound,
    compose_truncated,
    enumerate_indices,
    inverse_step,
    make_constants,
    make_context,
    partial_sum,
    series_coefficient,
)
from lagroot.oracle import reference_roots
from lagroot.poly import Poly, derivative, parse_poly
from strategies import gaussians, polys

X = Poly.x()


def binomial(alpha, n):
    out = Fraction(1)
    for k in range(n):
        out *= (alpha - k) / Fraction(k + 1)
    return out


def mpf(q):
    return mpmath.mpf(q.numerator) / q.denominator


def true_constants(d):
    with mpmath.workprec(80):
        mu = mpmath.root(2, d - 1) - 1
        nu = (2 * (d - 1) * mu - 1) / d
        lam = mpmath.root(1 + d * nu / 2, d) - 1
    return mu, nu, lam


def test_pi_bounds_bracket_pi():
    assert PI_LOWER < math.pi < PI_UPPER
    assert PI_UPPER - PI_LOWER < Fraction(1, 10 ** 4)


def test_constants_degree_two():
    c = make_constants(2)
    assert c.mu == 1
    assert c.nu == Fraction(1, 2)
    # lambda_half solves (1 + x)**2 = 1 + 2 * (1/2) / 2 = 3/2
    assert (1 + c.lambda_half) ** 2 <= Fraction(3, 2)
    assert (1 + c.lambda_half + Fraction(1, 1 << 19)) ** 2 > Fraction(3, 2)


@pytest.mark.parametrize("d", range(2, 13))
def test_constants_invariants(d):
    c = make_constants(d)
    assert 0 < c.mu and (1 + c.mu) ** (d - 1) <= 2
    assert 0 < c.nu <= 2 * c.mu - ((1 + c.mu) ** d - 1) / d
    assert 0 < c.lambda_half and (1 + c.lambda_half) ** d <= 1 + d * c.nu / 2
    assert c.A == 1 + c.lambda_half / 5
    assert c.p >= 5 * PI_UPPER / c.lambda_half
    assert len(c.xi) == c.p
    mu, nu, lam = true_constants(d)
    assert mpf(c.mu) <= mu and mpf(c.nu) <= nu and mpf(c.lambda_half) <= lam
    # within one percent from below
    assert float(c.mu) >= 0.99 * float(mu)
    assert float(c.nu) >= 0.99 * float(nu)
    assert float(c.lambda_half) >= 0.99 * float(lam)


@pytest.mark.parametrize("d", range(2, 13))
def test_constants_meet_closed_form_lower_bounds(d):
    c = make_constants(d)
    assert float(c.mu) >= math.log(2) / (d - 1)
    assert float(c.nu) >= (math.log(4) - 1) / d
    assert float(c.lambda_half) >= 0.5 * math.log(math.log(4)) / d


@pytest.mark.parametrize("d", [2, 3, 5, 8])
def test_unit_circle_samples(d):
    c = make_constants(d)
    tol = float(c.lambda_half) / 50
    for q, xi in enumerate(c.xi):
        assert xi.norm_sq() <= 1
        exact = complex(mpmath.expj(2 * mpmath.pi * q / c.p))
        assert abs(complex(xi) - exact) <= tol


def test_constants_reject_linear():
    with pytest.raises(PreconditionError):
        make_constants(1)


def test_enumerate_examples():
    assert list(enumerate_indices(2, 3)) == [(0,), (1,), (2,)]
    assert list(enumerate_indices(3, 2)) == [(0, 0), (1, 0)]
    assert list(enumerate_indices(4, 1)) == [(0, 0, 0)]


@given(st.integers(2, 5), st.integers(1, 7))
def test_enumerate_matches_brute_force(d, N):
    import itertools

    want = {
        m
        for m in itertools.product(range(N), repeat=d - 1)
        if sum((h - 1) * mh for h, mh in enumerate(m, start=2)) < N
    }
    got = list(enumerate_indices(d, N))
    assert len(got) == len(set(got))
    assert set(got) == want


def test_square_root_series():
    ctx = make_context(X ** 2, 1)
    got = [series_coefficient(ctx, n) for n in range(1, 4)]
    assert got == [Fraction(1, 2), Fraction(-1, 8), Fraction(1, 16)]
    assert series_coefficient(ctx, 0) == 1


@pytest.mark.parametrize("d", range(2, 7))
def test_binomial_series(d):
    ctx = make_context(X ** d, 1)
    for n in range(1, 21):
        assert series_coefficient(ctx, n) == binomial(Fraction(1, d), n)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_power_series_has_unit_radius(d):
    # root test on the binomial coefficients: |c_n|**(1/n) tends to 1
    ctx = make_context(X ** d, 1)
    c = abs(float(series_coefficient(ctx, 200).re))
    assert 0.95 < c ** (1 / 200) <= 1.0


def test_critical_center_rejected():
    ctx = make_context(X ** 2, 0)
    with pytest.raises(PreconditionError):
        series_coefficient(ctx, 1)
    with pytest.raises(PreconditionError):
        partial_sum(ctx, 1, 3)


def test_partial_sum_center():
    ctx = make_context(parse_poly("x^3 + x + 1"), G(1, 1))
    assert partial_sum(ctx, ctx.b, 5) == ctx.a


def test_partial_sum_converges_to_square_root():
    ctx = make_context(X ** 2, 1)
    w = Fraction(3, 4)
    target = mpmath.sqrt(mpmath.mpf(3) / 4)
    errs = [abs(float(partial_sum(ctx, w, N).re) - float(target)) for N in (2, 8, 32)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-12


def test_compose_examples():
    assert compose_truncated([0, 0, 1], [0, 1, 1], 3) == [0, 0, 1, 2]
    assert compose_truncated([0, 1], [0, 3, 5, 7], 2) == [0, 3, 5]
    with pytest.raises(PreconditionError):
        compose_truncated([1, 1], [1, 1], 2)


def test_tail_bound_example():
    ctx = make_context(X ** 2, 1)
    assert coefficient_tail_bound(ctx, 1, 2) == Fraction(1, 2)
    assert abs(series_coefficient(ctx, 2).re) <= Fraction(1, 2)


def test_tail_bound_decreases_once_radius_exceeds_one():
    ctx = make_context(X ** 3 - 2, 2)
    R = Fraction(2)
    bounds = [coefficient_tail_bound(ctx, R, n) for n in range(1, 10)]
    assert all(b > 0 for b in bounds)
    assert all(x > y for x, y in zip(bounds, bounds[1:]))


@given(polys(min_degree=2, max_degree=5, bits=6), gaussians(6), st.integers(1, 6))
def test_partial_sum_telescopes(f, a, N):
    ctx = make_context(f, a)
    assume(not ctx.derivative_at_center.is_zero())
    w = G(Fraction(1, 3), Fraction(-1, 5))
    step = partial_sum(ctx, w, N + 1) - partial_sum(ctx, w, N)
    assert step == series_coefficient(ctx, N + 1) * (w - ctx.b) ** (N + 1)


@given(polys(min_degree=2, max_degree=5, bits=6), gaussians(6))
def test_inverse_series_is_two_sided(f, a):
    ctx = make_context(f, a)
    assume(not ctx.derivative_at_center.is_zero())
    N = 8
    series = [0] + [series_coefficient(ctx, n) for n in range(1, N + 1)]
    centered = [0] + list(ctx.shifted.coeffs[1:])
    # f(a + g(b + w) - a) - b and g(b + f(a + z) - b) - a are both the identity
    assert compose_truncated(centered, series, N) == [0, 1] + [0] * (N - 1)
    assert compose_truncated(series, centered, N) == [0, 1] + [0] * (N - 1)


def certified_distance(points, a):
    """Lower bound on the distance from ``a`` to a list of oracle roots."""
    return min(abs_lower(a - o.value) - o.certified_radius for o, _ in points)


@given(polys(min_degree=2, max_degree=4, bits=5), gaussians(4))
def test_coefficients_obey_tail_bound(f, a):
    ctx = make_context(f, a)
    assume(not ctx.derivative_at_center.is_zero())
    R = certified_distance(reference_roots(derivative(f), 40), a)
    assume(R > Fraction(1, 1000))
    for n in range(1, 9):
        bound = coefficient_tail_bound(ctx, R, n)
        assert series_coefficient(ctx, n).norm_sq() <= bound * bound


@given(polys(min_degree=1, max_degree=4, bits=5), gaussians(4), st.integers(0, 1000), st.integers(0, 63))
def test_values_move_boundedly_near_a(f, a, s, q):
    # no roots within R of a  =>  |f(z) - f(a)| < ((1+mu)**d - 1) |f(a)| on B(a, mu R)
    d = f.degree
    R = certified_distance(reference_roots(f, 40), a)
    assume(R > Fraction(1, 1000))
    mu = make_constants(max(d, 2)).mu
    xi = make_constants(12).xi[q * 15]
    z = a + xi * (mu * R * Fraction(s, 1001))
    fa = f(a)
    assert (f(z) - fa).norm_sq() < ((1 + mu) ** d - 1) ** 2 * fa.norm_sq()


def test_inverse_step_refines_square_root():
    f = parse_poly("x^2 - 2")
    step = inverse_step(f, Fraction(3, 2), Fraction(3, 2), Fraction(1, 1 << 60), max_order=400)
    assert step.radius <= Fraction(1, 1 << 60)
    err = abs(mpmath.mpf(step.z.re.numerator) / step.z.re.denominator - mpmath.sqrt(2))
    assert err <= mpmath.mpf(2) ** -60
    assert step.ball_radius == Fraction(3, 2)


def test_inverse_step_declines_far_center():
    f = parse_poly("x^2 - 2")
    assert inverse_step(f, Fraction(1, 10), sqrt_lower(Fraction(1, 100)), Fraction(1, 16)) is None
