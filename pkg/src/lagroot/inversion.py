"""Local inverse of a polynomial as an explicit power series.

Around a non-critical point ``a`` with ``b = f(a)`` the inverse ``g`` of ``f``
is a power series in ``w - b``.  Its coefficients depend only on the Taylor
coefficients of ``f`` at ``a``.  This module evaluates them exactly, sums
truncations of the series, and provides the certified constants that bound
the series tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

import mpmath

from .errors import PreconditionError
from .exact import (
    ZERO,
    GaussianRational,
    Scalar,
    ceil_log2,
    gauss_pow,
    iroot,
    round_dyadic,
    sqrt_lower,
    sqrt_upper,
)
from .poly import Poly, taylor_shift

G = GaussianRational

CONSTANT_BITS = 20  # binary precision of mu, nu and lambda_half
XI_BITS = 32  # grid of the unit-circle samples
PI_LOWER = Fraction(333, 106)
PI_UPPER = Fraction(355, 113)


@dataclass(frozen=True)
class InversionConstants:
    """Rational lower bounds on the constants controlling the inverse series.

    ``mu`` bounds ``2**(1/(d-1)) - 1``, ``nu`` bounds ``(2(d-1)mu - 1)/d`` and
    ``lambda_half`` bounds ``(1 + d*nu/2)**(1/d) - 1``.  ``A`` and ``p`` set
    the ring growth factor and the number of spokes of the sampling grid;
    ``xi`` holds ``p`` dyadic points close to the ``p``-th roots of unity.
    """

    d: int
    mu: Fraction
    nu: Fraction
    lambda_half: Fraction
    A: Fraction
    p: int
    xi: tuple[GaussianRational, ...]


def _largest_below(pred, bits: int) -> Fraction:
    """Largest ``m / 2**bits`` in ``[0, 1]`` with ``pred`` true, for monotone ``pred``."""
    scale = 1 << bits
    lo, hi = 0, scale
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if pred(Fraction(mid, scale)):
            lo = mid
        else:
            hi = mid - 1
    return Fraction(lo, scale)


def _unit_circle_point(q: int, p: int) -> GaussianRational:
    """Dyadic approximation of ``exp(2 pi i q / p)`` with modulus at most 1."""
    with mpmath.workprec(96):
        angle = 2 * mpmath.pi * q / p
        c, s = mpmath.cos(angle), mpmath.sin(angle)
        scale = 1 << XI_BITS
        x = int(mpmath.nint(c * scale))
        y = int(mpmath.nint(s * scale))
    # pull inside the unit disk if rounding pushed the point out
    while x * x + y * y > scale * scale:
        if abs(x) >= abs(y):
            x -= 1 if x > 0 else -1
        else:
            y -= 1 if y > 0 else -1
    return G._raw(x, y, scale)


@lru_cache(maxsize=None)
def make_constants(d: int) -> InversionConstants:
    if d < 2:
        raise PreconditionError("inversion constants need degree >= 2")
    bits = CONSTANT_BITS
    if d == 2:
        mu = Fraction(1)
    else:
        k = bits + 2
        # floor of 2**(1/(d-1)) at k bits, minus one
        mu = Fraction(iroot(2 << (k * (d - 1)), d - 1), 1 << k) - 1
    assert (1 + mu) ** (d - 1) <= 2
    # 2x - ((1+x)**d - 1)/d increases on [0, mu], so its value at a lower bound
    # of mu is a lower bound for nu
    nu_exact = 2 * mu - ((1 + mu) ** d - 1) / d
    nu = _largest_below(lambda x: x <= nu_exact, bits)
    target = 1 + d * nu / 2
    lam = _largest_below(lambda x: (1 + x) ** d <= target, bits)
    A = 1 + lam / 5
    p = math.ceil(5 * PI_UPPER / lam)
    xi = tuple(_unit_circle_point(q, p) for q in range(p))
    return InversionConstants(d=d, mu=mu, nu=nu, lambda_half=lam, A=A, p=p, xi=xi)


@dataclass(frozen=True)
class SeriesContext:
    """Expansion data of ``f`` around ``a``: ``b = f(a)`` and the Taylor coefficients."""

    f: Poly
    a: GaussianRational
    b: GaussianRational
    shifted: Poly

    @property
    def degree(self) -> int:
        return self.f.degree

    @property
    def derivative_at_center(self) -> GaussianRational:
        return self.shifted.coeff(1)


def make_context(f: Poly, a: Scalar) -> SeriesContext:
    a = G.coerce(a)
    shifted = taylor_shift(f, a)
    return SeriesContext(f=f, a=a, b=shifted.coeff(0), shifted=shifted)


def _check_context(ctx: SeriesContext) -> None:
    if ctx.degree < 2:
        raise PreconditionError("the inverse series needs degree >= 2")
    if ctx.derivative_at_center.is_zero():
        raise PreconditionError("series center is a critical point (f'(a) = 0)")


def _tuples(d: int, budget: int, exact: bool) -> Iterator[tuple[int, ...]]:
    """Tuples ``(m_2..m_d)`` with weight ``sum (h-1) m_h`` at most (or exactly) ``budget``."""

    def rec(h: int, left: int) -> Iterator[tuple[int, ...]]:
        if h > d:
            if not exact or left == 0:
                yield ()
            return
        for m in range(left // (h - 1) + 1):
            for rest in rec(h + 1, left - (h - 1) * m):
                yield (m,) + rest

    if budget < 0:
        return iter(())
    return rec(2, budget)


def enumerate_indices(d: int, N: int) -> Iterator[tuple[int, ...]]:
    """All ``(m_2, ..., m_d)`` with ``sum (h-1) m_h < N``, in lexicographic order."""
    if d < 2 or N < 1:
        raise PreconditionError("enumerate_indices needs d >= 2 and N >= 1")
    return _tuples(d, N - 1, exact=False)


def _weights(m: tuple[int, ...]) -> tuple[int, int]:
    """``(n, sum j m_j)`` for an index tuple, where ``n = 1 + sum (j-1) m_j``."""
    n = 1 + sum((h - 1) * mh for h, mh in enumerate(m, start=2))
    return n, n - 1 + sum(m)


def _multinomial(m: tuple[int, ...]) -> Fraction:
    n, s = _weights(m)
    den = math.factorial(n)
    for mh in m:
        den *= math.factorial(mh)
    return Fraction(math.factorial(s), den)


def _ratios(ctx: SeriesContext) -> list[GaussianRational]:
    """``P_j = -f~_j / f'(a)**j`` for ``j = 2..d``."""
    f1 = ctx.derivative_at_center
    inv = f1.inverse()
    out = []
    power = inv
    for j in range(2, ctx.degree + 1):
        power = power * inv
        out.append(-ctx.shifted.coeff(j) * power)
    return out


def series_coefficient(ctx: SeriesContext, n: int) -> GaussianRational:
    """Exact coefficient of ``(w - b)**n`` in the local inverse; ``n = 0`` gives ``a``."""
    if n < 0:
        raise PreconditionError("series index must be nonnegative")
    if n == 0:
        return ctx.a
    _check_context(ctx)
    P = _ratios(ctx)
    total = ZERO
    for m in _tuples(ctx.degree, n - 1, exact=True):
        term = G.coerce(_multinomial(m))
        for Pj, mj in zip(P, m):
            if mj:
                term = term * gauss_pow(Pj, mj)
        total = total + term
    return total / ctx.derivative_at_center


def partial_sum(ctx: SeriesContext, w: Scalar, N: int) -> GaussianRational:
    """``a + sum_{n=1..N} c_n (w - b)**n`` evaluated as one sum over index tuples.

    With ``W = w - b`` every tuple contributes ``K(m) prod (P_j W**(j-1))**m_j``,
    and the whole sum is scaled by ``W / f'(a)`` at the end.
    """
    if N < 1:
        raise PreconditionError("partial_sum needs N >= 1")
    _check_context(ctx)
    W = G.coerce(w) - ctx.b
    if W.is_zero():
        return ctx.a
    return ctx.a + _scaled_sum(ctx, W, N)


def _gmul(u: tuple[int, int], v: tuple[int, int]) -> tuple[int, int]:
    return u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0]


def _scaled_sum(ctx: SeriesContext, W: GaussianRational, N: int) -> GaussianRational:
    """``sum_m K(m) prod Q_j**m_j * W / f'(a)`` over one common denominator.

    Write the Taylor coefficients as Gaussian integers ``u_j / e``, put
    ``W = omega / delta`` and ``nrm = |u_1|**2``.  Then
    ``Q_j = V_j / (nrm * T**(j-1))`` with Gaussian integers ``V_j`` and
    ``T = nrm * delta``.  Every term becomes a Gaussian integer once the sum is
    scaled by ``N! * nrm**(N-1) * T**(N-1)``, so the loop never touches
    fractions and a single reduction happens at the end.
    """
    d = ctx.degree
    coeffs = [ctx.shifted.coeff(j) for j in range(d + 1)]
    e = 1
    for c in coeffs[1:]:
        e = math.lcm(e, c.parts[2])
    u = [(c.parts[0] * (e // c.parts[2]), c.parts[1] * (e // c.parts[2])) for c in coeffs]
    u1c = (u[1][0], -u[1][1])
    nrm = u[1][0] ** 2 + u[1][1] ** 2
    wx, wy, delta = W.parts
    omega = (wx, wy)
    T = nrm * delta
    V = []
    conj_pow = u1c
    omega_pow = (1, 0)
    e_pow = 1
    for j in range(2, d + 1):
        conj_pow = _gmul(conj_pow, u1c)
        omega_pow = _gmul(omega_pow, omega)
        e_pow *= e
        vj = _gmul(_gmul(u[j], conj_pow), omega_pow)
        V.append((-vj[0] * e_pow, -vj[1] * e_pow))
    fact = [1] * (2 * N + 1)
    for i in range(1, len(fact)):
        fact[i] = fact[i - 1] * i
    nrm_pow = [1] * N
    T_pow = [1] * N
    for i in range(1, N):
        nrm_pow[i] = nrm_pow[i - 1] * nrm
        T_pow[i] = T_pow[i - 1] * T
    powers = [[(1, 0)] for _ in V]

    def vpow(idx: int, k: int) -> tuple[int, int]:
        table = powers[idx]
        while len(table) <= k:
            table.append(_gmul(table[-1], V[idx]))
        return table[k]

    acc_x = acc_y = 0
    top = N - 1

    # depth-first over index tuples so partial products are shared
    def rec(h: int, left: int, prod, msum: int, mfact: int):
        nonlocal acc_x, acc_y
        if h > d:
            n = N - left  # 1 + sum (j-1) m_j
            s = n - 1 + msum
            weight = (fact[s] // mfact) * (fact[N] // fact[n])
            weight *= nrm_pow[top - msum] * T_pow[N - n]
            acc_x += prod[0] * weight
            acc_y += prod[1] * weight
            return
        for mh in range(left // (h - 1) + 1):
            term = prod if mh == 0 else _gmul(prod, vpow(h - 2, mh))
            rec(h + 1, left - (h - 1) * mh, term, msum + mh, mfact * fact[mh])

    rec(2, N - 1, (1, 0), 0, 1)
    # multiply by W / f'(a) = omega * e * conj(u_1) / (delta * nrm)
    fx, fy = _gmul(_gmul((acc_x, acc_y), omega), u1c)
    den = delta * nrm * fact[N] * nrm_pow[top] * T_pow[top]
    return G._raw(fx * e, fy * e, den)


def compose_truncated(
    outer: Sequence[Scalar], inner: Sequence[Scalar], N: int
) -> list[GaussianRational]:
    """Coefficients ``0..N`` of ``outer(inner(z))``; ``inner`` must vanish at 0."""
    if N < 0:
        raise PreconditionError("truncation order must be nonnegative")
    inner_c = [G.coerce(c) for c in inner][: N + 1]
    if inner_c and not inner_c[0].is_zero():
        raise PreconditionError("inner series must have zero constant term")
    outer_c = [G.coerce(c) for c in outer][: N + 1]
    result = [ZERO] * (N + 1)
    for c in reversed(outer_c):
        # result = result * inner + c, truncated
        prod = [ZERO] * (N + 1)
        for i, ri in enumerate(result):
            if ri.is_zero():
                continue
            for j, ij in enumerate(inner_c):
                if i + j > N:
                    break
                if not ij.is_zero():
                    prod[i + j] = prod[i + j] + ri * ij
        prod[0] = prod[0] + c
        result = prod
    return result


def coefficient_tail_bound(ctx: SeriesContext, R: Fraction, n: int) -> Fraction:
    """Upper bound ``mu R / (n rho0**n)`` on ``|c_n|`` with ``rho0 = nu R |f'(a)|``.

    ``R`` must be a lower bound on the distance from ``a`` to the critical
    points of ``f``.  ``|f'(a)|`` enters through a rational lower bound.
    """
    R = Fraction(R)
    if R <= 0 or n < 1:
        raise PreconditionError("tail bound needs R > 0 and n >= 1")
    _check_context(ctx)
    consts = make_constants(ctx.degree)
    fp_lo = sqrt_lower(ctx.derivative_at_center.norm_sq())
    rho0 = consts.nu * R * fp_lo
    return consts.mu * R / (n * rho0 ** n)


# -- certified inversion step -------------------------------------------------

@dataclass(frozen=True)
class StepResult:
    """Outcome of one certified inversion step.

    ``f`` is injective on an open disk holding ``B(ball_center, ball_radius)``
    and the root, which lies within ``radius`` of ``z``.
    """

    z: GaussianRational
    radius: Fraction
    order: int
    ball_center: GaussianRational
    ball_radius: Fraction


def ratio_squared(ctx: SeriesContext, R_sq: Fraction) -> Fraction:
    """``(|b| / (nu R |f'(a)|))**2`` as an exact rational."""
    consts = make_constants(ctx.degree)
    return ctx.b.norm_sq() / (consts.nu ** 2 * R_sq * ctx.derivative_at_center.norm_sq())


def inverse_step(
    f: Poly,
    a: Scalar,
    R: Fraction,
    target: Fraction,
    max_order: int = 8,
    order: int | None = None,
) -> StepResult | None:
    """Approximate the root of ``f`` attached to ``a`` by a truncated inverse series.

    ``R`` is a lower bound on the distance from ``a`` to the critical points.
    Returns ``None`` when ``|f(a)|`` is too large for the series at 0 to
    converge with the available bound.  Otherwise the order is the smallest
    one (up to ``max_order``) whose tail is below ``target / 2``, unless
    ``order`` fixes it.
    """
    ctx = make_context(f, a)
    _check_context(ctx)
    consts = make_constants(ctx.degree)
    R = Fraction(R)
    ball = consts.mu * R
    if ctx.b.is_zero():
        return StepResult(ctx.a, Fraction(0), 0, ctx.a, ball)
    r = sqrt_upper(ratio_squared(ctx, R * R))
    if r >= 1:
        return None
    scale = ball / (1 - r)

    def tail(N: int) -> Fraction:
        return scale * r ** (N + 1) / (N + 1)

    if order is None:
        N = 1
        while N < max_order and tail(N) > target / 2:
            N += 1
    else:
        N = order
    err = tail(N)
    z = partial_sum(ctx, 0, N)
    # round to a grid a few bits finer than the accuracy we can certify
    bits = max(2, 2 - ceil_log2(max(err, target)))
    z_round = round_dyadic(z, bits)
    if z_round != z:
        err += Fraction(1, 1 << bits)
    return StepResult(z_round, err, N, ctx.a, ball)


def root_disk(
    d: int, b: GaussianRational, fpa: GaussianRational, R_sq: Fraction
) -> tuple[Fraction, Fraction] | None:
    """Locate the root attached to a center ``a`` with ``b = f(a)``, ``fpa = f'(a)``.

    ``R_sq`` is the square of a number ``R`` with ``dist(a, critical points) >= R``.
    Returns ``(radius, ball)``: the root lies within ``radius`` of ``a`` and is
    the only root in ``B(a, ball)``.  ``None`` if the series may not converge at 0.
    """
    consts = make_constants(d)
    R_lo = sqrt_lower(R_sq)
    if b.is_zero():
        return Fraction(0), consts.mu * R_lo
    if fpa.is_zero():
        return None
    r = sqrt_upper(b.norm_sq() / (consts.nu ** 2 * R_sq * fpa.norm_sq()))
    if r >= 1:
        return None
    return consts.mu * sqrt_upper(R_sq) * r / (1 - r), consts.mu * R_lo
