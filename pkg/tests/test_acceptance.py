"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line (printed immediately and again in the
terminal summary) before asserting, so a failing criterion is still reported.
"""

import itertools
import random
import time
from fractions import Fraction

import pytest

from acceptance_log import record
from lagroot.exact import abs_lower
from lagroot.inversion import (
    coefficient_tail_bound,
    compose_truncated,
    make_context,
    series_coefficient,
)
from lagroot.locator import filtered_candidates
from lagroot.oracle import reference_roots
from lagroot.poly import (
    Poly,
    cauchy_bounds,
    derivative,
    divides,
    divrem,
    is_square_free,
    poly_gcd,
    separation_bound,
    square_free_decompose,
)
from lagroot.rootfinder import algebraic_bit, digit_expansion, find_roots
from lagroot.sampling import (
    WorkloadConfig,
    random_gaussian,
    random_poly,
    random_repeated,
    random_square_free,
    workload,
)

X = Poly.x()
LADDER = (4, 8, 16, 32, 64, 128)


def in_box(entry, root, t):
    """The oracle root may lie in the cell ``[u, u+1) x [v, v+1) / 2**t`` (up to its radius)."""
    s = Fraction(1, 1 << t)
    r = root.certified_radius
    x, y = root.value.re, root.value.im
    return (
        entry.re_floor * s - r <= x < (entry.re_floor + 1) * s + r
        and entry.im_floor * s - r <= y < (entry.im_floor + 1) * s + r
    )


def matches_oracle(f, t):
    report = find_roots(f, t)
    oracle = reference_roots(f, t + 10)
    if len(report.roots) != len(oracle):
        return False
    if sum(e.multiplicity for e in report.roots) != f.degree:
        return False
    for perm in itertools.permutations(oracle):
        if all(
            e.multiplicity == m and in_box(e, o, t)
            for e, (o, m) in zip(report.roots, perm)
        ):
            return True
    return False


def within(z, root, r):
    gap = r - root.certified_radius
    return gap > 0 and (z - root.value).norm_sq() <= gap * gap


@pytest.mark.slow
def test_1_oracle_equivalence():
    cfg = WorkloadConfig()
    polys = workload(cfg)
    repeated = sum(not is_square_free(f) for f in polys)
    failures = []
    start = time.perf_counter()
    for i, f in enumerate(polys):
        for t in (8, 32, 128):
            if not matches_oracle(f, t):
                failures.append((i, t))
    elapsed = time.perf_counter() - start
    ok = not failures and len(polys) == 200 and repeated >= 50
    record(
        "1 oracle equivalence",
        ok,
        f"{len(polys)} polynomials ({repeated} with repeated roots) x t in (8, 32, 128), "
        f"{len(failures)} mismatches, {elapsed:.0f}s",
    )
    assert ok, failures[:10]


def binomial(alpha, n):
    out = Fraction(1)
    for k in range(n):
        out *= (alpha - k) / Fraction(k + 1)
    return out


def test_2_inversion_exactness():
    bad = []
    for d in range(2, 7):
        ctx = make_context(X ** d, 1)
        for n in range(1, 21):
            if series_coefficient(ctx, n) != binomial(Fraction(1, d), n):
                bad.append((d, n))
    record("2 inversion exactness", not bad, f"d in 2..6, n in 1..20, {len(bad)} mismatches")
    assert not bad


def test_3_two_sided_identity():
    rng = random.Random(3)
    N = 8
    identity = [0, 1] + [0] * (N - 1)
    bad = checked = 0
    while checked < 50:
        f = random_poly(rng, rng.randint(2, 5), 8)
        ctx = make_context(f, random_gaussian(rng, 6))
        if ctx.derivative_at_center.is_zero():
            continue
        series = [0] + [series_coefficient(ctx, n) for n in range(1, N + 1)]
        centered = [0] + list(ctx.shifted.coeffs[1:])
        if compose_truncated(centered, series, N) != identity:
            bad += 1
        elif compose_truncated(series, centered, N) != identity:
            bad += 1
        checked += 1
    record("3 two-sided inverse identity", bad == 0, f"{checked} random (f, a), {bad} failures")
    assert bad == 0


def test_4_coefficient_bound():
    rng = random.Random(4)
    bad = checked = 0
    while checked < 50:
        f = random_poly(rng, rng.randint(2, 5), 8)
        a = random_gaussian(rng, 6)
        ctx = make_context(f, a)
        if ctx.derivative_at_center.is_zero():
            continue
        crit = reference_roots(derivative(f), 60)
        R = min(abs_lower(a - o.value) - o.certified_radius for o, _ in crit)
        if R <= 0:
            continue
        for n in range(1, 13):
            bound = coefficient_tail_bound(ctx, R, n)
            if series_coefficient(ctx, n).norm_sq() > bound * bound:
                bad += 1
        checked += 1
    record("4 coefficient bound", bad == 0, f"{checked} certified configurations, n <= 12, {bad} violations")
    assert bad == 0


@pytest.mark.slow
def test_5_filtered_two_sided():
    rng = random.Random(5)
    polys = [random_square_free(rng, rng.randint(1, 5), 16) for _ in range(100)]
    bad = []
    for i, f in enumerate(polys):
        for t in (8, 32):
            c = filtered_candidates(f, t)
            eps = Fraction(1, 1 << t)
            oracle = [o for o, _ in reference_roots(f, t + 16)]
            complete = all(any(within(z, o, eps) for z in c.items) for o in oracle)
            sound = all(any(within(z, o, eps) for o in oracle) for z in c.items)
            if not (complete and sound and c.epsilon <= eps):
                bad.append((i, t))
    record("5 filtered two-sidedness", not bad, f"100 square-free polynomials x t in (8, 32), {len(bad)} failures")
    assert not bad, bad


@pytest.mark.slow
def test_6_precision_ladder():
    polys = workload(WorkloadConfig(count=50, non_square_free=10, seed=6))
    bad = []
    for i, f in enumerate(polys):
        reports = {t: find_roots(f, t) for t in LADDER}
        for t, u in itertools.combinations(LADDER, 2):
            lo, hi = reports[t], reports[u]
            shift = u - t
            same = len(lo.roots) == len(hi.roots) and all(
                x.id == y.id
                and x.multiplicity == y.multiplicity
                and x.re_floor == y.re_floor >> shift
                and x.im_floor == y.im_floor >> shift
                for x, y in zip(lo.roots, hi.roots)
            )
            if not same:
                bad.append((i, t, u))
    record("6 precision ladder stability", not bad, f"50 polynomials x t in {LADDER}, {len(bad)} inconsistent pairs")
    assert not bad


def test_7_known_constants():
    sqrt2 = digit_expansion(Poly([-2, 0, 1]), 1, 20)
    third = [algebraic_bit(3 * X - 1, 0, k) for k in range(1, 65)]
    ok = sqrt2 == (1482910, 0) and third == [0, 1] * 32
    record("7 known constants", ok, f"sqrt(2) at t=20 -> {sqrt2[0]}, 1/3 first 64 bits alternate: {third == [0, 1] * 32}")
    assert ok


def test_8_exact_algebra():
    rng = random.Random(8)
    cases = bad = 0
    for _ in range(250):
        f = random_repeated(rng, rng.randint(2, 5), 12)
        dec = square_free_decompose(f)
        prod = Poly.constant(dec.unit)
        for g, e in dec.factors:
            prod = prod * g ** e
        bad += prod != f or not all(is_square_free(g) for g, _ in dec.factors)
        cases += 1
    for _ in range(250):
        f = random_poly(rng, rng.randint(0, 6), 10)
        g = random_poly(rng, rng.randint(1, 4), 10)
        q, r = divrem(f, g)
        bad += q * g + r != f or r.degree >= g.degree
        cases += 1
    for _ in range(250):
        h = random_poly(rng, rng.randint(1, 3), 6)
        f = h * random_poly(rng, rng.randint(0, 3), 6)
        g = h * random_poly(rng, rng.randint(0, 3), 6)
        d = poly_gcd(f, g)
        bad += not (d.lc == 1 and divides(d, f) and divides(d, g) and divides(h.monic(), d))
        cases += 1
    for _ in range(250):
        a, b, c = (random_gaussian(rng, 16) for _ in range(3))
        ok = (a + b) + c == a + (b + c) and (a * b) * c == a * (b * c) and a * (b + c) == a * b + a * c
        if not a.is_zero():
            ok = ok and (b / a) * a == b
        bad += not ok
        cases += 1
    record("8 exact algebra", bad == 0 and cases >= 1000, f"{cases} randomized cases, {bad} failures")
    assert bad == 0 and cases >= 1000


def test_9_bounds_soundness():
    polys = workload(WorkloadConfig(seed=9))
    bad = 0
    for f in polys:
        lo, hi = cauchy_bounds(f)
        roots = [o for o, _ in reference_roots(f, 48)]
        eta = separation_bound(f, f)
        for o in roots:
            r = o.certified_radius
            m = o.value.norm_sq()
            if not ((lo <= r or (lo - r) ** 2 <= m) and m <= (hi + r) ** 2):
                bad += 1
        for a, b in itertools.combinations(roots, 2):
            gap = eta - a.certified_radius - b.certified_radius
            if gap > 0 and (a.value - b.value).norm_sq() < gap * gap:
                bad += 1
    record("9 Cauchy and separation bounds", bad == 0, f"{len(polys)} polynomials, {bad} violations")
    assert bad == 0
