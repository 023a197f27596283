from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings

from lagroot.errors import PreconditionError
from lagroot.exact import GaussianRational as G, I
from lagroot.oracle import OracleRoot, reference_roots
from lagroot.poly import Poly, parse_poly
from strategies import polys, square_free_polys

X = Poly.x()


def test_square_roots_of_two():
    roots = sorted(reference_roots(parse_poly("x^2 - 2"), 50), key=lambda p: p[0].value.re)
    assert [m for _, m in roots] == [1, 1]
    s = mpmath.sqrt(2)
    for (o, _), want in zip(roots, (-s, s)):
        assert o.certified_radius <= Fraction(1, 1 << 50)
        assert abs(complex(o) - complex(want)) <= 2.0 ** -50


def test_repeated_roots_are_grouped():
    f = (X - 1) ** 3 * (X + I)
    got = {(o.value, m) for o, m in reference_roots(f, 20)}
    assert got == {(G(1), 3), (-I, 1)}


def test_linear_root_is_exact():
    (o, m), = reference_roots(3 * X - 1, 10)
    assert o == OracleRoot(G(Fraction(1, 3)), Fraction(0))
    assert m == 1


def test_rejects_constants():
    with pytest.raises(PreconditionError):
        reference_roots(Poly.constant(4), 10)


def test_clustered_roots_need_more_precision():
    # roots 2**-40 apart force the iteration to escalate its working precision
    f = (X - 1) * (X - 1 - Fraction(1, 1 << 40))
    roots = reference_roots(f, 60)
    assert len(roots) == 2
    assert all(o.certified_radius <= Fraction(1, 1 << 60) for o, _ in roots)


@settings(max_examples=30)
@given(polys(min_degree=1, max_degree=6, bits=10))
def test_multiplicities_sum_to_degree(f):
    assert sum(m for _, m in reference_roots(f, 30)) == f.degree


@settings(max_examples=30)
@given(square_free_polys(min_degree=1, max_degree=5, bits=10))
def test_values_nearly_vanish(f):
    t = 40
    for o, _ in reference_roots(f, t):
        assert o.certified_radius <= Fraction(1, 1 << t)
        with mpmath.workprec(200):
            coeffs = [mpmath.mpc(complex(c)) for c in reversed(f.coeffs)]
            assert abs(mpmath.polyval(coeffs, mpmath.mpc(complex(o)))) < 1e-6 * max(
                1, float(sum(abs(complex(c)) for c in f.coeffs))
            )


@settings(max_examples=20)
@given(square_free_polys(min_degree=2, max_degree=4, bits=8))
def test_precision_levels_agree(f):
    coarse = reference_roots(f, 20)
    fine = reference_roots(f, 60)
    for o, _ in fine:
        assert any(
            (o.value - c.value).norm_sq() <= (o.certified_radius + c.certified_radius) ** 2
            for c, _ in coarse
        )
