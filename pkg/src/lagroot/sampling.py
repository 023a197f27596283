"""Seeded random polynomial workloads for tests and experiment scripts."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .exact import GaussianRational
from .poly import Poly, is_square_free

G = GaussianRational


@dataclass(frozen=True)
class WorkloadConfig:
    """Shape of a random polynomial batch."""

    count: int = 200
    min_degree: int = 1
    max_degree: int = 5
    bits: int = 16  # numerators and denominators below 2**bits
    non_square_free: int = 50  # how many members are built with a repeated factor
    complex_fraction: float = 0.7  # chance that a coefficient has an imaginary part
    seed: int = 20240601


def random_rational(rng: random.Random, bits: int) -> Fraction:
    top = (1 << bits) - 1
    return Fraction(rng.randint(-top, top), rng.randint(1, top))


def random_gaussian(rng: random.Random, bits: int, complex_fraction: float = 0.7) -> G:
    im = random_rational(rng, bits) if rng.random() < complex_fraction else 0
    return G(random_rational(rng, bits), im)


def random_poly(rng: random.Random, degree: int, bits: int, complex_fraction: float = 0.7) -> Poly:
    """Dense polynomial of exactly the given degree."""
    coeffs = [random_gaussian(rng, bits, complex_fraction) for _ in range(degree)]
    lead = G(0)
    while lead.is_zero():
        lead = random_gaussian(rng, bits, complex_fraction)
    return Poly(coeffs + [lead])


def _fits(f: Poly, bits: int) -> bool:
    limit = 1 << bits
    return all(
        abs(q.numerator) < limit and q.denominator < limit
        for c in f.coeffs
        for q in (c.re, c.im)
    )


def random_square_free(rng: random.Random, degree: int, bits: int, complex_fraction: float = 0.7) -> Poly:
    while True:
        f = random_poly(rng, degree, bits, complex_fraction)
        if is_square_free(f):
            return f


def random_repeated(rng: random.Random, degree: int, bits: int, complex_fraction: float = 0.7) -> Poly:
    """Polynomial ``g**e * h`` of the given degree (``>= 2``) with ``e >= 2``.

    Factors use small coefficients so the product stays within ``bits``.
    """
    if degree < 2:
        raise ValueError("a repeated factor needs degree >= 2")
    small = max(2, bits // 4)
    while True:
        e = rng.randint(2, degree)
        k = rng.randint(1, degree // e)
        g = random_poly(rng, k, small, complex_fraction)
        rest = degree - k * e
        f = g ** e
        if rest:
            f = f * random_poly(rng, rest, small, complex_fraction)
        if _fits(f, bits) and f.degree == degree:
            return f


def workload(cfg: WorkloadConfig) -> list[Poly]:
    """``cfg.count`` polynomials; the first ``cfg.non_square_free`` have a repeated factor."""
    rng = random.Random(cfg.seed)
    out = []
    for i in range(cfg.count):
        if i < cfg.non_square_free:
            d = rng.randint(max(2, cfg.min_degree), cfg.max_degree)
            out.append(random_repeated(rng, d, cfg.bits, cfg.complex_fraction))
        else:
            d = rng.randint(cfg.min_degree, cfg.max_degree)
            out.append(random_poly(rng, d, cfg.bits, cfg.complex_fraction))
    return out
