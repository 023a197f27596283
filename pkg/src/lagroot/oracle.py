"""Independent reference root finder used to cross-check the main pipeline.

Roots of each square-free factor are computed by simultaneous Weierstrass
(Durand-Kerner) iteration in mpmath.  Each result is then certified in exact
arithmetic: for a monic ``g`` of degree ``n`` with distinct approximations
``z_i``, every root lies in the union of the disks ``B(z_i, n |W_i|)`` with
``W_i = g(z_i) / prod_{j != i} (z_i - z_j)``.  When these disks are pairwise
disjoint, each one holds exactly one root.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import OracleError, PreconditionError
from .exact import GaussianRational, abs_upper
from .poly import Poly, cauchy_bounds, square_free_decompose

G = GaussianRational
MAX_ESCALATIONS = 3
START_ANGLE = 0.4  # keeps the start points off symmetry axes


@dataclass(frozen=True)
class OracleRoot:
    """The true root lies within ``certified_radius`` of ``value``."""

    value: GaussianRational
    certified_radius: Fraction

    def __complex__(self):
        return complex(self.value)


def _to_mpc(z: G) -> mpmath.mpc:
    return mpmath.mpc(mpmath.mpf(z.re.numerator) / z.re.denominator,
                      mpmath.mpf(z.im.numerator) / z.im.denominator)


def _to_dyadic(z: mpmath.mpc, bits: int) -> G:
    scale = 1 << bits
    x = int(mpmath.nint(z.real * scale))
    y = int(mpmath.nint(z.imag * scale))
    return G._raw(x, y, scale)


def _weierstrass(g: Poly, prec: int, budget: int) -> list[G]:
    """Approximate all roots of the monic square-free ``g`` at ``prec`` bits."""
    n = g.degree
    with mpmath.workprec(prec + 16):
        coeffs = [_to_mpc(c) for c in reversed(g.coeffs)]  # highest first
        radius = mpmath.mpf(float(cauchy_bounds(g)[1]))
        z = [
            radius * mpmath.expj(2 * mpmath.pi * k / n + START_ANGLE) for k in range(n)
        ]
        tol = mpmath.mpf(2) ** (-prec + 4)
        for _ in range(budget):
            worst = mpmath.mpf(0)
            for i in range(n):
                den = mpmath.mpc(1)
                for j in range(n):
                    if j != i:
                        den *= z[i] - z[j]
                if den == 0:
                    z[i] += tol
                    worst = mpmath.mpf(1)
                    continue
                step = mpmath.polyval(coeffs, z[i]) / den
                z[i] -= step
                worst = max(worst, abs(step) / max(1, abs(z[i])))
            if worst < tol:
                break
        return [_to_dyadic(zi, prec) for zi in z]


def _certify(g: Poly, approx: list[G], tol: Fraction) -> list[OracleRoot] | None:
    n = g.degree
    radii = []
    for i, zi in enumerate(approx):
        prod = G(1)
        for j, zj in enumerate(approx):
            if j != i:
                diff = zi - zj
                if diff.is_zero():
                    return None
                prod = prod * diff
        radii.append(n * abs_upper(g(zi) / prod))
    if any(r > tol for r in radii):
        return None
    for i in range(n):
        for j in range(i):
            s = radii[i] + radii[j]
            if (approx[i] - approx[j]).norm_sq() <= s * s:
                return None
    return [OracleRoot(z, r) for z, r in zip(approx, radii)]


def _factor_roots(g: Poly, t: int) -> list[OracleRoot]:
    g = g.monic()
    if g.degree == 1:
        return [OracleRoot(-g.coeff(0), Fraction(0))]
    tol = Fraction(1, 1 << t)
    prec = 4 * t + 64
    budget = 64 * g.degree * max(t, 1)
    for _ in range(MAX_ESCALATIONS + 1):
        cert = _certify(g, _weierstrass(g, prec, budget), tol)
        if cert is not None:
            return cert
        prec *= 2
    raise OracleError(f"could not certify the roots of a degree {g.degree} factor")


def reference_roots(f: Poly, t: int) -> list[tuple[OracleRoot, int]]:
    """Every root of ``f`` within ``2**-t`` (certified), with its multiplicity."""
    if f.degree < 1:
        raise PreconditionError("reference_roots needs a nonconstant polynomial")
    if t < 0:
        raise PreconditionError("precision must be nonnegative")
    out = []
    for g, e in square_free_decompose(f).factors:
        out.extend((root, e) for root in _factor_roots(g, t))
    return out
