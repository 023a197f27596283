"""Dense univariate polynomials over Q(i)."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import ParseError, PreconditionError
from .exact import (
    ONE,
    ZERO,
    GaussianRational,
    Scalar,
    format_gaussian,
    format_rational,
    parse_gaussian,
    sqrt_lower,
    sqrt_upper,
)

G = GaussianRational


class Poly:
    """Polynomial with Gaussian-rational coefficients; ``coeffs[j]`` multiplies ``x**j``.

    Trailing zero coefficients are stripped, so the zero polynomial has an empty
    coefficient tuple and degree -1.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [G.coerce(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs: tuple[GaussianRational, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def constant(cls, c: Scalar) -> "Poly":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots: Iterable[Scalar], lc: Scalar = 1) -> "Poly":
        f = cls((lc,))
        for r in roots:
            f = f * cls((-G.coerce(r), 1))
        return f

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self) -> GaussianRational:
        if not self.coeffs:
            raise PreconditionError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def coeff(self, j: int) -> GaussianRational:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else ZERO

    def __call__(self, z: Scalar) -> GaussianRational:
        return evaluate(self, z)

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(j) + other.coeff(j) for j in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = G.coerce(other)
            return Poly(a * c for a in self.coeffs)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power")
        result = Poly((1,))
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)

    def monic(self) -> "Poly":
        if self.is_zero():
            raise PreconditionError("zero polynomial cannot be made monic")
        inv = self.lc.inverse()
        return Poly(c * inv for c in self.coeffs)

    def conj(self) -> "Poly":
        """Coefficient-wise complex conjugate."""
        return Poly(c.conj() for c in self.coeffs)

    def derivative(self) -> "Poly":
        return derivative(self)


def _as_poly(v) -> Poly:
    return v if isinstance(v, Poly) else Poly((v,))


@dataclass(frozen=True)
class SquareFreeDecomposition:
    """``unit * prod(factor**multiplicity)`` with monic, square-free, pairwise coprime factors."""

    unit: GaussianRational
    factors: tuple[tuple[Poly, int], ...]

    def expand(self) -> Poly:
        out = Poly((self.unit,))
        for g, e in self.factors:
            out = out * g**e
        return out


# -- basic operations ----------------------------------------------------

def evaluate(f: Poly, z: Scalar) -> GaussianRational:
    """Horner evaluation of ``f`` at ``z``."""
    z = G.coerce(z)
    acc = ZERO
    for c in reversed(f.coeffs):
        acc = acc * z + c
    return acc


def derivative(f: Poly) -> Poly:
    return Poly(c * j for j, c in enumerate(f.coeffs) if j > 0)


def taylor_shift(f: Poly, a: Scalar) -> Poly:
    """Coefficients of ``f(z + a)``, i.e. the Taylor coefficients of ``f`` at ``a``."""
    a = G.coerce(a)
    c = list(f.coeffs)
    n = len(c)
    if a.is_zero() or n <= 1:
        return f
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            c[j] = c[j] + a * c[j + 1]
    return Poly(c)


def substitute_linear(f: Poly, scale: Scalar, shift: Scalar) -> Poly:
    """Coefficients of ``f(scale*z + shift)``."""
    scale = G.coerce(scale)
    g = taylor_shift(f, shift)
    out = []
    p = ONE
    for c in g.coeffs:
        out.append(c * p)
        p = p * scale
    return Poly(out)


def divrem(f: Poly, g: Poly) -> tuple[Poly, Poly]:
    """Euclidean division ``f = q*g + r`` with ``deg r < deg g``."""
    if g.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f.coeffs)
    dg = g.degree
    if len(r) - 1 < dg:
        return Poly(), f
    inv = g.lc.inverse()
    q = [ZERO] * (len(r) - dg)
    for k in range(len(r) - 1 - dg, -1, -1):
        c = r[k + dg] * inv
        q[k] = c
        if c.is_zero():
            continue
        for j, gj in enumerate(g.coeffs):
            r[k + j] = r[k + j] - c * gj
    return Poly(q), Poly(r[:dg])


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic greatest common divisor by the Euclidean algorithm."""
    if f.is_zero() and g.is_zero():
        raise PreconditionError("gcd(0, 0) is undefined")
    while not g.is_zero():
        f, g = g, divrem(f, g)[1]
    return f.monic()


def divides(g: Poly, f: Poly) -> bool:
    return divrem(f, g)[1].is_zero()


def is_square_free(f: Poly) -> bool:
    return f.degree >= 1 and poly_gcd(f, derivative(f)).degree == 0


def square_free_decompose(f: Poly) -> SquareFreeDecomposition:
    """Split ``f`` into pairwise coprime square-free factors with multiplicities.

    Rewrites a factor list to a fixed point: a non-square-free entry is split
    through ``gcd(h, h')``; an entry divisible by another (but not conversely)
    is split by it; two entries with a nontrivial common factor that do not
    divide each other are split through their gcd.  Equal monic entries are
    then collected.
    """
    if f.degree < 1:
        raise PreconditionError("square-free decomposition needs a nonconstant polynomial")
    unit = f.lc
    work = [f.monic()]
    while True:
        step = _sf_rule_split_repeated(work) or _sf_rule_divisible(work) or _sf_rule_common(work)
        if not step:
            break
    factors: list[tuple[Poly, int]] = []
    for h in work:
        for k, (g, e) in enumerate(factors):
            if g == h:
                factors[k] = (g, e + 1)
                break
        else:
            factors.append((h, 1))
    return SquareFreeDecomposition(unit, tuple(factors))


def _sf_rule_split_repeated(work: list[Poly]) -> bool:
    for j, h in enumerate(work):
        g = poly_gcd(h, derivative(h))
        if g.degree >= 1:
            work[j : j + 1] = [g, divrem(h, g)[0]]
            return True
    return False


def _sf_rule_divisible(work: list[Poly]) -> bool:
    for h, fh in enumerate(work):
        for j, fj in enumerate(work):
            if h != j and divides(fh, fj) and not divides(fj, fh):
                work[j : j + 1] = [fh, divrem(fj, fh)[0]]
                return True
    return False


def _sf_rule_common(work: list[Poly]) -> bool:
    for h in range(len(work)):
        for j in range(h + 1, len(work)):
            fh, fj = work[h], work[j]
            if divides(fh, fj) or divides(fj, fh):
                continue
            g = poly_gcd(fh, fj)
            if g.degree >= 1:
                qh, qj = divrem(fh, g)[0], divrem(fj, g)[0]
                work[j : j + 1] = [g, qj]
                work[h : h + 1] = [g, qh]
                return True
    return False


# -- bounds --------------------------------------------------------------

def cauchy_bounds(f: Poly) -> tuple[Fraction, Fraction]:
    """``(lo, hi)`` with ``lo <= |alpha| <= hi`` for every root ``alpha``.

    Moduli of coefficients enter through one-sided rational bounds: ``hi`` is
    only ever rounded up and ``lo`` only down.
    """
    if f.degree < 1:
        raise PreconditionError("Cauchy bounds need a nonconstant polynomial")
    cs = f.coeffs
    d = f.degree
    lead = cs[d].norm_sq()
    hi = 1 + max(sqrt_upper(c.norm_sq() / lead) for c in cs[:d])
    if cs[0].is_zero():
        return Fraction(0), hi
    a0 = sqrt_lower(cs[0].norm_sq())
    m = max(sqrt_upper(c.norm_sq()) for c in cs[1:])
    return a0 / (a0 + m), hi


def bit_size(f: Poly) -> int:
    """Total binary size: every coefficient counts as four signed integers
    (real numerator, real denominator, imaginary numerator, imaginary
    denominator), each costing its bit length plus one sign bit."""
    total = 0
    for c in f.coeffs:
        for q in (c.re, c.im):
            total += q.numerator.bit_length() + q.denominator.bit_length() + 2
    return total


def separation_exponent(f0: Poly, f1: Poly) -> int:
    if f0.degree < 1 or f1.degree < 1:
        raise PreconditionError("separation bound needs nonconstant polynomials")
    return f1.degree * bit_size(f0) + f0.degree * bit_size(f1)


def separation_bound(f0: Poly, f1: Poly) -> Fraction:
    """``2**-(d1*n0 + d0*n1)``: distinct roots of ``f0`` and ``f1`` are at least this far apart."""
    return Fraction(1, 1 << separation_exponent(f0, f1))


# -- text formats --------------------------------------------------------

def format_poly(f: Poly, var: str = "x") -> str:
    if f.is_zero():
        return "0"
    parts: list[str] = []
    for k in range(f.degree, -1, -1):
        c = f.coeffs[k]
        if c.is_zero():
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if c.is_real():
            neg = c.re < 0
            mag = abs(c.re)
            body = format_rational(mag) if (k == 0 or mag != 1) else ""
        else:
            neg = False
            body = f"({format_gaussian(c)})"
        term = "*".join(p for p in (body, mono) if p)
        if not parts:
            parts.append(("-" if neg else "") + term)
        else:
            parts.append((" - " if neg else " + ") + term)
    return "".join(parts)


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|(\*\*|[-+*/^()])|([a-zA-Z]))")


class _Parser:
    """Recursive-descent parser for polynomial expressions in ``x`` with literal ``i``."""

    def __init__(self, text: str, var: str):
        self.text = text
        self.var = var
        self.tokens = self._tokenize(text)
        self.pos = 0

    def _tokenize(self, text: str) -> list[tuple[str, str]]:
        toks = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN_RE.match(stripped, pos)
            if not m:
                raise ParseError(f"unexpected character at {pos} in {text!r}")
            num, op, name = m.groups()
            if num is not None:
                toks.append(("num", num))
            elif op is not None:
                toks.append(("op", "^" if op == "**" else op))
            else:
                if name not in (self.var, "i"):
                    raise ParseError(f"unknown symbol {name!r} in {text!r}")
                toks.append(("name", name))
            pos = m.end()
        return toks

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self):
        tok = self.peek()
        self.pos += 1
        return tok

    def parse(self) -> Poly:
        if not self.tokens:
            raise ParseError("empty polynomial expression")
        out = self.expr()
        if self.pos != len(self.tokens):
            raise ParseError(f"trailing input in {self.text!r}")
        return out

    def expr(self) -> Poly:
        acc = self.term()
        while self.peek() in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def term(self) -> Poly:
        acc = self.unary()
        while True:
            kind, val = self.peek()
            if (kind, val) == ("op", "*"):
                self.take()
                acc = acc * self.unary()
            elif (kind, val) == ("op", "/"):
                self.take()
                den = self.unary()
                if den.degree != 0:
                    raise ParseError(f"division by a non-constant or zero in {self.text!r}")
                acc = acc * den.lc.inverse()
            elif kind in ("num", "name") or (kind, val) == ("op", "("):
                acc = acc * self.power()  # implicit product, e.g. 3x^2 or 2i
            else:
                return acc

    def unary(self) -> Poly:
        if self.peek() == ("op", "-"):
            self.take()
            return -self.unary()
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> Poly:
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            kind, val = self.take()
            if kind != "num":
                raise ParseError(f"exponent must be a nonnegative integer literal in {self.text!r}")
            return base ** int(val)
        return base

    def atom(self) -> Poly:
        kind, val = self.take()
        if kind == "num":
            return Poly((int(val),))
        if kind == "name":
            return Poly((0, 1)) if val == self.var else Poly((G(0, 1),))
        if (kind, val) == ("op", "("):
            inner = self.expr()
            if self.take() != ("op", ")"):
                raise ParseError(f"unbalanced parentheses in {self.text!r}")
            return inner
        if val is None:
            raise ParseError(f"unexpected end of input in {self.text!r}")
        raise ParseError(f"unexpected token {val!r} in {self.text!r}")


def parse_poly(text: str, var: str = "x") -> Poly:
    """Parse an expression such as ``"(1+2*i)*x^3 - x/2 + 3"`` and expand it."""
    return _Parser(text, var).parse()


def parse_coeffs_json(text: str | Sequence) -> Poly:
    """Parse a JSON array of coefficient literals, index = power."""
    try:
        data = json.loads(text) if isinstance(text, str) else text
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid coefficient JSON: {exc}") from None
    if not isinstance(data, list):
        raise ParseError("coefficient JSON must be an array")
    cs = []
    for item in data:
        if isinstance(item, bool) or not isinstance(item, (int, str)):
            raise ParseError(f"bad coefficient entry {item!r}")
        cs.append(G(item) if isinstance(item, int) else parse_gaussian(item))
    return Poly(cs)


def format_coeffs_json(f: Poly) -> str:
    return json.dumps([format_gaussian(c) for c in f.coeffs])
