"""Exact binary digits of polynomial roots.

For every root ``a`` and precision ``t`` the pipeline reports the integer
pair ``(floor(Re(a 2^t)), floor(Im(a 2^t)))``.  Roots keep a stable id that
does not depend on ``t``: each distinct root is tied to an anchor (an
approximation computed once, at a precision fixed by the polynomial alone)
and ids are assigned by sorting the anchors.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import InvariantError, NotRealRootError, ParseError, PreconditionError
from .exact import (
    GaussianRational,
    I,
    dyadic_floor_scaled,
    format_gaussian,
    parse_gaussian,
)
from .locator import RootCell, filtered_candidates, solver_for
from .poly import (
    Poly,
    is_square_free,
    separation_bound,
    separation_exponent,
    square_free_decompose,
    substitute_linear,
)

G = GaussianRational
SCHEMA = "lagroot/1"


@dataclass(frozen=True)
class StableRootTable:
    """One anchor per distinct root, sorted by ``(re, im)``; the index is the root id."""

    anchors: tuple[GaussianRational, ...]
    eta: Fraction


@dataclass(frozen=True)
class RootEntry:
    id: int
    re_floor: int
    im_floor: int
    multiplicity: int


@dataclass(frozen=True)
class RootReport:
    """All roots of ``f`` at precision ``t``; ``f = unit * prod (x - a_j)**m_j``."""

    unit: GaussianRational
    t: int
    roots: tuple[RootEntry, ...]

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "unit": format_gaussian(self.unit),
            "t": self.t,
            "roots": [
                {
                    "id": r.id,
                    "re_floor": str(r.re_floor),
                    "im_floor": str(r.im_floor),
                    "multiplicity": r.multiplicity,
                }
                for r in self.roots
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "RootReport":
        try:
            data = json.loads(text)
            roots = tuple(
                RootEntry(int(r["id"]), int(r["re_floor"]), int(r["im_floor"]), int(r["multiplicity"]))
                for r in data["roots"]
            )
            return cls(parse_gaussian(data["unit"]), int(data["t"]), roots)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed root report: {exc}") from exc

    def to_text(self) -> str:
        rows = [("id", "mult", "re", "im")]
        for r in self.roots:
            rows.append(
                (str(r.id), str(r.multiplicity), format_binary(r.re_floor, self.t), format_binary(r.im_floor, self.t))
            )
        widths = [max(len(row[c]) for row in rows) for c in range(4)]
        lines = [f"unit: {format_gaussian(self.unit)}", f"t: {self.t}"]
        for row in rows:
            lines.append("  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip())
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str) -> "RootReport":
        lines = [ln for ln in text.strip().splitlines() if ln.strip()]
        try:
            unit = parse_gaussian(lines[0].split(":", 1)[1])
            t = int(lines[1].split(":", 1)[1])
            roots = []
            for ln in lines[3:]:
                rid, mult, re_txt, im_txt = ln.split()
                roots.append(RootEntry(int(rid), parse_binary(re_txt, t), parse_binary(im_txt, t), int(mult)))
        except (IndexError, ValueError) as exc:
            raise ParseError(f"malformed root report text: {exc}") from exc
        return cls(unit, t, tuple(roots))


# -- binary rendering ---------------------------------------------------------------

def format_binary(n: int, t: int) -> str:
    """Sign-magnitude binary rendering of ``n / 2**t``, e.g. ``-101.011``."""
    sign = "-" if n < 0 else ""
    m = abs(n)
    whole = bin(m >> t)[2:]
    if t == 0:
        return sign + whole
    frac = bin(m & ((1 << t) - 1))[2:].zfill(t)
    return f"{sign}{whole}.{frac}"


_BINARY_RE = re.compile(r"^([+-]?)([01]+)(?:\.([01]*))?$")


def parse_binary(text: str, t: int) -> int:
    """Inverse of :func:`format_binary`: the integer ``n`` with value ``n / 2**t``."""
    m = _BINARY_RE.match(text.strip())
    if not m:
        raise ParseError(f"not a binary number: {text!r}")
    sign, whole, frac = m.groups()
    frac = frac or ""
    if len(frac) > t:
        raise ParseError(f"{text!r} has more than {t} fractional digits")
    n = int(whole, 2) << t
    if frac:
        n |= int(frac, 2) << (t - len(frac))
    return -n if sign == "-" else n


# -- per-polynomial state -------------------------------------------------------------

@dataclass
class _RootTable:
    """Anchors plus the live cells used to refine each root on demand."""

    f: Poly
    table: StableRootTable
    cells: list[RootCell]
    exact_parts: dict = field(default_factory=dict)

    def approximate(self, root_id: int, delta: Fraction) -> G:
        cell = self.cells[root_id]
        if self.f.degree == 1:
            return cell.center
        return solver_for(self.f).refine(cell, delta).center


def _check_square_free(f: Poly, what: str) -> None:
    if f.degree < 1:
        raise PreconditionError(f"{what} needs a nonconstant polynomial")
    if not is_square_free(f):
        raise PreconditionError(f"{what} needs a square-free polynomial")


@lru_cache(maxsize=1024)
def _table_for(f: Poly) -> _RootTable:
    eta = separation_bound(f, f)
    solver = solver_for(f)
    cells = solver.roots()
    cand = [solver.refine(cell, eta / 5).center for cell in cells]
    # keep the first candidate of every cluster of mutually close candidates
    half_sq = (eta / 2) ** 2
    kept: list[tuple[G, RootCell]] = []
    for z, cell in zip(cand, cells):
        if all((z - k).norm_sq() >= half_sq for k, _ in kept):
            kept.append((z, cell))
    if len(kept) != f.degree:
        raise InvariantError(f"{len(kept)} anchors for {f.degree} distinct roots")
    gap_sq = (3 * eta / 5) ** 2
    for i in range(len(kept)):
        for j in range(i):
            if (kept[i][0] - kept[j][0]).norm_sq() <= gap_sq:
                raise InvariantError("anchors closer than the separation gap")
    kept.sort(key=lambda item: item[0].sort_key())
    table = StableRootTable(tuple(z for z, _ in kept), eta)
    return _RootTable(f, table, [cell for _, cell in kept])


def _root_table(f: Poly) -> _RootTable:
    return _table_for(f.monic())


def stable_anchors(f: Poly) -> StableRootTable:
    """Anchors within ``eta/5`` of each root of a square-free ``f``, pairwise more than ``3 eta / 5`` apart."""
    _check_square_free(f, "stable_anchors")
    return _root_table(f).table


def approximate_roots(f: Poly, t: int) -> list[tuple[GaussianRational, int]]:
    """``(z_j, j)`` with ``z_j`` within ``2**-t`` of the root anchored by anchor ``j``."""
    _check_square_free(f, "approximate_roots")
    if t < 0:
        raise PreconditionError("precision must be nonnegative")
    table = _root_table(f).table
    eps = Fraction(1, 1 << t)
    if eps >= table.eta / 5:
        return [(r, j) for j, r in enumerate(table.anchors)]
    items = filtered_candidates(f, t).items
    half_sq = (table.eta / 2) ** 2
    out = []
    for j, r in enumerate(table.anchors):
        match = next((z for z in items if (z - r).norm_sq() < half_sq), None)
        if match is None:
            raise InvariantError(f"no candidate near anchor {j}")
        out.append((match, j))
    return out


# -- exact floors ------------------------------------------------------------------------

def _component_floor(rt: _RootTable, root_id: int, t: int, imag: bool) -> tuple[int, bool]:
    """``floor(2**t * part)`` of the root and whether that part equals ``u / 2**t`` exactly.

    The imaginary part is handled as the real part of the root ``-i a`` of
    ``f(i z)``.
    """
    key = (root_id, imag)
    known = rt.exact_parts.get(key)
    if known is not None:
        n = dyadic_floor_scaled(known, t)
        return n, Fraction(n, 1 << t) == known
    f = rt.f
    if f.degree == 1:
        root = -f.coeff(0) / f.coeff(1)
        value = root.im if imag else root.re
        rt.exact_parts[key] = value
        n = dyadic_floor_scaled(value, t)
        return n, Fraction(n, 1 << t) == value

    def part(z: G) -> Fraction:
        return z.im if imag else z.re

    scale = 1 << t
    x = part(rt.approximate(root_id, Fraction(1, 1 << (t + 2)))) * scale
    u = dyadic_floor_scaled(x + Fraction(1, 2), 0)  # |u - true| < 3/4
    bits = t + 4
    xi_bits = None
    while True:
        err = Fraction(1, 1 << (bits - t))
        up = part(rt.approximate(root_id, Fraction(1, 1 << bits))) * scale
        if up - err > u:
            return u, False
        if up + err < u:
            return u - 1, False
        if xi_bits is None:
            h = substitute_linear(f, I, 0) if imag else f
            # roots of g and of the reflected g meet only if the part equals u
            g = substitute_linear(h, Fraction(2, scale), Fraction(u, scale))
            g_reflected = substitute_linear(g.conj(), -1, 0)
            xi_bits = separation_exponent(g, g_reflected)
        if bits - t >= xi_bits + 3:  # err < xi / 4
            rt.exact_parts[key] = Fraction(u, scale)
            return u, True
        bits = min(2 * bits, t + xi_bits + 3)


def _check_root_id(rt: _RootTable, root_id: int) -> None:
    if not 0 <= root_id < len(rt.table.anchors):
        raise PreconditionError(f"root id {root_id} out of range 0..{len(rt.table.anchors) - 1}")


def digit_expansion(f: Poly, root_id: int, t: int) -> tuple[int, int]:
    """``(floor(Re(a 2**t)), floor(Im(a 2**t)))`` for root ``root_id`` of square-free ``f``."""
    _check_square_free(f, "digit_expansion")
    if t < 0:
        raise PreconditionError("precision must be nonnegative")
    rt = _root_table(f)
    _check_root_id(rt, root_id)
    re_floor, _ = _component_floor(rt, root_id, t, imag=False)
    im_floor, _ = _component_floor(rt, root_id, t, imag=True)
    return re_floor, im_floor


def _global_roots(f: Poly) -> list[tuple[_RootTable, int, int]]:
    """``(table, local id, multiplicity)`` for every distinct root, in global id order."""
    if f.degree < 1:
        raise PreconditionError("root finding needs a nonconstant polynomial")
    entries = []
    for g, e in square_free_decompose(f).factors:
        rt = _root_table(g)
        for j, anchor in enumerate(rt.table.anchors):
            entries.append((anchor.sort_key(), rt, j, e))
    entries.sort(key=lambda item: item[0])
    return [(rt, j, e) for _, rt, j, e in entries]


def find_roots(f: Poly, t: int) -> RootReport:
    """Exact ``t``-digit expansions of all roots of ``f`` with multiplicities."""
    if t < 0:
        raise PreconditionError("precision must be nonnegative")
    roots = []
    for gid, (rt, j, e) in enumerate(_global_roots(f)):
        re_floor, _ = _component_floor(rt, j, t, imag=False)
        im_floor, _ = _component_floor(rt, j, t, imag=True)
        roots.append(RootEntry(gid, re_floor, im_floor, e))
    return RootReport(f.lc, t, tuple(roots))


def root_count(f: Poly) -> int:
    """Number of distinct roots, i.e. the range of valid root ids."""
    return len(_global_roots(f))


def is_real_root(f: Poly, root_id: int) -> bool:
    """Certify whether the selected root has imaginary part exactly zero."""
    rt, j = _select(f, root_id)
    im_floor, exact = _component_floor(rt, j, 0, imag=True)
    return exact and im_floor == 0


def _select(f: Poly, root_id: int) -> tuple[_RootTable, int]:
    roots = _global_roots(f)
    if not 0 <= root_id < len(roots):
        raise PreconditionError(f"root id {root_id} out of range 0..{len(roots) - 1}")
    rt, j, _ = roots[root_id]
    return rt, j


def algebraic_bit(f: Poly, root_id: int, k: int) -> int:
    """Fractional binary digit ``k >= 1`` of the real root ``root_id`` of ``f``."""
    if k < 1:
        raise PreconditionError("bit position must be at least 1")
    rt, j = _select(f, root_id)
    im_floor, exact = _component_floor(rt, j, 0, imag=True)
    if not (exact and im_floor == 0):
        raise NotRealRootError(f"root {root_id} is not real")
    hi, _ = _component_floor(rt, j, k, imag=False)
    lo, _ = _component_floor(rt, j, k - 1, imag=False)
    return hi - 2 * lo
