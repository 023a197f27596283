"""Root location by sampling around critical points and inverting locally.

Every root of ``f`` that is not a critical point lies in a region where the
local inverse of ``f`` converges at ``w = 0``.  The sampling grid (rings of
geometrically growing radius around each approximate critical point, each
with ``p`` spokes) is dense enough that some grid point lands in that region.
At such a point the truncated inverse series approximates the root.

Two flavours are exposed:

* :func:`candidate_list` evaluates the series at every grid point, so every
  root has a nearby candidate but many candidates are junk.
* :func:`filtered_candidates` keeps only grid points passing an exact
  convergence test, so every candidate is also close to a root.

The filtered search is run on a coarse grid first and refined only when the
roots found so far do not account for the full degree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterator

import numpy as np

from .errors import InvariantError, PreconditionError
from .exact import (
    GaussianRational,
    abs_lower,
    ceil_log2,
    floor_log2,
    format_gaussian,
    sqrt_lower,
    sqrt_upper,
)
from .inversion import (
    InversionConstants,
    inverse_step,
    make_constants,
    make_context,
    partial_sum,
    root_disk,
)
from .poly import (
    Poly,
    derivative,
    is_square_free,
    separation_bound,
    separation_exponent,
    square_free_decompose,
    taylor_shift,
)

G = GaussianRational

RING_BITS = 40  # ring radii are dyadics with this many significant bits
FIRST_RUNG = 8  # coarsest search grid is 2**-8
PREFILTER_SLACK = 1e-8
PREFILTER_CHUNK = 2048
MAX_ANCHOR_ORDER = 1 << 12


@dataclass(frozen=True)
class SpiderwebSample:
    """One grid point ``a = alpha_j + r_k * xi_q`` with ``R**2 = |a - alpha_j|**2 / 4``."""

    j: int
    k: int
    q: int
    a: GaussianRational
    R_sq: Fraction
    N: int


@dataclass(frozen=True)
class CandidateList:
    items: tuple[GaussianRational, ...]
    epsilon: Fraction


class RootCell:
    """A disk known to contain one specific root of a square-free polynomial.

    The root lies within ``radius`` of ``center``.  The polynomial is
    injective on an open disk that contains both the root and the open ball
    ``B(ball_center, ball_radius)``, so any root found inside that ball is
    this root.  The anchor
    fields remember the grid point that discovered the root, where the
    inverse series is known to converge.
    """

    __slots__ = (
        "center",
        "radius",
        "ball_center",
        "ball_radius",
        "anchor",
        "anchor_R",
        "anchor_order",
    )

    def __init__(self, center, radius, ball_center, ball_radius, anchor_R):
        self.center = center
        self.radius = radius
        self.ball_center = ball_center
        self.ball_radius = ball_radius
        self.anchor = ball_center
        self.anchor_R = anchor_R
        self.anchor_order = 8

    def __repr__(self):
        return f"RootCell({format_gaussian(self.center)}, radius<={float(self.radius):.3g})"


# -- small exact helpers --------------------------------------------------------

def _round_down_sig(q: Fraction, bits: int) -> Fraction:
    """Largest dyadic ``<= q`` with ``bits`` significant bits, for ``q > 0``."""
    e = floor_log2(q) - bits + 1
    if e >= 0:
        return Fraction(math.floor(q / (1 << e)) << e)
    scale = 1 << -e
    return Fraction(math.floor(q * scale), scale)


def _within(z: G, r: Fraction, c: G, B: Fraction) -> bool:
    """True if the closed disk ``B(z, r)`` lies inside the open disk ``B(c, B)``."""
    slack = B - r
    return slack > 0 and (z - c).norm_sq() < slack * slack


def _disjoint(c1: RootCell, c2: RootCell) -> bool:
    s = c1.radius + c2.radius
    return (c1.center - c2.center).norm_sq() > s * s


def _same_root(c1: RootCell, c2: RootCell) -> bool:
    return _within(c2.center, c2.radius, c1.ball_center, c1.ball_radius) or _within(
        c1.center, c1.radius, c2.ball_center, c2.ball_radius
    )


def magnitude_bound(f: Poly) -> Fraction:
    """``2 + max_{j<d} |f_j / f_d|``, rounded up; the grid extends to twice this."""
    lead = f.lc.norm_sq()
    return 2 + max(sqrt_upper(cj.norm_sq() / lead) for cj in f.coeffs[:-1])


def ring_radii(eps: Fraction, A: Fraction, limit: Fraction) -> list[Fraction]:
    """``r_0 = eps``, ``r_{k+1} ~ r_k A`` (rounded down) until a radius reaches ``limit``."""
    rings = [Fraction(eps)]
    while rings[-1] < limit:
        rings.append(_round_down_sig(rings[-1] * A, RING_BITS))
    return rings


def _float_parts(z: G) -> tuple[complex, int]:
    """``z ~ m * 2**e`` with ``|m|`` near 1; ``(0, 0)`` for zero."""
    x, y, den = z.parts
    if x == 0 and y == 0:
        return 0j, 0
    e = max(abs(x).bit_length(), abs(y).bit_length()) - den.bit_length()
    scale = Fraction(1, 1 << e) if e >= 0 else Fraction(1 << -e)
    return complex(float(Fraction(x, den) * scale), float(Fraction(y, den) * scale)), e


def _log2_dyadic(r: Fraction) -> float:
    return math.log2(r.numerator) - math.log2(r.denominator)


# -- the solver ------------------------------------------------------------------

Trace = Callable[[str], None]


class RootSolver:
    """Certified roots of one monic square-free polynomial, refined on demand."""

    def __init__(self, f: Poly, trace: Trace | None = None):
        if f.degree < 1:
            raise PreconditionError("root finding needs a nonconstant polynomial")
        self.f = f.monic()
        self.d = self.f.degree
        self.fp = derivative(self.f)
        self.trace = trace
        self._cells: list[RootCell] | None = None
        self.consts: InversionConstants | None = None
        self._critical: list[RootSolver] = []
        if self.d >= 2:
            self.consts = make_constants(self.d)
            self._critical = [solver_for(g) for g, _ in square_free_decompose(self.fp).factors]

    # critical points ----------------------------------------------------------

    def critical_points(self, delta: Fraction) -> tuple[list[G], Fraction]:
        """Approximations of all distinct critical points and a common error bound ``<= delta``."""
        points, err = [], Fraction(0)
        for solver in self._critical:
            for cell in solver.roots():
                solver.refine(cell, delta)
                points.append(cell.center)
                err = max(err, cell.radius)
        return points, err

    def _critical_snapshot(self) -> tuple[list[G], Fraction]:
        points, err = [], Fraction(0)
        for solver in self._critical:
            for cell in solver.roots():
                points.append(cell.center)
                err = max(err, cell.radius)
        return points, err

    def critical_distance(self, z: G) -> Fraction:
        """Rational lower bound on the distance from ``z`` to the critical points.

        Critical points are refined until their error is small against the
        distance, so the bound is within a few percent of the truth when
        ``z`` is not itself (close to) critical.  May return a value ``<= 0``.
        """
        points, err = self._critical_snapshot()
        if not points:
            return Fraction(1 << 62)
        for _ in range(64):
            m = min(abs_lower(z - p) for p in points)
            R = m - err
            if err == 0 or R >= 16 * err:
                return R
            delta = m / 64 if m > 0 else err / (1 << 16)
            points, err = self.critical_points(delta)
        return m - err

    # search ---------------------------------------------------------------------

    def roots(self) -> list[RootCell]:
        """All roots as pairwise distinct cells (computed once, then cached)."""
        if self._cells is None:
            self._cells = self._find_all()
        return self._cells

    def _find_all(self) -> list[RootCell]:
        if self.d == 1:
            root = -self.f.coeff(0)
            return [RootCell(root, Fraction(0), root, Fraction(1 << 62), Fraction(1 << 62))]
        terminal = separation_exponent(self.f, self.fp) + 2  # grid 2**-terminal <= eps0/3
        bits = FIRST_RUNG
        while True:
            bits = min(bits, terminal)
            cells = self._search(bits)
            if len(cells) > self.d:
                raise InvariantError(f"found {len(cells)} distinct roots of a degree {self.d} polynomial")
            if len(cells) == self.d:
                return cells
            if bits == terminal:
                raise InvariantError(
                    f"grid at guaranteed resolution found {len(cells)} of {self.d} roots"
                )
            bits *= 2

    def _search(self, bits: int) -> list[RootCell]:
        eps = Fraction(1, 1 << bits)
        crit, err = self.critical_points(eps / 4)
        consts = self.consts
        rings = ring_radii(eps, consts.A, 2 * magnitude_bound(self.f))
        cells: list[RootCell] = []
        for j, alpha in enumerate(crit):
            mask = self._prefilter(alpha, rings)
            if self.trace is not None:
                order = ((k, q) for k in range(len(rings)) for q in range(consts.p))
            else:
                order = zip(*np.nonzero(mask))
            for k, q in order:
                k, q = int(k), int(q)
                a = alpha + consts.xi[q] * rings[k]
                cell, reason = self._examine(j, a, crit, err, mask[k, q])
                if self.trace is not None:
                    verdict = "kept" if cell is not None else f"dropped({reason})"
                    self.trace(f"j={j} k={k} q={q} a={format_gaussian(a)} {verdict}")
                if cell is not None:
                    self._merge(cells, cell)
                    if len(cells) > self.d:
                        raise InvariantError("more distinct roots than the degree")
        return cells

    def _examine(self, j: int, a: G, crit: list[G], err: Fraction, maybe: bool):
        """Exact filters for one grid point; returns ``(cell, None)`` or ``(None, reason)``."""
        R_sq = (a - crit[j]).norm_sq() / 4
        if R_sq <= err * err:
            return None, "critical"
        lim = sqrt_upper(R_sq) + err
        lim_sq = lim * lim
        for jj, other in enumerate(crit):
            if jj != j and (a - other).norm_sq() < lim_sq:
                return None, "critical"
        if not maybe:
            return None, "residual"
        b = self.f(a)
        fpa = self.fp(a)
        nu = self.consts.nu
        if not 4 * b.norm_sq() < nu * nu * fpa.norm_sq() * R_sq:
            return None, "residual"
        disk = root_disk(self.d, b, fpa, R_sq)
        if disk is None:
            raise InvariantError("filtered grid point without a convergent series")
        radius, ball = disk
        return RootCell(a, radius, a, ball, sqrt_lower(R_sq)), None

    def _prefilter(self, alpha: G, rings: list[Fraction]) -> np.ndarray:
        """Floating-point screen of the residual test, one row per ring.

        A grid point is screened out only when the float evaluation, widened
        by a generous error allowance, already fails the test.
        """
        consts = self.consts
        d = self.d
        F = taylor_shift(self.f, alpha).coeffs
        parts = [_float_parts(c) for c in F]
        mant = np.array([m for m, _ in parts], dtype=np.complex128)
        expo = np.array(
            [float(e) if m != 0 else -np.inf for m, e in parts], dtype=np.float64
        )
        H = np.arange(d + 1, dtype=np.float64)
        xi = np.array([complex(z) for z in consts.xi], dtype=np.complex128)
        Xi = xi[None, :] ** H[:, None]
        log_r = np.array([_log2_dyadic(r) for r in rings])
        quarter_nu = float(consts.nu) / 4
        out = np.empty((len(rings), consts.p), dtype=bool)
        for start in range(0, len(rings), PREFILTER_CHUNK):
            lr = log_r[start : start + PREFILTER_CHUNK]
            L = expo[None, :] + H[None, :] * lr[:, None]
            S = L.max(axis=1, keepdims=True)
            C = mant[None, :] * np.exp2(L - S)
            absC = np.abs(C)
            Bv = C @ Xi
            Dv = (C * H[None, :]) @ Xi
            errB = PREFILTER_SLACK * absC.sum(axis=1)
            errD = PREFILTER_SLACK * (absC * H[None, :]).sum(axis=1)
            lhs = np.abs(Bv) - errB[:, None]
            rhs = quarter_nu * (np.abs(Dv) + errD[:, None]) * (1 + PREFILTER_SLACK)
            out[start : start + len(lr)] = lhs < rhs
        return out

    def _merge(self, cells: list[RootCell], new: RootCell) -> None:
        """Add ``new`` unless it holds the same root as an existing cell."""
        for cell in cells:
            while True:
                if _disjoint(cell, new):
                    break
                if _same_root(cell, new):
                    if new.radius < cell.radius:
                        cell.center, cell.radius = new.center, new.radius
                    return
                target = min(cell.radius, new.radius) / 4
                self.refine(cell, target)
                self.refine(new, target)
        cells.append(new)

    # refinement -----------------------------------------------------------------

    def refine(self, cell: RootCell, delta: Fraction) -> RootCell:
        """Shrink ``cell.radius`` to at most ``delta`` (in place)."""
        delta = Fraction(delta)
        if delta <= 0:
            raise PreconditionError("refinement target must be positive")
        mu = self.consts.mu if self.consts else Fraction(0)
        while cell.radius > delta:
            R = self.critical_distance(cell.center)
            if R > 0 and cell.radius < mu * R:
                step = inverse_step(self.f, cell.center, R, delta)
                if step is not None and step.radius < cell.radius:
                    cell.center, cell.radius = step.z, step.radius
                    continue
            # fall back to a longer series at the discovering grid point
            cell.anchor_order *= 2
            if cell.anchor_order > MAX_ANCHOR_ORDER:
                raise InvariantError("refinement stalled")
            step = inverse_step(
                self.f, cell.anchor, cell.anchor_R, delta, order=cell.anchor_order
            )
            if step is None:
                raise InvariantError("series at a certified grid point diverges")
            if step.radius < cell.radius:
                cell.center, cell.radius = step.z, step.radius
        return cell


@lru_cache(maxsize=4096)
def _cached_solver(f: Poly) -> RootSolver:
    return RootSolver(f)


def solver_for(f: Poly) -> RootSolver:
    """Shared solver for the square-free polynomial ``f`` (keyed by its monic form)."""
    return _cached_solver(f.monic())


def distinct_roots(f: Poly, delta: Fraction) -> list[G]:
    """Approximations within ``delta`` of every distinct root of ``f``."""
    out = []
    for g, _ in square_free_decompose(f).factors:
        solver = solver_for(g)
        for cell in solver.roots():
            out.append(solver.refine(cell, delta).center)
    return out


# -- public operations -------------------------------------------------------------

def critical_chain(f: Poly, t: int) -> list[CandidateList]:
    """Level ``r`` approximates the distinct roots of the ``r``-th derivative within ``2**-t / 4**r``."""
    if t < 0:
        raise PreconditionError("precision must be nonnegative")
    if f.degree < 1:
        return []
    chain = []
    g = f
    eps = Fraction(1, 1 << t)
    for _ in range(1, f.degree):
        g = derivative(g)
        eps = eps / 4
        chain.append(CandidateList(tuple(distinct_roots(g, eps)), eps))
    return chain


def spiderweb_samples(f: Poly, t: int) -> Iterator[SpiderwebSample]:
    """Every grid point of the unfiltered search, with its truncation order."""
    d = f.degree
    eps = Fraction(1, 1 << t)
    consts = make_constants(d)
    crit = critical_chain(f, t)[0].items
    rings = ring_radii(eps, consts.A, 2 * magnitude_bound(f))
    for j, alpha in enumerate(crit):
        for k, r in enumerate(rings):
            for q, xi in enumerate(consts.xi):
                a = alpha + xi * r
                R_sq = (a - alpha).norm_sq() / 4
                reach = consts.mu * sqrt_upper(R_sq) / eps
                N = max(1, ceil_log2(reach)) if reach > 1 else 1
                yield SpiderwebSample(j, k, q, a, R_sq, N)


def candidate_list(f: Poly, t: int) -> CandidateList:
    """Unfiltered candidates: every root of ``f`` is within ``2**-t`` of some item.

    The approximate critical points are included, which covers roots that are
    themselves critical.  The grid has ``O(t)`` rings per critical point, so
    this is only practical for small ``t`` and degree.
    """
    if f.degree < 1:
        raise PreconditionError("candidate_list needs a nonconstant polynomial")
    if t < 1:
        raise PreconditionError("precision must be at least 1")
    eps = Fraction(1, 1 << t)
    if f.degree == 1:
        return CandidateList((-f.coeff(0) / f.coeff(1),), eps)
    items = list(critical_chain(f, t)[0].items)
    for s in spiderweb_samples(f, t):
        ctx = make_context(f, s.a)
        if ctx.derivative_at_center.is_zero():
            continue
        items.append(partial_sum(ctx, 0, s.N))
    return CandidateList(tuple(items), eps)


def filtered_candidates(f: Poly, t: int, trace: Trace | None = None) -> CandidateList:
    """Candidates that are all genuine approximations: for square-free ``f``
    every root is within ``epsilon`` of an item and every item is within
    ``epsilon`` of a root, where ``epsilon = min(2**-t, eps0/3)``.

    Grid points that land in the same root's basin are merged, so the list
    has one item per root.  ``trace`` receives one line per examined grid point
    of a fresh (uncached) search.
    """
    if f.degree < 1:
        raise PreconditionError("filtered_candidates needs a nonconstant polynomial")
    if t < 0:
        raise PreconditionError("precision must be nonnegative")
    if not is_square_free(f):
        raise PreconditionError("filtered_candidates needs a square-free polynomial")
    eps = Fraction(1, 1 << t)
    if f.degree >= 2:
        eps = min(eps, separation_bound(f, derivative(f)) / 3)
    solver = RootSolver(f, trace) if trace is not None else solver_for(f)
    items = tuple(solver.refine(cell, eps).center for cell in solver.roots())
    return CandidateList(items, eps)
