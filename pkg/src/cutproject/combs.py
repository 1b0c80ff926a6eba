"""Weighted model combs and truncated lattice sums with rigorous tails.

``ω_h(g) = Σ_{(x, y) in L} h(y) g(x)``.  Every sum is returned together with
an upper bound on the mass of the omitted terms, so a truncated value is an
interval estimate of the infinite sum.

Tail bounds work strip by strip.  Inside a strip of width ``d`` in one
coordinate, the other coordinates of lattice points are either separated by
the strip's minimal gap (found by exact enumeration), or counted with a
packing bound ``#(rect a x b) <= dens (a + p0)(b + p1)`` where ``p0, p1`` are
the extents of a fundamental cell.  Decreasing envelopes then sum as
``Σ_j env(R + j δ) <= env(R) + (1/δ) ∫_R^∞ env``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import NoTailBound, TooLarge
from .scheme import MAX_POINTS, LatticeScheme, annihilator, box_points
from .weights import Envelope, WeightFunction

EPS = np.finfo(float).eps
#: relative row width used far from the origin in two-sided sums
ROW_GROWTH = 0.125


@dataclass(frozen=True)
class CombPairing:
    value: complex
    tail_bound: float
    n_terms: int
    truncation_radius: float
    eps_num: float = 0.0  # rounding allowance for the computed value
    abs_sum: float = 0.0

    def to_dict(self) -> dict:
        v = complex(self.value)
        return {"value": v.real if v.imag == 0 else [v.real, v.imag],
                "tail_bound": self.tail_bound, "n_terms": self.n_terms,
                "truncation_radius": self.truncation_radius, "eps_num": self.eps_num}


@dataclass(frozen=True)
class Factor:
    """One factor of a separable lattice sum together with its decay data."""

    func: Callable
    sup: float
    support: Optional[tuple] = None
    center: float = 0.0
    env: Optional[Envelope] = None

    @property
    def compact(self) -> bool:
        return self.support is not None

    def bound(self, r):
        """Majorant of ``|func|`` at distance ``r`` from the center."""
        return self.env(r) if self.env is not None else self.sup


def space_factor(w: WeightFunction) -> Factor:
    sp = w.support()
    env = w.envelope()
    if env is not None:
        c, e = env
        return Factor(w.evaluate, e.sup, sp, c, e)
    if sp is None:
        raise NoTailBound(f"{w!r} has neither compact support nor an envelope")
    return Factor(w.evaluate, w.sup_norm(), sp, 0.5 * (sp[0] + sp[1]), None)


def dual_factor(w: WeightFunction) -> Factor:
    """Factor ``k -> w̌(k)``."""
    sp = w.fourier_support()
    env = w.fourier_envelope()
    if sp is not None:
        sup = env.sup if env is not None else abs(complex(w.fourier(0.0)))
        return Factor(w.inverse_fourier, sup, (-sp[1], -sp[0]), 0.0, env)
    if env is None:
        raise NoTailBound(f"transform of {w!r} has no summable decay certificate")
    return Factor(w.inverse_fourier, env.sup, None, 0.0, env)


# ---------------------------------------------------------------------------
# geometry helpers


def _reduce(B: np.ndarray) -> np.ndarray:
    """Lagrange-Gauss reduced basis (columns) of the same lattice."""
    b0, b1 = B[:, 0].copy(), B[:, 1].copy()
    for _ in range(200):
        if b1 @ b1 < b0 @ b0:
            b0, b1 = b1, b0
        mu = round(float(b0 @ b1) / float(b0 @ b0))
        if mu == 0:
            break
        b1 = b1 - mu * b0
    return np.column_stack([b0, b1])


def _cell_extents(B: np.ndarray):
    out = []
    for basis in (B, _reduce(B)):
        out.append((abs(basis[0, 0]) + abs(basis[0, 1]), abs(basis[1, 0]) + abs(basis[1, 1])))
    return out


@lru_cache(maxsize=512)
def _strip_min_gap_cached(key: bytes, width: float) -> float:
    B = np.frombuffer(key, dtype=float).reshape(2, 2)
    X = max(min(e[1] for e in _cell_extents(B)), 1e-6)
    searched = 0.0
    while X < 1e15:
        try:
            p, q, a, b = box_points(B, (-width, width), (-X, X), max_points=2_000_000)
        except TooLarge:
            # the search so far is still a valid lower bound
            return searched
        nz = (p != 0) | (q != 0)
        if np.any(nz):
            return float(np.min(np.abs(b[nz])))
        searched = X
        X *= 4.0
    return searched


def strip_min_gap(B: np.ndarray, width: float) -> float:
    """Smallest ``|coord1|`` over nonzero lattice points with ``|coord0| <= width``.

    Two points of a closed strip of width ``width`` in coordinate 0 are
    at least this far apart in coordinate 1.
    """
    B = np.ascontiguousarray(B, dtype=float)
    return _strip_min_gap_cached(B.tobytes(), float(width))


def strip_tail(B: np.ndarray, width: float, env: Envelope, R: float) -> float:
    """Bound on ``Σ env(|coord1 - c|)`` over the points of any closed strip of
    width ``width`` in coordinate 0 with ``|coord1 - c| >= R`` (both sides).

    Three rigorous estimates are tried and the smallest kept: the strip cut
    into ``k`` sub-strips, each with its own minimal gap; and a packing
    count with a fundamental cell of the lattice.
    """
    R = max(float(R), 0.0)
    head = float(env(R))
    integral = env.tail_integral(R)
    best = math.inf
    for k in (1, 2, 4, 8, 16, 32):
        delta = strip_min_gap(B, width / k)
        if delta > 1e-9:
            best = min(best, 2.0 * k * (head + integral / delta))
    dens = 1.0 / abs(np.linalg.det(B))
    X = np.geomspace(1e-3, 1e6, 60)
    for p0, p1 in _cell_extents(B):
        n_cell = dens * (width + p0) * (X + p1)
        best = min(best, float(np.min(2.0 * n_cell * (head + integral / X))))
    return best


def _sum(vals) -> tuple[complex, float]:
    """Pairwise sum and the l1 mass of the terms."""
    vals = np.asarray(vals)
    if vals.size == 0:
        return 0j, 0.0
    return complex(vals.sum()), float(np.abs(vals).sum())


def _rounding(mass: float, n: int) -> float:
    # pairwise summation error plus a few ulps per evaluated term
    return (math.log2(max(n, 2)) + 8) * EPS * mass


# ---------------------------------------------------------------------------
# separable lattice sums


def lattice_sum(B, F: Factor, G: Factor, radius: float, tail_target: Optional[float] = None,
                hermitian: bool = False, max_points: int = MAX_POINTS) -> CombPairing:
    """``Σ F(x) G(y)`` over ``B Z²`` with a proven tail bound.

    ``hermitian`` declares ``F(-x) G(-y) = conj(F(x) G(y))`` (true for
    transforms of real functions), which halves the work.
    """
    B = np.asarray(B, dtype=float)
    if F.compact and G.compact:
        return _box_sum(B, F, G)
    if F.compact or G.compact:
        if G.compact:
            return _strip_sum(B[::-1].copy(), G, F, radius, tail_target, max_points)
        return _strip_sum(B, F, G, radius, tail_target, max_points)
    if F.env is None or G.env is None:
        raise NoTailBound("a non-compact factor lacks an envelope")
    return _cross_sum(B, F, G, radius, tail_target, hermitian and F.center == 0 and G.center == 0,
                      max_points)


def _box_sum(B, F, G) -> CombPairing:
    p, q, x, y = box_points(B, F.support, G.support)
    terms = F.func(x) * G.func(y)
    val, mass = _sum(terms)
    r = max(abs(F.support[0]), abs(F.support[1]), abs(G.support[0]), abs(G.support[1]))
    return CombPairing(val, 0.0, int(len(x)), float(r), _rounding(mass, len(x)), mass)


def _strip_sum(B, F, G, radius, tail_target, max_points) -> CombPairing:
    """F compact in coordinate 0, G decaying in coordinate 1."""
    a, b = F.support
    width = b - a
    R = float(radius)
    dens = 1.0 / abs(np.linalg.det(B))

    def tail(R):
        return F.sup * strip_tail(B, width, G.env, R)

    if tail_target is not None:
        while tail(R) > tail_target:
            R *= 1.5
            p0 = min(e[0] for e in _cell_extents(B))
            if dens * (width + p0) * 2 * R > max_points:
                raise TooLarge(f"tail target {tail_target} needs radius > {R:.3g}")
    p, q, x, y = box_points(B, (a, b), (G.center - R, G.center + R), max_points)
    order = np.argsort(np.abs(y - G.center), kind="stable")
    terms = F.func(x[order]) * G.func(y[order])
    val, mass = _sum(terms)
    return CombPairing(val, float(tail(R)), int(len(x)), R, _rounding(mass, len(x)), mass)


def _rows(c0, x_end, growth=ROW_GROWTH):
    """Row edges ``c0 = e_0 < e_1 < ...`` covering ``[c0, x_end)`` with
    widths ``c0 * 2^j`` that grow like ``growth * e``."""
    edges = [c0]
    widths = []
    e = c0
    while e < x_end:
        j = max(0, int(math.floor(math.log2(max(1.0, growth * e / c0)))))
        w = c0 * 2 ** j
        widths.append(w)
        e += w
        edges.append(e)
    return edges, widths


def _cross_plan(B, F, G, R, lam, c0):
    """Row layout for level ``lam`` and its total tail bound."""
    A, Bv = F.env, G.env
    x_end = max(R, A.radius_for(lam / Bv.sup))
    edges, widths = _rows(c0, x_end)
    Ys, row_tails = [], []
    for lo, w in zip(edges[:-1], widths):
        a_lo = float(A(lo))
        Y = Bv.radius_for(lam / a_lo) if a_lo > 0 else 0.0
        if lo < R:
            Y = max(Y, R)
        Ys.append(Y)
        row_tails.append(a_lo * strip_tail(B, w, Bv, Y))
    Y0 = max(R, Bv.radius_for(lam / A.sup))
    center_tail = A.sup * strip_tail(B, 2 * c0, Bv, Y0)
    # everything beyond the last row, in strips of the last width
    w_end = widths[-1] if widths else c0
    x_last = edges[-1]
    beyond = (float(A(x_last)) + A.tail_integral(x_last) / w_end) * strip_tail(B, w_end, Bv, 0.0)
    side = sum(row_tails) + beyond
    est = sum(2 * Y * w for Y, w in zip(Ys, widths)) + 4 * Y0 * c0
    return dict(edges=edges, widths=widths, Ys=Ys, Y0=Y0, center_tail=center_tail,
                side_tail=side, est_area=est)


def _cross_sum(B, F, G, radius, tail_target, hermitian, max_points) -> CombPairing:
    R = float(radius)
    A, Bv = F.env, G.env
    dens = 1.0 / abs(np.linalg.det(B))
    c0 = min(0.25, max(A.knee, 1e-3))
    # smallest cell extent keeps the centre row free of repeated y values
    c0 = min(c0, 0.5 * min(e[0] for e in _cell_extents(B)))
    lam = float(A(R) * Bv(R))
    plan = _cross_plan(B, F, G, R, lam, c0)

    def total(plan):
        return plan["center_tail"] + 2 * plan["side_tail"]

    if tail_target is not None:
        # largest level (fewest points) whose tail bound meets the target
        hi = float(A(R) * Bv.sup)
        lo = lam
        lo_plan = plan
        while total(lo_plan) > tail_target:
            hi, lo = lo, lo / 4.0
            lo_plan = _cross_plan(B, F, G, R, lo, c0)
            if dens * lo_plan["est_area"] * (1 if hermitian else 2) > max_points:
                raise TooLarge(f"tail target {tail_target} needs more than {max_points} points")
        for _ in range(12):
            mid = math.sqrt(lo * hi)
            mid_plan = _cross_plan(B, F, G, R, mid, c0)
            if total(mid_plan) <= tail_target:
                lo, lo_plan = mid, mid_plan
            else:
                hi = mid
            if hi / lo < 1.15:
                break
        plan = lo_plan

    parts, masses = [], []
    n = 0
    cx, cy = F.center, G.center
    Y0 = plan["Y0"]
    p, q, x, y = box_points(B, (cx - c0, cx + c0), (cy - Y0, cy + Y0), max_points)
    keep = (x - cx > -c0) & (x - cx < c0)
    vals = F.func(x[keep]) * G.func(y[keep])
    v, m = _sum(vals)
    parts.append(v)
    masses.append(m)
    n += int(keep.sum())
    sides = (1.0,) if hermitian else (1.0, -1.0)
    side_vals = []
    for sgn in sides:
        acc = []
        for lo, w, Y in zip(plan["edges"][:-1], plan["widths"], plan["Ys"]):
            hi = lo + w
            xr = (cx + lo, cx + hi) if sgn > 0 else (cx - hi, cx - lo)
            p, q, x, y = box_points(B, xr, (cy - Y, cy + Y), max_points)
            rel = sgn * (x - cx)
            keep = (rel >= lo) & (rel < hi)
            vals = F.func(x[keep]) * G.func(y[keep])
            v, m = _sum(vals)
            acc.append(v)
            masses.append(m * (2 if hermitian else 1))
            n += int(keep.sum())
        side_vals.append(complex(math.fsum(z.real for z in acc), math.fsum(z.imag for z in acc)))
    if hermitian:
        side_total = 2 * side_vals[0].real + 0j
    else:
        side_total = side_vals[0] + side_vals[1]
    value = complex(math.fsum([parts[0].real, side_total.real]),
                    math.fsum([parts[0].imag, side_total.imag]))
    mass = float(sum(masses))
    return CombPairing(value, float(total(plan)), n, R, _rounding(mass, n), mass)


# ---------------------------------------------------------------------------
# public operations


def pair_comb(s: LatticeScheme, h: WeightFunction, g: WeightFunction, radius: float = 200.0,
              tail_target: Optional[float] = None) -> CombPairing:
    """``ω_h(g) = Σ_{(x,y) in L} h(y) g(x)`` with a tail bound.

    ``h`` acts on the internal (second) coordinate, ``g`` on the physical
    (first) one.  At least one factor must be compactly supported or both
    must carry envelopes; otherwise :class:`NoTailBound` is raised.
    """
    F = space_factor(g)
    G = space_factor(h)
    return lattice_sum(s.basis, F, G, radius, tail_target)


def pair_dual_comb(s: LatticeScheme, h: WeightFunction, g: WeightFunction, radius: float = 200.0,
                   tail_target: Optional[float] = None) -> CombPairing:
    """``dens(L) Σ_{(χ,η) in L0} ȟ(η) ǧ(χ)``, the transformed side of Poisson summation."""
    dual = annihilator(s)
    F = dual_factor(g)
    G = dual_factor(h)
    raw = lattice_sum(dual.basis, F, G, radius, tail_target=None if tail_target is None
                      else tail_target / s.density, hermitian=True)
    d = s.density
    return CombPairing(raw.value * d, raw.tail_bound * d, raw.n_terms, raw.truncation_radius,
                       raw.eps_num * d, raw.abs_sum * d)


class PSFResult(NamedTuple):
    lhs: CombPairing
    rhs: CombPairing
    residual: float

    @property
    def allowance(self) -> float:
        return self.lhs.tail_bound + self.rhs.tail_bound + self.lhs.eps_num + self.rhs.eps_num

    @property
    def ok(self) -> bool:
        return self.residual <= self.allowance

    def to_dict(self) -> dict:
        return {"lhs": self.lhs.to_dict(), "rhs": self.rhs.to_dict(), "residual": self.residual,
                "tails": {"lhs": self.lhs.tail_bound, "rhs": self.rhs.tail_bound},
                "radius": self.rhs.truncation_radius,
                "terms": {"lhs": self.lhs.n_terms, "rhs": self.rhs.n_terms},
                "allowance": self.allowance, "ok": self.ok}


def psf_residual(s: LatticeScheme, h: WeightFunction, g: WeightFunction, radius: float = 200.0,
                 tail_target: Optional[float] = None) -> PSFResult:
    """Both sides of ``ω_h(g) = dens(L) ω_ȟ(ǧ)`` and their difference.

    The transformed side always contains every dual point of the box
    ``[-radius, radius]²``; with ``tail_target`` it extends further along a
    hyperbolic cross until its tail bound drops below the target.
    """
    from .weights import Indicator
    for w, name in ((g, "g"), (h, "h")):
        if isinstance(w, Indicator):
            raise NoTailBound(f"{name} is an indicator; its transform decays like 1/k")
    lhs = pair_comb(s, h, g, radius)
    rhs = pair_dual_comb(s, h, g, radius, tail_target)
    return PSFResult(lhs, rhs, float(abs(lhs.value - rhs.value)))
