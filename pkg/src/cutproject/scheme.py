"""Cut-and-project schemes in the plane.

A scheme is a lattice ``L = M Z^2`` in ``R x R``; the first coordinate is the
physical space G, the second the internal space H.  Characters are
``exp(2πi x ξ)``, so the annihilator lattice is generated by ``inv(M).T`` and
the pairing of ``M (n, m)`` with ``M0 (p, q)`` is the integer ``n p + m q``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import SingularLattice, TooLarge
from .intervals import Interval, IntervalSet, as_interval_set

DET_FLOOR = 1e-10
LATTICE_TOL = 1e-9
#: refuse to materialise more lattice points than this in one call
MAX_POINTS = 50_000_000

GOLDEN = (1 + 5 ** 0.5) / 2


@dataclass(frozen=True, eq=False)
class LatticeScheme:
    """Lattice generated by the columns of ``basis``."""

    basis: np.ndarray
    det_floor: float = DET_FLOOR

    def __post_init__(self):
        M = np.array(self.basis, dtype=float)
        if M.shape != (2, 2):
            raise SingularLattice(f"basis must be 2x2, got shape {M.shape}")
        if not np.all(np.isfinite(M)):
            raise SingularLattice("basis has non-finite entries")
        if abs(np.linalg.det(M)) <= self.det_floor:
            raise SingularLattice(f"|det M| = {abs(np.linalg.det(M)):.3e} <= {self.det_floor}")
        M.setflags(write=False)
        object.__setattr__(self, "basis", M)

    @property
    def det_abs(self) -> float:
        return float(abs(np.linalg.det(self.basis)))

    @property
    def density(self) -> float:
        return 1.0 / self.det_abs

    @property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.basis)

    def point(self, n, m) -> np.ndarray:
        return self.basis @ np.array([n, m], dtype=float)

    def star(self, n, m) -> float:
        """Internal coordinate of the lattice point over ``(n, m)``."""
        return float(self.basis[1, 0] * n + self.basis[1, 1] * m)

    def swapped(self) -> "LatticeScheme":
        """Same lattice with the two coordinates exchanged."""
        return LatticeScheme(self.basis[::-1].copy(), self.det_floor)

    def __eq__(self, other):
        return isinstance(other, LatticeScheme) and np.array_equal(self.basis, other.basis)

    def __hash__(self):
        return hash(self.basis.tobytes())

    def to_dict(self) -> dict:
        return {"basis": self.basis.tolist()}


class DualScheme(LatticeScheme):
    """Annihilator lattice ``L0``; same interface as :class:`LatticeScheme`."""


def make_scheme(M, det_floor: float = DET_FLOOR) -> LatticeScheme:
    return LatticeScheme(np.asarray(M, dtype=float), det_floor)


def fibonacci_scheme() -> LatticeScheme:
    """``M = [[1, τ], [1, -1/τ]]``, density ``1/sqrt 5``."""
    return make_scheme([[1.0, GOLDEN], [1.0, -1.0 / GOLDEN]])


def annihilator(s: LatticeScheme) -> DualScheme:
    M0 = np.linalg.inv(s.basis).T
    return DualScheme(M0, s.det_floor)


def random_scheme(rng: np.random.Generator, det_range=(0.5, 2.0)) -> LatticeScheme:
    """Random basis with ``|det|`` uniform in ``det_range``."""
    while True:
        M = rng.normal(size=(2, 2))
        d = abs(np.linalg.det(M))
        if d > 0.05:
            break
    target = rng.uniform(*det_range)
    return make_scheme(M * np.sqrt(target / d))


# --------------------------------------------------------------------------
# lattice point enumeration


def _q_bounds(a, b, lo, hi, p):
    """Integer q with lo <= a p + b q <= hi, padded by one on each side."""
    if b == 0.0:
        ok = (a * p >= lo) & (a * p <= hi)
        qlo = np.where(ok, -np.inf, np.inf)
        qhi = np.where(ok, np.inf, -np.inf)
        return qlo, qhi
    r1 = (lo - a * p) / b
    r2 = (hi - a * p) / b
    return np.floor(np.minimum(r1, r2)) - 1, np.ceil(np.maximum(r1, r2)) + 1


def box_points(M: np.ndarray, xr, yr, max_points: int = MAX_POINTS):
    """All integer pairs with ``M (p, q)`` in the closed box ``xr x yr``.

    Rows of constant ``p`` are enumerated exactly, so the work is
    proportional to the number of points plus the number of rows, never to
    the area of the integer bounding box.  Returns ``(p, q, x, y)``.
    """
    M = np.asarray(M, dtype=float)
    xlo, xhi = float(xr[0]), float(xr[1])
    ylo, yhi = float(yr[0]), float(yr[1])
    empty = (np.zeros(0, np.int64),) * 2 + (np.zeros(0),) * 2
    if xlo > xhi or ylo > yhi:
        return empty
    inv = np.linalg.inv(M)
    corners = np.array([[xlo, xlo, xhi, xhi], [ylo, yhi, ylo, yhi]])
    pre = inv @ corners
    plo = int(np.floor(pre[0].min())) - 1
    phi = int(np.ceil(pre[0].max())) + 1
    if phi - plo + 1 > max_points:
        raise TooLarge(f"{phi - plo + 1} lattice rows requested")
    p = np.arange(plo, phi + 1, dtype=np.int64)
    pf = p.astype(float)
    q1lo, q1hi = _q_bounds(M[0, 0], M[0, 1], xlo, xhi, pf)
    q2lo, q2hi = _q_bounds(M[1, 0], M[1, 1], ylo, yhi, pf)
    qlo = np.maximum(q1lo, q2lo)
    qhi = np.minimum(q1hi, q2hi)
    keep = qhi >= qlo
    p, qlo, qhi = p[keep], qlo[keep].astype(np.int64), qhi[keep].astype(np.int64)
    counts = qhi - qlo + 1
    total = int(counts.sum())
    if total > max_points:
        raise TooLarge(f"{total} lattice points requested (cap {max_points})")
    if total == 0:
        return empty
    starts = np.cumsum(counts) - counts
    pp = np.repeat(p, counts)
    qq = np.repeat(qlo, counts) + (np.arange(total) - np.repeat(starts, counts))
    x = M[0, 0] * pp + M[0, 1] * qq
    y = M[1, 0] * pp + M[1, 1] * qq
    inside = (x >= xlo) & (x <= xhi) & (y >= ylo) & (y <= yhi)
    return pp[inside], qq[inside], x[inside], y[inside]


class ProjectedPoint(NamedTuple):
    g_coord: float
    h_coord: float
    int_coords: tuple


@dataclass(frozen=True, eq=False)
class ProjectionSet:
    """Projected lattice points, sorted by the projected coordinate.

    ``x`` holds the projected coordinates (the point set itself), ``star``
    the partner coordinate that was filtered by ``window``, and ``n, m`` the
    integer coordinates of the lattice point.
    """

    x: np.ndarray
    star: np.ndarray
    n: np.ndarray
    m: np.ndarray
    window: IntervalSet
    g_range: Interval

    def __len__(self):
        return len(self.x)

    def __getitem__(self, i) -> ProjectedPoint:
        return ProjectedPoint(float(self.x[i]), float(self.star[i]),
                              (int(self.n[i]), int(self.m[i])))

    @property
    def g_coord(self) -> np.ndarray:
        return self.x

    @property
    def h_coord(self) -> np.ndarray:
        return self.star

    @property
    def points(self) -> list[ProjectedPoint]:
        return [self[i] for i in range(len(self))]


def _project(M, window, rng_interval: Interval, swap: bool) -> ProjectionSet:
    window = as_interval_set(window)
    if isinstance(rng_interval, (tuple, list)):
        rng_interval = Interval.closed(*rng_interval)
    if window.is_empty:
        z = np.zeros(0)
        zi = np.zeros(0, np.int64)
        return ProjectionSet(z, z, zi, zi, window, rng_interval)
    wlo, whi = float(window.lo), float(window.hi)
    glo, ghi = float(rng_interval.lo), float(rng_interval.hi)
    if swap:
        # filter the first coordinate, project to the second
        p, q, a, b = box_points(M, (wlo, whi), (glo, ghi))
        proj, star = b, a
    else:
        p, q, a, b = box_points(M, (glo, ghi), (wlo, whi))
        proj, star = a, b
    keep = window.contains(star) & rng_interval.contains(proj)
    proj, star, p, q = proj[keep], star[keep], p[keep], q[keep]
    order = np.lexsort((q, p, proj))
    return ProjectionSet(proj[order], star[order], p[order], q[order], window, rng_interval)


def enumerate_strip(s: LatticeScheme, window, g_range) -> ProjectionSet:
    """Model set ``Λ_W`` restricted to ``g_range``.

    Exactly the lattice points with internal coordinate in ``window`` and
    physical coordinate in ``g_range`` (closedness of both respected).
    """
    return _project(s.basis, window, g_range, swap=False)


def dual_projection(s: LatticeScheme, K, h_range) -> ProjectionSet:
    """Dual model set ``_KΛ``: points of ``L0`` with first coordinate in K,
    projected to the internal dual coordinate and restricted to ``h_range``."""
    return _project(annihilator(s).basis, K, h_range, swap=True)


@dataclass(frozen=True)
class MinGapReport:
    min_gap: float
    violation: bool
    n_points: int
    index: int  # position of the left point of the smallest gap (-1 if none)


def check_injectivity(p: ProjectionSet, tol: float = LATTICE_TOL) -> MinGapReport:
    """Smallest gap between consecutive projected coordinates."""
    if len(p) < 2:
        return MinGapReport(float("inf"), False, len(p), -1)
    gaps = np.diff(p.x)
    i = int(np.argmin(gaps))
    g = float(gaps[i])
    return MinGapReport(g, g < tol, len(p), i)


def gap_values(p: ProjectionSet, tol: float = LATTICE_TOL) -> np.ndarray:
    """Distinct consecutive gaps, clustered to ``tol``."""
    gaps = np.sort(np.diff(p.x))
    if gaps.size == 0:
        return gaps
    breaks = np.flatnonzero(np.diff(gaps) > tol)
    starts = np.concatenate([[0], breaks + 1])
    return gaps[starts]


def pairing(s: LatticeScheme, nm, pq) -> np.ndarray:
    """Float pairing ``<M (n,m), M0 (p,q)>`` for arrays of shape (..., 2)."""
    nm = np.asarray(nm, dtype=float)
    pq = np.asarray(pq, dtype=float)
    ell = nm @ s.basis.T
    ell0 = pq @ annihilator(s).basis.T
    return np.sum(ell * ell0, axis=-1)
