"""Finite unions of real intervals.

Endpoints may be floats or any exactly-comparable number type (``Fraction``
works and keeps every set operation exact).  Intervals default to the
half-open form ``[lo, hi)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .errors import InvalidInterval

#: absolute tolerance used when deciding whether two endpoints touch
MERGE_TOL = 1e-12


@dataclass(frozen=True)
class Interval:
    """A nonempty interval with explicit endpoint closedness.

    A degenerate interval (``lo == hi``) must be closed at both ends; it
    represents a single point.
    """

    lo: float
    hi: float
    lo_closed: bool = True
    hi_closed: bool = False

    def __post_init__(self):
        if not (self.lo == self.lo and self.hi == self.hi):
            raise InvalidInterval("interval endpoints must not be NaN")
        if self.lo > self.hi:
            raise InvalidInterval(f"lo={self.lo} exceeds hi={self.hi}")
        if self.lo == self.hi and not (self.lo_closed and self.hi_closed):
            raise InvalidInterval(f"empty interval at {self.lo}")

    @classmethod
    def closed(cls, lo, hi) -> "Interval":
        return cls(lo, hi, True, True)

    @classmethod
    def open(cls, lo, hi) -> "Interval":
        return cls(lo, hi, False, False)

    @classmethod
    def point(cls, x) -> "Interval":
        return cls(x, x, True, True)

    @property
    def length(self):
        return self.hi - self.lo

    @property
    def center(self):
        return (self.lo + self.hi) / 2

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x):
        """Vectorised membership test."""
        x = np.asarray(x)
        lo_ok = (x >= self.lo) if self.lo_closed else (x > self.lo)
        hi_ok = (x <= self.hi) if self.hi_closed else (x < self.hi)
        return lo_ok & hi_ok

    def __contains__(self, x) -> bool:
        return bool(self.contains(x))

    def shift(self, t) -> "Interval":
        return Interval(self.lo + t, self.hi + t, self.lo_closed, self.hi_closed)

    def negate(self) -> "Interval":
        return Interval(-self.hi, -self.lo, self.hi_closed, self.lo_closed)

    def to_dict(self) -> dict:
        return {"lo": _plain(self.lo), "hi": _plain(self.hi),
                "lo_closed": self.lo_closed, "hi_closed": self.hi_closed}

    @classmethod
    def from_dict(cls, d: dict) -> "Interval":
        return cls(d["lo"], d["hi"], bool(d.get("lo_closed", True)),
                   bool(d.get("hi_closed", False)))

    def __str__(self):
        return "%s%s, %s%s" % ("[" if self.lo_closed else "(", self.lo, self.hi,
                               "]" if self.hi_closed else ")")


def _plain(v):
    # JSON friendly number
    if isinstance(v, (int, np.integer)):
        return int(v)
    return float(v)


def _touch(a, b, tol) -> bool:
    return a == b or (tol > 0 and abs(a - b) <= tol)


def _merge_sorted(parts: Sequence[Interval], tol) -> list[Interval]:
    out: list[Interval] = []
    for nxt in parts:
        if not out:
            out.append(nxt)
            continue
        cur = out[-1]
        overlap = nxt.lo < cur.hi
        touching = _touch(nxt.lo, cur.hi, tol) and (cur.hi_closed or nxt.lo_closed)
        if not (overlap or touching):
            out.append(nxt)
            continue
        if _touch(nxt.hi, cur.hi, tol):
            hi = max(cur.hi, nxt.hi)
            hi_closed = cur.hi_closed or nxt.hi_closed
        elif nxt.hi > cur.hi:
            hi, hi_closed = nxt.hi, nxt.hi_closed
        else:
            hi, hi_closed = cur.hi, cur.hi_closed
        lo_closed = cur.lo_closed or (nxt.lo_closed and _touch(nxt.lo, cur.lo, tol))
        out[-1] = Interval(cur.lo, hi, lo_closed, hi_closed)
    return out


def normalize(parts: Iterable[Interval], tol: float = MERGE_TOL) -> "IntervalSet":
    """Sort and merge ``parts`` into the unique disjoint normal form."""
    parts = list(parts)
    for p in parts:
        if not isinstance(p, Interval):
            raise InvalidInterval(f"expected Interval, got {type(p).__name__}")
    # closed left ends first at ties so a point merges into a following (a, b)
    parts.sort(key=lambda p: (p.lo, not p.lo_closed))
    return IntervalSet._from_normal(_merge_sorted(parts, tol))


class IntervalSet:
    """Disjoint, sorted union of intervals in normal form.

    Instances are immutable.  Build them with :func:`normalize`,
    :meth:`IntervalSet.of` or the constructor, which normalises its input.
    """

    __slots__ = ("_parts",)

    def __init__(self, parts: Iterable[Interval] = (), tol: float = MERGE_TOL):
        object.__setattr__(self, "_parts", normalize(parts, tol)._parts)

    @classmethod
    def _from_normal(cls, parts) -> "IntervalSet":
        obj = cls.__new__(cls)
        object.__setattr__(obj, "_parts", tuple(parts))
        return obj

    def __setattr__(self, name, value):
        raise AttributeError("IntervalSet is immutable")

    @classmethod
    def of(cls, lo, hi, lo_closed=True, hi_closed=False) -> "IntervalSet":
        return cls._from_normal([Interval(lo, hi, lo_closed, hi_closed)])

    @classmethod
    def closed(cls, lo, hi) -> "IntervalSet":
        return cls.of(lo, hi, True, True)

    @classmethod
    def symmetric(cls, r, closed=True) -> "IntervalSet":
        return cls.of(-r, r, closed, closed)

    @classmethod
    def point(cls, x) -> "IntervalSet":
        return cls.of(x, x, True, True)

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls._from_normal(())

    # container protocol -------------------------------------------------
    @property
    def parts(self) -> tuple[Interval, ...]:
        return self._parts

    def __iter__(self) -> Iterator[Interval]:
        return iter(self._parts)

    def __len__(self) -> int:
        return len(self._parts)

    def __bool__(self) -> bool:
        return bool(self._parts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self._parts == other._parts

    def __hash__(self):
        return hash(self._parts)

    def __repr__(self):
        if not self._parts:
            return "IntervalSet(∅)"
        return "IntervalSet(" + " ∪ ".join(str(p) for p in self._parts) + ")"

    @property
    def is_empty(self) -> bool:
        return not self._parts

    # scalar summaries ---------------------------------------------------
    @property
    def measure(self):
        return sum((p.hi - p.lo for p in self._parts), 0)

    @property
    def lo(self):
        return self._parts[0].lo

    @property
    def hi(self):
        return self._parts[-1].hi

    def hull(self) -> Interval:
        """Smallest closed interval containing the set."""
        if not self._parts:
            raise InvalidInterval("hull of the empty set")
        return Interval.closed(self.lo, self.hi)

    def max_abs(self):
        """sup of |x| over the set."""
        if not self._parts:
            return 0
        return max(abs(self.lo), abs(self.hi))

    def contains(self, x):
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=bool)
        for p in self._parts:
            out |= p.contains(x)
        return out

    def __contains__(self, x) -> bool:
        return any(x in p for p in self._parts)

    # set algebra --------------------------------------------------------
    def union(self, other: "IntervalSet", tol: float = MERGE_TOL) -> "IntervalSet":
        return normalize(self._parts + other._parts, tol)

    __or__ = union

    def intersection(self, other: "IntervalSet", tol: float = MERGE_TOL) -> "IntervalSet":
        out = []
        a, b = self._parts, other._parts
        i = j = 0
        while i < len(a) and j < len(b):
            p, q = a[i], b[j]
            piece = _intersect(p, q)
            if piece is not None:
                out.append(piece)
            # advance whichever ends first
            if p.hi < q.hi or (p.hi == q.hi and not p.hi_closed):
                i += 1
            else:
                j += 1
        return normalize(out, tol)

    __and__ = intersection

    def complement(self, within: Interval, tol: float = MERGE_TOL) -> "IntervalSet":
        """``within`` minus the set."""
        out = []
        cur_lo, cur_closed = within.lo, within.lo_closed
        for p in self._parts:
            if p.hi < within.lo or p.lo > within.hi:
                continue
            gap = _make(cur_lo, p.lo, cur_closed, not p.lo_closed)
            if gap is not None:
                out.append(gap)
            if p.hi > cur_lo or (p.hi == cur_lo and p.hi_closed):
                cur_lo, cur_closed = p.hi, not p.hi_closed
        tail = _make(cur_lo, within.hi, cur_closed, within.hi_closed)
        if tail is not None:
            out.append(tail)
        return normalize(out, tol).intersection(IntervalSet._from_normal([within]), tol)

    def difference(self, other: "IntervalSet", tol: float = MERGE_TOL) -> "IntervalSet":
        if not self._parts:
            return self
        if not other._parts:
            return self
        within = Interval.closed(min(self.lo, other.lo), max(self.hi, other.hi))
        return self.intersection(other.complement(within, tol), tol)

    def issubset(self, other: "IntervalSet", tol: float = 0.0) -> bool:
        """Containment test.

        With ``tol > 0`` leftover pieces no longer than ``tol`` (including
        stray endpoints produced by rounding) are ignored.
        """
        rest = self.difference(other)
        if tol <= 0:
            return rest.is_empty
        return all(p.length <= tol for p in rest)

    def closure(self, tol: float = MERGE_TOL) -> "IntervalSet":
        return normalize([Interval(p.lo, p.hi, True, True) for p in self._parts], tol)

    def interior(self, tol: float = MERGE_TOL) -> "IntervalSet":
        return normalize([Interval(p.lo, p.hi, False, False)
                          for p in self._parts if not p.is_point], tol)

    def shift(self, t) -> "IntervalSet":
        return IntervalSet._from_normal([p.shift(t) for p in self._parts])

    def negate(self) -> "IntervalSet":
        return IntervalSet._from_normal([p.negate() for p in reversed(self._parts)])

    def __neg__(self):
        return self.negate()

    # serialisation ------------------------------------------------------
    def to_json(self) -> list[dict]:
        return [p.to_dict() for p in self._parts]

    @classmethod
    def from_json(cls, data) -> "IntervalSet":
        if isinstance(data, dict):
            data = [data]
        return normalize(Interval.from_dict(d) for d in data)


def _make(lo, hi, lo_closed, hi_closed):
    if lo < hi or (lo == hi and lo_closed and hi_closed):
        return Interval(lo, hi, lo_closed, hi_closed)
    return None


def _intersect(p: Interval, q: Interval):
    if p.lo > q.lo:
        lo, lo_c = p.lo, p.lo_closed
    elif q.lo > p.lo:
        lo, lo_c = q.lo, q.lo_closed
    else:
        lo, lo_c = p.lo, p.lo_closed and q.lo_closed
    if p.hi < q.hi:
        hi, hi_c = p.hi, p.hi_closed
    elif q.hi < p.hi:
        hi, hi_c = q.hi, q.hi_closed
    else:
        hi, hi_c = p.hi, p.hi_closed and q.hi_closed
    return _make(lo, hi, lo_c, hi_c)


def minkowski_sum(A: IntervalSet, B: IntervalSet, tol: float = MERGE_TOL) -> IntervalSet:
    """``{a + b : a in A, b in B}``."""
    parts = []
    for p in A:
        for q in B:
            parts.append(Interval(p.lo + q.lo, p.hi + q.hi,
                                  p.lo_closed and q.lo_closed,
                                  p.hi_closed and q.hi_closed))
    return normalize(parts, tol)


def difference_set(K: IntervalSet, tol: float = MERGE_TOL) -> IntervalSet:
    """``K - K``."""
    return minkowski_sum(K, K.negate(), tol)


def van_hove_boundary(A: IntervalSet, K: IntervalSet, tol: float = MERGE_TOL) -> IntervalSet:
    """K-boundary of a bounded set A.

    ``[(K + cl A) ∩ cl(A^c)] ∪ [(K + cl(A^c)) ∩ cl A]``.  The complement
    of ``A`` is taken inside a closed hull wide enough that the truncation
    never meets either intersectand.  An empty ``K`` gives the empty set.
    """
    if A.is_empty or K.is_empty:
        return IntervalSet.empty()
    span = (A.hi - A.lo) + K.max_abs() + 1
    hull = Interval.closed(A.lo - span, A.hi + span)
    clA = A.closure(tol)
    clAc = A.complement(hull, tol).closure(tol)
    left = minkowski_sum(K, clA, tol).intersection(clAc, tol)
    right = minkowski_sum(K, clAc, tol).intersection(clA, tol)
    return left.union(right, tol)


def indicator_fourier(K: IntervalSet, t):
    """``∫_K exp(-2πi ξ t) dξ``, vectorised over ``t``.

    Each part contributes ``(b-a) exp(-πi(a+b)t) sinc((b-a)t)``, which is
    the closed form with the ``t -> 0`` limit built in.
    """
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape, dtype=complex)
    for p in K:
        a, b = float(p.lo), float(p.hi)
        out += (b - a) * np.exp(-1j * np.pi * (a + b) * t) * np.sinc((b - a) * t)
    return out if out.ndim else complex(out)


def as_interval_set(x) -> IntervalSet:
    """Coerce an Interval, IntervalSet, (lo, hi) pair or JSON list."""
    if isinstance(x, IntervalSet):
        return x
    if isinstance(x, Interval):
        return IntervalSet._from_normal([x])
    if isinstance(x, dict) or (isinstance(x, (list, tuple)) and x and isinstance(x[0], dict)):
        return IntervalSet.from_json(x)
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return IntervalSet.of(x[0], x[1])
    raise InvalidInterval(f"cannot interpret {x!r} as an interval set")
