"""Weight functions with closed-form Fourier transforms.

Transforms use ``f̂(k) = ∫ f(y) exp(-2πi k y) dy``; the inverse transform
``f̌(k) = f̂(-k)`` equals ``conj(f̂(k))`` for the real functions defined here.

Each function also reports how it decays, which is what the lattice sums
need to bound their truncation error: either a compact support or an
:class:`Envelope` ``|f(x)| <= min(sup, C / |x - c|^p)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidSmoothing, InvalidInterval
from .intervals import IntervalSet, as_interval_set, minkowski_sum, van_hove_boundary


@dataclass(frozen=True)
class Envelope:
    """Radial majorant ``r -> min(sup, C / r**power)`` on ``r >= 0``."""

    sup: float
    C: float
    power: float

    def __post_init__(self):
        if self.power <= 1:
            raise ValueError("envelopes must decay faster than 1/r")

    @property
    def knee(self) -> float:
        """Radius where the two branches meet."""
        if self.C <= 0:
            return 0.0
        return (self.C / self.sup) ** (1.0 / self.power)

    def __call__(self, r):
        r = np.abs(np.asarray(r, dtype=float))
        with np.errstate(divide="ignore", over="ignore"):
            decay = np.where(r > 0, self.C / np.maximum(r, 1e-300) ** self.power, np.inf)
        return np.minimum(self.sup, decay)

    def tail_integral(self, R: float) -> float:
        """``∫_R^∞ env(r) dr`` for ``R >= 0``."""
        R = max(float(R), 0.0)
        p = self.power
        r0 = self.knee
        if self.C <= 0:
            return 0.0
        if R >= r0:
            return self.C / ((p - 1) * R ** (p - 1))
        return self.sup * (r0 - R) + self.C / ((p - 1) * r0 ** (p - 1))

    def radius_for(self, level: float) -> float:
        """Smallest radius beyond which ``env <= level``."""
        if level >= self.sup or self.C <= 0:
            return 0.0
        return (self.C / level) ** (1.0 / self.power)

    def scaled(self, factor: float) -> "Envelope":
        return Envelope(self.sup * factor, self.C * factor, self.power)


class WeightFunction:
    """Base class.  Subclasses implement ``evaluate`` and ``fourier``."""

    kind = "abstract"

    def evaluate(self, y):
        raise NotImplementedError

    def __call__(self, y):
        return self.evaluate(y)

    def fourier(self, k):
        raise NotImplementedError

    def inverse_fourier(self, k):
        return self.fourier(-np.asarray(k, dtype=float))

    @property
    def integral(self) -> float:
        return float(np.real(self.fourier(0.0)))

    def sup_norm(self) -> float:
        """Upper bound for ``max |f|``."""
        raise NotImplementedError

    # decay certificates ---------------------------------------------------
    def support(self) -> Optional[tuple[float, float]]:
        """Closed interval containing the support, or None if unbounded."""
        return None

    def envelope(self) -> Optional[tuple[float, Envelope]]:
        """``(center, env)`` with ``|f(x)| <= env(|x - center|)``."""
        return None

    def fourier_support(self) -> Optional[tuple[float, float]]:
        return None

    def fourier_envelope(self) -> Optional[Envelope]:
        """Radial majorant of ``|f̂|`` about 0."""
        return None

    def to_dict(self) -> dict:
        raise NotImplementedError


def _boxes_fourier(parts, k):
    """Transform of a sum of box indicators; real dtype when the sum is even."""
    k = np.asarray(k, dtype=float)
    even = _is_even(parts)
    out = np.zeros(k.shape, dtype=float if even else complex)
    for a, b in parts:
        if even:
            if a + b <= 0:  # mirror images are paired up
                out += (b - a) * np.cos(np.pi * (a + b) * k) * np.sinc((b - a) * k) * (1 if a + b == 0 else 2)
        else:
            out += (b - a) * np.exp(-1j * np.pi * (a + b) * k) * np.sinc((b - a) * k)
    return out


def _is_even(parts) -> bool:
    ends = sorted(parts)
    mirrored = sorted((-b, -a) for a, b in parts)
    return ends == mirrored


def _cx(out):
    return out if np.ndim(out) else complex(out)


class Indicator(WeightFunction):
    kind = "indicator"

    def __init__(self, window):
        self.window = as_interval_set(window)

    def evaluate(self, y):
        return self.window.contains(y).astype(float)

    def fourier(self, k):
        return _cx(_boxes_fourier([(float(p.lo), float(p.hi)) for p in self.window], k))

    def sup_norm(self):
        return 0.0 if self.window.is_empty else 1.0

    def support(self):
        if self.window.is_empty:
            return (0.0, 0.0)
        return (float(self.window.lo), float(self.window.hi))

    def to_dict(self):
        return {"kind": self.kind, "window": self.window.to_json()}

    def __repr__(self):
        return f"Indicator({self.window!r})"


class _SmoothedBoxes(WeightFunction):
    """``1_E * φ_U`` with ``φ_U = (1/2u) 1_[-u,u]`` and E a finite union."""

    def __init__(self, core: IntervalSet, u: float):
        self.u = float(u)
        self.core = core
        self._parts = [(float(p.lo), float(p.hi)) for p in core if p.hi > p.lo]

    def evaluate(self, y):
        y = np.asarray(y, dtype=float)
        u = self.u
        out = np.zeros(y.shape)
        for a, b in self._parts:
            inside = (y - u >= a) & (y + u <= b)
            out += np.where(inside, 2 * u, np.clip(np.minimum(y + u, b) - np.maximum(y - u, a), 0.0, None))
        # exact 1 on plateaus; clipping removes rounding above 1
        out = np.minimum(out / (2 * u), 1.0)
        return out if out.ndim else float(out)

    def fourier(self, k):
        k = np.asarray(k, dtype=float)
        return _cx(_boxes_fourier(self._parts, k) * np.sinc(2 * self.u * k))

    def sup_norm(self):
        # average of an indicator over a window of width 2u
        return 1.0 if self._parts else 0.0

    def support(self):
        if not self._parts:
            return (0.0, 0.0)
        return (self._parts[0][0] - self.u, self._parts[-1][1] + self.u)

    def fourier_envelope(self):
        # each box gives |sin(π L k)/(π k)| |sinc(2uk)| <= 1/(2π² u k²)
        sup = sum(b - a for a, b in self._parts)
        return Envelope(sup, len(self._parts) / (2 * np.pi ** 2 * self.u), 2.0)


class OuterTrapezoid(_SmoothedBoxes):
    """Smooth majorant of ``1_W``: ``1_{W+[-u,u]} * φ_U``.

    Equals 1 on W and vanishes at distance ``>= 2u`` from W.
    """

    kind = "outer_trapezoid"

    def __init__(self, window, u: float):
        if not u > 0:
            raise InvalidSmoothing(f"smoothing u must be positive, got {u}")
        self.window = as_interval_set(window)
        core = minkowski_sum(self.window, IntervalSet.closed(-u, u)) if self.window else self.window
        super().__init__(core, u)

    @classmethod
    def centered(cls, w: float, u: float, center: float = 0.0) -> "OuterTrapezoid":
        return cls(IntervalSet.closed(center - w, center + w), u)

    def to_dict(self):
        return {"kind": self.kind, "window": self.window.to_json(), "u": self.u}

    def __repr__(self):
        return f"OuterTrapezoid({self.window!r}, u={self.u})"


class InnerTrapezoid(_SmoothedBoxes):
    """Smooth minorant of ``1_W``: ``1_{W \\ ∂^U W} * φ_U``.

    For ``W = [-w, w]`` this is 1 on ``|y| <= w - 2u`` and 0 off W.
    """

    kind = "inner_trapezoid"

    def __init__(self, window, u: float):
        if not u > 0:
            raise InvalidSmoothing(f"smoothing u must be positive, got {u}")
        self.window = as_interval_set(window)
        if self.window.is_empty:
            raise InvalidSmoothing("empty window")
        core = self.window.difference(van_hove_boundary(self.window, IntervalSet.closed(-u, u)))
        if core.measure <= 0:
            raise InvalidSmoothing(f"smoothing u={u} swallows the window {self.window!r}")
        super().__init__(core, u)

    @classmethod
    def centered(cls, w: float, u: float, center: float = 0.0) -> "InnerTrapezoid":
        if not 0 < u < w:
            raise InvalidSmoothing(f"need 0 < u < w, got u={u}, w={w}")
        return cls(IntervalSet.closed(center - w, center + w), u)

    def to_dict(self):
        return {"kind": self.kind, "window": self.window.to_json(), "u": self.u}

    def __repr__(self):
        return f"InnerTrapezoid({self.window!r}, u={self.u})"


class Triangle(WeightFunction):
    """``height * max(0, 1 - |x|/a)``; positive definite, ``f̂ = height a sinc²(a k)``."""

    kind = "triangle"

    def __init__(self, half_width: float, height: float = 1.0):
        if not half_width > 0:
            raise InvalidSmoothing("triangle half-width must be positive")
        self.a = float(half_width)
        self.height = float(height)

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        out = self.height * np.clip(1 - np.abs(x) / self.a, 0.0, None)
        return out if out.ndim else float(out)

    def fourier(self, k):
        k = np.asarray(k, dtype=float)
        out = (self.height * self.a * np.sinc(self.a * k) ** 2).astype(complex)
        return _cx(out)

    @property
    def half_width(self) -> float:
        return self.a

    @property
    def l2_norm_sq(self) -> float:
        return 2 * self.a * self.height ** 2 / 3

    def sup_norm(self):
        return abs(self.height)

    def support(self):
        return (-self.a, self.a)

    def fourier_envelope(self):
        return Envelope(self.height * self.a, self.height / (np.pi ** 2 * self.a), 2.0)

    def to_dict(self):
        return {"kind": self.kind, "half_width": self.a, "height": self.height}


def _tri_autocorr(s):
    """``(Λ * Λ)(s)`` for the unit triangle Λ."""
    s = np.abs(s)
    inner = 2.0 / 3.0 - s ** 2 + s ** 3 / 2
    outer = (2 - s) ** 3 / 6
    return np.where(s <= 1, inner, np.where(s <= 2, outer, 0.0))


class FejerAverager(WeightFunction):
    """``g_n = |v̂_n|² / ||v̂_n||²`` for the triangle ``v_n`` of half-width 1/n, height n.

    ``g_n(x) = (3 / 2n) sinc⁴(x / n)``; integral 1; its transform is
    ``1.5 (Λ*Λ)(n |k|)``, supported in ``[-2/n, 2/n]`` with value 1 at 0.
    """

    kind = "fejer"

    def __init__(self, n: float):
        if not n > 0:
            raise InvalidSmoothing("Fejér scale must be positive")
        self.n = n

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        out = 1.5 / self.n * np.sinc(x / self.n) ** 4
        return out if out.ndim else float(out)

    def fourier(self, k):
        k = np.asarray(k, dtype=float)
        return _cx((1.5 * _tri_autocorr(self.n * k)).astype(complex))

    def sup_norm(self):
        return 1.5 / self.n

    def envelope(self):
        n = self.n
        return 0.0, Envelope(1.5 / n, 1.5 * n ** 3 / np.pi ** 4, 4.0)

    def fourier_support(self):
        return (-2.0 / self.n, 2.0 / self.n)

    def to_dict(self):
        return {"kind": self.kind, "n": self.n}


def fejer_pair(n: int) -> tuple[Triangle, FejerAverager]:
    """The triangle ``v_n`` and its normalised averager ``g_n``."""
    if n < 1:
        raise InvalidSmoothing("n must be >= 1")
    return Triangle(1.0 / n, float(n)), FejerAverager(n)


# ---------------------------------------------------------------------------
# transformations


class Shifted(WeightFunction):
    """``x -> f(x - s)``."""

    def __init__(self, base: WeightFunction, s: float):
        self.base, self.s = base, float(s)
        self.kind = base.kind

    def evaluate(self, x):
        return self.base.evaluate(np.asarray(x, dtype=float) - self.s)

    def fourier(self, k):
        k = np.asarray(k, dtype=float)
        return _cx(np.exp(-2j * np.pi * k * self.s) * self.base.fourier(k))

    def sup_norm(self):
        return self.base.sup_norm()

    def support(self):
        sp = self.base.support()
        return None if sp is None else (sp[0] + self.s, sp[1] + self.s)

    def envelope(self):
        e = self.base.envelope()
        return None if e is None else (e[0] + self.s, e[1])

    def fourier_support(self):
        return self.base.fourier_support()

    def fourier_envelope(self):
        return self.base.fourier_envelope()

    def to_dict(self):
        d = dict(self.base.to_dict())
        d["shift"] = self.s + d.get("shift", 0.0)
        return d


class Scaled(WeightFunction):
    """``x -> c f(x)`` for real ``c``."""

    def __init__(self, base: WeightFunction, c: float):
        self.base, self.c = base, float(c)
        self.kind = base.kind

    def evaluate(self, x):
        return self.c * self.base.evaluate(x)

    def fourier(self, k):
        return self.c * self.base.fourier(k)

    def sup_norm(self):
        return abs(self.c) * self.base.sup_norm()

    def support(self):
        return self.base.support()

    def envelope(self):
        e = self.base.envelope()
        return None if e is None else (e[0], e[1].scaled(abs(self.c)))

    def fourier_support(self):
        return self.base.fourier_support()

    def fourier_envelope(self):
        e = self.base.fourier_envelope()
        return None if e is None else e.scaled(abs(self.c))

    def to_dict(self):
        d = dict(self.base.to_dict())
        d["scale"] = self.c * d.get("scale", 1.0)
        return d


class Dilated(WeightFunction):
    """``x -> f(x / σ)`` for ``σ > 0``."""

    def __init__(self, base: WeightFunction, sigma: float):
        if not sigma > 0:
            raise ValueError("dilation factor must be positive")
        self.base, self.sigma = base, float(sigma)
        self.kind = base.kind

    def evaluate(self, x):
        return self.base.evaluate(np.asarray(x, dtype=float) / self.sigma)

    def fourier(self, k):
        return self.sigma * self.base.fourier(self.sigma * np.asarray(k, dtype=float))

    def sup_norm(self):
        return self.base.sup_norm()

    def support(self):
        sp = self.base.support()
        return None if sp is None else (sp[0] * self.sigma, sp[1] * self.sigma)

    def envelope(self):
        e = self.base.envelope()
        if e is None:
            return None
        c, env = e
        return c * self.sigma, Envelope(env.sup, env.C * self.sigma ** env.power, env.power)

    def fourier_support(self):
        sp = self.base.fourier_support()
        return None if sp is None else (sp[0] / self.sigma, sp[1] / self.sigma)

    def fourier_envelope(self):
        e = self.base.fourier_envelope()
        if e is None:
            return None
        s = self.sigma
        return Envelope(s * e.sup, e.C * s ** (1 - e.power), e.power)

    def to_dict(self):
        d = dict(self.base.to_dict())
        d["dilation"] = self.sigma
        return d


# ---------------------------------------------------------------------------
# config round trip


def _window_from(d: dict) -> IntervalSet:
    if "window" in d:
        return as_interval_set(d["window"])
    if "w" in d:
        c = float(d.get("center", 0.0))
        w = float(d["w"])
        if not w > 0:
            raise InvalidInterval("half-width w must be positive")
        return IntervalSet.closed(c - w, c + w)
    raise InvalidInterval("weight needs either 'window' or 'w'")


def weight_from_dict(d: dict) -> WeightFunction:
    """Build a weight from its config mapping, e.g. ``{"kind": "outer_trapezoid", "w": 1, "u": 0.25}``."""
    kind = d.get("kind")
    if kind == "indicator":
        f: WeightFunction = Indicator(_window_from(d))
    elif kind == "outer_trapezoid":
        f = OuterTrapezoid(_window_from(d), float(d["u"]))
    elif kind == "inner_trapezoid":
        f = InnerTrapezoid(_window_from(d), float(d["u"]))
    elif kind == "fejer":
        f = FejerAverager(d["n"])
    elif kind == "triangle":
        f = Triangle(float(d["half_width"]), float(d.get("height", 1.0)))
    else:
        raise ValueError(f"unknown weight kind {kind!r}")
    if "dilation" in d:
        f = Dilated(f, float(d["dilation"]))
    if "scale" in d:
        f = Scaled(f, float(d["scale"]))
    if d.get("shift"):
        f = Shifted(f, float(d["shift"]))
    if d.get("modulation"):
        f = Modulated(f, float(d["modulation"]))
    return f


class Modulated(WeightFunction):
    """``x -> exp(-2πi χ x) f(x)``; complex valued."""

    def __init__(self, base: WeightFunction, chi: float):
        self.base, self.chi = base, float(chi)
        self.kind = base.kind

    def evaluate(self, x):
        x = np.asarray(x, dtype=float)
        return np.exp(-2j * np.pi * self.chi * x) * self.base.evaluate(x)

    def fourier(self, k):
        return self.base.fourier(np.asarray(k, dtype=float) + self.chi)

    def sup_norm(self):
        return self.base.sup_norm()

    def support(self):
        return self.base.support()

    def envelope(self):
        return self.base.envelope()

    def fourier_support(self):
        sp = self.base.fourier_support()
        return None if sp is None else (sp[0] - self.chi, sp[1] - self.chi)

    def to_dict(self):
        d = dict(self.base.to_dict())
        d["modulation"] = self.chi
        return d
