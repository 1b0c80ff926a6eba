"""Explicit stability constants for sampling and interpolation.

Four certificates are computed from exact lattice sums plus rigorous tails:

* ``sampling_upper``  ``dens(L) Σ_{χ in K-K} |ȟ(η)|`` with ``h >= 1_W``,
* ``sampling_lower``  ``dens(L) (ȟ_W(0) - Σ_{χ in K-K, η != 0} |ȟ_W(η)|)`` with ``h_W <= 1_W``,
* ``interp_lower``    ``ĝ_K(0) - Σ_{x in Λ_{W-W}, x != 0} |ĝ_K(x)|`` with ``g_K <= 1_K``,
* ``interp_upper``    ``||v||² / ε²`` for a triangle ``v`` with disjoint translates.

Tails are added to upper bounds and subtracted from lower bounds, so every
certificate stays valid.  The closed-form centred-interval versions and
their optimal smoothing parameters are provided alongside.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.optimize import minimize_scalar

from .combs import strip_min_gap, strip_tail
from .errors import NotUniformlyDiscrete
from .intervals import IntervalSet, as_interval_set, difference_set
from .scheme import LATTICE_TOL, LatticeScheme, ProjectionSet, annihilator, box_points
from .weights import InnerTrapezoid, OuterTrapezoid, Triangle

GAP_EPS = 1e-6

SAMPLING_UPPER = "SamplingUpper"
SAMPLING_LOWER = "SamplingLower"
INTERP_UPPER = "InterpUpper"
INTERP_LOWER = "InterpLower"


@dataclass
class BoundCertificate:
    kind: str
    value: float
    positive: bool
    ingredients: dict = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)

    @property
    def is_lower(self) -> bool:
        return self.kind in (SAMPLING_LOWER, INTERP_LOWER)

    def recompute(self) -> float:
        """Value rebuilt from the stored ingredients."""
        ing = self.ingredients
        if self.kind == INTERP_UPPER:
            return ing["norm_sq"] / ing["epsilon"] ** 2
        scale = ing.get("density", 1.0)
        if self.is_lower:
            return scale * (ing["main"] - ing["correction"] - ing["tail"])
        return scale * (ing["main"] + ing["correction"] + ing["tail"])

    def to_dict(self) -> dict:
        return {"kind": self.kind, "value": self.value, "positive": self.positive,
                "ingredients": _jsonable(self.ingredients),
                "parameters": _jsonable(self.parameters)}


def _jsonable(d):
    out = {}
    for k, v in d.items():
        if isinstance(v, IntervalSet):
            out[k] = v.to_json()
        elif isinstance(v, (np.floating, np.integer)):
            out[k] = v.item()
        elif isinstance(v, dict):
            out[k] = _jsonable(v)
        elif isinstance(v, np.ndarray):
            out[k] = v.tolist()
        else:
            out[k] = v
    return out


# ---------------------------------------------------------------------------
# closed forms for centred intervals


def upper_envelope(w: float, u: float, b: float, dens: float = 1.0) -> float:
    """``dens (2(w+u) + 1/(8 u b²))``."""
    return dens * (2 * (w + u) + 1.0 / (8 * u * b * b))


def lower_envelope(w: float, u: float, b: float, dens: float = 1.0) -> float:
    """``dens (2(w-u) - 1/(8 u b²))``."""
    return dens * (2 * (w - u) - 1.0 / (8 * u * b * b))


def optimal_smoothing(b: float) -> float:
    """Minimiser ``u = 1/(4b)`` of the upper envelope (and maximiser of the lower one)."""
    return 1.0 / (4 * b)


def minimize_upper_envelope(w: float, b: float, dens: float = 1.0):
    """Numerically minimise the upper envelope over ``u > 0``; returns ``(u, value)``."""
    f = lambda t: upper_envelope(w, math.exp(t), b, dens)
    t0 = math.log(optimal_smoothing(b))
    res = minimize_scalar(f, bracket=(t0 - 5, t0 + 5), method="brent", tol=1e-12)
    return math.exp(res.x), float(res.fun)


def maximize_lower_envelope(w: float, b: float, dens: float = 1.0):
    """Numerically maximise the lower envelope over ``0 < u < w``; returns ``(u, value)``."""
    f = lambda t: -lower_envelope(w, w / (1 + math.exp(-t)), b, dens)
    res = minimize_scalar(f, bounds=(-40, 40), method="bounded", options={"xatol": 1e-10})
    u = w / (1 + math.exp(-res.x))
    return u, float(-res.fun)


def lower_envelope_positive(w: float, b: float) -> bool:
    """Exact frontier of the maximised lower envelope: ``2 w b > 1``."""
    return 2 * w * b > 1


# ---------------------------------------------------------------------------
# strips of the dual lattice


def _swap(B):
    return np.ascontiguousarray(np.asarray(B)[::-1])


def _strip_abs_sum(B, band: IntervalSet, f_abs: Callable, env, radius: float):
    """Sum ``f_abs(second coord)`` over lattice points whose first coordinate
    lies in ``band``, split into the origin term and the rest, plus tail."""
    lo, hi = float(band.lo), float(band.hi)
    p, q, a, b = box_points(B, (lo, hi), (-radius, radius))
    keep = band.contains(a)
    p, q, a, b = p[keep], q[keep], a[keep], b[keep]
    origin = (p == 0) & (q == 0)
    others = ~origin
    vals = f_abs(b[others])
    width = hi - lo
    tail = strip_tail(B, width, env, radius)
    collisions = int(np.sum(others & (np.abs(b) <= LATTICE_TOL * (1 + radius))))
    return {"correction": float(np.sum(vals)), "tail": float(tail),
            "n_terms": int(others.sum()), "collisions": collisions,
            "delta": float(strip_min_gap(B, width))}


def _band(S) -> IntervalSet:
    S = as_interval_set(S)
    return difference_set(S)


def sampling_upper(scheme: LatticeScheme, W, K, u: float, radius: float = 1000.0) -> BoundCertificate:
    """Upper sampling constant for ``Λ_W`` and ``PW_K`` with ``h = OuterTrapezoid(W, u)``."""
    W, K = as_interval_set(W), as_interval_set(K)
    h = OuterTrapezoid(W, u)
    dual = annihilator(scheme)
    band = _band(K)
    env = h.fourier_envelope()
    s = _strip_abs_sum(dual.basis, band, lambda eta: np.abs(h.inverse_fourier(eta)), env, radius)
    main = h.integral
    dens = scheme.density
    value = dens * (main + s["correction"] + s["tail"])
    b = s["delta"] / 2 * (1 - GAP_EPS)
    ing = {"density": dens, "main": main, "correction": s["correction"], "tail": s["tail"],
           "u": float(u), "b": b, "n_terms": s["n_terms"]}
    if b > 0:
        ing["envelope_correction"] = 1.0 / (8 * u * b * b)
        ing["envelope_value"] = dens * (main + ing["envelope_correction"])
    if s["collisions"]:
        ing["warning"] = f"{s['collisions']} dual points share the internal coordinate 0"
    return BoundCertificate(SAMPLING_UPPER, float(value), True, ing,
                            {"W": W, "K": K, "scheme": scheme.to_dict(), "radius": radius})


def sampling_lower(scheme: LatticeScheme, K, W, u: float, radius: float = 1000.0) -> BoundCertificate:
    """Lower sampling constant for ``Λ_W`` and ``PW_K`` with ``h_W = InnerTrapezoid(W, u)``."""
    W, K = as_interval_set(W), as_interval_set(K)
    h = InnerTrapezoid(W, u)
    dual = annihilator(scheme)
    band = _band(K)
    env = h.fourier_envelope()
    s = _strip_abs_sum(dual.basis, band, lambda eta: np.abs(h.inverse_fourier(eta)), env, radius)
    main = h.integral
    dens = scheme.density
    value = dens * (main - s["correction"] - s["tail"])
    b = s["delta"] / 2 * (1 - GAP_EPS)
    ing = {"density": dens, "main": main, "correction": s["correction"], "tail": s["tail"],
           "u": float(u), "b": b, "n_terms": s["n_terms"]}
    ok = s["collisions"] == 0 and b > 0
    if b > 0:
        ing["envelope_correction"] = 1.0 / (8 * u * b * b)
        ing["envelope_value"] = dens * (main - ing["envelope_correction"])
    if not ok:
        ing["warning"] = "no zero neighbourhood isolates the origin of the dual projection"
    return BoundCertificate(SAMPLING_LOWER, float(value), bool(ok and value > 0), ing,
                            {"W": W, "K": K, "scheme": scheme.to_dict(), "radius": radius})


def interp_lower(scheme: LatticeScheme, W, K, v: float, radius: float = 1000.0) -> BoundCertificate:
    """Lower interpolation (Riesz) constant for ``Λ_W`` and ``PW_K``.

    Uses ``g_K = InnerTrapezoid(K, v)`` on the frequency side and sums
    ``|ĝ_K|`` over the nonzero points of ``Λ_{W-W}``.
    """
    W, K = as_interval_set(W), as_interval_set(K)
    g = InnerTrapezoid(K, v)
    band = _band(W)
    env = g.fourier_envelope()
    s = _strip_abs_sum(_swap(scheme.basis), band, lambda x: np.abs(g.fourier(x)), env, radius)
    main = g.integral
    value = main - s["correction"] - s["tail"]
    ok = s["collisions"] == 0
    ing = {"main": main, "correction": s["correction"], "tail": s["tail"], "v": float(v),
           "b": s["delta"] / 2 * (1 - GAP_EPS), "n_terms": s["n_terms"]}
    if not ok:
        ing["warning"] = "lattice points other than 0 project to 0"
    return BoundCertificate(INTERP_LOWER, float(value), bool(ok and value > 0), ing,
                            {"W": W, "K": K, "scheme": scheme.to_dict(), "radius": radius})


def mirror_scheme(scheme: LatticeScheme) -> LatticeScheme:
    """Scheme whose annihilator is ``scheme``'s lattice with coordinates swapped.

    ``interp_lower(s, W, K, v) == dens(s) * sampling_lower(mirror_scheme(s), W, K, v)``.
    """
    return LatticeScheme(np.linalg.inv(_swap(scheme.basis)).T, scheme.det_floor)


@lru_cache(maxsize=1)
def _best_triangle_ratio() -> float:
    # minimiser of 1 / (t sinc(t)^4) on (0, 1)
    res = minimize_scalar(lambda t: 1.0 / (t * np.sinc(t) ** 4), bounds=(1e-3, 0.99),
                          method="bounded", options={"xatol": 1e-12})
    return float(res.x)


def interp_upper(points, K, tol: float = LATTICE_TOL, max_retries: int = 20) -> BoundCertificate:
    """Upper interpolation constant ``||v||² / ε²`` for a uniformly discrete set.

    ``v`` is the triangle of half-width ``a <= δ/2`` (δ the minimal gap), so
    its translates to the points have disjoint supports; ``ε = min_K v̂``.
    """
    K = as_interval_set(K)
    x = points.x if isinstance(points, ProjectionSet) else np.sort(np.asarray(points, float))
    if len(x) >= 2:
        delta = float(np.min(np.diff(x)))
    else:
        delta = math.inf
    if not delta > tol:
        raise NotUniformlyDiscrete(f"minimal gap {delta:.3e} <= {tol}")
    k = float(K.max_abs())
    a = delta / 2 if k == 0 else min(delta / 2, _best_triangle_ratio() / k)
    if not math.isfinite(a):
        a = 1.0
    for _ in range(max_retries):
        v = Triangle(a, 1.0 / a)
        grid = np.concatenate([np.linspace(float(p.lo), float(p.hi), 257) for p in K]) if K else np.zeros(1)
        eps = float(min(np.min(np.real(v.fourier(grid))), np.real(v.fourier(k)), np.real(v.fourier(-k))))
        if eps > 0:
            break
        a /= 2
    else:
        raise NotUniformlyDiscrete("could not find a triangle with positive transform on K")
    value = v.l2_norm_sq / eps ** 2
    ing = {"norm_sq": v.l2_norm_sq, "epsilon": eps, "half_width": a, "min_gap": delta}
    return BoundCertificate(INTERP_UPPER, float(value), True, ing, {"K": K, "n_points": len(x)})


def default_smoothing(scheme: LatticeScheme, W, K):
    """``(u, v)`` near ``1/(4b)`` on the dual and primal sides, capped at
    ``0.45`` of the smoothed set's measure so the inner trapezoids keep a core."""
    W, K = as_interval_set(W), as_interval_set(K)
    KK, WW = _band(K), _band(W)
    b_dual = strip_min_gap(annihilator(scheme).basis, float(KK.hi - KK.lo)) / 2
    b_primal = strip_min_gap(_swap(scheme.basis), float(WW.hi - WW.lo)) / 2
    u = min(optimal_smoothing(b_dual) if b_dual > 0 else math.inf, 0.45 * float(W.measure))
    v = min(optimal_smoothing(b_primal) if b_primal > 0 else math.inf, 0.45 * float(K.measure))
    return float(u), float(v)


# ---------------------------------------------------------------------------
# search helpers


def grow_until_positive(make: Callable[[float], BoundCertificate], start: float,
                        factor: float = 2.0, cap: float = 2.0 ** 15):
    """Grow a half-width geometrically until ``make(half_width)`` is positive.

    Returns ``(half_width, certificate)``; ``half_width`` is None when the
    cap ``cap * start`` is reached without success.
    """
    r = float(start)
    cert = make(r)
    while not cert.positive:
        r *= factor
        if r > cap * start:
            return None, cert
        cert = make(r)
    return r, cert


def grow_window_for_sampling(scheme: LatticeScheme, K, w0: float, radius: float = 1000.0):
    """Smallest ``w = w0 2^j`` for which ``sampling_lower(K, [-w, w])`` is positive."""
    K = as_interval_set(K)
    dual = annihilator(scheme)
    band = _band(K)
    b = strip_min_gap(dual.basis, float(band.hi - band.lo)) / 2

    def make(w):
        u = min(optimal_smoothing(b), w / 2) if b > 0 else w / 2
        return sampling_lower(scheme, K, IntervalSet.closed(-w, w), u, radius)

    return grow_until_positive(make, w0)


def grow_spectrum_for_interpolation(scheme: LatticeScheme, W, k0: float, radius: float = 1000.0):
    """Smallest ``k = k0 2^j`` for which ``interp_lower(W, [-k, k])`` is positive."""
    W = as_interval_set(W)
    band = _band(W)
    b = strip_min_gap(_swap(scheme.basis), float(band.hi - band.lo)) / 2

    def make(k):
        v = min(optimal_smoothing(b), k / 2) if b > 0 else k / 2
        return interp_lower(scheme, W, IntervalSet.closed(-k, k), v, radius)

    return grow_until_positive(make, k0)
