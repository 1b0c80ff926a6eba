"""Finite-truncation estimates of frame and Riesz constants.

Two numerical proxies are used on growing symmetric truncations ``[-T, T]``:

* the interpolation Gram matrix ``G[j, l] = ∫_K exp(2πi (λ_l - λ_j) ξ) dξ``,
  whose extreme eigenvalues are the Riesz constants of the exponentials
  ``e_λ`` restricted to K;
* the sampling quotient ``Σ_λ |f(λ)|² / ||f̂||²`` over a trial space of
  functions with ``f̂`` supported on K.  The trial space is spanned by sine
  modes on each part of K, and its size grows with T so that the trial
  functions stay concentrated well inside the truncation.

Both traces are compared against Landau's density thresholds in
:func:`duality_experiment`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import LinAlgError, eigh, eigvalsh

from .errors import DuplicateNode, QuadratureError, TooLarge
from .intervals import Interval, IntervalSet, as_interval_set, indicator_fourier
from .scheme import LATTICE_TOL, LatticeScheme, ProjectionSet, dual_projection, enumerate_strip

MAX_GRAM = 2000
DEFAULT_TRUNCATIONS = (50.0, 100.0, 200.0, 400.0)


def _positions(points) -> np.ndarray:
    if isinstance(points, ProjectionSet):
        return np.asarray(points.x, float)
    return np.sort(np.asarray(points, dtype=float).ravel())


def _check_nodes(x: np.ndarray, tol: float) -> None:
    if x.size >= 2:
        d = np.diff(x)
        i = int(np.argmin(d))
        if d[i] <= tol:
            raise DuplicateNode(f"nodes {x[i]!r} and {x[i + 1]!r} coincide to {tol}")


def interpolation_gram(points, K, tol: float = LATTICE_TOL) -> np.ndarray:
    """Hermitian Gram matrix with ``φ* G φ = ||1_K Σ φ_j e_{λ_j}||²``."""
    K = as_interval_set(K)
    x = _positions(points)
    if x.size > MAX_GRAM:
        raise TooLarge(f"{x.size} nodes exceed the Gram cap {MAX_GRAM}")
    _check_nodes(x, tol)
    G = indicator_fourier(K, x[:, None] - x[None, :])
    return 0.5 * (G + G.conj().T)


def eig_extremes(G: np.ndarray) -> tuple[float, float]:
    """Smallest and largest eigenvalue of a Hermitian matrix."""
    if G.shape[0] == 0:
        return math.nan, math.nan
    if G.shape[0] > MAX_GRAM:
        raise TooLarge(f"matrix of order {G.shape[0]} exceeds {MAX_GRAM}")
    ev = eigvalsh(G)
    return float(ev[0]), float(ev[-1])


@dataclass
class FrameEstimate:
    """Extreme eigenvalues at one truncation level."""

    truncation: float
    lam_min: float
    lam_max: float
    n_points: int
    n_modes: Optional[int] = None
    n_nodes: Optional[int] = None

    def to_dict(self) -> dict:
        d = {"truncation": self.truncation, "lam_min": self.lam_min,
             "lam_max": self.lam_max, "n_points": self.n_points}
        if self.n_modes is not None:
            d["n_modes"] = self.n_modes
            d["n_nodes"] = self.n_nodes
        return d


@dataclass
class FrameTrace:
    """Estimates over nested truncations.

    For the Gram matrix the traces are monotone by eigenvalue interlacing:
    ``lam_min`` can only decrease and ``lam_max`` only increase.
    """

    kind: str
    levels: list = field(default_factory=list)

    @property
    def lam_min(self) -> np.ndarray:
        return np.array([e.lam_min for e in self.levels])

    @property
    def lam_max(self) -> np.ndarray:
        return np.array([e.lam_max for e in self.levels])

    @property
    def last(self) -> FrameEstimate:
        return self.levels[-1]

    def monotone(self, rtol: float = 1e-9) -> bool:
        lo, hi = self.lam_min, self.lam_max
        slack = rtol * max(1.0, float(np.max(np.abs(hi))) if hi.size else 1.0)
        return bool(np.all(np.diff(lo) <= slack) and np.all(np.diff(hi) >= -slack))

    def stable(self, threshold: float) -> bool:
        """``lam_min >= threshold`` at every level."""
        return bool(self.levels) and bool(np.all(self.lam_min >= threshold))

    def to_dict(self) -> dict:
        return {"kind": self.kind, "levels": [e.to_dict() for e in self.levels]}


def gram_trace(provider: Callable[[Interval], object], K, truncations=DEFAULT_TRUNCATIONS) -> FrameTrace:
    """Gram extremes of ``provider([-T, T])`` for each truncation T."""
    K = as_interval_set(K)
    tr = FrameTrace("gram")
    for T in truncations:
        x = _positions(provider(Interval.closed(-T, T)))
        lo, hi = eig_extremes(interpolation_gram(x, K))
        tr.levels.append(FrameEstimate(float(T), lo, hi, int(x.size)))
    return tr


# ---------------------------------------------------------------------------
# sampling quotient


def mode_counts(K: IntervalSet, T: float, mode_fraction: float = 0.5) -> list[int]:
    """Sine modes per part of K.  ``c |K_i| T`` modes keep the trial
    functions concentrated in ``|x| <~ c T / 2``."""
    return [max(1, int(round(mode_fraction * float(p.hi - p.lo) * T))) for p in K]


def sine_modes(K: IntervalSet, counts: Sequence[int], nodes_per_part: Sequence[int]):
    """Gauss-Legendre nodes/weights on each part of K and the mode values.

    Returns ``(xi, w, Phi)`` where ``Phi[p, m]`` is the m-th orthonormal sine
    mode at node p (zero off its own part).
    """
    xs, ws, blocks = [], [], []
    total = int(sum(counts))
    col = 0
    for part, m, n in zip(K, counts, nodes_per_part):
        a, b = float(part.lo), float(part.hi)
        L = b - a
        t, wt = np.polynomial.legendre.leggauss(int(n))
        xi = a + (t + 1) * L / 2
        xs.append(xi)
        ws.append(wt * L / 2)
        block = np.zeros((xi.size, total))
        k = np.arange(1, m + 1)
        block[:, col:col + m] = math.sqrt(2 / L) * np.sin(np.pi * np.outer(xi - a, k) / L)
        blocks.append(block)
        col += m
    return np.concatenate(xs), np.concatenate(ws), np.vstack(blocks)


def sine_mode_transform(K: IntervalSet, counts: Sequence[int], lam) -> np.ndarray:
    """Closed form of ``∫ φ_m(ξ) exp(2πi λ ξ) dξ`` for every mode; used as a check."""
    lam = np.asarray(lam, float)
    cols = []
    for part, m in zip(K, counts):
        a, b = float(part.lo), float(part.hi)
        L = b - a
        for k in range(1, m + 1):
            # sin(kπs/L) = (e^{ikπs/L} - e^{-ikπs/L}) / 2i with s = ξ - a
            val = np.zeros(lam.shape, complex)
            for sgn in (1, -1):
                om = 2 * np.pi * lam + sgn * k * np.pi / L
                with np.errstate(invalid="ignore", divide="ignore"):
                    integ = np.where(np.abs(om) < 1e-12, L,
                                     (np.exp(1j * om * L) - 1) / (1j * np.where(om == 0, 1, om)))
                val += sgn * integ
            cols.append(math.sqrt(2 / L) * np.exp(2j * np.pi * lam * a) * val / 2j)
    return np.stack(cols, axis=-1)


def _quotient(x, K, counts, nodes):
    xi, w, Phi = sine_modes(K, counts, nodes)
    A = np.exp(2j * np.pi * np.outer(x, xi)) @ (w[:, None] * Phi)
    Q = A.conj().T @ A
    mass = Phi.T @ (w[:, None] * Phi)
    try:
        ev = eigh(0.5 * (Q + Q.conj().T), 0.5 * (mass + mass.T), eigvals_only=True)
    except LinAlgError as exc:
        raise QuadratureError(f"mode mass matrix is not positive definite: {exc}") from exc
    return float(ev[0]), float(ev[-1]), int(xi.size)


def sampling_quotient(points, K, T: float, mode_fraction: float = 0.5,
                      rtol: float = 0.01, max_doublings: int = 6) -> FrameEstimate:
    """Extreme values of ``Σ_λ |f(λ)|² / ||f̂||²`` over sine-mode trial functions.

    Quadrature nodes double until both extremes move by less than ``rtol``.
    """
    K = as_interval_set(K)
    x = _positions(points)
    _check_nodes(x, LATTICE_TOL)
    counts = mode_counts(K, T, mode_fraction)
    reach = float(np.max(np.abs(x))) if x.size else 0.0
    nodes = [int(math.ceil(2 * (reach * float(p.hi - p.lo) + m))) + 16 for p, m in zip(K, counts)]
    prev = _quotient(x, K, counts, nodes)
    for _ in range(max_doublings):
        nodes = [2 * n for n in nodes]
        cur = _quotient(x, K, counts, nodes)
        scale = max(abs(cur[1]), 1e-300)
        if abs(cur[0] - prev[0]) <= rtol * scale and abs(cur[1] - prev[1]) <= rtol * scale:
            return FrameEstimate(float(T), cur[0], cur[1], int(x.size), int(sum(counts)), cur[2])
        prev = cur
    raise QuadratureError(f"sampling quotient did not settle after {max_doublings} doublings")


def sampling_trace(provider: Callable[[Interval], object], K, truncations=DEFAULT_TRUNCATIONS,
                   mode_fraction: float = 0.5) -> FrameTrace:
    K = as_interval_set(K)
    tr = FrameTrace("sampling")
    for T in truncations:
        pts = provider(Interval.closed(-T, T))
        tr.levels.append(sampling_quotient(pts, K, float(T), mode_fraction))
    return tr


# ---------------------------------------------------------------------------
# duality experiment

SAMPLING_STABLE = "sampling-stable"
INTERPOLATION_STABLE = "interpolation-stable"
CRITICAL = "inconclusive/critical"
INCONCLUSIVE = "inconclusive"


@dataclass
class DualityReport:
    """Four traces for ``Λ_W`` on K and ``_KΛ`` on W.

    ``Λ_W`` samples ``PW_K`` exactly when ``_KΛ`` interpolates ``PW_W``, and
    vice versa, so ``sampling_W`` should agree with ``gram_K`` and
    ``gram_W`` with ``sampling_K``.
    """

    density_W: float
    measure_K: float
    density_K: float
    measure_W: float
    sampling_W: FrameTrace
    gram_W: FrameTrace
    gram_K: FrameTrace
    sampling_K: FrameTrace
    stable: dict
    verdicts: list
    consistent: bool
    landau_consistent: Optional[bool]

    def to_dict(self) -> dict:
        return {"density_W": self.density_W, "measure_K": self.measure_K,
                "density_K": self.density_K, "measure_W": self.measure_W,
                "sampling_W": self.sampling_W.to_dict(), "gram_W": self.gram_W.to_dict(),
                "gram_K": self.gram_K.to_dict(), "sampling_K": self.sampling_K.to_dict(),
                "stable": self.stable, "verdicts": self.verdicts,
                "consistent": self.consistent, "landau_consistent": self.landau_consistent}


def duality_experiment(scheme: LatticeScheme, W, K, truncations=DEFAULT_TRUNCATIONS,
                       threshold_frac: float = 0.05, critical_band: float = 0.05,
                       mode_fraction: float = 0.5) -> DualityReport:
    """Sampling and interpolation traces on both sides of the duality."""
    W, K = as_interval_set(W), as_interval_set(K)
    mW, mK = float(W.measure), float(K.measure)
    dW = scheme.density * mW
    dK = scheme.det_abs * mK
    primal = lambda r: enumerate_strip(scheme, W, r)
    dual = lambda r: dual_projection(scheme, K, r)
    sW = sampling_trace(primal, K, truncations, mode_fraction)
    gW = gram_trace(primal, K, truncations)
    gK = gram_trace(dual, W, truncations)
    sK = sampling_trace(dual, W, truncations, mode_fraction)
    st = {"sampling_W": sW.stable(threshold_frac * mK), "gram_W": gW.stable(threshold_frac * mK),
          "gram_K": gK.stable(threshold_frac * mW), "sampling_K": sK.stable(threshold_frac * mW)}
    verdicts = []
    if abs(dW - mK) <= critical_band * mK:
        verdicts.append(CRITICAL)
    else:
        if st["sampling_W"]:
            verdicts.append(SAMPLING_STABLE)
        if st["gram_W"]:
            verdicts.append(INTERPOLATION_STABLE)
        if not verdicts:
            verdicts.append(INCONCLUSIVE)
    consistent = st["sampling_W"] == st["gram_K"] and st["gram_W"] == st["sampling_K"]
    landau = None
    if CRITICAL not in verdicts:
        landau = (not st["sampling_W"] or dW >= mK) and (not st["gram_W"] or dW <= mK)
    return DualityReport(dW, mK, dK, mW, sW, gW, gK, sK, st, verdicts, consistent, landau)
