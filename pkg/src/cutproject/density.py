"""Banach densities along interval sequences and smooth density averages."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .combs import CombPairing, Factor, dual_factor, lattice_sum, pair_comb
from .intervals import Interval, IntervalSet, as_interval_set, van_hove_boundary
from .scheme import LatticeScheme, ProjectionSet, annihilator, dual_projection, enumerate_strip
from .weights import FejerAverager, Modulated, Shifted, WeightFunction


@dataclass(frozen=True)
class VanHoveSeq:
    """Symmetric half-open intervals ``A_n = [-T_n, T_n)`` and a grid of shifts.

    The sup/inf over translates ``A_n + t`` is approximated on
    ``t in shifts``.
    """

    half_widths: tuple
    shifts: tuple = tuple(np.linspace(0.0, 100.0, 64, endpoint=False))

    def __post_init__(self):
        hw = tuple(float(t) for t in self.half_widths)
        if not hw or min(hw) <= 0:
            raise ValueError("half-widths must be positive")
        object.__setattr__(self, "half_widths", hw)
        object.__setattr__(self, "shifts", tuple(float(t) for t in self.shifts))

    @classmethod
    def geometric(cls, T0: float = 25.0, levels: int = 10, ratio: float = 2.0,
                  shift_span: float = 100.0, n_shifts: int = 64) -> "VanHoveSeq":
        hw = tuple(T0 * ratio ** j for j in range(levels + 1))
        shifts = tuple(np.linspace(0.0, shift_span, n_shifts, endpoint=False))
        return cls(hw, shifts)

    def intervals(self) -> list[Interval]:
        return [Interval(-T, T) for T in self.half_widths]

    def boundary_ratio(self, K) -> list[float]:
        """``|∂^K A_n| / |A_n|`` along the sequence."""
        K = as_interval_set(K)
        return [float(van_hove_boundary(IntervalSet.of(-T, T), K).measure / (2 * T))
                for T in self.half_widths]


@dataclass
class DensityReport:
    lower: float
    upper: float
    sequence_tail: list
    predicted: Optional[float] = None
    relative_error: Optional[float] = None

    @property
    def spread(self) -> float:
        return self.upper - self.lower

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "predicted": self.predicted,
                "relative_error": self.relative_error, "trace": self.sequence_tail}


PointsProvider = Callable[[Interval], object]


def _positions(obj) -> np.ndarray:
    if isinstance(obj, ProjectionSet):
        return obj.x
    x = np.asarray(obj, dtype=float)
    return np.sort(x)


def banach_density(points_provider: PointsProvider, seq: VanHoveSeq,
                   predicted: Optional[float] = None) -> DensityReport:
    """Empirical lower/upper Banach densities.

    For each ``A_n`` the point counts of ``A_n + t`` over the shift grid give
    ``min / |A_n|`` and ``max / |A_n|``; the report carries the whole trace
    and quotes the last level.
    """
    shifts = np.asarray(seq.shifts)
    trace = []
    for n, T in enumerate(seq.half_widths):
        rng = Interval.closed(-T + shifts.min(), T + shifts.max())
        x = _positions(points_provider(rng))
        lo = np.searchsorted(x, -T + shifts, side="left")
        hi = np.searchsorted(x, T + shifts, side="left")
        counts = hi - lo
        trace.append({"n": n, "T": T, "inf_count": int(counts.min()),
                      "sup_count": int(counts.max()),
                      "lower_est": float(counts.min() / (2 * T)),
                      "upper_est": float(counts.max() / (2 * T))})
    last = trace[-1]
    rel = None
    if predicted:
        rel = max(abs(last["lower_est"] - predicted), abs(last["upper_est"] - predicted)) / predicted
    return DensityReport(last["lower_est"], last["upper_est"], trace, predicted, rel)


def model_set_provider(s: LatticeScheme, window) -> PointsProvider:
    """Provider of ``Λ_W`` restricted to a requested range."""
    window = as_interval_set(window)

    def provider(rng: Interval) -> ProjectionSet:
        return enumerate_strip(s, window, rng)

    return provider


def dual_set_provider(s: LatticeScheme, K) -> PointsProvider:
    K = as_interval_set(K)

    def provider(rng: Interval) -> ProjectionSet:
        return dual_projection(s, K, rng)

    return provider


def smooth_density(s: LatticeScheme, h: WeightFunction, n: int, s0: float = 0.0,
                   tail_target: float = 1e-7, full: bool = False):
    """``ω_h(δ_{s0} * g_n) = Σ h(y) g_n(x - s0)`` with the Fejér averager ``g_n``.

    Tends to ``dens(L) ∫ h`` as ``n`` grows.  With ``full=True`` the
    :class:`CombPairing` (value and tail bound) is returned.
    """
    g = Shifted(FejerAverager(n), s0)
    pr = pair_comb(s, h, g, radius=10.0 * n, tail_target=tail_target)
    return pr if full else float(np.real(pr.value))


def fourier_bohr_coefficient(s: LatticeScheme, h: WeightFunction, chi: float, n: int,
                             s0: float = 0.0, tail_target: float = 1e-7, full: bool = False):
    """``Σ h(y) g_n(s0 + x) exp(-2πi χ x)`` over the lattice.

    Converges to ``dens(L) Σ_{η : (χ, η) in L0} ȟ(η)``, which vanishes when
    χ is not a dual projection.
    """
    g = Modulated(Shifted(FejerAverager(n), -s0), chi)
    pr = pair_comb(s, h, g, radius=10.0 * n, tail_target=tail_target)
    return pr if full else complex(pr.value)


def fourier_bohr_limit(s: LatticeScheme, h: WeightFunction, chi: float, tol: float = 1e-9,
                       radius: float = 1e4, tail_target: float = 1e-6) -> CombPairing:
    """``dens(L) Σ ȟ(η)`` over dual points whose first coordinate is within
    ``tol`` of ``χ``."""
    dual = annihilator(s)
    F = Factor(lambda x: np.ones_like(x), 1.0, (chi - tol, chi + tol), chi, None)
    G = dual_factor(h)
    raw = lattice_sum(dual.basis, F, G, radius, tail_target / s.density)
    d = s.density
    return CombPairing(raw.value * d, raw.tail_bound * d, raw.n_terms, raw.truncation_radius,
                       raw.eps_num * d, raw.abs_sum * d)
