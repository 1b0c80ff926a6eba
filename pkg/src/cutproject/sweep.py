"""Randomised configuration sweeps comparing certificates with empirical constants.

Each configuration is a scheme, a window ``W`` and a spectrum ``K``.  For
``Λ_W`` on ``PW_K`` the four certificates of :mod:`cutproject.bounds` are
set against the finite-truncation proxies of :mod:`cutproject.frames`, and
empirical stability is checked against the Landau density inequalities.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .bounds import default_smoothing, interp_lower, interp_upper, sampling_lower, sampling_upper
from .density import VanHoveSeq, banach_density, model_set_provider
from .errors import InvalidSmoothing
from .frames import gram_trace, sampling_trace
from .intervals import IntervalSet
from .scheme import LatticeScheme, enumerate_strip, fibonacci_scheme, make_scheme, random_scheme

SWEEP_TRUNCATIONS = (25.0, 50.0, 100.0)
SILVER = 1 + math.sqrt(2)


@dataclass
class SweepConfig:
    scheme: LatticeScheme
    W: IntervalSet
    K: IntervalSet
    label: str = ""

    def to_dict(self) -> dict:
        return {"label": self.label, "scheme": self.scheme.to_dict(),
                "W": self.W.to_json(), "K": self.K.to_json()}


@dataclass
class SweepResult:
    config: SweepConfig
    certificates: dict
    empirical: dict
    density: dict
    stable: dict
    soundness: dict
    landau: dict

    @property
    def sound(self) -> bool:
        return all(self.soundness.values())

    @property
    def landau_ok(self) -> bool:
        return all(self.landau.values())

    def to_dict(self) -> dict:
        return {"config": self.config.to_dict(),
                "certificates": {k: c.to_dict() for k, c in self.certificates.items()},
                "empirical": self.empirical, "density": self.density, "stable": self.stable,
                "soundness": self.soundness, "landau": self.landau}


def standard_configs(n: int = 30, seed: int = 0) -> list[SweepConfig]:
    """Fibonacci, silver-mean and random schemes with centred K and
    windows giving densities between 0.3 and 3 times ``|K|``."""
    rng = np.random.default_rng(seed)
    bases = [("fibonacci", fibonacci_scheme()),
             ("silver", make_scheme([[1.0, SILVER], [1.0, 1 - SILVER]]))]
    out = []
    for i in range(n):
        if i % 3 < 2:
            name, s = bases[i % 3]
        else:
            name, s = "random", random_scheme(rng, (0.5, 2.0))
        dens_target = rng.uniform(0.3, 1.5)
        w = dens_target / s.density
        c = rng.uniform(-0.5, 0.5) * w
        W = IntervalSet.of(c - w / 2, c + w / 2)
        ratio = math.exp(rng.uniform(math.log(0.3), math.log(3.0)))
        k = dens_target / ratio / 2
        K = IntervalSet.closed(-k, k)
        out.append(SweepConfig(s, W, K, f"{name}-{i}"))
    return out


def run_config(cfg: SweepConfig, truncations: Sequence[float] = SWEEP_TRUNCATIONS,
               radius: float = 500.0, threshold_frac: float = 0.05,
               critical_band: float = 0.05, landau_tol: float = 0.02) -> SweepResult:
    s, W, K = cfg.scheme, cfg.W, cfg.K
    u, v = default_smoothing(s, W, K)
    T = max(truncations)
    pts = enumerate_strip(s, W, (-T, T))
    certs = {"sampling_upper": sampling_upper(s, W, K, u, radius),
             "interp_upper": interp_upper(pts, K)}
    try:
        certs["sampling_lower"] = sampling_lower(s, K, W, u, radius)
    except InvalidSmoothing:
        pass
    try:
        certs["interp_lower"] = interp_lower(s, W, K, v, radius)
    except InvalidSmoothing:
        pass
    provider = model_set_provider(s, W)
    st = sampling_trace(provider, K, truncations)
    gt = gram_trace(provider, K, truncations)
    emp = {"sampling": st.to_dict(), "gram": gt.to_dict()}
    sq, gr = st.last, gt.last

    checks = {"sampling_upper": certs["sampling_upper"].value >= sq.lam_max,
              "interp_upper": certs["interp_upper"].value >= gr.lam_max}
    if "sampling_lower" in certs and certs["sampling_lower"].positive:
        checks["sampling_lower"] = certs["sampling_lower"].value <= sq.lam_min
    if "interp_lower" in certs and certs["interp_lower"].positive:
        checks["interp_lower"] = certs["interp_lower"].value <= gr.lam_min

    mK = float(K.measure)
    rep = banach_density(provider, VanHoveSeq.geometric(T0=250.0, levels=4, shift_span=1000.0))
    dens = {"lower": rep.lower, "upper": rep.upper, "predicted": s.density * float(W.measure),
            "theta_K": mK}
    critical = abs(dens["predicted"] - mK) <= critical_band * mK
    stable = {"sampling": st.stable(threshold_frac * mK) and not critical,
              "interpolation": gt.stable(threshold_frac * mK) and not critical}
    landau = {}
    if stable["sampling"]:
        landau["sampling"] = rep.lower >= mK * (1 - landau_tol)
    if stable["interpolation"]:
        landau["interpolation"] = rep.upper <= mK * (1 + landau_tol)
    return SweepResult(cfg, certs, emp, dens, stable, {k: bool(x) for k, x in checks.items()},
                       {k: bool(x) for k, x in landau.items()})


def run_sweep(configs: Optional[list] = None, n: int = 30, seed: int = 0, **kw) -> list[SweepResult]:
    if configs is None:
        configs = standard_configs(n, seed)
    return [run_config(c, **kw) for c in configs]
