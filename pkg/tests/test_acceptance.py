"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line."""
import random
import time
from fractions import Fraction as F

import numpy as np
import pytest

from cutproject.bounds import (lower_envelope_positive, maximize_lower_envelope,
                               minimize_upper_envelope, optimal_smoothing)
from cutproject.combs import psf_residual
from cutproject.density import VanHoveSeq, banach_density, model_set_provider, smooth_density
from cutproject.frames import (INTERPOLATION_STABLE, SAMPLING_STABLE, duality_experiment,
                               eig_extremes, interpolation_gram, sampling_quotient)
from cutproject.intervals import (Interval, IntervalSet, minkowski_sum, normalize,
                                  van_hove_boundary)
from cutproject.scheme import annihilator, pairing, random_scheme
from cutproject.sweep import run_sweep
from cutproject.weights import Indicator, OuterTrapezoid


@pytest.fixture
def report(capsys):
    def _report(num, ok, detail, elapsed=None, limit=None):
        if limit is not None:
            ok = ok and elapsed < limit
        timing = "" if elapsed is None else f" [{elapsed:.2f}s / limit {limit:g}s]"
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {num:>2}: {detail}{timing}")
        assert ok, detail
    return _report


@pytest.fixture(scope="module")
def sweep_results():
    t0 = time.perf_counter()
    results = run_sweep(n=30, seed=0)
    return results, time.perf_counter() - t0


def test_c01_density_duality(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(1)
    errs = []
    for _ in range(20):
        s = random_scheme(rng, (0.5, 2.0))
        errs.append(abs(s.density * annihilator(s).density - 1.0))
    el = time.perf_counter() - t0
    report(1, max(errs) <= 1e-12, f"max |dens(L) dens(L0) - 1| = {max(errs):.2e} over 20 schemes", el, 1)


def test_c02_annihilator_pairing(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(10):
        s = random_scheme(rng, (0.5, 2.0))
        nm = rng.integers(-100, 101, size=(1000, 2))
        pq = rng.integers(-100, 101, size=(1000, 2))
        val = pairing(s, nm, pq)
        worst = max(worst, float(np.max(np.abs(val - np.sum(nm * pq, axis=1)))))
    el = time.perf_counter() - t0
    report(2, worst <= 1e-9, f"10^4 pairs, max distance to the integer pairing = {worst:.2e}", el, 1)


@pytest.mark.parametrize("name", ["identity", "fibonacci"])
def test_c03_psf_desk_scale(report, name, ident, fib):
    s = ident if name == "identity" else fib
    h = g = OuterTrapezoid.centered(1.0, 0.5)
    t0 = time.perf_counter()
    res = psf_residual(s, h, g, radius=500.0, tail_target=1e-5)
    el = time.perf_counter() - t0
    tails = max(res.lhs.tail_bound, res.rhs.tail_bound)
    ok = res.residual <= res.allowance and tails <= 1e-5
    report(3, ok, f"{name}: residual {res.residual:.2e} <= allowance {res.allowance:.2e}, "
                  f"tails <= {tails:.2e}", el, 10)


def test_c04_banach_density(report, fib):
    t0 = time.perf_counter()
    seq = VanHoveSeq.geometric(T0=1e4 / 16, levels=4, ratio=2.0, shift_span=1000.0, n_shifts=64)
    assert seq.half_widths[-1] == 1e4
    rep = banach_density(model_set_provider(fib, IntervalSet.of(0.0, 1.0)), seq,
                         predicted=fib.density)
    el = time.perf_counter() - t0
    spread = rep.spread / fib.density
    ok = rep.relative_error <= 0.01 and spread <= 0.01
    report(4, ok, f"T = 1e4: relative error {rep.relative_error:.2e}, spread {spread:.2e}", el, 30)


def test_c05_smooth_density(report, fib):
    t0 = time.perf_counter()
    h = Indicator(IntervalSet.of(0.0, 1.0))
    target = fib.density * 1.0
    shifts = np.linspace(0.0, 10.0, 20, endpoint=False)
    errs = []
    for n in (8, 16, 32, 64):
        errs.append(max(abs(smooth_density(fib, h, n, s0) - target) for s0 in shifts))
    el = time.perf_counter() - t0
    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
    ok = errs[-1] <= 0.05 and decreasing
    report(5, ok, "max errors over 20 shifts for n = 8..64: "
                  + ", ".join(f"{e:.1e}" for e in errs), el, 60)


def test_c06_closed_forms(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(6)
    # (a) product formula and value at zero
    worst, zero_exact = 0.0, True
    for _ in range(10):
        w, u = rng.uniform(0.2, 3.0), rng.uniform(0.05, 1.0)
        h = OuterTrapezoid.centered(w, u)
        k = rng.uniform(-20, 20, 10)
        formula = np.sin(2 * np.pi * (w + u) * k) / (np.pi * k) * np.sin(2 * np.pi * u * k) / (2 * np.pi * u * k)
        worst = max(worst, float(np.max(np.abs(h.fourier(k) - formula))))
        zero_exact &= float(np.real(h.fourier(0.0))) == 2 * (w + u)
    # (b) optimiser of the upper envelope
    opt_ok = True
    for w, b, dens in ((3.0, 1.0, 1.0), (0.7, 0.3, 0.447), (5.0, 2.5, 2.0), (1.0, 0.05, 1.3)):
        u, val = minimize_upper_envelope(w, b, dens)
        opt_ok &= abs(u / optimal_smoothing(b) - 1) <= 0.05
        opt_ok &= abs(val - dens * (2 * w + 1 / b)) <= 1e-6
    # (c) positivity frontier
    mismatches = 0
    for w in np.linspace(0.05, 3.0, 20):
        for b in np.linspace(0.05, 3.0, 20):
            if abs(2 * w * b - 1) < 1e-9:
                continue
            _, best = maximize_lower_envelope(w, b)
            mismatches += (best > 0) != lower_envelope_positive(w, b)
    el = time.perf_counter() - t0
    ok = worst <= 1e-10 and zero_exact and opt_ok and mismatches == 0
    report(6, ok, f"product formula err {worst:.1e}, h(0) exact {zero_exact}, optimiser ok {opt_ok}, "
                  f"frontier mismatches {mismatches}/400", el, 30)


def test_c07_integer_anchors(report):
    t0 = time.perf_counter()
    K = IntervalSet.closed(-0.5, 0.5)
    x = np.arange(-32.0, 33.0)
    lo, hi = eig_extremes(interpolation_gram(x, K))
    est = sampling_quotient(x, K, 32.0)
    el = time.perf_counter() - t0
    ok = abs(lo - 1) <= 1e-10 and abs(hi - 1) <= 1e-10 and abs(est.lam_min - 1) <= 0.1 \
        and abs(est.lam_max - 1) <= 0.1
    report(7, ok, f"Gram [{lo:.12f}, {hi:.12f}], sampling [{est.lam_min:.4f}, {est.lam_max:.4f}] "
                  f"with {est.n_nodes} nodes", el, 30)


def test_c08_certificate_soundness(report, sweep_results):
    results, el = sweep_results
    bad = [(r.config.label, k) for r in results for k, ok in r.soundness.items() if not ok]
    n_checks = sum(len(r.soundness) for r in results)
    n_pos = sum(c.positive for r in results for k, c in r.certificates.items() if k.endswith("lower"))
    report(8, len(results) == 30 and not bad,
           f"{n_checks} certificate checks over {len(results)} configs "
           f"({n_pos} positive lower), failures {bad}", el, 300)


def test_c09_landau_consistency(report, sweep_results):
    results, _ = sweep_results
    bad = [(r.config.label, k) for r in results for k, ok in r.landau.items() if not ok]
    n = sum(len(r.landau) for r in results)
    report(9, not bad, f"{n} stable observations satisfy the Landau inequalities within 2%, "
                       f"failures {bad}")


def test_c10_fibonacci_regimes(report, fib):
    t0 = time.perf_counter()
    W = IntervalSet.of(0.0, 1.0)
    small = duality_experiment(fib, W, IntervalSet.closed(-0.1, 0.1))
    large = duality_experiment(fib, W, IntervalSet.closed(-0.35, 0.35))
    el = time.perf_counter() - t0
    thr_s, thr_l = 0.05 * 0.2, 0.05 * 0.7
    levels = min(len(small.sampling_W.levels), len(large.gram_W.levels))
    ok = (small.verdicts == [SAMPLING_STABLE] and large.verdicts == [INTERPOLATION_STABLE]
          and levels >= 3 and small.sampling_W.stable(thr_s) and large.gram_W.stable(thr_l)
          and small.consistent and large.consistent)
    report(10, ok, f"|K| = 0.2 -> {small.verdicts}, |K| = 0.7 -> {large.verdicts}, "
                   f"{levels} levels, min lam_min {small.sampling_W.lam_min.min():.3f} / "
                   f"{large.gram_W.lam_min.min():.3f}", el, 300)


def _random_set(rnd, max_parts, allow_point):
    parts = []
    for _ in range(rnd.randint(1, max_parts)):
        a = F(rnd.randint(-96, 96), 12)
        length = F(rnd.randint(0 if allow_point else 1, 48), 12)
        lc, hc = rnd.random() < 0.5, rnd.random() < 0.5
        if length == 0:
            lc = hc = True
        parts.append(Interval(a, a + length, lc, hc))
    return normalize(parts)


def test_c11_van_hove_identities(report):
    t0 = time.perf_counter()
    rnd = random.Random(11)
    fails = 0
    zero = IntervalSet.point(F(0))
    for _ in range(200):
        A = _random_set(rnd, 3, False)
        K = _random_set(rnd, 2, True)
        L = _random_set(rnd, 2, True)
        clA = A.closure()
        middle = A.interior() | van_hove_boundary(A, K)
        chain = minkowski_sum(K, clA).issubset(middle) and middle.issubset(minkowski_sum(K | zero, clA))
        shifted = van_hove_boundary(minkowski_sum(A, L), K).issubset(
            minkowski_sum(van_hove_boundary(A, K), L.closure()))
        fails += not (chain and shifted)
    el = time.perf_counter() - t0
    report(11, fails == 0, f"200 exact rational configurations, {fails} failures", el, 1)
