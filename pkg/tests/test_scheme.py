import itertools
from decimal import Decimal, getcontext

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cutproject.errors import SingularLattice
from cutproject.intervals import IntervalSet
from cutproject.scheme import (GOLDEN, annihilator, box_points, check_injectivity,
                               dual_projection, enumerate_strip, gap_values, make_scheme,
                               pairing, random_scheme)


def brute_strip(M, window, lo, hi, span=400):
    """Integer-box scan, independent of the row enumeration."""
    out = []
    for n, m in itertools.product(range(-span, span + 1), repeat=2):
        x = M[0, 0] * n + M[0, 1] * m
        y = M[1, 0] * n + M[1, 1] * m
        if lo <= x <= hi and y in window:
            out.append(x)
    return np.sort(out)


def test_densities(fib):
    assert make_scheme(np.eye(2)).density == 1.0
    assert make_scheme([[2, 0], [0, 0.5]]).density == pytest.approx(1.0)
    assert fib.density == pytest.approx(1 / np.sqrt(5), abs=1e-15)


def test_golden_identity_50_digits():
    getcontext().prec = 50
    tau = (1 + Decimal(5).sqrt()) / 2
    assert abs(tau + 1 / tau - Decimal(5).sqrt()) < Decimal(10) ** -48
    assert GOLDEN == pytest.approx(float(tau), abs=1e-15)


def test_singular_rejected():
    with pytest.raises(SingularLattice):
        make_scheme([[1, 2], [2, 4]])
    with pytest.raises(SingularLattice):
        make_scheme([[1e-6, 0], [0, 1e-5]])


def test_basis_read_only(fib):
    with pytest.raises(ValueError):
        fib.basis[0, 0] = 3.0


def test_annihilator_examples(fib):
    assert np.allclose(annihilator(make_scheme(np.eye(2))).basis, np.eye(2))
    assert np.allclose(annihilator(make_scheme(np.diag([2.0, 0.25]))).basis, np.diag([0.5, 4.0]))
    assert annihilator(fib).density == pytest.approx(1 / np.sqrt(5) ** -1)
    assert fib.density * annihilator(fib).density == pytest.approx(1.0, abs=1e-14)


def test_pairing_is_integral(fib, rng):
    nm = rng.integers(-1000, 1001, size=(1000, 2))
    pq = rng.integers(-1000, 1001, size=(1000, 2))
    val = pairing(fib, nm, pq)
    exact = np.sum(nm * pq, axis=1)
    scale = 1 + np.abs(nm).sum(1) * np.abs(pq).sum(1)
    assert np.all(np.abs(val - exact) <= 1e-9 * scale)


def test_integer_strip():
    p = enumerate_strip(make_scheme(np.eye(2)), IntervalSet.of(-0.5, 0.5), (-3, 3))
    assert list(p.x) == list(range(-3, 4))
    assert check_injectivity(p).min_gap == 1


def test_fibonacci_strip_matches_brute_force(fib):
    W = IntervalSet.of(0, 1)
    p = enumerate_strip(fib, W, (0, 20))
    ref = brute_strip(fib.basis, W, 0, 20, span=40)
    assert np.allclose(p.x, ref)
    assert abs(len(p) / 20 - fib.density) <= 0.1 * fib.density + 1 / 20
    # every returned point satisfies both filters and matches its integer coordinates
    assert np.all(W.contains(p.star)) and np.all((p.x >= 0) & (p.x <= 20))
    recon = fib.basis @ np.vstack([p.n, p.m])
    assert np.allclose(recon[0], p.x, atol=1e-9) and np.allclose(recon[1], p.star, atol=1e-9)


def test_point_window_has_no_rational_hits():
    p = enumerate_strip(make_scheme(np.eye(2)), IntervalSet.point(0.25), (0, 5))
    assert len(p) == 0


def test_dual_projection_examples(fib):
    p = dual_projection(make_scheme(np.eye(2)), IntervalSet.of(-0.5, 0.5), (-3, 3))
    assert list(p.x) == list(range(-3, 4))
    q = dual_projection(fib, IntervalSet.closed(-0.4, 0.4), (0, 50))
    target = annihilator(fib).density * 0.8
    assert abs(len(q) / 50 - target) <= 0.1 * target
    assert len(dual_projection(fib, IntervalSet.point(0.123), (0, 50))) == 0


def test_injectivity_violation_flagged():
    p = enumerate_strip(make_scheme(np.eye(2)), IntervalSet.of(-1.5, 1.5), (-2, 2))
    rep = check_injectivity(p)
    assert rep.violation and rep.min_gap == 0


def test_fibonacci_gaps(fib):
    p = enumerate_strip(fib, IntervalSet.of(0, 1), (0, 100))
    assert check_injectivity(p).min_gap > 0.3
    gaps = gap_values(enumerate_strip(fib, IntervalSet.of(0, 1), (-2000, 2000)))
    assert np.allclose(gaps, [GOLDEN, GOLDEN ** 2])


def test_box_points_matches_brute(rng):
    for _ in range(5):
        M = rng.normal(size=(2, 2))
        p, q, x, y = box_points(M, (-3, 4), (-2, 2.5))
        got = sorted(zip(p.tolist(), q.tolist()))
        ref = sorted((n, m) for n, m in itertools.product(range(-60, 61), repeat=2)
                     if -3 <= M[0, 0] * n + M[0, 1] * m <= 4 and -2 <= M[1, 0] * n + M[1, 1] * m <= 2.5)
        assert got == ref


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6), st.floats(0.1, 0.9), st.floats(0.0, 0.5))
def test_window_monotonicity(seed, w, extra):
    s = random_scheme(np.random.default_rng(seed))
    small = enumerate_strip(s, IntervalSet.of(-w, w), (-30, 30))
    big = enumerate_strip(s, IntervalSet.of(-w - extra, w + extra), (-30, 30))
    pairs_big = set(zip(big.n.tolist(), big.m.tolist()))
    assert set(zip(small.n.tolist(), small.m.tolist())) <= pairs_big


def test_translation_covariance(fib):
    n, m = 3, -5
    gx, hy = fib.point(n, m)
    W = IntervalSet.of(0, 1)
    a = enumerate_strip(fib, W, (0, 40))
    b = enumerate_strip(fib, W.shift(hy), (gx, 40 + gx))
    assert np.allclose(b.x - gx, a.x, atol=1e-9)


def test_finite_local_complexity(rng):
    s = random_scheme(rng)
    p = enumerate_strip(s, IntervalSet.of(0, 0.8), (-500, 500))
    assert len(gap_values(p)) <= 3  # three-distance property for a window interval
