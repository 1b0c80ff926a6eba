import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cutproject.combs import pair_comb, pair_dual_comb, psf_residual, strip_min_gap
from cutproject.errors import NoTailBound
from cutproject.scheme import make_scheme, random_scheme
from cutproject.weights import (Dilated, FejerAverager, Indicator, InnerTrapezoid,
                                OuterTrapezoid, Scaled, Triangle)


def brute_comb(M, h, g, N=80):
    """Σ h(y) g(x) over the integer box |n|, |m| <= N."""
    n, m = np.meshgrid(np.arange(-N, N + 1), np.arange(-N, N + 1))
    pts = np.asarray(M) @ np.vstack([n.ravel(), m.ravel()])
    return np.sum(h(pts[1]) * g(pts[0]))


def brute_dual(M, h, g, N=400):
    M0 = np.linalg.inv(np.asarray(M)).T
    n, m = np.meshgrid(np.arange(-N, N + 1), np.arange(-N, N + 1))
    pts = M0 @ np.vstack([n.ravel(), m.ravel()])
    return abs(np.linalg.det(M)) ** -1 * np.sum(h.inverse_fourier(pts[1]) * g.inverse_fourier(pts[0]))


def test_identity_indicator_times_trapezoid_matches_direct_sum(ident):
    h = Indicator([-0.5, 0.5])
    g = OuterTrapezoid.centered(2.0, 1.0)
    direct = sum(g(float(n)) for n in range(-10, 11))
    pr = pair_comb(ident, h, g)
    assert direct == pytest.approx(6.0)
    assert pr.value == pytest.approx(direct, abs=1e-12)
    assert pr.tail_bound == 0.0


def test_zero_weight_gives_zero(fib):
    h = Indicator([0.0, 1.0])
    pr = pair_comb(fib, h, Scaled(OuterTrapezoid.centered(1.0, 0.5), 0.0))
    assert pr.value == 0
    assert pr.tail_bound == 0


def test_compact_comb_matches_brute_force(fib):
    h = InnerTrapezoid.centered(1.5, 0.3)
    g = OuterTrapezoid.centered(6.0, 1.0, center=2.0)
    pr = pair_comb(fib, h, g)
    assert abs(pr.value - brute_comb(fib.basis, h, g)) <= 1e-12 + pr.tail_bound


def test_noncompact_factor_tail_bound_covers_error(fib):
    h = OuterTrapezoid.centered(1.0, 0.4)
    g = FejerAverager(4.0)
    pr = pair_comb(fib, h, g, radius=80.0)
    ref = pair_comb(fib, h, g, radius=2000.0)
    assert abs(pr.value - ref.value) <= pr.tail_bound + ref.tail_bound + 1e-12
    assert ref.tail_bound < pr.tail_bound


def test_psf_identity_exact(ident):
    h = g = OuterTrapezoid.centered(1.0, 0.5)
    res = psf_residual(ident, h, g, radius=200.0)
    assert res.lhs.value == pytest.approx(9.0, abs=1e-12)
    # transforms vanish at non-zero integers: the dual side is ∫h ∫g
    assert res.rhs.value == pytest.approx(h.integral * g.integral, abs=1e-9)
    assert res.residual <= 1e-6
    assert res.ok


def test_dual_side_matches_brute_force(fib):
    h = OuterTrapezoid.centered(1.0, 0.5)
    g = OuterTrapezoid.centered(2.0, 0.5)
    pr = pair_dual_comb(fib, h, g, radius=40.0)
    ref = brute_dual(fib.basis, h, g, N=120)
    assert abs(pr.value - ref) <= pr.tail_bound + 1e-4


def test_psf_fibonacci_within_tails(fib):
    h = g = OuterTrapezoid.centered(1.0, 0.5)
    res = psf_residual(fib, h, g, radius=200.0, tail_target=1e-4)
    assert res.ok
    assert res.rhs.tail_bound <= 1e-4


def test_psf_random_schemes(rng):
    for _ in range(20):
        s = random_scheme(rng, (0.5, 2.0))
        w1, w2 = rng.uniform(0.3, 1.5, 2)
        u1, u2 = rng.uniform(0.2, 0.8, 2)
        res = psf_residual(s, OuterTrapezoid.centered(w1, u1),
                           OuterTrapezoid.centered(w2, u2, center=rng.uniform(-1, 1)), radius=60.0)
        assert res.ok, res.to_dict()


def test_psf_rejects_indicator(fib):
    with pytest.raises(NoTailBound):
        psf_residual(fib, Indicator([0.0, 1.0]), OuterTrapezoid.centered(1.0, 0.5))


@settings(max_examples=25, deadline=None)
@given(st.floats(0.3, 3.0))
def test_scaling_covariance(sigma):
    M = np.array([[1.0, 0.7], [0.4, -1.3]])
    s = make_scheme(M)
    s_scaled = make_scheme(np.diag([sigma, 1.0]) @ M)
    h = OuterTrapezoid.centered(1.2, 0.3)
    g = OuterTrapezoid.centered(3.0, 0.5)
    a = pair_comb(s_scaled, h, g).value
    b = pair_comb(s, h, Dilated(g, 1.0 / sigma)).value
    assert a == pytest.approx(b, abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.floats(-3.0, 3.0), st.floats(0.05, 0.95))
def test_linearity(c, cut):
    s = make_scheme([[1.0, 0.5], [0.3, 1.1]])
    g = Triangle(4.0)
    whole = pair_comb(s, Indicator([0.0, 1.0]), Scaled(g, c)).value
    left = pair_comb(s, Indicator([0.0, cut]), g).value
    right = pair_comb(s, Indicator([cut, 1.0]), g).value
    assert whole == pytest.approx(c * (left + right), abs=1e-10)


def test_strip_min_gap_identity_and_fibonacci(ident, fib):
    assert strip_min_gap(ident.basis, 0.5) == pytest.approx(1.0)
    # rows swapped: points with |y| <= 0.99; (1, 0) sits at y = 1 and is excluded
    B = fib.basis[::-1]
    assert strip_min_gap(B, 1.0) == pytest.approx(1.0)
    gap = strip_min_gap(B, 0.99)
    tau = (1 + 5 ** 0.5) / 2
    assert gap == pytest.approx(tau, rel=1e-9)
