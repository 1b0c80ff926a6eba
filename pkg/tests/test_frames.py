import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cutproject.density import model_set_provider
from cutproject.errors import DuplicateNode, TooLarge
from cutproject.frames import (CRITICAL, MAX_GRAM, duality_experiment, eig_extremes,
                               gram_trace, interpolation_gram, mode_counts, sampling_quotient,
                               sampling_trace, sine_mode_transform, sine_modes)
from cutproject.intervals import IntervalSet


def integers(T):
    return np.arange(-np.floor(T), np.floor(T) + 1)


def test_integer_gram_is_identity():
    G = interpolation_gram(integers(20), IntervalSet.closed(-0.5, 0.5))
    assert np.max(np.abs(G - np.eye(G.shape[0]))) <= 1e-14


def test_two_point_gram_closed_form():
    for k, d in ((0.25, 1.0), (0.3, 0.7), (1.0, 0.13)):
        lo, hi = eig_extremes(interpolation_gram([0.0, d], IntervalSet.closed(-k, k)))
        c = abs(np.sinc(2 * k * d))
        assert lo == pytest.approx(2 * k * (1 - c), abs=1e-12)
        assert hi == pytest.approx(2 * k * (1 + c), abs=1e-12)


def test_eig_extremes_diagonal():
    assert eig_extremes(np.diag([3.0, 1.0, 5.0, 2.0, 4.0])) == (1.0, 5.0)


def power_extremes(A, iters=3000):
    """Largest eigenvalue by power iteration, smallest by inverse iteration."""
    rng = np.random.default_rng(3)
    shift = np.abs(A).sum(axis=1).max()
    B = A + shift * np.eye(A.shape[0])  # positive definite, same eigenvectors
    v = rng.normal(size=A.shape[0]) + 0j
    w = v.copy()
    for _ in range(iters):
        v = B @ v
        v /= np.linalg.norm(v)
        w = np.linalg.solve(B, w)
        w /= np.linalg.norm(w)
    return float(np.real(w.conj() @ A @ w)), float(np.real(v.conj() @ A @ v))


def test_eig_extremes_random_hermitian_against_power_iteration():
    rng = np.random.default_rng(11)
    X = rng.normal(size=(50, 50)) + 1j * rng.normal(size=(50, 50))
    A = (X + X.conj().T) / 2
    lo, hi = eig_extremes(A)
    plo, phi = power_extremes(A)
    assert lo == pytest.approx(plo, rel=1e-6)
    assert hi == pytest.approx(phi, rel=1e-6)


def test_duplicate_and_oversized_nodes():
    K = IntervalSet.closed(-0.25, 0.25)
    with pytest.raises(DuplicateNode):
        interpolation_gram([0.0, 1.0, 1.0], K)
    with pytest.raises(TooLarge):
        interpolation_gram(np.arange(MAX_GRAM + 1.0), K)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-30, 30), min_size=2, max_size=40, unique=True), st.floats(0.05, 1.0))
def test_gram_is_positive_semidefinite_and_interlaces(xs, k):
    x = np.sort(np.asarray(xs))
    if np.min(np.diff(x)) < 1e-3:
        return
    K = IntervalSet.closed(-k, k)
    G = interpolation_gram(x, K)
    assert np.allclose(G, G.conj().T)
    ev = np.linalg.eigvalsh(G)
    assert ev[0] >= -1e-10
    sub = np.linalg.eigvalsh(G[1:, 1:])
    # Cauchy interlacing
    assert np.all(ev[:-1] <= sub + 1e-10) and np.all(sub <= ev[1:] + 1e-10)


def test_integer_gram_trace_is_monotone():
    K = IntervalSet.closed(-0.25, 0.25)
    tr = gram_trace(lambda r: integers(r.hi), K, (8.0, 16.0, 32.0, 64.0))
    assert tr.monotone()
    assert np.all(np.diff(tr.lam_min) < 0)


def test_sine_mode_quadrature_matches_closed_form():
    K = IntervalSet.closed(-0.4, -0.1) | IntervalSet.closed(0.2, 0.5)
    counts = [4, 3]
    lam = np.array([-3.7, -0.5, 0.0, 1.2, 8.0])
    xi, w, Phi = sine_modes(K, counts, [200, 200])
    quad = np.exp(2j * np.pi * np.outer(lam, xi)) @ (w[:, None] * Phi)
    assert np.max(np.abs(quad - sine_mode_transform(K, counts, lam))) <= 1e-12
    mass = Phi.T @ (w[:, None] * Phi)
    assert np.max(np.abs(mass - np.eye(sum(counts)))) <= 1e-12


def test_mode_counts_scale_with_truncation():
    K = IntervalSet.closed(-0.5, 0.5)
    assert mode_counts(K, 32.0) == [16]
    assert mode_counts(K, 64.0) == [32]


@pytest.mark.parametrize("step, expect", [(1.0, 1.0), (2.0, 0.5)])
def test_sampling_quotient_on_scaled_integers(step, expect):
    # step Z with |K| <= 1/step is a tight frame with bound 1/step
    K = IntervalSet.closed(-0.25 / step, 0.25 / step)
    est = sampling_quotient(step * integers(64 / step), K, 32.0)
    assert est.lam_min == pytest.approx(expect, rel=5e-3)
    assert est.lam_max == pytest.approx(expect, rel=5e-3)


def test_undersampled_integers_lose_lower_bound():
    K = IntervalSet.closed(-0.6, 0.6)
    tr = sampling_trace(lambda r: integers(r.hi), K, (16.0, 32.0, 64.0))
    assert tr.lam_min[-1] < 0.05 * K.measure
    assert tr.lam_min[-1] <= tr.lam_min[0]


def test_fibonacci_sampling_trace_dense_window(fib):
    W, K = IntervalSet.of(0.0, 1.0), IntervalSet.closed(-0.1, 0.1)
    tr = sampling_trace(model_set_provider(fib, W), K, (25.0, 50.0))
    assert tr.stable(0.05 * float(K.measure))


def test_critical_identity_is_inconclusive(ident):
    rep = duality_experiment(ident, IntervalSet.of(0.0, 1.0), IntervalSet.closed(-0.5, 0.5),
                             truncations=(8.0, 16.0))
    assert rep.verdicts == [CRITICAL]
    assert rep.landau_consistent is None
    d = rep.to_dict()
    assert set(d["stable"]) == {"sampling_W", "gram_W", "gram_K", "sampling_K"}
