"""Fibonacci chain: points, gaps and densities."""
# %%
import numpy as np

from cutproject.density import VanHoveSeq, banach_density, model_set_provider, smooth_density
from cutproject.scheme import GOLDEN, enumerate_strip, fibonacci_scheme, gap_values
from cutproject.weights import Indicator

s = fibonacci_scheme()
W = [0.0, 1.0]

# %% points of Λ_W in [-20, 20] with their internal coordinates
pts = enumerate_strip(s, W, (-20.0, 20.0))
for x, y in zip(pts.x[:8], pts.star[:8]):
    print(f"x = {x:9.5f}   x* = {y:.5f}")

# two gap lengths, τ and τ²
print("gaps:", gap_values(pts), "expected", [GOLDEN, GOLDEN ** 2])

# %% Banach density along growing intervals, against dens(L)|W| = 1/sqrt5
seq = VanHoveSeq.geometric(T0=50.0, levels=6, shift_span=500.0)
rep = banach_density(model_set_provider(s, W), seq, predicted=s.density)
for t in rep.sequence_tail:
    print(f"T = {t['T']:7.0f}  lower {t['lower_est']:.5f}  upper {t['upper_est']:.5f}")
print(f"relative error {rep.relative_error:.2e}")

# %% smooth averages with Fejér kernels converge faster than hard counts
h = Indicator(W)
for n in (8, 16, 32, 64):
    vals = np.array([smooth_density(s, h, n, s0) for s0 in np.linspace(0, 10, 20, endpoint=False)])
    print(f"n = {n:2d}  max error {np.max(np.abs(vals - s.density)):.2e}")
