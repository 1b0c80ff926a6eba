"""Both sides of Poisson summation for a weighted model comb."""
# %%
import numpy as np

from cutproject.combs import pair_comb, psf_residual
from cutproject.scheme import fibonacci_scheme, make_scheme
from cutproject.weights import FejerAverager, OuterTrapezoid

h = g = OuterTrapezoid.centered(1.0, 0.5)

# %% lattice side against dual side, with declared tail bounds
for name, s in (("Z^2", make_scheme(np.eye(2))), ("Fibonacci", fibonacci_scheme())):
    res = psf_residual(s, h, g, radius=200.0, tail_target=1e-5)
    print(f"{name:9s} lhs {res.lhs.value.real:.10f}  rhs {res.rhs.value.real:.10f}  "
          f"|diff| {res.residual:.1e}  allowance {res.allowance:.1e}")

# %% a slowly decaying factor: truncated sums carry a shrinking tail bound
s = fibonacci_scheme()
for R in (50.0, 200.0, 1000.0):
    pr = pair_comb(s, h, FejerAverager(4.0), radius=R)
    print(f"radius {R:6.0f}  value {pr.value.real:.8f}  tail <= {pr.tail_bound:.1e}")
