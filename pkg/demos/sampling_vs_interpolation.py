"""Sampling and interpolation for Fibonacci model sets on both sides of the density threshold."""
# %%
from cutproject.bounds import default_smoothing, interp_lower, interp_upper, sampling_lower, sampling_upper
from cutproject.frames import duality_experiment
from cutproject.intervals import IntervalSet
from cutproject.scheme import enumerate_strip, fibonacci_scheme

s = fibonacci_scheme()
W = IntervalSet.of(0.0, 1.0)
print(f"density of Λ_W: {s.density:.4f}")

# %% |K| = 0.2 is below the density, |K| = 0.7 above it
for k in (0.1, 0.35):
    K = IntervalSet.closed(-k, k)
    u, v = default_smoothing(s, W, K)
    certs = [sampling_upper(s, W, K, u), sampling_lower(s, K, W, u),
             interp_upper(enumerate_strip(s, W, (-200.0, 200.0)), K), interp_lower(s, W, K, v)]
    print(f"\n|K| = {2 * k:.1f}")
    for c in certs:
        print(f"  {c.kind:14s} {c.value:9.4f}  positive={c.positive}")

    rep = duality_experiment(s, W, K, truncations=(50.0, 100.0, 200.0))
    print("  verdicts:", rep.verdicts, " consistent:", rep.consistent)
    for name in ("sampling_W", "gram_W", "gram_K", "sampling_K"):
        tr = getattr(rep, name)
        print(f"  {name:10s} lam_min", " ".join(f"{x:.3f}" for x in tr.lam_min))
