"""Monte Carlo risk trajectories as the horizon grows.

Sampled sequences are decoded with Viterbi and PMAP; risks are evaluated
against the posterior and against the true sampled path.  Two empirical
regularities appear:

* the pointwise decoder never loses on expected misclassifications, and
* the realized interpolation gap between the k-block and Viterbi paths stays
  inside its 1/(k-1) envelope on every single sample, shrinking with k.
"""

import numpy as np

import hmmrisk as hr

model = hr.HmmModel(
    [0.5, 0.5],
    [[0.85, 0.15], [0.2, 0.8]],
    hr.Categorical([[0.75, 0.25], [0.3, 0.7]]),
)

out = hr.estimate_risk_trajectories(model, ["viterbi", "pmap"], [100, 500, 2000], 40, seed=17)
print("mean empirical misclassification rate (sd):")
print(f"{'horizon':>8} {'viterbi':>20} {'pmap':>20}")
for horizon in (100, 500, 2000):
    mv, sv = out.stat(horizon, "viterbi", "empirical_error")
    mp, sp = out.stat(horizon, "pmap", "empirical_error")
    print(f"{horizon:>8} {mv:>12.4f} ({sv:.4f}) {mp:>12.4f} ({sp:.4f})")

print("\nposterior path log-risk of the viterbi path concentrates with T:")
for horizon in (100, 2000):
    mean, sd = out.stat(horizon, "viterbi", "rbarinf_posterior")
    print(f"  T={horizon:<5} mean={mean:.4f} sd={sd:.4f}")

print("\ninterpolation-gap envelope, 30 replicates at T=200:")
rows = hr.sandwich_constant_sweep(model, [200], [2, 4, 8, 16], 30, seed=23)
for k in (2, 4, 8, 16):
    gaps = [r["gap"] for r in rows if r["k"] == k]
    bounds = [r["bound"] for r in rows if r["k"] == k]
    print(
        f"  k={k:<3} max gap={max(gaps):.5f}  min bound={min(bounds):.5f}  "
        f"all within envelope: {all(g <= b + 1e-9 for g, b in zip(gaps, bounds))}"
    )
