"""Power-transformed forward-backward recursions and their decoders.

Raising the recursion terms to a power q interpolates between sum-product
(q=1, pointwise decoding) and max-product (q=inf, Viterbi-style decoding)
message passing.  The plain tables are kept in the log domain, so no
rescaling is needed even for thousands of steps; the renormalized variant
works in the linear domain.

Renormalization divides each step by a positive scalar, so it provably
cannot move the per-position argmax: where the two variants disagree, the
underlying scores are exactly tied and the two arithmetic routes broke the
tie differently.  The bundled disagreement instance from the test fixtures
shows this happening at q=64.
"""

import json
import math
import pathlib

import numpy as np

import hmmrisk as hr

rng = np.random.default_rng(3)
model = hr.HmmModel(
    rng.dirichlet(np.ones(3)),
    rng.dirichlet(np.ones(3), size=3),
    hr.Categorical(rng.dirichlet(np.ones(3), size=3)),
)
_, obs = hr.sample_trajectory(model, 12, seed=11)
summary = hr.forward_backward(model, obs)

print("symbol-by-symbol paths along a q grid:")
for q in [1.0, 2.0, 4.0, 16.0, 256.0, math.inf]:
    tables = hr.transformed_forward_backward(model, obs, q)
    path = hr.symbol_by_symbol_decode(tables)
    lp = hr.joint_log_likelihood(summary, path)
    print(f"  q={q:<6} path={path} joint log-lik={lp:.6f}")
print(f"  pmap     {hr.pmap_decode(summary).path}")
print(f"  viterbi  {hr.viterbi(model, obs)}")

print("\nlog-domain plain tables survive long horizons (T = 1000):")
_, long_obs = hr.sample_trajectory(model, 1000, seed=5)
plain = hr.transformed_forward_backward(model, long_obs, 2.0)
print(f"  final log forward column max: {plain.alpha_q[-1].max():.1f} (far below float underflow)")
resc = hr.transformed_forward_backward(model, long_obs, 2.0, rescaled=True)
print(f"  renormalized tables all finite: {bool(np.isfinite(resc.alpha_q).all())}")

print("\ndistortion probe on the bundled exact-tie instance:")
fixture = json.loads(
    (pathlib.Path(__file__).parent.parent / "tests" / "fixtures" / "rescaling_disagreement.json").read_text()
)
tie_model = hr.HmmModel(
    np.array(fixture["initial"]),
    np.array(fixture["transition"]),
    hr.Categorical(np.array(fixture["emission_table"])),
)
tie_obs = np.array(fixture["observations"])
for row in hr.rescaling_distortion_probe(tie_model, tie_obs, [1.0, 64.0, math.inf]):
    print(f"  q={row['q']:<6} agree={row['agree']}  plain={row['plain_path']}")
    if not row["agree"]:
        print(f"  {'':<9} rescaled path: {row['rescaled_path']}")
