"""Tour of the decoder family on the bundled four-state worked example.

The instance has four hidden states observed for four steps.  The first and
last observations pin the hidden state to 2, the middle two favour state 1.
It is small enough to enumerate completely, yet the pointwise, block, and
path decoders all answer differently:

* the pointwise (PMAP) path has posterior probability zero,
* the overlapping-pairs decoder picks that same impossible path,
* the admissibility-constrained decoders move to a positive-probability path,
* the joint-path (Viterbi) optimum is attained by four tied paths.
"""

import numpy as np

import hmmrisk as hr

model = hr.four_state_model(2.0)
obs = hr.four_state_observations()
summary = hr.forward_backward(model, obs)

print("smoothed posterior marginals p_t(j | x):")
print(np.round(summary.smoothed, 4))
print()

decoders = [
    ("viterbi", hr.viterbi_decode(summary)),
    ("pmap", hr.pmap_decode(summary)),
    ("constrained pmap", hr.constrained_pmap_decode(summary)),
    ("pvd", hr.pvd_decode(summary)),
    ("k-block pvd, k=2", hr.kblock_pvd_decode(summary, 2)),
    ("rabiner blocks, k=2", hr.rabiner_block_decode(summary, 2)),
]

print(f"{'decoder':<20} {'path':<14} {'admissible':<11} {'pointwise risk':<15} {'path log-risk'}")
for name, decoded in decoders:
    r = decoded.risks
    print(
        f"{name:<20} {str(decoded.path):<14} {str(decoded.admissible):<11} "
        f"{r.r1_posterior:<15.6f} {r.rbarinf_posterior:.6f}"
    )
print()

# The exhaustive oracle confirms each answer on this 256-path instance.
for objective, k in [("pmap", None), ("constrained-pmap", None), ("rabiner", 2)]:
    oracle = hr.brute_force_decode(summary, objective, k=k)
    print(f"brute force {oracle.decoder_tag:>28}: {oracle.path}")

# Every risk functional of one chosen path:
print("\nfull risk report for the constrained PMAP path:")
for name, value in hr.evaluate_risks(summary, (2, 1, 4, 2)).as_dict().items():
    print(f"  {name:<20} {value:.12g}")
