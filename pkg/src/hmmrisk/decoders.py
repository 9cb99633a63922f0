"""Path decoders: the combined-risk dynamic program, its special cases, the
overlapping-block decoder, and an exhaustive oracle.

Every decoder returns a DecodedPath whose risks are re-evaluated by the risk
module, and all share one tie policy: the lexicographically smallest optimal
path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InstanceTooLargeError, KOutOfRangeError
from .inference import PosteriorSummary
from .lattice import TIE_TOL, Lattice, best_path, forward_lattice
from .risk import (
    RiskReport,
    RiskWeights,
    combined_risk,
    evaluate_risks,
    joint_log_likelihood,
    neg_power_log,
    rabiner_gain_batch,
)

BRUTE_FORCE_CAP = 10**7
BLOCK_STATE_CAP = 10**6
_CHUNK = 1 << 16


@dataclass
class DecodedPath:
    """A decoded state path with its objective value and full risk report."""

    path: tuple[int, ...]
    objective: float
    risks: RiskReport
    admissible: bool
    decoder_tag: str


def _finish(summary, idx, objective, tag) -> DecodedPath:
    path = tuple(int(s) + 1 for s in idx)
    risks = evaluate_risks(summary, path)
    return DecodedPath(
        path=path,
        objective=float(objective),
        risks=risks,
        admissible=bool(np.isfinite(risks.rbarinf_posterior)),
        decoder_tag=tag,
    )


def combined_score_tables(summary: PosteriorSummary, weights: RiskWeights):
    """Per-position gains, initial scores, and transition scores of the
    combined objective, such that the total path score is -T times the
    combined risk."""
    horizon, num_states = summary.horizon, summary.num_states
    gains = np.zeros((horizon, num_states))
    if weights.c1 > 0:
        gains = gains + weights.c1 * neg_power_log(summary.smoothed, weights.beta1)
    if weights.c2 > 0:
        gains = gains + weights.c2 * summary.log_emission
    if weights.c3 > 0:
        gains = gains + weights.c3 * neg_power_log(summary.prior, weights.beta3)
    path_weight = weights.c2 + weights.c4
    if path_weight > 0:
        trans = path_weight * summary.log_transition
        init_extra = path_weight * summary.log_initial
    else:
        trans = np.zeros((num_states, num_states))
        init_extra = np.zeros(num_states)
    return gains, init_extra, trans


def hybrid_decode(summary: PosteriorSummary, weights: RiskWeights, tag: str | None = None) -> DecodedPath:
    """Minimize the combined risk
    c1*pointwise-posterior + c2*joint + c3*pointwise-prior + c4*prior-path
    by one forward-backward score recursion.

    The objective reported is the minimized combined risk (joint form), i.e.
    -(best score)/T.
    """
    gains, init_extra, trans = combined_score_tables(summary, weights)
    idx, score = best_path(gains, init_extra, trans)
    return _finish(summary, idx, -score / summary.horizon, tag or weights.tag())


def hybrid_lattice(summary: PosteriorSummary, weights: RiskWeights) -> Lattice:
    """Forward score lattice of the combined objective, for inspection."""
    return forward_lattice(*combined_score_tables(summary, weights))


def viterbi_decode(summary: PosteriorSummary) -> DecodedPath:
    """Maximum a posteriori path as a DecodedPath (weights 0,1,0,0)."""
    return hybrid_decode(summary, RiskWeights(0.0, 1.0, 0.0, 0.0), tag="viterbi")


def pmap_decode(summary: PosteriorSummary) -> DecodedPath:
    """Pointwise argmax of the smoothed marginals; may be inadmissible."""
    idx = np.argmax(summary.smoothed, axis=1)
    objective = 1.0 - summary.smoothed[np.arange(summary.horizon), idx].mean()
    return _finish(summary, idx, objective, "pmap")


def _support_masks(summary: PosteriorSummary):
    trans = np.where(summary.model.transition > 0, 0.0, -np.inf)
    init = np.where(summary.model.initial > 0, 0.0, -np.inf)
    return init, trans


def constrained_pmap_decode(summary: PosteriorSummary) -> DecodedPath:
    """Maximize the summed smoothed marginals over admissible paths only.

    Feasibility masks cover initial/transition support and positive emission
    likelihood per position, which together are exactly admissibility.
    """
    init_mask, trans_mask = _support_masks(summary)
    emit_mask = np.where(summary.emission_likelihood > 0, 0.0, -np.inf)
    idx, _ = best_path(summary.smoothed + emit_mask, init_mask, trans_mask)
    objective = 1.0 - summary.smoothed[np.arange(summary.horizon), idx].mean()
    return _finish(summary, idx, objective, "constrained-pmap")


def pvd_decode(summary: PosteriorSummary) -> DecodedPath:
    """Maximize the product of smoothed marginals over admissible paths."""
    init_mask, trans_mask = _support_masks(summary)
    idx, _ = best_path(summary.log_smoothed, init_mask, trans_mask)
    objective = -summary.log_smoothed[np.arange(summary.horizon), idx].mean()
    return _finish(summary, idx, objective, "pvd")


def kblock_pvd_decode(summary: PosteriorSummary, k: int) -> DecodedPath:
    """k-block posterior-Viterbi decoding: weights (1, k-1, 0, 0) with a
    logarithmic pointwise term.  k=1 is unconstrained PMAP; growing k bridges
    towards Viterbi, and any k >= 2 yields an admissible path."""
    if k < 1:
        raise KOutOfRangeError(f"k must be at least 1, got {k}")
    weights = RiskWeights(1.0, float(k - 1), 0.0, 0.0, beta1=0.0)
    return hybrid_decode(summary, weights, tag=f"kblock k={k}")


def alpha_interpolation_decode(summary: PosteriorSummary, alpha: float) -> DecodedPath:
    """Interpolated objective alpha*pointwise + (1-alpha)*path risk.

    alpha=0 is the Viterbi objective, alpha=1 the PMAP objective, and
    alpha=1/k matches kblock_pvd_decode(k) up to a factor k.
    """
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    weights = RiskWeights(alpha, 1.0 - alpha, 0.0, 0.0, beta1=0.0)
    return hybrid_decode(summary, weights, tag=f"alpha={alpha:g}")


def _digits_range(base: int, width: int, start: int, stop: int) -> np.ndarray:
    """Base-``base`` digit matrix (most significant first) of range(start, stop)."""
    digits = np.empty((stop - start, width), dtype=int)
    idx = np.arange(start, stop)
    for pos in range(width - 1, -1, -1):
        digits[:, pos] = idx % base
        idx = idx // base
    return digits


def rabiner_block_decode(summary: PosteriorSummary, k: int) -> DecodedPath:
    """Maximize the expected number of correctly decoded overlapping k-blocks.

    Dynamic program over (k-1)-tuples of consecutive states; edge gains are
    the block posteriors, summed in the linear domain.  Admissibility is not
    guaranteed.  The objective reported is the achieved gain (maximized).
    """
    horizon, num_states = summary.horizon, summary.num_states
    if not 1 <= k <= horizon:
        raise KOutOfRangeError(f"k must lie in 1..{horizon}, got {k}")
    if num_states ** (k - 1) > BLOCK_STATE_CAP:
        raise KOutOfRangeError(f"K^(k-1) exceeds the tabulation cap for k={k}")
    if k == 1:
        out = pmap_decode(summary)
        gain = float(summary.smoothed.max(axis=1).sum())
        return DecodedPath(out.path, gain, out.risks, out.admissible, "rabiner k=1")

    s = summary
    n_tuples = num_states ** (k - 1)
    digits = _digits_range(num_states, k, 0, n_tuples * num_states)
    n_positions = horizon - k + 2  # tuple positions; windows start at 1..T-k+1

    # Linear-domain block posteriors for every k-tuple at every window start.
    window_gain = np.empty((horizon - k + 1, n_tuples * num_states))
    for t in range(horizon - k + 1):
        logw = s.log_forward[t, digits[:, 0]].copy()
        for u in range(k - 1):
            logw += (
                s.log_transition[digits[:, u], digits[:, u + 1]]
                + s.log_emission[t + u + 1, digits[:, u + 1]]
                - s.log_scaling[t + u + 1]
            )
        logw += s.log_backward[t + k - 1, digits[:, k - 1]]
        window_gain[t] = np.exp(logw)

    successor = (np.arange(n_tuples) % (num_states ** (k - 2)))[:, None] * num_states + np.arange(
        num_states
    )[None, :]
    phi = np.zeros((n_positions, n_tuples))
    for tau in range(n_positions - 2, -1, -1):
        vals = window_gain[tau].reshape(n_tuples, num_states) + phi[tau + 1][successor]
        phi[tau] = vals.max(axis=1)

    start = int(np.flatnonzero(phi[0] >= phi[0].max() - TIE_TOL)[0])
    idx = [int(d) for d in np.unravel_index(start, (num_states,) * (k - 1))]
    node = start
    for tau in range(n_positions - 1):
        vals = window_gain[tau].reshape(n_tuples, num_states)[node] + phi[tau + 1][successor[node]]
        nxt = int(np.flatnonzero(vals >= vals.max() - TIE_TOL)[0])
        idx.append(nxt)
        node = successor[node, nxt]
    idx = np.asarray(idx)
    gain = rabiner_gain_batch(summary, idx[None, :] + 1, k)[0]
    return _finish(summary, idx, gain, f"rabiner k={k}")


def _objective_values(summary, objective, k):
    """Return (value function over 1-based path batches, minimize flag, tag)."""
    if isinstance(objective, RiskWeights):
        return (lambda paths: combined_risk(summary, paths, objective)), True, objective.tag()
    if objective == "viterbi":
        w = RiskWeights(0.0, 1.0, 0.0, 0.0)
        return (lambda paths: combined_risk(summary, paths, w)), True, "viterbi"
    rng_t = np.arange(summary.horizon)
    if objective == "pmap":
        return (lambda paths: 1.0 - summary.smoothed[rng_t, np.asarray(paths) - 1].mean(axis=1)), True, "pmap"
    if objective == "constrained-pmap":

        def values(paths):
            r1 = 1.0 - summary.smoothed[rng_t, np.asarray(paths) - 1].mean(axis=1)
            return np.where(np.isfinite(joint_log_likelihood(summary, paths)), r1, np.inf)

        return values, True, "constrained-pmap"
    if objective == "pvd":

        def values(paths):
            rbar1 = -summary.log_smoothed[rng_t, np.asarray(paths) - 1].mean(axis=1)
            return np.where(np.isfinite(joint_log_likelihood(summary, paths)), rbar1, np.inf)

        return values, True, "pvd"
    if objective == "rabiner":
        if k is None:
            raise ValueError("the rabiner objective needs k")
        return (lambda paths: rabiner_gain_batch(summary, paths, k)), False, f"rabiner k={k}"
    raise ValueError(f"unknown brute-force objective: {objective!r}")


def brute_force_decode(summary: PosteriorSummary, objective, k: int | None = None) -> DecodedPath:
    """Exhaustive oracle: enumerate all K^T paths in lexicographic order and
    return the first path optimal within TIE_TOL.

    ``objective`` is a RiskWeights instance or one of "viterbi", "pmap",
    "constrained-pmap", "pvd", "rabiner" (the last needs k).  Evaluation goes
    through the risk module, independently of the lattice recursions.
    """
    num_states, horizon = summary.num_states, summary.horizon
    n_paths = num_states**horizon
    if n_paths > BRUTE_FORCE_CAP:
        raise InstanceTooLargeError(f"{num_states}^{horizon} paths exceed the enumeration cap")
    values_fn, minimize, tag = _objective_values(summary, objective, k)
    sign = 1.0 if minimize else -1.0

    best = np.inf
    for lo in range(0, n_paths, _CHUNK):
        chunk = _digits_range(num_states, horizon, lo, min(lo + _CHUNK, n_paths)) + 1
        best = min(best, float((sign * values_fn(chunk)).min()))
    for lo in range(0, n_paths, _CHUNK):
        chunk = _digits_range(num_states, horizon, lo, min(lo + _CHUNK, n_paths)) + 1
        vals = sign * values_fn(chunk)
        hits = np.flatnonzero(vals <= best + TIE_TOL)
        if len(hits):
            idx = chunk[hits[0]] - 1
            return _finish(summary, idx, sign * vals[hits[0]], f"brute-force {tag}")
    raise AssertionError("unreachable: optimum not found on second pass")


_FIXED_DECODERS = {
    "viterbi": viterbi_decode,
    "pmap": pmap_decode,
    "pvd": pvd_decode,
    "constrained-pmap": constrained_pmap_decode,
}


def resolve_decoder(tag: str):
    """Map a decoder tag like "viterbi", "kblock:3", "alpha:0.5", "rabiner:2",
    or "weights:c1/c2/c3/c4[/beta1/beta3]" to a callable over summaries.

    Weight components may be separated by "/" or ","; the slash form survives
    comma-separated tag lists.
    """
    if tag in _FIXED_DECODERS:
        return _FIXED_DECODERS[tag]
    head, _, arg = tag.partition(":")
    if head == "kblock" and arg:
        k = int(arg)
        return lambda summary: kblock_pvd_decode(summary, k)
    if head == "alpha" and arg:
        a = float(arg)
        return lambda summary: alpha_interpolation_decode(summary, a)
    if head == "rabiner" and arg:
        k = int(arg)
        return lambda summary: rabiner_block_decode(summary, k)
    if head == "weights" and arg:
        parts = [float(x) for x in arg.replace("/", ",").split(",")]
        if len(parts) not in (4, 6):
            raise ValueError(f"weights tag needs 4 or 6 numbers, got {len(parts)}")
        weights = RiskWeights(*parts)
        return lambda summary: hybrid_decode(summary, weights)
    raise ValueError(f"unknown decoder tag: {tag!r}")
