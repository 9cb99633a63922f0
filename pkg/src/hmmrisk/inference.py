"""Scaled forward-backward smoothing, block posteriors, and Viterbi decoding."""

from __future__ import annotations

from functools import cached_property

import numpy as np

from . import model as model_mod
from .errors import KOutOfRangeError, NoFinitePathError, ZeroEvidenceError
from .lattice import best_path
from .model import HmmModel, check_state_path, prior_marginals

BLOCK_STATE_CAP = 10**6


def _log(a: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(a)


def emission_likelihood(model: HmmModel, obs) -> np.ndarray:
    """Linear-domain likelihood table f[t, j] = f_j(x_t), shape (T, K)."""
    emission = model.emission
    if isinstance(emission, model_mod.Categorical):
        symbols = np.asarray(obs).astype(int)
        return emission.table[:, symbols].T.copy()
    if isinstance(emission, model_mod.DirectLikelihood):
        positions = np.asarray(obs).astype(int)
        return emission.table[positions].copy()
    return np.exp(emission.log_likelihood(obs))


class PosteriorSummary:
    """Scaled forward/backward tables, smoothed marginals, and log-evidence.

    ``scaled_forward[t]`` is the forward distribution of state t given x^(t+1)
    (rows sum to 1); ``scaling[t]`` is the per-step normalizer, so the data
    log-likelihood is the sum of log scaling factors.  ``smoothed[t, j]`` is
    the posterior marginal of state j+1 at position t+1 given the whole
    sequence.  The summary keeps references to the model and observations it
    was computed from, so downstream decoders only need the summary.
    """

    def __init__(self, model, obs, scaled_forward, scaled_backward, scaling, smoothed, log_evidence):
        self.model = model
        self.obs = obs
        self.scaled_forward = scaled_forward
        self.scaled_backward = scaled_backward
        self.scaling = scaling
        self.smoothed = smoothed
        self.log_evidence = log_evidence

    @property
    def horizon(self) -> int:
        return self.smoothed.shape[0]

    @property
    def num_states(self) -> int:
        return self.smoothed.shape[1]

    @cached_property
    def emission_likelihood(self) -> np.ndarray:
        return emission_likelihood(self.model, self.obs)

    @cached_property
    def log_emission(self) -> np.ndarray:
        return _log(self.emission_likelihood)

    @cached_property
    def log_smoothed(self) -> np.ndarray:
        return _log(self.smoothed)

    @cached_property
    def log_forward(self) -> np.ndarray:
        return _log(self.scaled_forward)

    @cached_property
    def log_backward(self) -> np.ndarray:
        return _log(self.scaled_backward)

    @cached_property
    def log_scaling(self) -> np.ndarray:
        return np.log(self.scaling)

    @cached_property
    def log_transition(self) -> np.ndarray:
        return _log(self.model.transition)

    @cached_property
    def log_initial(self) -> np.ndarray:
        return _log(self.model.initial)

    @cached_property
    def prior(self) -> np.ndarray:
        return prior_marginals(self.model, self.horizon)

    @cached_property
    def log_prior(self) -> np.ndarray:
        return _log(self.prior)


def forward_backward(model: HmmModel, obs) -> PosteriorSummary:
    """Run the scaled forward-backward recursions.

    Raises ZeroEvidenceError when the observation sequence has probability
    zero under the model (some scaling factor vanishes).
    """
    likes = emission_likelihood(model, obs)
    horizon, num_states = likes.shape
    if horizon < 1:
        raise ValueError("observation sequence must be non-empty")
    alpha = np.empty((horizon, num_states))
    scaling = np.empty(horizon)
    a = model.initial * likes[0]
    scaling[0] = a.sum()
    if scaling[0] <= 0:
        raise ZeroEvidenceError("observation sequence impossible under the model at t=1")
    alpha[0] = a / scaling[0]
    for t in range(1, horizon):
        a = (alpha[t - 1] @ model.transition) * likes[t]
        scaling[t] = a.sum()
        if scaling[t] <= 0:
            raise ZeroEvidenceError(f"observation sequence impossible under the model at t={t + 1}")
        alpha[t] = a / scaling[t]
    beta = np.empty((horizon, num_states))
    beta[-1] = 1.0
    for t in range(horizon - 2, -1, -1):
        beta[t] = (model.transition * likes[t + 1][None, :]) @ beta[t + 1] / scaling[t + 1]
    smoothed = alpha * beta
    return PosteriorSummary(
        model=model,
        obs=obs,
        scaled_forward=alpha,
        scaled_backward=beta,
        scaling=scaling,
        smoothed=smoothed,
        log_evidence=float(np.log(scaling).sum()),
    )


def log_block_posterior(summary: PosteriorSummary, t: int, block) -> float:
    """log P(Y_t..Y_{t+k-1} = block | x^T) for a 1-based position t and 1-based block."""
    block = check_state_path(block, summary.num_states)
    k = len(block)
    horizon = summary.horizon
    if t < 1 or t + k - 1 > horizon:
        raise IndexError(f"block [{t}, {t + k - 1}] outside positions 1..{horizon}")
    if summary.num_states ** (k - 1) > BLOCK_STATE_CAP:
        raise KOutOfRangeError(f"block length {k} exceeds the tabulation cap for K={summary.num_states}")
    idx = block - 1
    total = summary.log_forward[t - 1, idx[0]]
    for u in range(k - 1):
        total += (
            summary.log_transition[idx[u], idx[u + 1]]
            + summary.log_emission[t + u, idx[u + 1]]
            - summary.log_scaling[t + u]
        )
    total += summary.log_backward[t + k - 2, idx[-1]]
    return float(total)


def block_posterior(summary: PosteriorSummary, t: int, block) -> float:
    """P(Y_t..Y_{t+k-1} = block | x^T); reduces to the smoothed marginal for k=1."""
    return float(np.exp(log_block_posterior(summary, t, block)))


def viterbi(model: HmmModel, obs) -> tuple[int, ...]:
    """Maximum a posteriori state path, lexicographically smallest on ties."""
    log_likes = _log(emission_likelihood(model, obs))
    try:
        path, _ = best_path(log_likes, _log(model.initial), _log(model.transition))
    except NoFinitePathError as exc:  # all paths impossible <=> zero evidence
        raise ZeroEvidenceError("observation sequence impossible under the model") from exc
    return tuple(int(s) + 1 for s in path)
