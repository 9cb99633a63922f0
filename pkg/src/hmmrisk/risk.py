"""Risk functionals for hidden paths.

Pointwise and path-level risks come in a linear and a logarithmic flavour,
each for the posterior and for the prior chain, plus the windowed k-block
log-risk and the expected-correct-blocks gain.  All log risks are negative
log-probabilities divided by the path length; impossible events yield +inf,
which is a first-class value throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import KOutOfRangeError
from .inference import PosteriorSummary
from .model import HmmModel, check_state_path, prior_marginals


def _log(a) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(a)


def power_risk(p, beta: float):
    """Power-family pointwise risk: (1 - p**beta)/beta, or -log p when beta is 0.

    Continuous in beta at 0, zero at p=1 for every beta, and monotone
    nonincreasing in p.
    """
    p = np.asarray(p, dtype=float)
    if beta == 0.0:
        out = -_log(p)
    else:
        out = (1.0 - p**beta) / beta
    return float(out) if out.ndim == 0 else out


def neg_power_log(p, beta: float):
    """-power_risk: log p when beta is 0, (p**beta - 1)/beta otherwise."""
    return -power_risk(p, beta)


@dataclass
class RiskWeights:
    """Weights (c1..c4) and inflection exponents of the combined decoding objective.

    c1 weighs the pointwise posterior term, c2 the joint path term, c3 the
    pointwise prior term, c4 the prior path term.  beta1/beta3 select the
    power-family member for the two pointwise terms (0 means logarithmic);
    the path-level terms are always logarithmic.
    """

    c1: float
    c2: float
    c3: float
    c4: float
    beta1: float = 0.0
    beta3: float = 0.0

    def __post_init__(self):
        for name in ("c1", "c2", "c3", "c4", "beta1", "beta3"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be nonnegative")
        if self.c1 + self.c2 + self.c3 + self.c4 <= 0:
            raise ValueError("at least one of c1..c4 must be positive")

    def tag(self) -> str:
        out = f"weights({self.c1:g},{self.c2:g},{self.c3:g},{self.c4:g})"
        if self.beta1 != 0.0 or self.beta3 != 0.0:
            out += f" beta1={self.beta1:g} beta3={self.beta3:g}"
        return out


_REPORT_FIELDS = (
    "r1_posterior",
    "rbar1_posterior",
    "rinf_posterior",
    "rbarinf_posterior",
    "rbarinf_joint",
    "r1_prior",
    "rbar1_prior",
    "rbarinf_prior",
)


@dataclass
class RiskReport:
    """Every risk functional of one path, evaluated exactly."""

    r1_posterior: float
    rbar1_posterior: float
    rinf_posterior: float
    rbarinf_posterior: float
    rbarinf_joint: float
    r1_prior: float
    rbar1_prior: float
    rbarinf_prior: float

    FIELDS = _REPORT_FIELDS

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in _REPORT_FIELDS}


def _as_paths0(num_states: int, paths) -> tuple[np.ndarray, bool]:
    """Normalize 1-based path input to a 0-based (N, T) index matrix."""
    arr = np.asarray(paths)
    single = arr.ndim == 1
    if single:
        arr = check_state_path(arr, num_states)[None, :]
    else:
        arr = arr.astype(int)
        if np.any(arr < 1) or np.any(arr > num_states):
            raise ValueError(f"state labels must lie in 1..{num_states}")
    return arr - 1, single


def _gather(table: np.ndarray, paths0: np.ndarray) -> np.ndarray:
    return table[np.arange(paths0.shape[1])[None, :], paths0]


def joint_log_likelihood(summary: PosteriorSummary, paths):
    """log p(x^T, s^T) for one path or a batch of paths."""
    paths0, single = _as_paths0(summary.num_states, paths)
    out = (
        summary.log_initial[paths0[:, 0]]
        + summary.log_transition[paths0[:, :-1], paths0[:, 1:]].sum(axis=1)
        + _gather(summary.log_emission, paths0).sum(axis=1)
    )
    return float(out[0]) if single else out


def prior_log_likelihood(summary: PosteriorSummary, paths):
    """log p(s^T) under the hidden chain alone."""
    paths0, single = _as_paths0(summary.num_states, paths)
    out = summary.log_initial[paths0[:, 0]] + summary.log_transition[
        paths0[:, :-1], paths0[:, 1:]
    ].sum(axis=1)
    return float(out[0]) if single else out


def posterior_log_probability(summary: PosteriorSummary, paths):
    """log p(s^T | x^T) = log p(x^T, s^T) - log p(x^T)."""
    return joint_log_likelihood(summary, paths) - summary.log_evidence


def combined_risk(summary: PosteriorSummary, paths, weights: RiskWeights):
    """The weighted decoding objective for one path or a batch of paths.

    c1 * mean power_risk(smoothed, beta1) + c2 * joint log-risk
    + c3 * mean power_risk(prior, beta3) + c4 * prior log-risk.
    Terms with zero weight are skipped so that 0 * inf never occurs.
    """
    paths0, single = _as_paths0(summary.num_states, paths)
    horizon = paths0.shape[1]
    if horizon != summary.horizon:
        raise ValueError(f"path length {horizon} does not match horizon {summary.horizon}")
    total = np.zeros(len(paths0))
    if weights.c1 > 0:
        total += weights.c1 * power_risk(_gather(summary.smoothed, paths0), weights.beta1).mean(axis=1)
    if weights.c2 > 0:
        total += weights.c2 * (-joint_log_likelihood(summary, paths0 + 1) / horizon)
    if weights.c3 > 0:
        total += weights.c3 * power_risk(_gather(summary.prior, paths0), weights.beta3).mean(axis=1)
    if weights.c4 > 0:
        total += weights.c4 * (-prior_log_likelihood(summary, paths0 + 1) / horizon)
    return float(total[0]) if single else total


def evaluate_risks(summary: PosteriorSummary, path) -> RiskReport:
    """Evaluate every catalogued risk of one path against (model, obs, posterior)."""
    paths0, _ = _as_paths0(summary.num_states, path)
    horizon = summary.horizon
    if paths0.shape[1] != horizon:
        raise ValueError(f"path length {paths0.shape[1]} does not match horizon {horizon}")
    sm = _gather(summary.smoothed, paths0)[0]
    lsm = _gather(summary.log_smoothed, paths0)[0]
    pm = _gather(summary.prior, paths0)[0]
    lpm = _gather(summary.log_prior, paths0)[0]
    joint_ll = joint_log_likelihood(summary, path)
    prior_ll = prior_log_likelihood(summary, path)
    post_lp = joint_ll - summary.log_evidence
    return RiskReport(
        r1_posterior=float(1.0 - sm.mean()),
        rbar1_posterior=float(-lsm.mean()),
        rinf_posterior=float(-np.expm1(post_lp)),
        rbarinf_posterior=float(-post_lp / horizon),
        rbarinf_joint=float(-joint_ll / horizon),
        r1_prior=float(1.0 - pm.mean()),
        rbar1_prior=float(-lpm.mean()),
        rbarinf_prior=float(-prior_ll / horizon),
    )


class PriorChain:
    """Window probabilities of the hidden chain prior to seeing any data."""

    def __init__(self, model: HmmModel, horizon: int):
        self.horizon = horizon
        self.num_states = model.num_states
        self.log_marginals = _log(prior_marginals(model, horizon))
        self.log_transition = _log(model.transition)

    def log_window(self, start: int, states0: np.ndarray) -> float:
        v = self.log_marginals[start - 1, states0[0]]
        if len(states0) > 1:
            v = v + self.log_transition[states0[:-1], states0[1:]].sum()
        return float(v)


class PosteriorChain:
    """Window probabilities of the hidden chain conditioned on the observations."""

    def __init__(self, summary: PosteriorSummary):
        self.summary = summary
        self.horizon = summary.horizon
        self.num_states = summary.num_states

    def log_window(self, start: int, states0: np.ndarray) -> float:
        s = self.summary
        v = s.log_forward[start - 1, states0[0]]
        for u in range(len(states0) - 1):
            v = v + (
                s.log_transition[states0[u], states0[u + 1]]
                + s.log_emission[start + u, states0[u + 1]]
                - s.log_scaling[start + u]
            )
        v = v + s.log_backward[start + len(states0) - 2, states0[-1]]
        return float(v)


def prior_chain(model: HmmModel, horizon: int) -> PriorChain:
    return PriorChain(model, horizon)


def posterior_chain(summary: PosteriorSummary) -> PosteriorChain:
    return PosteriorChain(summary)


def kblock_logrisk(chain, path, k: int) -> float:
    """Windowed log-risk: -(1/T) log of the product of all length-k window
    probabilities along the path, including the truncated boundary windows.

    ``chain`` is a PriorChain or PosteriorChain.  k=1 collapses to the
    pointwise log risk of the same chain.
    """
    horizon = chain.horizon
    if not 1 <= k <= horizon:
        raise KOutOfRangeError(f"k must lie in 1..{horizon}, got {k}")
    idx = check_state_path(path, chain.num_states) - 1
    if len(idx) != horizon:
        raise ValueError(f"path length {len(idx)} does not match horizon {horizon}")
    total = 0.0
    for j in range(1 - k, horizon):
        a = max(j + 1, 1)
        b = min(j + k, horizon)
        total += chain.log_window(a, idx[a - 1 : b])
    return -total / horizon


def rabiner_block_gain(summary: PosteriorSummary, path, k: int) -> float:
    """Expected number of correctly decoded overlapping k-blocks along the path.

    The sum over t of P(Y_t..Y_{t+k-1} = path window | x^T); equivalently
    T - k + 1 minus the expected block loss.
    """
    horizon = summary.horizon
    if not 1 <= k <= horizon:
        raise KOutOfRangeError(f"k must lie in 1..{horizon}, got {k}")
    idx = check_state_path(path, summary.num_states) - 1
    chain = PosteriorChain(summary)
    return float(
        sum(np.exp(chain.log_window(t, idx[t - 1 : t + k - 1])) for t in range(1, horizon - k + 2))
    )


def rabiner_gain_batch(summary: PosteriorSummary, paths, k: int) -> np.ndarray:
    """Vectorized rabiner_block_gain over a batch of paths (N, T)."""
    paths0, _ = _as_paths0(summary.num_states, paths)
    horizon = paths0.shape[1]
    if not 1 <= k <= horizon:
        raise KOutOfRangeError(f"k must lie in 1..{horizon}, got {k}")
    s = summary
    gains = np.zeros(len(paths0))
    for t in range(horizon - k + 1):
        logw = s.log_forward[t, paths0[:, t]].copy()
        for u in range(k - 1):
            logw += (
                s.log_transition[paths0[:, t + u], paths0[:, t + u + 1]]
                + s.log_emission[t + u + 1, paths0[:, t + u + 1]]
                - s.log_scaling[t + u + 1]
            )
        logw += s.log_backward[t + k - 1, paths0[:, t + k - 1]]
        gains += np.exp(logw)
    return gains
