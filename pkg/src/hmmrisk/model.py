"""Hidden Markov model definition, validation, prior marginals, and sampling.

States are labelled 1..K on every public surface (paths, label maps, CLI
output); internally all arrays are indexed 0..K-1.  Categorical symbols and
direct-likelihood row positions are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DirectLikelihoodNotGenerativeError

PROB_SUM_TOL = 1e-12


def _readonly(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.setflags(write=False)
    return out


@dataclass
class Categorical:
    """Finite-alphabet emissions: ``table[s, m]`` is the probability of symbol m in state s."""

    table: np.ndarray

    def __post_init__(self):
        self.table = _readonly(self.table)

    @property
    def num_states(self) -> int:
        return self.table.shape[0]

    def violations(self) -> list[str]:
        out = []
        if self.table.ndim != 2:
            return [f"emission table must be 2-dimensional, got shape {self.table.shape}"]
        if np.any(self.table < 0):
            rows = np.unique(np.nonzero(self.table < 0)[0]) + 1
            out.append(f"emission row {rows[0]} has a negative entry")
        sums = self.table.sum(axis=1)
        bad = np.nonzero(np.abs(sums - 1.0) > PROB_SUM_TOL)[0]
        for i in bad:
            out.append(f"emission row {i + 1} sums to {sums[i]:.12g}")
        return out

    def log_likelihood(self, obs) -> np.ndarray:
        obs = np.asarray(obs)
        if obs.ndim != 1:
            raise ValueError("categorical observations must be a 1-d sequence of symbol indices")
        symbols = obs.astype(int)
        if np.any(symbols != obs):
            raise ValueError("categorical observations must be integer symbol indices")
        m = self.table.shape[1]
        if np.any(symbols < 0) or np.any(symbols >= m):
            raise ValueError(f"symbol index outside alphabet of size {m}")
        with np.errstate(divide="ignore"):
            return np.log(self.table[:, symbols].T)

    def sample(self, state_indices, rng) -> np.ndarray:
        cdf = np.cumsum(self.table, axis=1)
        u = rng.random(len(state_indices))
        rows = cdf[state_indices]
        return np.minimum(
            (u[:, None] > rows).sum(axis=1), self.table.shape[1] - 1
        ).astype(int)


@dataclass
class DiagonalGaussian:
    """Gaussian emissions with per-state mean and variance vectors (diagonal covariance)."""

    means: np.ndarray
    variances: np.ndarray

    def __post_init__(self):
        self.means = _readonly(np.atleast_2d(self.means))
        self.variances = _readonly(np.atleast_2d(self.variances))

    @property
    def num_states(self) -> int:
        return self.means.shape[0]

    def violations(self) -> list[str]:
        out = []
        if self.means.shape != self.variances.shape:
            out.append("emission means and variances must have matching shapes")
            return out
        bad = np.nonzero(~(self.variances > 0).all(axis=1))[0]
        for i in bad:
            out.append(f"emission state {i + 1} has a non-positive variance")
        return out

    def log_likelihood(self, obs) -> np.ndarray:
        obs = np.asarray(obs, dtype=float)
        if obs.ndim == 1:
            obs = obs[:, None]
        if obs.shape[1] != self.means.shape[1]:
            raise ValueError(
                f"observation dimension {obs.shape[1]} does not match emission dimension "
                f"{self.means.shape[1]}"
            )
        diff = obs[:, None, :] - self.means[None, :, :]
        ll = -0.5 * (np.log(2.0 * np.pi * self.variances)[None] + diff**2 / self.variances[None])
        return ll.sum(axis=2)

    def sample(self, state_indices, rng) -> np.ndarray:
        mu = self.means[state_indices]
        sd = np.sqrt(self.variances[state_indices])
        out = mu + sd * rng.standard_normal(mu.shape)
        return out[:, 0] if out.shape[1] == 1 else out


@dataclass
class DirectLikelihood:
    """Explicit per-position density values ``table[t, s]`` for one fixed observation sequence.

    Observations under this mode are row positions into the table.  The mode
    exists so instances given only through density values at a handful of
    points are representable verbatim; it is not generative.
    """

    table: np.ndarray

    def __post_init__(self):
        self.table = _readonly(self.table)

    @property
    def num_states(self) -> int:
        return self.table.shape[1]

    def violations(self) -> list[str]:
        if self.table.ndim != 2:
            return [f"likelihood table must be 2-dimensional, got shape {self.table.shape}"]
        if np.any(self.table < 0):
            rows = np.unique(np.nonzero(self.table < 0)[0]) + 1
            return [f"likelihood table row {rows[0]} has a negative entry"]
        return []

    def log_likelihood(self, obs) -> np.ndarray:
        positions = np.asarray(obs).astype(int)
        if positions.ndim != 1:
            raise ValueError("direct-likelihood observations must be 1-d row positions")
        n = self.table.shape[0]
        if np.any(positions < 0) or np.any(positions >= n):
            raise ValueError(f"position index outside likelihood table of length {n}")
        with np.errstate(divide="ignore"):
            return np.log(self.table[positions])

    def sample(self, state_indices, rng):
        raise DirectLikelihoodNotGenerativeError(
            "direct-likelihood emissions attach to a fixed observation sequence and cannot be sampled"
        )


Emission = Categorical | DiagonalGaussian | DirectLikelihood


@dataclass
class HmmModel:
    """A hidden Markov model: initial distribution, transition matrix, emission spec.

    Instances are immutable after construction (arrays are marked read-only)
    and safe to share across concurrent decoders.
    """

    initial: np.ndarray
    transition: np.ndarray
    emission: Emission

    def __post_init__(self):
        self.initial = _readonly(self.initial)
        self.transition = _readonly(self.transition)

    @property
    def num_states(self) -> int:
        return len(self.initial)


def validate_model(model: HmmModel) -> list[str]:
    """Check every model invariant; return a list of violations (empty means valid).

    Violations name the offending field and 1-based index.  This reports and
    never raises.
    """
    out = []
    k = model.num_states
    if k < 1:
        out.append("initial distribution is empty")
        return out
    if model.transition.shape != (k, k):
        out.append(
            f"transition matrix shape {model.transition.shape} does not match {k} states"
        )
        return out
    if np.any(model.initial < 0):
        out.append("initial distribution has a negative entry")
    s = model.initial.sum()
    if abs(s - 1.0) > PROB_SUM_TOL:
        out.append(f"initial distribution sums to {s:.12g}")
    if np.any(model.transition < 0):
        rows = np.unique(np.nonzero(model.transition < 0)[0]) + 1
        out.append(f"transition row {rows[0]} has a negative entry")
    sums = model.transition.sum(axis=1)
    for i in np.nonzero(np.abs(sums - 1.0) > PROB_SUM_TOL)[0]:
        out.append(f"transition row {i + 1} sums to {sums[i]:.12g}")
    if model.emission.num_states != k:
        out.append(
            f"emission is specified for {model.emission.num_states} states, model has {k}"
        )
    out.extend(model.emission.violations())
    return out


def prior_marginals(model: HmmModel, horizon: int) -> np.ndarray:
    """Marginal state distributions of the hidden chain: row t is pi @ P^t.

    Returns an array of shape (horizon, K) whose row t-1 is the distribution
    of the hidden state at time t.
    """
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    out = np.empty((horizon, model.num_states))
    out[0] = model.initial
    for t in range(1, horizon):
        out[t] = out[t - 1] @ model.transition
    return out


def check_state_path(path, num_states: int) -> np.ndarray:
    """Validate a 1-based state path and return it as an int array."""
    arr = np.asarray(path).astype(int)
    if arr.ndim != 1 or len(arr) == 0:
        raise ValueError("a state path must be a non-empty 1-d sequence")
    if np.any(arr < 1) or np.any(arr > num_states):
        raise ValueError(f"state labels must lie in 1..{num_states}")
    return arr


def sample_trajectory(model: HmmModel, horizon: int, seed: int):
    """Draw one (hidden path, observation sequence) pair of the given length.

    Deterministic for a fixed seed.  The hidden path is returned with 1-based
    state labels.  Raises for direct-likelihood emissions, which are tied to a
    fixed observation sequence.
    """
    if isinstance(model.emission, DirectLikelihood):
        raise DirectLikelihoodNotGenerativeError(
            "cannot sample trajectories from a direct-likelihood model"
        )
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    rng = np.random.default_rng(seed)
    states = np.empty(horizon, dtype=int)
    cdf0 = np.cumsum(model.initial)
    cdf = np.cumsum(model.transition, axis=1)
    u = rng.random(horizon)
    states[0] = np.searchsorted(cdf0, u[0], side="right")
    for t in range(1, horizon):
        states[t] = np.searchsorted(cdf[states[t - 1]], u[t], side="right")
    states = np.minimum(states, model.num_states - 1)
    obs = model.emission.sample(states, rng)
    return tuple(int(s) + 1 for s in states), obs
