"""Max-sum lattice kernel shared by every path decoder in the package.

A decoding problem is given by per-position gains g[t, j], an extra initial
score for the first position, and a constant transition score matrix w[i, j];
the kernel maximizes

    init_extra[s_1] + sum_t g[t, s_t] + sum_t w[s_t, s_{t+1}]

over all state sequences.  Scores may be -inf; -inf is absorbing.

Tie policy: among all maximizers the kernel returns the lexicographically
smallest path.  This is done with a backward cost-to-go sweep followed by a
greedy forward selection, choosing at each position the smallest state whose
continuation value is within ``TIE_TOL`` of the best.  The tolerance exists
because mathematically exact ties can differ by a few ulps when the same
score is accumulated along different orders.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NoFinitePathError

TIE_TOL = 1e-12


def _first_within(values: np.ndarray, best: float) -> int:
    return int(np.flatnonzero(values >= best - TIE_TOL)[0])


def best_path(gains: np.ndarray, init_extra: np.ndarray, trans: np.ndarray):
    """Return (path, score) for the lexicographically smallest maximizer.

    ``path`` holds 0-based state indices of shape (T,).  Raises
    NoFinitePathError when no path has finite score.
    """
    gains = np.asarray(gains, dtype=float)
    horizon = gains.shape[0]
    phi = np.empty_like(gains)
    phi[-1] = gains[-1]
    for t in range(horizon - 2, -1, -1):
        phi[t] = gains[t] + np.max(trans + phi[t + 1][None, :], axis=1)
    start = init_extra + phi[0]
    best = float(start.max())
    if not np.isfinite(best):
        raise NoFinitePathError("all candidate paths have -inf score")
    path = np.empty(horizon, dtype=int)
    path[0] = _first_within(start, best)
    for t in range(1, horizon):
        vals = trans[path[t - 1]] + phi[t]
        path[t] = _first_within(vals, float(vals.max()))
    return path, best


@dataclass
class Lattice:
    """Forward score table of a decoding problem, for inspection and testing.

    ``delta[t, j]`` is the best score over prefixes ending in state j at
    position t; ``backpointers[t, j]`` is the smallest-index optimal
    predecessor (row 0 is -1); ``terminal`` is the smallest index maximizing
    the final row.
    """

    delta: np.ndarray
    backpointers: np.ndarray
    terminal: int
    score: float


def forward_lattice(gains: np.ndarray, init_extra: np.ndarray, trans: np.ndarray) -> Lattice:
    """Run the forward recursion and return the full score lattice."""
    gains = np.asarray(gains, dtype=float)
    horizon, num_states = gains.shape
    delta = np.empty_like(gains)
    back = np.full((horizon, num_states), -1, dtype=int)
    delta[0] = init_extra + gains[0]
    for t in range(1, horizon):
        cand = delta[t - 1][:, None] + trans
        back[t] = np.argmax(cand, axis=0)
        delta[t] = cand[back[t], np.arange(num_states)] + gains[t]
    terminal = int(np.argmax(delta[-1]))
    return Lattice(delta=delta, backpointers=back, terminal=terminal, score=float(delta[-1, terminal]))
