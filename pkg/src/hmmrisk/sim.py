"""Monte Carlo study of decoder risks as the horizon grows.

No limiting constants are asserted anywhere; the module produces trajectories
and checks inequalities that must hold sample by sample.  Replicate r always
uses seed ``seed + r``, so runs are reproducible and horizons share common
random numbers.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .decoders import kblock_pvd_decode, resolve_decoder, viterbi_decode
from .inference import forward_backward
from .model import HmmModel, sample_trajectory
from .risk import RiskReport

METRICS = ("empirical_error",) + RiskReport.FIELDS


def _mean_sd(values: np.ndarray) -> tuple[float, float]:
    if np.all(np.isfinite(values)):
        return float(values.mean()), float(values.std(ddof=1))
    return float("inf"), float("inf")


@dataclass
class RiskTrajectory:
    """Per-horizon, per-decoder sample means and standard deviations."""

    horizons: tuple[int, ...]
    decoders: tuple[str, ...]
    replicates: int
    seed: int
    records: list[dict]

    def rows(self) -> list[dict]:
        return self.records

    def stat(self, horizon: int, decoder: str, metric: str) -> tuple[float, float]:
        for row in self.records:
            if row["horizon"] == horizon and row["decoder_tag"] == decoder and row["metric"] == metric:
                return row["mean"], row["sd"]
        raise KeyError((horizon, decoder, metric))


def estimate_risk_trajectories(
    model: HmmModel, decoders, horizons, replicates: int, seed: int
) -> RiskTrajectory:
    """Sample trajectories, decode each with every requested decoder, and
    aggregate the risks over replicates.

    ``decoders`` is a list of tags understood by resolve_decoder.  For every
    replicate the decoded path is scored both against the posterior (the full
    RiskReport) and against the true sampled path (empirical_error, the
    fraction of misclassified positions).
    """
    if replicates < 2:
        raise ValueError("at least 2 replicates are needed for standard deviations")
    horizons = tuple(int(t) for t in horizons)
    tags = tuple(decoders)
    fns = {tag: resolve_decoder(tag) for tag in tags}
    records = []
    for horizon in horizons:
        values = {tag: {metric: np.empty(replicates) for metric in METRICS} for tag in tags}
        for r in range(replicates):
            truth, obs = sample_trajectory(model, horizon, seed + r)
            summary = forward_backward(model, obs)
            truth_arr = np.asarray(truth)
            for tag in tags:
                decoded = fns[tag](summary)
                values[tag]["empirical_error"][r] = np.mean(np.asarray(decoded.path) != truth_arr)
                for name, value in decoded.risks.as_dict().items():
                    values[tag][name][r] = value
        for tag in tags:
            for metric in METRICS:
                mean, sd = _mean_sd(values[tag][metric])
                records.append(
                    {
                        "horizon": horizon,
                        "decoder_tag": tag,
                        "metric": metric,
                        "mean": mean,
                        "sd": sd,
                        "replicates": replicates,
                    }
                )
    return RiskTrajectory(
        horizons=horizons, decoders=tags, replicates=replicates, seed=seed, records=records
    )


def sandwich_constant_sweep(model: HmmModel, horizons, ks, replicates: int, seed: int) -> list[dict]:
    """Realized interpolation gaps against their theoretical envelope.

    For every sampled sequence and every k >= 2, the gap
    rbarinf(k-block path) - rbarinf(viterbi path) must lie in
    [0, rbar1(viterbi)/(k-1) + 1e-9]; a violation raises AssertionError.
    Returns one row per (horizon, k, replicate).
    """
    rows = []
    for horizon in horizons:
        for r in range(replicates):
            _, obs = sample_trajectory(model, int(horizon), seed + r)
            summary = forward_backward(model, obs)
            base = viterbi_decode(summary).risks
            for k in ks:
                k = int(k)
                if k < 2:
                    raise ValueError("the gap bound needs k >= 2")
                decoded = kblock_pvd_decode(summary, k)
                gap = decoded.risks.rbarinf_posterior - base.rbarinf_posterior
                bound = base.rbar1_posterior / (k - 1)
                if not (0.0 <= gap <= bound + 1e-9):
                    raise AssertionError(
                        f"gap {gap} outside [0, {bound}] at horizon={horizon} k={k} replicate={r}"
                    )
                rows.append(
                    {
                        "horizon": int(horizon),
                        "k": k,
                        "replicate": r,
                        "gap": gap,
                        "bound": bound,
                    }
                )
    return rows
