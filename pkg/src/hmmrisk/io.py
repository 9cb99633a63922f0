"""On-disk formats: model files, observation files, label maps, and the flat
risk-record / CSV serializations used by the command line tool.

Model file (JSON): keys ``num_states``, ``initial``, ``transition``, and
``emission: {type, params}`` with type one of "categorical" (params: table),
"gaussian" (params: means, variances), "direct" (params: table).

Observation file: one observation per line; a symbol index for categorical
emissions, whitespace-separated reals for Gaussian emissions, a row position
for direct-likelihood emissions.

Label file (JSON): ``{"labels": {"1": "A", ...}, "beta": 1.0}``.

All numbers are printed with 12 significant digits; +inf serializes as "inf".
"""

from __future__ import annotations

import hashlib
import json

import numpy as np

from .errors import ParseError
from .labelling import LabelMap
from .model import Categorical, DiagonalGaussian, DirectLikelihood, HmmModel, validate_model
from .risk import RiskReport


def fmt(x) -> str:
    """Format one number with 12 significant digits."""
    return f"{float(x):.12g}"


def path_hash(path) -> str:
    """Stable short digest of a state path."""
    text = "-".join(str(int(s)) for s in path)
    return hashlib.sha1(text.encode()).hexdigest()[:12]


_EMISSION_TYPES = {"categorical", "gaussian", "direct"}


def model_to_dict(model: HmmModel) -> dict:
    if isinstance(model.emission, Categorical):
        emission = {"type": "categorical", "params": {"table": model.emission.table.tolist()}}
    elif isinstance(model.emission, DiagonalGaussian):
        emission = {
            "type": "gaussian",
            "params": {
                "means": model.emission.means.tolist(),
                "variances": model.emission.variances.tolist(),
            },
        }
    else:
        emission = {"type": "direct", "params": {"table": model.emission.table.tolist()}}
    return {
        "num_states": model.num_states,
        "initial": model.initial.tolist(),
        "transition": model.transition.tolist(),
        "emission": emission,
    }


def model_from_dict(data: dict) -> HmmModel:
    try:
        num_states = int(data["num_states"])
        initial = np.asarray(data["initial"], dtype=float)
        transition = np.asarray(data["transition"], dtype=float)
        spec = data["emission"]
        etype = spec["type"]
        params = spec["params"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed model document: {exc}") from exc
    if etype not in _EMISSION_TYPES:
        raise ParseError(f"unknown emission type {etype!r}")
    try:
        if etype == "categorical":
            emission = Categorical(np.asarray(params["table"], dtype=float))
        elif etype == "gaussian":
            emission = DiagonalGaussian(
                np.asarray(params["means"], dtype=float),
                np.asarray(params["variances"], dtype=float),
            )
        else:
            emission = DirectLikelihood(np.asarray(params["table"], dtype=float))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed emission params: {exc}") from exc
    model = HmmModel(initial=initial, transition=transition, emission=emission)
    if model.num_states != num_states:
        raise ParseError(
            f"num_states is {num_states} but the initial distribution has {model.num_states} entries"
        )
    return model


def load_model(path) -> HmmModel:
    """Parse and validate a model file; raises ParseError on any violation."""
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: not valid JSON: {exc}") from exc
    model = model_from_dict(data)
    violations = validate_model(model)
    if violations:
        raise ParseError(f"{path}: invalid model: " + "; ".join(violations))
    return model


def save_model(model: HmmModel, path) -> None:
    with open(path, "w") as fh:
        json.dump(model_to_dict(model), fh, indent=1)
        fh.write("\n")


def load_observations(path, model: HmmModel) -> np.ndarray:
    """Parse an observation file according to the model's emission type."""
    lines = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if line:
                lines.append(line)
    if not lines:
        raise ParseError(f"{path}: no observations")
    try:
        if isinstance(model.emission, DiagonalGaussian):
            rows = [[float(x) for x in line.split()] for line in lines]
            widths = {len(r) for r in rows}
            if len(widths) != 1:
                raise ParseError(f"{path}: ragged observation rows")
            out = np.asarray(rows)
            return out[:, 0] if out.shape[1] == 1 else out
        return np.asarray([int(line) for line in lines])
    except ValueError as exc:
        raise ParseError(f"{path}: bad observation line: {exc}") from exc


def save_observations(obs, path) -> None:
    arr = np.asarray(obs)
    with open(path, "w") as fh:
        if arr.ndim == 1 and np.issubdtype(arr.dtype, np.integer):
            fh.writelines(f"{int(v)}\n" for v in arr)
        else:
            arr2 = arr[:, None] if arr.ndim == 1 else arr
            # repr round-trips binary64 exactly; observation files are inputs
            fh.writelines(" ".join(repr(float(v)) for v in row) + "\n" for row in arr2)


def load_label_map(path, num_states: int) -> LabelMap:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{path}: not valid JSON: {exc}") from exc
    try:
        raw = data["labels"]
        assignment = {int(k): str(v) for k, v in raw.items()}
        beta = float(data.get("beta", 1.0))
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise ParseError(f"{path}: malformed label map: {exc}") from exc
    if sorted(assignment) != list(range(1, num_states + 1)):
        raise ParseError(f"{path}: label map must cover states 1..{num_states}")
    return LabelMap(assignment, beta)


def load_path(path) -> tuple[int, ...]:
    """Read a state path file: one 1-based state per line (extra columns ignored)."""
    out = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            try:
                out.append(int(line.split()[0]))
            except ValueError as exc:
                raise ParseError(f"{path}: bad path line {line!r}") from exc
    if not out:
        raise ParseError(f"{path}: empty path file")
    return tuple(out)


def risk_record_lines(report: RiskReport) -> list[str]:
    """Flat key/value record, one metric per line, in canonical field order."""
    return [f"{name} {fmt(value)}" for name, value in report.as_dict().items()]


def csv_line(values) -> str:
    parts = []
    for v in values:
        if isinstance(v, bool):
            parts.append("true" if v else "false")
        elif isinstance(v, (int, np.integer)):
            parts.append(str(int(v)))
        elif isinstance(v, float):
            parts.append(fmt(v))
        else:
            parts.append(str(v))
    return ",".join(parts)
