"""CSV/JSON serialization for trajectories, isotherms, envelopes and
master-equation comparisons.  Floats are written with 17 significant
digits so files round-trip exactly and repeat runs are byte-identical."""

from __future__ import annotations

import csv
import json
import math
from collections.abc import Iterable, Sequence
from typing import IO, Any

import numpy as np

from .isotherms import Isotherm
from .transient import EnvelopeSeries
from .walker import Trajectory

TRAJECTORY_COLUMNS = ["t", "p_left", "p_right", "re_q", "im_q", "norm"]
DENSITY_COLUMNS = ["lambda_plus", "lambda_minus", "entropy_bits"]
ISOTHERM_COLUMNS = ["t_ratio_or_T", "branch_id", "x", "y"]
ENVELOPE_COLUMNS = ["branch", "t", "value"]
MASTER_COLUMNS = ["t", "lambda_plus_numeric", "lambda_plus_closed", "abs_err"]


def fmt(x: Any) -> str:
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x) + 0.0  # folds -0.0 into 0.0
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    return str(x)


def write_rows(fh: IO[str], header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])


def trajectory_table(traj: Trajectory, density: bool = True) -> tuple[list[str], list[list[Any]]]:
    header = list(TRAJECTORY_COLUMNS)
    cols = [traj.t, traj.p_left, traj.p_right, traj.q.real, traj.q.imag, traj.norm]
    if density:
        extra = traj.eigen_columns()
        header += DENSITY_COLUMNS
        cols += [extra[k] for k in DENSITY_COLUMNS]
    return header, [list(r) for r in zip(*cols)]


def write_trajectory(fh: IO[str], traj: Trajectory, density: bool = True) -> None:
    write_rows(fh, *trajectory_table(traj, density))


def read_trajectory(fh: IO[str]) -> Trajectory:
    rows = list(csv.DictReader(fh))
    t = np.array([int(r["t"]) for r in rows], dtype=np.int64)
    f = lambda k: np.array([float(r[k]) for r in rows])
    q = f("re_q") + 1j * f("im_q")
    return Trajectory(t, f("p_left"), f("p_right"), q, f("norm"), math.nan)


def write_isotherms(fh: IO[str], curves: Sequence[Isotherm]) -> None:
    write_rows(fh, ISOTHERM_COLUMNS, (row for c in curves for row in c.rows()))


def write_envelope(fh: IO[str], branches: Sequence[EnvelopeSeries]) -> None:
    rows = ((env.branch, int(t), v) for env in branches for t, v in zip(env.t, env.value))
    write_rows(fh, ENVELOPE_COLUMNS, rows)


def write_master(fh: IO[str], numeric: np.ndarray, closed: np.ndarray) -> None:
    err = np.abs(numeric[:, 1] - closed)
    write_rows(fh, MASTER_COLUMNS, zip(numeric[:, 0], numeric[:, 1], closed, err))


def _jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        x = float(x) + 0.0  # folds -0.0 into 0.0
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return None
        return x
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": float(x.real), "im": float(x.imag)}
    return x


def dump_json(obj: Any, fh: IO[str]) -> None:
    json.dump(_jsonable(obj), fh, indent=2, sort_keys=True)
    fh.write("\n")
