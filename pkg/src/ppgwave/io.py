"""CSV/JSON readers and writers for recordings, prototypes and reports.

Formats:

* ``ppg.csv``     header ``time_s,value``
* ``rpeaks.csv``  header ``time_s``
* ``epochs.csv``  header ``start_s,end_s,label``

Floats are written with ``repr`` so they read back bit-identically.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidInputError
from .timeseries import EventTrain, UniformSeries


def fmt(x) -> str:
    if type(x) is float:
        return repr(x)
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if x is None:
        return ""
    return str(x)


def _read_rows(path, header: Sequence[str]) -> list[list[str]]:
    path = Path(path)
    with path.open(newline="") as fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise InvalidInputError(f"{path}: empty file") from None
        if [h.strip() for h in first] != list(header):
            raise InvalidInputError(f"{path}: expected header {','.join(header)}, got {','.join(first)}")
        return [row for row in reader if row]


def _floats(path, header) -> np.ndarray:
    rows = _read_rows(path, header)
    try:
        arr = np.array([[float(v) for v in row] for row in rows], dtype=float)
    except ValueError as exc:
        raise InvalidInputError(f"{path}: {exc}") from exc
    return arr.reshape(len(rows), len(header))


def read_ppg(path) -> UniformSeries:
    """Read a uniformly sampled trace; the rate is inferred from the time column."""
    data = _floats(path, ("time_s", "value"))
    if data.shape[0] < 2:
        raise InvalidInputError(f"{path}: need at least two samples")
    t = data[:, 0]
    dt = np.diff(t)
    step = float(np.median(dt))
    if step <= 0 or np.max(np.abs(dt - step)) > 1e-6 * step + 1e-9:
        raise InvalidInputError(f"{path}: samples are not uniformly spaced")
    # rate from the full span is less sensitive to rounding in single steps
    rate = (t.size - 1) / (t[-1] - t[0])
    return UniformSeries(data[:, 1], rate, float(t[0]))


def read_rpeaks(path) -> EventTrain:
    return EventTrain(_floats(path, ("time_s",))[:, 0])


def read_epochs(path) -> list[tuple[float, float, str]]:
    out = []
    for row in _read_rows(path, ("start_s", "end_s", "label")):
        try:
            out.append((float(row[0]), float(row[1]), row[2].strip()))
        except (ValueError, IndexError) as exc:
            raise InvalidInputError(f"{path}: bad epoch row {row}") from exc
    return out


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])


def read_csv_dicts(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


def write_ppg(path, s: UniformSeries) -> None:
    write_csv(path, ("time_s", "value"), zip(s.times.tolist(), s.values.tolist()))


def write_rpeaks(path, r: EventTrain) -> None:
    write_csv(path, ("time_s",), ((t,) for t in r.times.tolist()))


def write_epochs(path, epochs) -> None:
    write_csv(path, ("start_s", "end_s", "label"), ((float(a), float(b), lab) for a, b, lab in epochs))


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    return obj


def write_json(path, obj) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_jsonable(obj), indent=2, sort_keys=True, allow_nan=False) + "\n")


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"{path}: invalid JSON ({exc})") from exc
