"""Signal containers and the small numerical kernels every stage relies on.

Everything here is a pure function of immutable inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal, Sequence

import numpy as np

from .errors import InvalidInputError, SupportRangeError

DEFAULT_SAMPLE_RATE = 40.0

Direction = Literal["down", "up"]


def _frozen_array(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be one-dimensional")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class UniformSeries:
    """Uniformly sampled scalar signal.

    Sample ``j`` sits at ``start_time + j / sample_rate``.
    """

    values: np.ndarray
    sample_rate: float = DEFAULT_SAMPLE_RATE
    start_time: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values, "values"))
        if not (np.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise InvalidInputError("sample_rate must be positive and finite")
        if not np.isfinite(self.start_time):
            raise InvalidInputError("start_time must be finite")
        if self.values.size < 2:
            raise InvalidInputError("a series needs at least two samples")

    def __len__(self) -> int:
        return self.values.size

    @property
    def times(self) -> np.ndarray:
        return self.start_time + np.arange(self.values.size) / self.sample_rate

    @property
    def end_time(self) -> float:
        """Time of the last sample."""
        return self.start_time + (self.values.size - 1) / self.sample_rate

    def with_values(self, values) -> "UniformSeries":
        return UniformSeries(values, self.sample_rate, self.start_time)


@dataclass(frozen=True, eq=False)
class EventTrain:
    """Strictly increasing event times in seconds (R-peaks, boundaries, ...)."""

    times: np.ndarray

    def __post_init__(self):
        times = _frozen_array(self.times, "times")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise InvalidInputError("event times must be strictly increasing")
        object.__setattr__(self, "times", times)

    def __len__(self) -> int:
        return self.times.size

    @property
    def ibis(self) -> np.ndarray:
        return np.diff(self.times)


@dataclass(frozen=True)
class ZeroCrossing:
    time: float
    direction: Direction
    offset: float = field(default=0.0)


def zero_mean(s: UniformSeries) -> UniformSeries:
    """Remove the sample mean; length, rate and start are preserved."""
    return s.with_values(s.values - s.values.mean())


def crossing_indices(values: np.ndarray, direction: str = "both"):
    """Vectorised crossing search on a bare array.

    Returns ``(index, offset, is_down)`` arrays where the crossing lies at
    ``index + offset`` samples. A down crossing goes from ``>= 0`` to ``< 0``
    and an up crossing from ``<= 0`` to ``> 0``, so an exact zero is assigned
    by the sample that follows it.
    """
    if direction not in ("down", "up", "both"):
        raise InvalidInputError(f"unknown direction {direction!r}")
    a = values[:-1]
    b = values[1:]
    down = (a >= 0) & (b < 0)
    up = (a <= 0) & (b > 0)
    if direction == "down":
        mask = down
    elif direction == "up":
        mask = up
    else:
        mask = down | up
    idx = np.flatnonzero(mask)
    a_sel = a[idx]
    b_sel = b[idx]
    offset = a_sel / (a_sel - b_sel)
    return idx, offset, down[idx]


def find_zero_crossings(s: UniformSeries, direction: str = "both") -> list[ZeroCrossing]:
    """Locate sign changes of ``s`` by linear interpolation between samples.

    The caller is expected to pass a zero-mean signal. Crossings are returned
    in time order.
    """
    idx, offset, is_down = crossing_indices(s.values, direction)
    times = s.start_time + (idx + offset) / s.sample_rate
    return [
        ZeroCrossing(float(t), "down" if d else "up", float(o))
        for t, o, d in zip(times, offset, is_down)
    ]


def resample_to_grid(s: UniformSeries, t_start: float, t_end: float, n: int) -> np.ndarray:
    """Linearly interpolate ``s`` on ``n`` points covering ``[t_start, t_end)``."""
    if n < 2:
        raise InvalidInputError("grid needs at least two points")
    if not t_start < t_end:
        raise InvalidInputError("t_start must precede t_end")
    # tolerate rounding of event times computed from sample indices
    slack = 1e-9 / s.sample_rate
    if t_start < s.start_time - slack or t_end > s.end_time + slack:
        raise SupportRangeError(
            f"[{t_start}, {t_end}] outside series support [{s.start_time}, {s.end_time}]"
        )
    grid = t_start + np.arange(n) * ((t_end - t_start) / n)
    pos = (grid - s.start_time) * s.sample_rate
    return np.interp(pos, np.arange(s.values.size), s.values)


def _stack_cycles(cycles: Sequence[Sequence[float]]) -> np.ndarray:
    if len(cycles) == 0:
        raise InvalidInputError("need at least one cycle")
    lengths = {len(c) for c in cycles}
    if len(lengths) != 1:
        raise InvalidInputError("cycles have unequal lengths")
    arr = np.asarray(cycles, dtype=float)
    if arr.ndim != 2 or arr.shape[1] == 0:
        raise InvalidInputError("cycles must be a non-empty 2-D table")
    return arr


def _sorted_quantile(ordered: np.ndarray, q: float) -> np.ndarray:
    # linear interpolation between order statistics (R type 7)
    h = (ordered.shape[0] - 1) * q
    lo = int(np.floor(h))
    hi = min(lo + 1, ordered.shape[0] - 1)
    frac = h - lo
    return ordered[lo] + frac * (ordered[hi] - ordered[lo])


def pointwise_quartiles(cycles: Sequence[Sequence[float]]):
    """Per-sample ``(q1, median, q3)`` across cycles (rows)."""
    ordered = np.sort(_stack_cycles(cycles), axis=0)
    n = ordered.shape[0]
    mid = n // 2
    if n % 2:
        median = ordered[mid].copy()
    else:
        median = (ordered[mid - 1] + ordered[mid]) / 2
    return _sorted_quantile(ordered, 0.25), median, _sorted_quantile(ordered, 0.75)


def pointwise_median_iqr(cycles: Sequence[Sequence[float]]):
    """Per-sample median and interquartile range over equally long cycles."""
    q1, median, q3 = pointwise_quartiles(cycles)
    return median, q3 - q1


def quantile(values, q: float) -> float:
    """Scalar type-7 quantile of a 1-D sample."""
    ordered = np.sort(np.asarray(values, dtype=float))
    if ordered.size == 0:
        raise InvalidInputError("quantile of an empty sample")
    return float(_sorted_quantile(ordered, q))
