"""Cutting a PPG trace into cardiac cycles.

Two boundary sources are supported: ECG R-peaks (``ecg_based``) and the
downgoing zero-crossings of the PPG itself (``ppg_blind``). Each cycle is
resampled onto a common grid of ``grid_size`` points covering
``[start, start + ibi)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Sequence

import numpy as np
from scipy.ndimage import uniform_filter1d

from .errors import EmptyResultError, InsufficientEventsError, InvalidInputError
from .timeseries import EventTrain, UniformSeries, crossing_indices, resample_to_grid, zero_mean

DEFAULT_GRID_SIZE = 100
DEFAULT_REJECT_LOW = 0.7
DEFAULT_REJECT_HIGH = 1.3

# plausible cardiac periods for the autocorrelation search, seconds
_MIN_PERIOD = 0.3
_MAX_PERIOD = 2.0


class SegmentationMethod(str, Enum):
    ECG_BASED = "ecg_based"
    PPG_BLIND = "ppg_blind"


@dataclass(frozen=True, eq=False)
class Cycle:
    waveform: np.ndarray
    start: float
    ibi: float
    labels: frozenset = frozenset()


@dataclass(frozen=True, eq=False)
class CycleSet:
    grid_size: int
    cycles: tuple = ()
    n_discarded: int = 0

    def __post_init__(self):
        object.__setattr__(self, "cycles", tuple(self.cycles))
        for c in self.cycles:
            if len(c.waveform) != self.grid_size:
                raise InvalidInputError("cycle waveform does not match grid size")
            if not c.ibi > 0:
                raise InvalidInputError("cycle ibi must be positive")
        starts = [c.start for c in self.cycles]
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise InvalidInputError("cycle starts must be strictly increasing")

    def __len__(self) -> int:
        return len(self.cycles)

    @property
    def waveforms(self) -> np.ndarray:
        return np.array([c.waveform for c in self.cycles]).reshape(len(self.cycles), self.grid_size)

    @property
    def ibis(self) -> np.ndarray:
        return np.array([c.ibi for c in self.cycles])

    @property
    def starts(self) -> np.ndarray:
        return np.array([c.start for c in self.cycles])

    def subset(self, keep: Iterable[bool]) -> "CycleSet":
        return CycleSet(self.grid_size, [c for c, k in zip(self.cycles, keep) if k])


def _cut(ppg: UniformSeries, bounds: np.ndarray, grid_size: int) -> list[Cycle]:
    cycles = []
    for t0, t1 in zip(bounds[:-1], bounds[1:]):
        wave = resample_to_grid(ppg, t0, t1, grid_size)
        wave.setflags(write=False)
        cycles.append(Cycle(wave, float(t0), float(t1 - t0)))
    return cycles


def segment_by_ecg(ppg: UniformSeries, rpeaks: EventTrain, grid_size: int = DEFAULT_GRID_SIZE) -> CycleSet:
    """One cycle per consecutive pair of R-peaks inside the PPG support."""
    t = rpeaks.times
    slack = 1e-9 / ppg.sample_rate
    usable = t[(t >= ppg.start_time - slack) & (t <= ppg.end_time + slack)]
    if usable.size < 2:
        raise InsufficientEventsError(f"need two R-peaks inside the PPG trace, got {usable.size}")
    return CycleSet(grid_size, _cut(ppg, usable, grid_size))


def estimate_period(s: UniformSeries) -> float:
    """Dominant cardiac period from the autocorrelation of the zero-mean trace.

    Takes the first local maximum within [0.3, 2.0] s that reaches 80% of the
    largest one, which avoids locking onto period multiples.
    """
    x = s.values - s.values.mean()
    n = x.size
    if not np.any(x):
        raise InsufficientEventsError("constant signal has no cardiac period")
    nfft = 1 << int(np.ceil(np.log2(2 * n)))
    spec = np.fft.rfft(x, nfft)
    acf = np.fft.irfft(np.abs(spec) ** 2, nfft)[:n]
    acf /= np.arange(n, 0, -1)  # unbiased
    lo = max(1, int(np.floor(_MIN_PERIOD * s.sample_rate)))
    hi = min(int(np.ceil(_MAX_PERIOD * s.sample_rate)), n // 2)
    if hi - lo < 2:
        raise InsufficientEventsError("trace too short to estimate the cardiac period")
    seg = acf[lo : hi + 1]
    inner = np.flatnonzero((seg[1:-1] >= seg[:-2]) & (seg[1:-1] > seg[2:])) + 1
    if inner.size == 0 or seg[inner].max() <= 0:
        raise InsufficientEventsError("no periodic component found")
    best = seg[inner].max()
    j = inner[np.flatnonzero(seg[inner] >= 0.8 * best)[0]]
    # parabolic refinement of the lag
    y0, y1, y2 = seg[j - 1], seg[j], seg[j + 1]
    denom = y0 - 2 * y1 + y2
    delta = 0.5 * (y0 - y2) / denom if denom != 0 else 0.0
    return (lo + j + delta) / s.sample_rate


def boundary_signal(ppg: UniformSeries, period: float | None = None) -> UniformSeries:
    """The detrended, lightly smoothed trace whose down crossings mark cycles.

    Zero-phase centred moving average over two periods removes baseline
    wander (held constant within one window of either end, where the window
    would be incomplete); a centred 3-sample mean suppresses sample-level noise.
    """
    s = zero_mean(ppg)
    if period is None:
        period = estimate_period(s)
    half = max(1, int(round(period * s.sample_rate)))
    x = s.values
    if x.size > 2 * half + 1:
        trend = uniform_filter1d(x, size=2 * half + 1, mode="nearest")
        # near the edges the window is incomplete; hold the nearest full-window value
        trend[:half] = trend[half]
        trend[-half:] = trend[-half - 1]
    else:
        trend = np.full_like(x, x.mean())
    detrended = x - trend
    smoothed = uniform_filter1d(detrended, size=3, mode="reflect")
    return s.with_values(smoothed)


def _refractory(times: np.ndarray, slopes: np.ndarray, period: float, history: int = 8) -> np.ndarray:
    """Enforce a minimum spacing of half the running median spacing.

    Within the refractory window the steeper of two competing crossings wins,
    so a noise crossing on the slow rising flank cannot displace the true
    downstroke that follows it.
    """
    acc_t: list[float] = []
    acc_s: list[float] = []
    for t, s in zip(times, slopes):
        if acc_t:
            spacings = np.diff(acc_t)[-history:] if len(acc_t) > 1 else np.array([period])
            if t - acc_t[-1] < 0.5 * float(np.median(spacings)):
                if s < acc_s[-1]:
                    acc_t[-1], acc_s[-1] = t, s
                continue
        acc_t.append(t)
        acc_s.append(s)
    return np.asarray(acc_t)


def downgoing_boundaries(ppg: UniformSeries, period: float | None = None) -> np.ndarray:
    """Cycle boundaries for ECG-blind segmentation, in seconds."""
    s = zero_mean(ppg)
    if not np.any(s.values):
        raise InsufficientEventsError("constant signal has no crossings")
    if period is None:
        period = estimate_period(s)
    b = boundary_signal(ppg, period)
    idx, offset, _ = crossing_indices(b.values, "down")
    times = b.start_time + (idx + offset) / b.sample_rate
    slopes = b.values[idx + 1] - b.values[idx]
    return _refractory(times, slopes, period)


def segment_by_ppg(ppg: UniformSeries, grid_size: int = DEFAULT_GRID_SIZE, period: float | None = None) -> CycleSet:
    """ECG-blind segmentation at consecutive downgoing zero-crossings.

    Boundaries come from the band-limited trace, while the cycles themselves
    are resampled from the original samples so both methods see the same
    waveform.
    """
    bounds = downgoing_boundaries(ppg, period)
    if bounds.size < 2:
        raise InsufficientEventsError(f"need two downgoing crossings, found {bounds.size}")
    return CycleSet(grid_size, _cut(ppg, bounds, grid_size))


def attach_labels(cs: CycleSet, epochs: Sequence[tuple[float, float, str]]) -> CycleSet:
    """Tag each cycle with the labels of the epochs containing its midpoint."""
    out = []
    for c in cs.cycles:
        mid = c.start + c.ibi / 2
        tags = {label for start, end, label in epochs if start <= mid < end}
        out.append(replace(c, labels=c.labels | frozenset(tags)))
    return CycleSet(cs.grid_size, out, cs.n_discarded)


def reject_outlier_cycles(
    cs: CycleSet,
    low: float = DEFAULT_REJECT_LOW,
    high: float = DEFAULT_REJECT_HIGH,
    median_ibi: float | None = None,
) -> CycleSet:
    """Drop cycles whose IBI falls outside ``[low, high] * median IBI``.

    ``median_ibi`` freezes the reference; by default it is the median over
    the input cycles. The returned set records how many cycles were dropped.
    """
    if len(cs) == 0:
        raise EmptyResultError("no cycles to filter")
    if not 0 < low < 1 < high:
        raise InvalidInputError("thresholds must satisfy 0 < low < 1 < high")
    ref = float(np.median(cs.ibis)) if median_ibi is None else median_ibi
    keep = (cs.ibis >= low * ref) & (cs.ibis <= high * ref)
    if not keep.any():
        raise EmptyResultError("every cycle was rejected")
    kept = cs.subset(keep)
    return CycleSet(cs.grid_size, kept.cycles, cs.n_discarded + int((~keep).sum()))


def partition_by_label(cs: CycleSet, label: str) -> tuple[CycleSet, CycleSet]:
    inside = np.array([label in c.labels for c in cs.cycles], dtype=bool)
    return cs.subset(inside), cs.subset(~inside)


def outer_bin_size(n: int) -> int:
    """Cycles per outer IBI bin: N/4 rounded half up."""
    return (n + 2) // 4


def bin_by_ibi(cs: CycleSet) -> tuple[CycleSet, CycleSet, CycleSet]:
    """Split into the lowest quarter, middle half and highest quarter of IBIs.

    Ties at a bin edge send the earlier cycle to the outer bin. Each output
    keeps the original time order.
    """
    n = len(cs)
    if n < 4:
        raise InsufficientEventsError(f"IBI binning needs at least 4 cycles, got {n}")
    k = outer_bin_size(n)
    ibis, starts = cs.ibis, cs.starts
    low = list(np.lexsort((starts, ibis))[:k])
    taken = set(low)
    high = [i for i in np.lexsort((starts, -ibis)) if i not in taken][:k]
    taken.update(high)
    in_low = np.isin(np.arange(n), low)
    in_high = np.isin(np.arange(n), high)
    return cs.subset(in_low), cs.subset(~(in_low | in_high)), cs.subset(in_high)
