"""Median prototype waveforms, their comparison and the deviant-shape check."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import EmptyResultError, InvalidInputError, UndeterminableError
from .harmonics import smooth
from .segmentation import CycleSet, SegmentationMethod
from .timeseries import pointwise_quartiles


@dataclass(frozen=True, eq=False)
class Prototype:
    """Median cycle with its IQR band.

    ``lower``/``upper`` are the first and third quartile curves, shifted by
    the same offset that zero-means ``waveform``.
    """

    grid_size: int
    waveform: np.ndarray
    iqr: np.ndarray
    n_cycles: int
    method: SegmentationMethod
    median_ibi: float
    labels: tuple = ()
    lower: np.ndarray | None = None
    upper: np.ndarray | None = None
    n_discarded: int = 0
    subject: str = ""
    condition: str = "all"

    def __post_init__(self):
        if len(self.waveform) != self.grid_size or len(self.iqr) != self.grid_size:
            raise InvalidInputError("waveform/iqr length does not match grid size")
        if np.any(np.asarray(self.iqr) < 0):
            raise InvalidInputError("iqr must be non-negative")
        if self.n_cycles < 1 or not self.median_ibi > 0:
            raise InvalidInputError("prototype needs n_cycles >= 1 and a positive median IBI")
        object.__setattr__(self, "method", SegmentationMethod(self.method))

    @property
    def sample_period(self) -> float:
        """Seconds per grid step."""
        return self.median_ibi / self.grid_size

    def normalized(self) -> "Prototype":
        """Copy scaled to unit peak absolute amplitude."""
        scale = np.max(np.abs(self.waveform))
        if scale == 0:
            raise UndeterminableError("cannot normalise a flat prototype")
        return Prototype(
            self.grid_size,
            self.waveform / scale,
            self.iqr / scale,
            self.n_cycles,
            self.method,
            self.median_ibi,
            self.labels,
            None if self.lower is None else self.lower / scale,
            None if self.upper is None else self.upper / scale,
            self.n_discarded,
            self.subject,
            self.condition,
        )

    def to_dict(self) -> dict:
        d = {
            "grid_size": self.grid_size,
            "waveform": [float(v) for v in self.waveform],
            "iqr": [float(v) for v in self.iqr],
            "n_cycles": self.n_cycles,
            "median_ibi_s": float(self.median_ibi),
            "method": self.method.value,
            "labels": list(self.labels),
            "subject": self.subject,
            "condition": self.condition,
            "n_discarded": self.n_discarded,
        }
        if self.lower is not None:
            d["q1"] = [float(v) for v in self.lower]
            d["q3"] = [float(v) for v in self.upper]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "Prototype":
        try:
            return cls(
                grid_size=int(d["grid_size"]),
                waveform=np.asarray(d["waveform"], dtype=float),
                iqr=np.asarray(d["iqr"], dtype=float),
                n_cycles=int(d["n_cycles"]),
                method=d["method"],
                median_ibi=float(d["median_ibi_s"]),
                labels=tuple(d.get("labels", ())),
                lower=None if "q1" not in d else np.asarray(d["q1"], dtype=float),
                upper=None if "q3" not in d else np.asarray(d["q3"], dtype=float),
                n_discarded=int(d.get("n_discarded", 0)),
                subject=str(d.get("subject", "")),
                condition=str(d.get("condition", "all")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInputError(f"malformed prototype record: {exc}") from exc


def build_prototype(
    cs: CycleSet,
    method: SegmentationMethod | str,
    *,
    labels=(),
    subject: str = "",
    condition: str = "all",
) -> Prototype:
    if len(cs) == 0:
        raise EmptyResultError("cannot build a prototype from zero cycles")
    q1, median, q3 = pointwise_quartiles(cs.waveforms)
    offset = median.mean()
    return Prototype(
        grid_size=cs.grid_size,
        waveform=median - offset,
        iqr=np.maximum(q3 - q1, 0.0),
        n_cycles=len(cs),
        method=SegmentationMethod(method),
        median_ibi=float(np.median(cs.ibis)),
        labels=tuple(sorted(labels)),
        lower=q1 - offset,
        upper=q3 - offset,
        n_discarded=cs.n_discarded,
        subject=subject,
        condition=condition,
    )


@dataclass(frozen=True)
class ComparisonReport:
    max_abs_diff: float
    rms_diff: float
    in_band_fraction: float
    shift: float = 0.0

    def to_dict(self) -> dict:
        return {
            "max_abs_diff": self.max_abs_diff,
            "rms_diff": self.rms_diff,
            "in_band_fraction": self.in_band_fraction,
            "shift_samples": self.shift,
        }


def circular_shift(w: np.ndarray, shift: float) -> np.ndarray:
    """Delay a cyclic waveform by a (fractional) number of samples via the DFT."""
    n = w.size
    spec = np.fft.rfft(w)
    k = np.arange(spec.size)
    phase = np.exp(-2j * np.pi * k * shift / n)
    if n % 2 == 0:
        # keep the Nyquist bin real so the shift stays a real operation
        phase[-1] = np.cos(np.pi * shift)
    return np.fft.irfft(spec * phase, n)


def best_circular_shift(a: np.ndarray, b: np.ndarray) -> float:
    """Fractional shift ``s`` minimising ``|a - circular_shift(b, s)|``."""
    n = a.size
    xc = np.fft.irfft(np.fft.rfft(a) * np.conj(np.fft.rfft(b)), n)
    s0 = int(np.argmax(xc))
    res = minimize_scalar(
        lambda s: float(np.sum((a - circular_shift(b, s)) ** 2)),
        bounds=(s0 - 1.0, s0 + 1.0),
        method="bounded",
        options={"xatol": 1e-6},
    )
    return float(res.x)


def compare_prototypes(a: Prototype, b: Prototype, *, align: bool = False) -> ComparisonReport:
    """Difference statistics between two prototypes on the same grid.

    ``in_band_fraction`` counts samples with ``|a - b| <= a.iqr`` and so uses
    the first prototype's band. With ``align`` the second waveform is first
    shifted circularly (sub-sample) onto the first.
    """
    if a.grid_size != b.grid_size:
        raise InvalidInputError("prototypes live on different grids")
    wa = np.asarray(a.waveform, dtype=float)
    wb = np.asarray(b.waveform, dtype=float)
    shift = 0.0
    if align:
        shift = best_circular_shift(wa, wb)
        wb = circular_shift(wb, shift)
    diff = np.abs(wa - wb)
    return ComparisonReport(
        max_abs_diff=float(diff.max()),
        rms_diff=float(np.sqrt(np.mean(diff**2))),
        in_band_fraction=float(np.mean(diff <= a.iqr)),
        shift=shift,
    )


def _cyclic_width(w: np.ndarray, center: int, level: float, above: bool) -> float:
    """Width (samples) of the lobe around ``center`` on the given side of ``level``."""
    n = w.size
    inside = (lambda v: v > level) if above else (lambda v: v < level)
    width = 0.0
    for step in (1, -1):
        i = center
        for _ in range(n):
            j = (i + step) % n
            if not inside(w[j]):
                # linear interpolation to the level crossing between i and j
                width += (w[i] - level) / (w[i] - w[j])
                break
            width += 1.0
            i = j
        else:
            return float(n)
    return width


@dataclass(frozen=True)
class DeviantCheck:
    deviant: bool
    reason: str
    peak_width: float
    valley_width: float
    argmax: int

    @property
    def label(self) -> str:
        return "deviant" if self.deviant else "typical"


def detect_deviant(p: Prototype, width_ratio: float = 1.0) -> DeviantCheck:
    """Flag a broad maximum sitting on the R-peak.

    Widths are measured at half prominence (midway between maximum and
    minimum) on the order-4 harmonic smoothing of the waveform. Deviant means
    ``peak_width >= width_ratio * valley_width`` and the maximum at grid index 0.
    """
    w = smooth(p.waveform)
    hi, lo = w.max(), w.min()
    if not hi - lo > 1e-12 * max(abs(hi), abs(lo), 1e-300):
        raise UndeterminableError("flat prototype has no peak or valley")
    level = (hi + lo) / 2
    i_max = int(np.argmax(w))
    i_min = int(np.argmin(w))
    pw = _cyclic_width(w, i_max, level, above=True)
    vw = _cyclic_width(w, i_min, level, above=False)
    broad = pw >= width_ratio * vw
    at_r = i_max == 0
    if broad and at_r:
        reason = f"broad maximum (width {pw:.1f} vs valley {vw:.1f} samples) at the R-peak"
    elif broad:
        reason = "broad maximum, but not at the R-peak"
    elif at_r:
        reason = "maximum at the R-peak, but sharp"
    else:
        reason = ""
    return DeviantCheck(broad and at_r, reason, pw, vw, i_max)
