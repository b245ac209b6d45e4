"""Timing markers of a prototype waveform.

* M: position of the maximum (parabolic refinement)
* F: first downgoing zero-crossing after M
* D: first upgoing zero-crossing after F
* Z_H: upgoing zero-crossing of the analytic-signal phase, the one closest
  before M

Positions are in seconds from the cycle's time zero (R-peak or downgoing
crossing depending on segmentation), all reduced to ``[0, median_ibi)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.signal import hilbert

from .errors import InvalidInputError, UndeterminableError
from .harmonics import smooth
from .prototype import Prototype
from .timeseries import crossing_indices


@dataclass(frozen=True)
class MarkerSet:
    m_pos: float
    f_pos: float
    d_pos: float
    z_pos: float
    amplitude: float
    d_zm: float
    max_slope_pos: float | None = None

    def to_dict(self) -> dict:
        return {
            "m_pos_s": self.m_pos,
            "f_pos_s": self.f_pos,
            "d_pos_s": self.d_pos,
            "z_pos_s": self.z_pos,
            "amplitude": self.amplitude,
            "d_zm_s": self.d_zm,
            "max_slope_pos_s": self.max_slope_pos,
        }


def _waveform(p) -> np.ndarray:
    w = np.asarray(p.waveform if isinstance(p, Prototype) else p, dtype=float)
    if w.ndim != 1 or w.size < 3:
        raise InvalidInputError("waveform must be 1-D with at least 3 samples")
    return w


def _cyclic_crossings(w: np.ndarray, direction: str) -> np.ndarray:
    """Crossing positions in samples on the closed cycle (wraps N-1 -> 0)."""
    idx, offset, _ = crossing_indices(np.append(w, w[0]), direction)
    return _wrap(idx + offset, w.size)


def _wrap(pos, n: int):
    """Reduce sample positions to [0, n); rounding can make ``mod`` return n."""
    out = np.mod(pos, n)
    return np.where(out >= n, 0.0, out)


def _first_after(positions: np.ndarray, ref: float, n: int) -> float:
    gap = np.mod(positions - ref, n)
    return float(positions[np.argmin(gap)])


def peak_position(w: np.ndarray) -> tuple[float, float]:
    """Parabolic-interpolated argmax on a cyclic grid -> (position, value)."""
    n = w.size
    i = int(np.argmax(w))
    y0, y1, y2 = w[(i - 1) % n], w[i], w[(i + 1) % n]
    denom = y0 - 2 * y1 + y2
    if denom >= 0:
        return float(i), float(y1)
    delta = 0.5 * (y0 - y2) / denom
    value = y1 - 0.25 * (y0 - y2) * delta
    return float(_wrap(i + delta, n)), float(value)


def mfd_samples(w: np.ndarray) -> tuple[float, float, float, float]:
    """M, F, D positions in samples and the peak amplitude."""
    n = w.size
    m, amp = peak_position(w)
    downs = _cyclic_crossings(w, "down")
    ups = _cyclic_crossings(w, "up")
    if downs.size == 0 or ups.size == 0:
        raise UndeterminableError("waveform has no zero-crossings")
    f = _first_after(downs, m, n)
    d = _first_after(ups, f, n)
    return m, f, d, amp


def extract_mfd(p: Prototype) -> tuple[float, float, float, float]:
    """``(m_pos, f_pos, d_pos, amplitude)`` with positions in seconds."""
    m, f, d, amp = mfd_samples(_waveform(p))
    dt = p.sample_period
    return m * dt, f * dt, d * dt, amp


def analytic_phase(waveform) -> np.ndarray:
    """Instantaneous phase in [-pi, pi) of the cyclic analytic signal."""
    w = _waveform(waveform)
    if not np.any(w):
        raise UndeterminableError("zero signal has no phase")
    phase = np.angle(hilbert(w))
    phase[phase >= np.pi] = -np.pi
    return phase


def zh_samples(w: np.ndarray, m: float | None = None) -> float:
    """Z_H in samples: the upgoing phase zero nearest before M."""
    n = w.size
    phase = analytic_phase(w)
    closed = np.append(phase, phase[0])
    idx, offset, _ = crossing_indices(closed, "up")
    # an upgoing crossing never coincides with a +pi -> -pi wrap, but a
    # -pi -> +pi jump (phase running backwards) would look like one
    ok = np.abs(closed[idx + 1] - closed[idx]) < np.pi
    if not ok.any():
        raise UndeterminableError("phase never crosses zero upwards")
    z = _wrap(idx[ok] + offset[ok], n)
    if m is None:
        m = peak_position(w)[0]
    before = np.mod(m - z, n)
    return float(z[np.argmin(before)])


def extract_zh(p: Prototype) -> float:
    w = _waveform(p)
    return zh_samples(w) * p.sample_period


def max_slope_samples(w: np.ndarray) -> float:
    """Position of the steepest decrease (most negative forward difference)."""
    diff = np.roll(w, -1) - w
    return float(np.argmin(diff)) + 0.5


def cyclic_difference(a: float, b: float, period: float) -> float:
    """``a - b`` reduced to ``(-period/2, period/2]``."""
    d = np.mod(a - b, period)
    return float(d - period if d > period / 2 else d)


def extract_markers(p: Prototype, *, smoothed: bool = False) -> MarkerSet:
    """All markers of a prototype; smooths to order 4 first unless told not to."""
    w = _waveform(p)
    if not smoothed:
        w = smooth(w)
    m, f, d, amp = mfd_samples(w)
    z = zh_samples(w, m)
    dt = p.sample_period
    return MarkerSet(
        m_pos=m * dt,
        f_pos=f * dt,
        d_pos=d * dt,
        z_pos=z * dt,
        amplitude=amp,
        d_zm=cyclic_difference(m * dt, z * dt, p.median_ibi),
        max_slope_pos=max_slope_samples(w) * dt,
    )
