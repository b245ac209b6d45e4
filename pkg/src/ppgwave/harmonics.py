"""Truncated Fourier-series model of a one-cycle waveform.

Component ``m`` (``m = 0`` is the fundamental) oscillates ``m + 1`` times per
cycle::

    p(k) = sum_m A_m cos(2 pi (m + 1) k / N + phi_m) + e(k)

On a uniform cyclic grid the cosines are orthogonal, so the least-squares fit
is the DFT projection and the energy bookkeeping is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InsufficientEventsError, InvalidInputError, InvalidOrderError, UndeterminableError

SMOOTHING_ORDER = 4
# lower bound on the residual/total energy ratio so dB values stay finite
ENERGY_RATIO_FLOOR = 1e-30


@dataclass(frozen=True, eq=False)
class HarmonicFit:
    order: int
    amplitudes: np.ndarray
    phases: np.ndarray
    grid_size: int
    residual: np.ndarray
    unmodeled_energy_db: float

    @property
    def model(self) -> np.ndarray:
        return synthesize(self.amplitudes, self.phases, self.grid_size)

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "amplitudes": [float(a) for a in self.amplitudes],
            "phases_rad": [float(p) for p in self.phases],
            "unmodeled_energy_db": float(self.unmodeled_energy_db),
        }


def _wrap_phase(phi):
    """Map angles onto [-pi, pi)."""
    return (np.asarray(phi) + np.pi) % (2 * np.pi) - np.pi


def synthesize(amplitudes, phases, n: int) -> np.ndarray:
    k = np.arange(n)
    out = np.zeros(n)
    for m, (a, phi) in enumerate(zip(amplitudes, phases)):
        out += a * np.cos(2 * np.pi * (m + 1) * k / n + phi)
    return out


def _as_waveform(waveform) -> np.ndarray:
    w = np.asarray(waveform, dtype=float)
    if w.ndim != 1 or w.size < 2:
        raise InvalidInputError("waveform must be a 1-D sequence of length >= 2")
    if not np.all(np.isfinite(w)):
        raise InvalidInputError("waveform contains non-finite values")
    return w


def _bin_energies(w: np.ndarray) -> np.ndarray:
    """Energy carried by each rfft bin; the bins sum to ``sum(w**2)``."""
    n = w.size
    spec = np.fft.rfft(w)
    e = 2.0 * np.abs(spec) ** 2 / n
    e[0] /= 2.0
    if n % 2 == 0:
        e[-1] /= 2.0
    return e


def _check_order(order: int, n: int) -> None:
    if order < 0 or order + 1 > n // 2:
        raise InvalidOrderError(f"order {order} needs bins up to {order + 1}, grid of {n} allows {n // 2}")


def _energy_ratio_curve(w: np.ndarray, max_order: int) -> np.ndarray:
    e = _bin_energies(w)
    total = e.sum()
    if total <= 0:
        raise UndeterminableError("waveform has zero energy")
    # tail[b] = energy in bins b, b+1, ...; accumulated from the top so the
    # floating-point sums are non-increasing in b
    tail = np.cumsum(e[::-1])[::-1]
    ratios = np.empty(max_order + 1)
    for m in range(max_order + 1):
        b = m + 2
        above = tail[b] if b < tail.size else 0.0
        ratios[m] = (above + e[0]) / total
    return np.maximum(ratios, ENERGY_RATIO_FLOOR)


def fit_harmonics(waveform: Sequence[float], order: int) -> HarmonicFit:
    """Fit components ``0..order`` by projection onto DFT bins ``1..order+1``.

    A DC offset is left in the residual; callers zero-mean prototypes first.
    """
    w = _as_waveform(waveform)
    n = w.size
    _check_order(order, n)
    spec = np.fft.rfft(w)
    bins = np.arange(1, order + 2)
    coef = spec[bins]
    scale = np.where(2 * bins == n, 1.0, 2.0) / n
    amplitudes = scale * np.abs(coef)
    phases = _wrap_phase(np.angle(coef))
    residual = w - synthesize(amplitudes, phases, n)
    if not np.any(w):
        db = float("nan")
    else:
        db = float(10 * np.log10(_energy_ratio_curve(w, order)[order]))
    return HarmonicFit(order, amplitudes, phases, n, residual, db)


def unmodeled_energy_curve(waveform: Sequence[float], max_order: int) -> np.ndarray:
    """Residual energy in dB relative to the waveform, for orders ``0..max_order``."""
    w = _as_waveform(waveform)
    _check_order(max_order, w.size)
    return 10 * np.log10(_energy_ratio_curve(w, max_order))


def smooth(waveform: Sequence[float], order: int = SMOOTHING_ORDER) -> np.ndarray:
    """Reconstruction from the fundamental and the next ``order`` harmonics."""
    return fit_harmonics(waveform, order).model


def energy_by_ibi_bins(prototypes: Iterable, orders: Sequence[int]) -> dict:
    """Group unmodeled-energy values by IBI bin.

    ``prototypes`` yields ``(prototype, bin_name)`` pairs where ``bin_name`` is
    ``"low_ibi"`` or ``"high_ibi"``; the result maps bin -> order -> list of dB.
    """
    groups: dict[str, dict[int, list[float]]] = {
        "low_ibi": {m: [] for m in orders},
        "high_ibi": {m: [] for m in orders},
    }
    max_order = max(orders)
    for proto, bin_name in prototypes:
        if bin_name not in groups:
            raise InvalidInputError(f"unknown IBI bin {bin_name!r}")
        curve = unmodeled_energy_curve(proto.waveform, max_order)
        for m in orders:
            groups[bin_name][m].append(float(curve[m]))
    for bin_name, by_order in groups.items():
        if not by_order[orders[0]]:
            raise InsufficientEventsError(f"no prototypes in bin {bin_name}")
    return groups
