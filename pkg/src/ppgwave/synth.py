"""Synthetic PPG/R-peak recordings with known ground truth.

Cycles are built from a closed-form harmonic template. An R-peak sits a
planted distance ``planted_d`` before each cycle's maximum, and the mapping
from time-in-cycle to template phase is a monotone warp through marker knots
so that IBI changes can stretch selected parts of the waveform. Each warp
segment has the template's own slope at its knots, which keeps the waveform
undistorted in the neighbourhood of every marker.

Ground-truth markers are found by dense scanning of the closed form; nothing
in this module calls the analysis pipeline.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field, asdict
from typing import Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidSpecError
from .timeseries import EventTrain, UniformSeries

ORACLE_OVERSAMPLE = 10
ORACLE_GRID = 100


@dataclass(frozen=True)
class Template:
    """``sum_m amplitudes[m] * cos(2 pi (m+1) u + phases[m])`` over phase ``u``."""

    amplitudes: tuple
    phases: tuple

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", tuple(float(a) for a in self.amplitudes))
        object.__setattr__(self, "phases", tuple(float(p) for p in self.phases))
        if len(self.amplitudes) != len(self.phases) or not self.amplitudes:
            raise InvalidSpecError("template needs matching, non-empty amplitude/phase lists")
        if self.amplitudes[0] <= 0 or min(self.amplitudes) < 0:
            raise InvalidSpecError("template amplitudes must be >= 0 with a positive fundamental")

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        out = np.zeros_like(u)
        for m, (a, p) in enumerate(zip(self.amplitudes, self.phases)):
            out += a * np.cos(2 * np.pi * (m + 1) * u + p)
        return out

    def analytic(self, u):
        u = np.asarray(u, dtype=float)
        out = np.zeros(u.shape, dtype=complex)
        for m, (a, p) in enumerate(zip(self.amplitudes, self.phases)):
            out += a * np.exp(1j * (2 * np.pi * (m + 1) * u + p))
        return out

    def scaled(self, c: float) -> "Template":
        return Template(tuple(c * a for a in self.amplitudes), self.phases)

    def rotated(self, du: float) -> "Template":
        """Template delayed by ``du`` cycles."""
        return Template(self.amplitudes, tuple(p - 2 * np.pi * (m + 1) * du for m, p in enumerate(self.phases)))

    def markers(self, grid: int = ORACLE_GRID, oversample: int = ORACLE_OVERSAMPLE) -> "TemplateMarkers":
        return template_markers(self, grid * oversample)

    def to_dict(self) -> dict:
        return {"amplitudes": list(self.amplitudes), "phases_rad": list(self.phases)}


@dataclass(frozen=True)
class TemplateMarkers:
    """Marker phases in cycles, each in [0, 1)."""

    u_m: float
    u_f: float
    u_d: float
    u_z: float
    peak: float
    n_max: int
    n_down: int
    n_up: int
    n_phase_up: int

    @property
    def simple(self) -> bool:
        return self.n_max == 1 and self.n_down == 1 and self.n_up == 1 and self.n_phase_up == 1

    @property
    def lag(self) -> float:
        """Cyclic M - Z_H distance in cycles, mapped to (-1/2, 1/2]."""
        d = (self.u_m - self.u_z) % 1.0
        return d - 1.0 if d > 0.5 else d


def _lin_zero(y0, y1):
    return y0 / (y0 - y1)


def template_markers(t: Template, n: int = ORACLE_GRID * ORACLE_OVERSAMPLE) -> TemplateMarkers:
    """Brute-force marker scan of the closed form on ``n`` phase points."""
    u = np.arange(n) / n
    v = t(u)
    nxt = np.roll(v, -1)
    prv = np.roll(v, 1)
    i = int(np.argmax(v))
    y0, y1, y2 = prv[i], v[i], nxt[i]
    curv = y0 - 2 * y1 + y2
    off = 0.5 * (y0 - y2) / curv if curv < 0 else 0.0
    u_m = ((i + off) / n) % 1.0
    peak = float(y1 - 0.25 * (y0 - y2) * off)

    k = np.arange(n)
    down = (v >= 0) & (nxt < 0)
    up = (v <= 0) & (nxt > 0)
    downs = (k[down] + _lin_zero(v[down], nxt[down])) / n
    ups = (k[up] + _lin_zero(v[up], nxt[up])) / n
    u_f = downs[np.argmin((downs - u_m) % 1.0)] if downs.size else float("nan")
    u_d = ups[np.argmin((ups - u_f) % 1.0)] if ups.size else float("nan")

    ph = np.angle(t.analytic(u))
    ph_next = np.roll(ph, -1)
    pz = (ph <= 0) & (ph_next > 0) & (ph_next - ph < np.pi)
    zs = (k[pz] + _lin_zero(ph[pz], ph_next[pz])) / n
    u_z = zs[np.argmin((u_m - zs) % 1.0)] if zs.size else float("nan")
    n_max = int(np.sum((v > prv) & (v >= nxt)))
    return TemplateMarkers(u_m, float(u_f) % 1.0, float(u_d) % 1.0, float(u_z) % 1.0, peak, n_max, downs.size, ups.size, zs.size)


# base harmonic amplitudes relative to the fundamental; the relative phase
# knot ``psi`` controls how far the maximum trails the phase zero
_BASE_AMPS = (1.0, 0.3, 0.1, 0.04, 0.015)
_PSI_SCALE = (0.0, 1.0, 1.5, 2.0, 2.5)
_PSI_RANGE = (-2.2, 2.2)


def shaped_template(psi: float, n_components: int = 5, amps: Sequence[float] = _BASE_AMPS) -> Template:
    """Member of the biphasic template family, scaled to unit peak."""
    amps = tuple(amps)[:n_components]
    phases = tuple(s * psi for s in _PSI_SCALE[:n_components])
    t = Template(amps, phases)
    return t.scaled(1.0 / t.markers().peak)


def template_with_lag(lag: float, n_components: int = 5, amps: Sequence[float] = _BASE_AMPS) -> Template:
    """Family member whose M - Z_H lag (cycles) is ``lag``, found by bisection on psi.

    The lag falls monotonically with psi over the searched range.
    """
    lo, hi = _PSI_RANGE

    def lag_of(psi):
        return shaped_template(psi, n_components, amps).markers().lag

    f_lo, f_hi = lag_of(lo), lag_of(hi)
    if not min(f_lo, f_hi) <= lag <= max(f_lo, f_hi):
        raise InvalidSpecError(f"lag {lag} outside the attainable range [{min(f_lo, f_hi):.4f}, {max(f_lo, f_hi):.4f}]")
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        f_mid = lag_of(mid)
        if (f_mid - lag) * (f_lo - lag) > 0:
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    t = shaped_template(0.5 * (lo + hi), n_components, amps)
    if not t.markers().simple:
        raise InvalidSpecError(f"template for lag {lag} is not a simple biphasic shape")
    return t


def disturbed_waveform(width_ratio: float, n: int = 100, peak_index: float = 0.0) -> np.ndarray:
    """Cosine with a broadened (or narrowed) maximum, sampled on ``n`` points.

    The phase runs as ``g(u) = u - a sin(2 pi u) / (2 pi)`` so that the lobe
    above the half-prominence level (zero) spans ``width_ratio`` times the
    valley lobe. Used to emulate prototypes whose maximum is broad and sits
    on the R-peak.
    """
    if not width_ratio > 0:
        raise InvalidSpecError("width_ratio must be positive")
    half = 0.5 * width_ratio / (1.0 + width_ratio)  # half the peak-lobe fraction
    a = 2 * np.pi * (half - 0.25) / np.sin(2 * np.pi * half) if half != 0.25 else 0.0
    if not -1 < a < 1:
        raise InvalidSpecError("width_ratio too extreme for a monotone phase")
    u = (np.arange(n) - peak_index) / n
    return np.cos(2 * np.pi * (u - a * np.sin(2 * np.pi * u) / (2 * np.pi)))


@dataclass(frozen=True)
class SubjectSpec:
    subject_id: str
    template: Template
    base_ibi: float = 1.0
    ibi_variability: float = 0.03
    planted_d: float = 0.15
    epochs: tuple = ()
    noise_sigma: float = 0.0
    seed: int = 0
    duration: float = 300.0
    sample_rate: float = 40.0
    warp: bool = False
    high_bin_d_shift: float = 0.0
    high_bin_amp_ratio: float = 1.0
    drift: float = 0.0
    baseline_wander: float = 0.0

    def validate(self) -> None:
        if not self.base_ibi > 0:
            raise InvalidSpecError("base_ibi must be positive")
        if self.ibi_variability < 0 or self.noise_sigma < 0 or self.baseline_wander < 0:
            raise InvalidSpecError("variability, noise and wander must be non-negative")
        if not 0 <= self.planted_d < self.base_ibi:
            raise InvalidSpecError("planted_d must lie within one cycle")
        if self.duration < 2 * self.base_ibi or not self.sample_rate > 0:
            raise InvalidSpecError("recording must span at least two cycles")
        if self.high_bin_d_shift != 0 and not self.warp:
            raise InvalidSpecError("a planted D shift needs warp=True")
        if not self.high_bin_amp_ratio > 0:
            raise InvalidSpecError("amplitude ratio must be positive")
        last = 0.0
        for start, end, _label in self.epochs:
            if not (last <= start < end <= self.duration):
                raise InvalidSpecError(f"epoch ({start}, {end}) overlaps another or leaves the recording")
            last = end


@dataclass
class GroundTruth:
    subject_id: str
    r_peaks: np.ndarray
    ibis: np.ndarray
    template: Template
    template_markers: TemplateMarkers
    planted_d: float
    d_zm: float
    marker_times: dict
    downgoing_crossings: np.ndarray
    high_bin_starts: np.ndarray
    epochs: tuple
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        tm = self.template_markers
        return {
            "subject": self.subject_id,
            "template": self.template.to_dict(),
            "template_marker_phases": {"m": tm.u_m, "f": tm.u_f, "d": tm.u_d, "z": tm.u_z, "peak": tm.peak},
            "planted_d_s": self.planted_d,
            "d_zm_s": self.d_zm,
            "marker_times_s": self.marker_times,
            "n_rpeaks": int(self.r_peaks.size),
            "high_bin_starts_s": [float(t) for t in self.high_bin_starts],
            "epochs": [list(e) for e in self.epochs],
            **self.extra,
        }


class _PhaseMap:
    """Monotone time-in-cycle -> template phase map for one R-cycle.

    Between knots ``(a, u_a)`` and ``(b, u_b)`` the phase is
    ``u_a + s L / T0 + (du - L / T0) h(s)`` with ``s = (tau - a) / L`` and
    ``h(s) = s - sin(2 pi s) / (2 pi)``. Since ``h'`` vanishes at both ends the
    slope at every knot is the unwarped ``1 / T0``. A segment stretched by more
    than 1.5x would lose monotonicity, so there the knot slope is scaled down
    to ``alpha / T0`` with ``alpha = 1.5 * du * T0 / L``.
    """

    def __init__(self, spec: SubjectSpec, tm: TemplateMarkers, ibi: float, d_shift: float):
        t0, d = spec.base_ibi, spec.planted_d
        self.t0 = t0
        u_m = tm.u_m
        u_r = u_m - d / t0
        f_ref = ((tm.u_f - u_m) % 1.0) * t0
        d_ref = ((tm.u_d - u_m) % 1.0) * t0
        tau = [0.0, d]
        ph = [u_r, u_m]
        if spec.warp and d + d_ref + d_shift <= ibi - 0.05 * t0:
            tau += [d + f_ref, d + d_ref + d_shift]
            ph += [u_m + f_ref / t0, u_m + d_ref / t0]
        tau.append(ibi)
        ph.append(u_r + 1.0)
        self.tau = np.asarray(tau)
        self.phase = np.asarray(ph)
        ratio = np.diff(self.phase) * t0 / np.diff(self.tau)
        if np.any(ratio <= 0):
            raise InvalidSpecError("cycle warp is not monotone")
        self.alpha = np.minimum(1.0, 1.5 * ratio)

    def __call__(self, tau):
        tau = np.asarray(tau, dtype=float)
        k = np.clip(np.searchsorted(self.tau, tau, side="right") - 1, 0, self.tau.size - 2)
        a, length = self.tau[k], np.diff(self.tau)[k]
        du = np.diff(self.phase)[k]
        s = (tau - a) / length
        h = s - np.sin(2 * np.pi * s) / (2 * np.pi)
        lin = self.alpha[k] * length / self.t0
        return self.phase[k] + s * lin + (du - lin) * h

    def inverse(self, u):
        """Time in cycle of template phase ``u`` (taken within this cycle)."""
        u = self.phase[0] + (u - self.phase[0]) % 1.0
        hit = np.flatnonzero(np.abs(self.phase - u) < 1e-15)
        if hit.size:
            return float(self.tau[hit[0]])
        return float(brentq(lambda x: float(self(x)) - u, self.tau[0], self.tau[-1], xtol=1e-13, rtol=1e-15))


def _outer_top(ibis: np.ndarray) -> np.ndarray:
    """Indices of the highest-IBI quarter (N/4 rounded half up, earlier first on ties)."""
    n = ibis.size
    k = int(np.floor(n / 4 + 0.5))
    order = sorted(range(n), key=lambda j: (-ibis[j], j))
    return np.sort(np.array(order[:k], dtype=int))


def _outer_bottom(ibis: np.ndarray) -> np.ndarray:
    n = ibis.size
    k = int(np.floor(n / 4 + 0.5))
    order = sorted(range(n), key=lambda j: (ibis[j], j))
    return np.sort(np.array(order[:k], dtype=int))


def _smoothed_zh(spec: SubjectSpec, tm: TemplateMarkers, pm: _PhaseMap, ibi: float, n: int = 1000) -> float:
    """Z_H of one rendered cycle after keeping five harmonics (dense, independent)."""
    tau = np.arange(n) * ibi / n
    v = spec.template(pm(tau))
    spec_v = np.fft.fft(v)
    h = np.zeros(n)
    h[1:6] = 2.0
    ph = np.angle(np.fft.ifft(spec_v * h))
    keep = np.zeros(n)
    keep[1:6] = 1.0
    keep[-5:] = 1.0
    vs = np.real(np.fft.ifft(spec_v * keep))
    i_m = int(np.argmax(vs))
    nxt = np.roll(ph, -1)
    zs = [k + ph[k] / (ph[k] - nxt[k]) for k in range(n) if ph[k] <= 0 < nxt[k] and nxt[k] - ph[k] < np.pi]
    if not zs:
        return float("nan")
    z = min(zs, key=lambda x: (i_m - x) % n)
    return float(z * ibi / n)


def _bin_truth(spec: SubjectSpec, tm: TemplateMarkers, ibi: float, d_shift: float) -> dict:
    pm = _PhaseMap(spec, tm, ibi, d_shift)
    m = pm.inverse(tm.u_m)
    z = _smoothed_zh(spec, tm, pm, ibi)
    return {
        "ibi": ibi,
        "m": m,
        "f": pm.inverse(tm.u_f),
        "d": pm.inverse(tm.u_d),
        "z": z,
        "d_zm": ((m - z + ibi / 2) % ibi) - ibi / 2 if np.isfinite(z) else float("nan"),
    }


def generate_subject(spec: SubjectSpec):
    """Render one recording.

    Returns ``(ppg, rpeaks, truth)``; identical seeds give identical output.
    """
    spec.validate()
    tm = spec.template.markers()
    rng = np.random.default_rng(spec.seed)
    t0, v = spec.base_ibi, spec.ibi_variability

    # R-peak times covering the recording with one cycle of margin each side
    r = [-rng.uniform(0.0, t0)]
    while r[-1] <= spec.duration + t0:
        frac = r[-1] / spec.duration - 0.5
        ibi = t0 * np.exp(v * rng.standard_normal() - 0.5 * v * v) * (1.0 + spec.drift * frac)
        r.append(r[-1] + ibi)
    r = np.asarray(r)

    n_samples = int(round(spec.duration * spec.sample_rate))
    t = np.arange(n_samples) / spec.sample_rate
    t_last = t[-1]
    inside = np.flatnonzero((r >= 0) & (r <= t_last))
    rpeaks = r[inside]
    ibis_inside = np.diff(rpeaks)
    high = inside[:-1][_outer_top(ibis_inside)]
    high_set = set(high.tolist())

    values = np.zeros(n_samples)
    crossings = []
    for j in range(r.size - 1):
        ibi = r[j + 1] - r[j]
        planted = j in high_set
        pm = _PhaseMap(spec, tm, ibi, spec.high_bin_d_shift if planted else 0.0)
        lo, hi = np.searchsorted(t, [r[j], r[j + 1]], side="left")
        amp = spec.high_bin_amp_ratio if planted else 1.0
        values[lo:hi] = amp * spec.template(pm(t[lo:hi] - r[j]))
        tf = r[j] + pm.inverse(tm.u_f)
        if 0 <= tf <= t_last:
            crossings.append(tf)
    if spec.baseline_wander:
        values += spec.baseline_wander * np.sin(2 * np.pi * 0.2 * t + rng.uniform(0, 2 * np.pi))
    if spec.noise_sigma:
        values += spec.noise_sigma * rng.standard_normal(n_samples)

    low = _outer_bottom(ibis_inside)
    mid_mask = np.ones(ibis_inside.size, dtype=bool)
    mid_mask[low] = False
    mid_mask[_outer_top(ibis_inside)] = False
    marker_times = {
        "base": _bin_truth(spec, tm, t0, 0.0),
        "low_ibi": _bin_truth(spec, tm, float(np.median(ibis_inside[low])), 0.0),
        "mid_ibi": _bin_truth(spec, tm, float(np.median(ibis_inside[mid_mask])), 0.0),
        "high_ibi": _bin_truth(spec, tm, float(np.median(ibis_inside[_outer_top(ibis_inside)])), spec.high_bin_d_shift),
    }
    lag = tm.lag * t0
    truth = GroundTruth(
        subject_id=spec.subject_id,
        r_peaks=rpeaks,
        ibis=ibis_inside,
        template=spec.template,
        template_markers=tm,
        planted_d=spec.planted_d,
        d_zm=float(lag),
        marker_times=marker_times,
        downgoing_crossings=np.asarray(crossings),
        high_bin_starts=r[high],
        epochs=tuple(spec.epochs),
        extra={
            "high_bin_d_shift_s": spec.high_bin_d_shift,
            "high_bin_amp_ratio": spec.high_bin_amp_ratio,
            "warp": spec.warp,
            "base_ibi_s": t0,
        },
    )
    return UniformSeries(values, spec.sample_rate, 0.0), EventTrain(rpeaks), truth


@dataclass(frozen=True)
class CohortSpec:
    """Cohort-level knobs; every subject-level random choice derives from ``seed``."""

    n_subjects: int = 25
    seed: int = 0
    duration: float = 300.0
    sample_rate: float = 40.0
    n_components: int = 5
    k1: float = 0.12
    k2: float = 0.9
    predictor_noise: float = 0.02
    exact_noise_moments: bool = True
    lag_range: tuple = (0.0, 0.06)
    base_ibi_range: tuple = (0.8, 1.2)
    ibi_variability: float = 0.02
    high_variability: float = 0.08
    noise_sigma: float = 0.05
    warp: bool = True
    li_d_shift: float = 0.0
    li_amp_ratio: float = 1.0
    high_ibi_harmonic_boost: float = 1.0
    breath_hold: bool = False
    breath_hold_period: float = 60.0
    breath_hold_length: float = 20.0
    baseline_wander: float = 0.0

    def validate(self) -> None:
        if self.n_subjects < 2:
            raise InvalidSpecError("a cohort needs at least two subjects")
        if self.duration <= 0 or self.sample_rate <= 0:
            raise InvalidSpecError("duration and sample rate must be positive")
        if self.n_components not in (3, 4, 5):
            raise InvalidSpecError("templates carry 3 to 5 components")
        lo, hi = self.lag_range
        if not lo <= hi:
            raise InvalidSpecError("lag_range must be ordered")
        ilo, ihi = self.base_ibi_range
        if not 0 < ilo <= ihi:
            raise InvalidSpecError("base_ibi_range must be positive and ordered")

    @classmethod
    def from_dict(cls, d: dict) -> "CohortSpec":
        known = set(cls.__dataclass_fields__)
        unknown = set(d) - known
        if unknown:
            raise InvalidSpecError(f"unknown cohort settings: {sorted(unknown)}")
        kw = dict(d)
        for key in ("lag_range", "base_ibi_range"):
            if key in kw:
                kw[key] = tuple(kw[key])
        try:
            spec = cls(**kw)
        except TypeError as exc:
            raise InvalidSpecError(str(exc)) from exc
        spec.validate()
        return spec

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lag_range"] = list(self.lag_range)
        d["base_ibi_range"] = list(self.base_ibi_range)
        return d


def subject_seed(cohort_seed: int, index: int, stream: int = 0) -> int:
    """Per-subject seed: a hash of (cohort seed, subject index, stream)."""
    return int(np.random.SeedSequence([cohort_seed, index, stream]).generate_state(1)[0])


@dataclass
class SubjectData:
    spec: SubjectSpec
    ppg: UniformSeries
    rpeaks: EventTrain
    truth: GroundTruth


@dataclass
class CohortTruth:
    spec: CohortSpec
    planted_li: list
    boosted: list
    planted_noise: list

    def to_dict(self) -> dict:
        return {
            "cohort": self.spec.to_dict(),
            "planted_k1_s": self.spec.k1,
            "planted_k2": self.spec.k2,
            "planted_li_subjects": self.planted_li,
            "harmonic_boost_subjects": self.boosted,
            "planted_noise_s": self.planted_noise,
        }


def _planted_noise(x: np.ndarray, sigma: float, rng, exact: bool) -> np.ndarray:
    z = rng.standard_normal(x.size)
    if not exact or x.size < 3 or sigma == 0:
        return sigma * z
    design = np.column_stack([np.ones_like(x), x])
    coef, *_ = np.linalg.lstsq(design, z, rcond=None)
    z = z - design @ coef
    scale = np.sqrt(np.mean(z**2))
    return sigma * z / scale if scale > 0 else np.zeros_like(z)


def _breath_hold_epochs(c: CohortSpec) -> tuple:
    out = []
    start = c.breath_hold_period / 2
    while start + c.breath_hold_length <= c.duration:
        out.append((start, start + c.breath_hold_length, "breath_hold"))
        start += c.breath_hold_period
    return tuple(out)


def cohort_specs(c: CohortSpec) -> tuple[list[SubjectSpec], CohortTruth]:
    """Subject specs for a cohort plus the cohort-level planted quantities."""
    c.validate()
    n = c.n_subjects
    rngs = [np.random.default_rng(subject_seed(c.seed, i)) for i in range(n)]
    base_ibis = np.array([rng.uniform(*c.base_ibi_range) for rng in rngs])
    # evenly spread lags, assigned to subjects in shuffled order
    lags = np.linspace(c.lag_range[0], c.lag_range[1], n)
    lags = lags[np.random.default_rng(subject_seed(c.seed, n, 1)).permutation(n)]
    if c.lag_range[0] == c.lag_range[1]:
        warnings.warn("all templates share one M-Z lag; the predictor slope is not identifiable")
    boosted = set(np.argsort(base_ibis, kind="stable")[n - n // 3 :].tolist()) if c.high_ibi_harmonic_boost != 1.0 else set()
    # the higher-variability half receives the planted I-bin effects
    variable = set(range(0, n, 2)[: n // 2]) if n >= 2 else set()

    templates = []
    for i in range(n):
        amps = list(_BASE_AMPS)
        if i in boosted:
            amps[1] *= c.high_ibi_harmonic_boost
        templates.append(template_with_lag(float(lags[i]), c.n_components, amps))
    d_zm = np.array([t.markers().lag * ibi for t, ibi in zip(templates, base_ibis)])
    noise = _planted_noise(d_zm, c.predictor_noise, np.random.default_rng(subject_seed(c.seed, n, 2)), c.exact_noise_moments)
    planted_d = c.k1 + c.k2 * d_zm + noise
    if np.any(planted_d < 0) or np.any(planted_d >= 0.5 * base_ibis):
        raise InvalidSpecError("planted R-peak offsets fall outside the first half of the cycle")

    epochs = _breath_hold_epochs(c) if c.breath_hold else ()
    specs = []
    for i in range(n):
        planted = i in variable
        specs.append(
            SubjectSpec(
                subject_id=f"S{i + 1:02d}",
                template=templates[i],
                base_ibi=float(base_ibis[i]),
                ibi_variability=c.high_variability if planted else c.ibi_variability,
                planted_d=float(planted_d[i]),
                epochs=epochs,
                noise_sigma=c.noise_sigma,
                seed=subject_seed(c.seed, i, 3),
                duration=c.duration,
                sample_rate=c.sample_rate,
                warp=c.warp,
                high_bin_d_shift=c.li_d_shift if planted else 0.0,
                high_bin_amp_ratio=c.li_amp_ratio if planted else 1.0,
                baseline_wander=c.baseline_wander,
            )
        )
    truth = CohortTruth(
        spec=c,
        planted_li=[specs[i].subject_id for i in sorted(variable)],
        boosted=[specs[i].subject_id for i in sorted(boosted)],
        planted_noise=[float(x) for x in noise],
    )
    return specs, truth


def generate_cohort(c: CohortSpec) -> tuple[list[SubjectData], CohortTruth]:
    specs, truth = cohort_specs(c)
    subjects = [SubjectData(s, *generate_subject(s)) for s in specs]
    return subjects, truth
