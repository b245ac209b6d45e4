import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from ppgwave.errors import EmptyResultError, InvalidInputError, UndeterminableError
from ppgwave.prototype import (
    Prototype,
    best_circular_shift,
    build_prototype,
    circular_shift,
    compare_prototypes,
    detect_deviant,
)
from ppgwave.segmentation import Cycle, CycleSet, SegmentationMethod, segment_by_ecg
from ppgwave.synth import SubjectSpec, disturbed_waveform, generate_subject, shaped_template

ECG = SegmentationMethod.ECG_BASED
K = np.arange(100)


def cycleset(rows, ibis=None):
    rows = np.asarray(rows, dtype=float)
    ibis = np.ones(len(rows)) if ibis is None else np.asarray(ibis, dtype=float)
    starts = np.concatenate([[0.0], np.cumsum(ibis)[:-1]])
    return CycleSet(rows.shape[1], [Cycle(r, s, i) for r, s, i in zip(rows, starts, ibis)])


def proto(w, iqr=None, ibi=1.0):
    w = np.asarray(w, dtype=float)
    return Prototype(w.size, w, np.zeros(w.size) if iqr is None else np.asarray(iqr, float), 1, ECG, ibi)


# -- build ------------------------------------------------------------------

def test_identical_cycles():
    c = np.sin(2 * np.pi * K / 100) + 3.0
    p = build_prototype(cycleset([c, c, c]), ECG)
    assert np.allclose(p.waveform, c - c.mean())
    assert np.all(p.iqr == 0)
    assert p.n_cycles == 3 and p.median_ibi == 1.0


def test_symmetric_perturbation():
    base = np.cos(2 * np.pi * K / 100)
    eps = 0.05
    rows = [base - eps, base, base + eps, base - eps, base + eps]
    p = build_prototype(cycleset(rows), ECG)
    assert np.allclose(p.waveform, base - base.mean(), atol=1e-12)
    assert np.allclose(p.iqr, 2 * eps)


def test_noisy_cycles_concentrate(rng):
    base = np.cos(2 * np.pi * K / 100)
    sigma = 0.1
    rows = base + rng.normal(0, sigma, (50, 100))
    p = build_prototype(cycleset(rows), ECG)
    rms = np.sqrt(np.mean((p.waveform - base) ** 2))
    assert rms < 3 * sigma / np.sqrt(50)


def test_generator_prototype_equals_template():
    t = shaped_template(0.6)
    spec = SubjectSpec("x", t, base_ibi=1.0, ibi_variability=0.0, duration=60.0)
    ppg, rpeaks, truth = generate_subject(spec)
    p = build_prototype(segment_by_ecg(ppg, rpeaks), ECG)
    u = truth.template_markers.u_m - spec.planted_d + K / 100
    ref = t(u) - t(u).mean()
    # linear-interpolation error bound h^2/8 max|w''| at 40 Hz
    curvature = sum(a * (2 * np.pi * (m + 1)) ** 2 for m, a in enumerate(t.amplitudes))
    assert np.max(np.abs(p.waveform - ref)) < (1 / 40) ** 2 / 8 * curvature


def test_empty_cycleset():
    with pytest.raises(EmptyResultError):
        build_prototype(CycleSet(10), ECG)


def test_prototype_invariants():
    with pytest.raises(InvalidInputError):
        proto([1.0, -1.0], iqr=[0.1, -0.1])
    with pytest.raises(InvalidInputError):
        Prototype(2, np.zeros(2), np.zeros(2), 0, ECG, 1.0)


@given(st.integers(1, 15), st.data())
def test_permutation_invariance(n, data):
    rows = data.draw(arrays(float, (n, 6), elements=st.floats(-10, 10)))
    perm = data.draw(st.permutations(range(n)))
    a = build_prototype(cycleset(rows), ECG)
    b = build_prototype(cycleset(rows[list(perm)]), ECG)
    assert np.allclose(a.waveform, b.waveform, atol=1e-12) and np.allclose(a.iqr, b.iqr, atol=1e-12)


@given(st.integers(1, 15), st.floats(0.01, 100), st.data())
def test_scaling_equivariance(n, c, data):
    rows = data.draw(arrays(float, (n, 6), elements=st.floats(-10, 10)))
    a = build_prototype(cycleset(rows), ECG)
    b = build_prototype(cycleset(rows * c), ECG)
    tol = 1e-9 * c * (1 + np.abs(rows).max())
    assert np.allclose(b.waveform, c * a.waveform, atol=tol) and np.allclose(b.iqr, c * a.iqr, atol=tol)


def test_json_roundtrip():
    p = build_prototype(cycleset(np.random.default_rng(0).normal(size=(7, 20))), ECG, subject="S01", condition="ibi_D", labels=("b",))
    q = Prototype.from_dict(p.to_dict())
    assert np.array_equal(p.waveform, q.waveform) and np.array_equal(p.iqr, q.iqr)
    assert np.array_equal(p.lower, q.lower) and np.array_equal(p.upper, q.upper)
    assert (q.subject, q.condition, q.labels, q.method, q.median_ibi) == ("S01", "ibi_D", ("b",), ECG, p.median_ibi)
    with pytest.raises(InvalidInputError):
        Prototype.from_dict({"grid_size": 3})


def test_normalized():
    p = proto(2 * np.cos(2 * np.pi * K / 100), iqr=np.full(100, 0.2))
    q = p.normalized()
    assert np.max(np.abs(q.waveform)) == pytest.approx(1.0) and np.allclose(q.iqr, 0.1)


# -- comparison -------------------------------------------------------------

def test_compare_identity():
    w = np.cos(2 * np.pi * K / 100)
    r = compare_prototypes(proto(w, np.full(100, 0.1)), proto(w))
    assert r.max_abs_diff == 0 and r.in_band_fraction == 1.0


def test_compare_constant_offset_inside_band():
    w = np.cos(2 * np.pi * K / 100)
    iqr = 0.1 + 0.05 * np.abs(np.sin(2 * np.pi * K / 100))
    r = compare_prototypes(proto(w, iqr), proto(w + 0.5 * iqr.min()))
    assert r.in_band_fraction == 1.0
    assert r.max_abs_diff == pytest.approx(0.05)


def test_compare_grid_mismatch():
    with pytest.raises(InvalidInputError):
        compare_prototypes(proto(np.zeros(10)), proto(np.zeros(12)))


def test_compare_symmetry_except_band():
    a = proto(np.cos(2 * np.pi * K / 100), np.full(100, 0.01))
    b = proto(np.cos(2 * np.pi * K / 100) + 0.02, np.full(100, 0.5))
    ab, ba = compare_prototypes(a, b), compare_prototypes(b, a)
    assert ab.max_abs_diff == ba.max_abs_diff and ab.rms_diff == ba.rms_diff
    assert ab.in_band_fraction == 0.0 and ba.in_band_fraction == 1.0


@given(st.floats(-40, 40))
def test_fractional_shift_recovered(s):
    w = np.cos(2 * np.pi * K / 100) + 0.4 * np.cos(4 * np.pi * K / 100 + 1.0)
    shifted = circular_shift(w, s)
    back = best_circular_shift(w, shifted)
    assert ((back + s + 50) % 100) - 50 == pytest.approx(0.0, abs=1e-4)


def test_aligned_comparison():
    w = np.cos(2 * np.pi * K / 100) + 0.4 * np.cos(4 * np.pi * K / 100 + 1.0)
    r = compare_prototypes(proto(w), proto(circular_shift(w, 17.3)), align=True)
    assert r.max_abs_diff < 1e-6


def test_integer_shift_is_roll():
    w = np.random.default_rng(1).normal(size=64)
    assert np.allclose(circular_shift(w, 5), np.roll(w, 5))


# -- deviant check ----------------------------------------------------------

def test_sharp_peak_is_typical():
    c = detect_deviant(proto(disturbed_waveform(0.5, peak_index=15)))
    assert not c.deviant and c.label == "typical" and c.argmax == 15


def test_broad_peak_at_r_is_deviant():
    c = detect_deviant(proto(disturbed_waveform(2.0)))
    assert c.deviant and c.argmax == 0
    assert c.peak_width >= c.valley_width


def test_broad_peak_elsewhere_is_typical():
    c = detect_deviant(proto(disturbed_waveform(2.0, peak_index=20)))
    assert not c.deviant and "not at the R-peak" in c.reason


def test_disturbed_generator_template_is_deviant():
    c = detect_deviant(proto(disturbed_waveform(1.5)))
    assert c.deviant
    assert c.peak_width / c.valley_width == pytest.approx(1.5, rel=0.05)


def test_decision_boundary_sweep():
    ratios = np.round(np.arange(0.6, 1.45, 0.05), 2)
    flags = [detect_deviant(proto(disturbed_waveform(r))).deviant for r in ratios]
    # monotone in the width ratio, switching close to 1
    first = flags.index(True)
    assert all(flags[first:]) and not any(flags[:first])
    assert 0.9 <= ratios[first] <= 1.1


@given(st.floats(0.01, 100))
def test_deviant_scale_invariant(c):
    w = disturbed_waveform(1.3)
    assert detect_deviant(proto(w)).deviant == detect_deviant(proto(c * w)).deviant


def test_flat_prototype_undeterminable():
    with pytest.raises(UndeterminableError):
        detect_deviant(proto(np.zeros(100)))
