import numpy as np
import pytest
from hypothesis import given, strategies as st

from ppgwave.errors import InsufficientEventsError, InvalidInputError
from ppgwave.ibi import (
    CategoryAssignment,
    IbiTriple,
    assign_categories,
    boxplot_summary,
    compute_ratios,
    feature_changes,
    split_cohort,
)
from ppgwave.prototype import Prototype
from ppgwave.segmentation import SegmentationMethod

N = 100
K = np.arange(N)


def proto(w, ibi):
    return Prototype(N, w - w.mean(), np.zeros(N), 10, SegmentationMethod.ECG_BASED, ibi)


def test_ratio_examples():
    assert compute_ratios(IbiTriple("a", 0.9, 1.0, 1.2)) == pytest.approx((0.9, 1.2))
    assert compute_ratios(IbiTriple("a", 1.0, 1.0, 1.0)) == (1.0, 1.0)


def test_triple_order_enforced():
    with pytest.raises(InvalidInputError):
        IbiTriple("a", 1.1, 1.0, 1.2)
    with pytest.raises(InvalidInputError):
        IbiTriple("a", 0.0, 1.0, 1.2)


def test_small_spread():
    assert IbiTriple("a", 0.97, 1.0, 1.03).small_spread
    assert not IbiTriple("a", 0.9, 1.0, 1.03).small_spread


def test_split_27_subjects(rng):
    a = [CategoryAssignment(f"S{i}", float(r), float(q)) for i, (r, q) in enumerate(zip(rng.uniform(0.8, 1.0, 27), rng.uniform(1.0, 1.2, 27)))]
    g = split_cohort(a)
    assert (len(g["LD"]), len(g["SD"]), len(g["LI"]), len(g["SI"])) == (13, 14, 13, 14)


def test_split_two_and_ties():
    g = split_cohort([CategoryAssignment("a", 0.9, 1.1), CategoryAssignment("b", 0.8, 1.2)])
    assert g["LD"] == {"b"} and g["SD"] == {"a"} and g["LI"] == {"b"} and g["SI"] == {"a"}
    g = split_cohort([CategoryAssignment(s, 0.9, 1.1) for s in "abcd"])
    assert g["LD"] == set() and g["SD"] == set("abcd") and g["LI"] == set()
    with pytest.raises(InsufficientEventsError):
        split_cohort([CategoryAssignment("a", 0.9, 1.1)])


@given(st.lists(st.tuples(st.floats(0.5, 1.0), st.floats(1.0, 1.5)), min_size=2, max_size=60))
def test_split_oracle(pairs):
    a = [CategoryAssignment(str(i), rd, ri) for i, (rd, ri) in enumerate(pairs)]
    g = split_cohort(a)
    rd = sorted(p[0] for p in pairs)
    n = len(rd)
    med_d = rd[n // 2] if n % 2 else (rd[n // 2 - 1] + rd[n // 2]) / 2
    assert g["LD"] == {str(i) for i, p in enumerate(pairs) if p[0] < med_d}
    assert g["LD"] | g["SD"] == {str(i) for i in range(n)} and not g["LD"] & g["SD"]
    assert g["LI"] | g["SI"] == {str(i) for i in range(n)} and not g["LI"] & g["SI"]
    if len(set(p[1] for p in pairs)) == n:
        assert len(g["LI"]) == n // 2


def test_assign_categories_labels():
    t = [IbiTriple("a", 0.9, 1.0, 1.05), IbiTriple("b", 0.95, 1.0, 1.2)]
    out = {c.subject: c for c in assign_categories(t)}
    assert out["a"].d_class == "LD" and out["b"].i_class == "LI"


def test_boxplot_summary():
    s = boxplot_summary([1, 2, 3, 4, 100])
    assert s["median"] == 3 and s["q1"] == 2 and s["q3"] == 4
    assert s["outliers"] == [100.0] and s["whiskers"] == [1.0, 4.0]
    assert boxplot_summary([])["n"] == 0


def _binned(w_d, w_n, w_i, ibis=(0.9, 1.0, 1.1)):
    return tuple(proto(w, ibi) for w, ibi in zip((w_d, w_n, w_i), ibis))


def test_identical_bins_zero_change():
    w = np.cos(2 * np.pi * K / N) + 0.3 * np.cos(4 * np.pi * K / N + 1)
    rep = feature_changes({"a": _binned(w, w, w, (1.0, 1.0, 1.0)), "b": _binned(w, w, w, (1.0, 1.0, 1.0))})
    for subj in rep.per_subject.values():
        for side in ("D", "I"):
            assert all(v == 0 for v in subj[side].values())


def test_amplitude_change_db():
    w = np.cos(2 * np.pi * K / N)
    rep = feature_changes({"a": _binned(w, w, 1.122 * w, (1.0, 1.0, 1.0)), "b": _binned(w, w, w, (1.0, 1.0, 1.0))})
    assert rep.per_subject["a"]["I"]["amplitude_db"] == pytest.approx(1.0, abs=0.01)


def test_changes_are_outer_minus_normal():
    w = np.cos(2 * np.pi * K / N)
    shifted = np.cos(2 * np.pi * (K - 3) / N)
    rep = feature_changes({"a": _binned(w, w, shifted, (1.0, 1.0, 1.0)), "b": _binned(w, w, w, (1.0, 1.0, 1.0))})
    assert rep.per_subject["a"]["I"]["dm_ms"] == pytest.approx(30.0, abs=1e-6)
    assert rep.per_subject["a"]["I"]["dd_ms"] == pytest.approx(30.0, abs=1e-6)


def test_missing_bin():
    w = np.cos(2 * np.pi * K / N)
    with pytest.raises(InsufficientEventsError):
        feature_changes({"a": (proto(w, 1.0), proto(w, 1.0))})


def test_report_serialises():
    w = np.cos(2 * np.pi * K / N)
    rep = feature_changes({"a": _binned(w, w, w), "b": _binned(w, w, w, (0.8, 1.0, 1.3))})
    d = rep.to_dict()
    assert set(d["summaries"]) == {"LD", "SD", "SI", "LI"}
    assert d["summaries"]["LI"]["dd_ms"]["n"] == 1
