import json

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from ppgwave import io
from ppgwave.errors import InvalidInputError
from ppgwave.timeseries import EventTrain, UniformSeries


@given(arrays(float, st.integers(2, 50), elements=st.floats(-1e6, 1e6)))
def test_ppg_roundtrip_bit_exact(tmp_path_factory, x):
    path = tmp_path_factory.mktemp("io") / "ppg.csv"
    s = UniformSeries(x, 40.0, 0.0)
    io.write_ppg(path, s)
    back = io.read_ppg(path)
    assert np.array_equal(back.values, s.values)
    assert back.sample_rate == pytest.approx(40.0, rel=1e-12)


def test_rpeaks_and_epochs_roundtrip(tmp_path):
    io.write_rpeaks(tmp_path / "r.csv", EventTrain([0.1, 0.95, 1.9]))
    assert list(io.read_rpeaks(tmp_path / "r.csv").times) == [0.1, 0.95, 1.9]
    io.write_epochs(tmp_path / "e.csv", [(1.0, 2.5, "breath_hold")])
    assert io.read_epochs(tmp_path / "e.csv") == [(1.0, 2.5, "breath_hold")]


def test_header_checked(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("t,v\n0,1\n")
    with pytest.raises(InvalidInputError):
        io.read_ppg(p)
    p.write_text("")
    with pytest.raises(InvalidInputError):
        io.read_ppg(p)
    p.write_text("time_s,value\n0,abc\n0.025,1\n")
    with pytest.raises(InvalidInputError):
        io.read_ppg(p)


def test_non_uniform_rejected(tmp_path):
    p = tmp_path / "ppg.csv"
    p.write_text("time_s,value\n0,1\n0.025,2\n0.06,3\n")
    with pytest.raises(InvalidInputError):
        io.read_ppg(p)


def test_json_is_sorted_and_finite(tmp_path):
    io.write_json(tmp_path / "x.json", {"b": np.float64(1.5), "a": [np.int64(2), float("nan")], "c": np.bool_(True)})
    text = (tmp_path / "x.json").read_text()
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {"a": [2, None], "b": 1.5, "c": True}
    (tmp_path / "bad.json").write_text("{")
    with pytest.raises(InvalidInputError):
        io.read_json(tmp_path / "bad.json")


def test_fmt_round_trips_floats():
    for v in (0.1, 1 / 3, 1e-300, -2.5e17):
        assert float(io.fmt(v)) == v
    assert io.fmt(None) == "" and io.fmt(True) == "1" and io.fmt("S01") == "S01"
