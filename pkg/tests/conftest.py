import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def cosine_series(freq=1.0, duration=1.0, fs=40.0, phase=0.0, amplitude=1.0, start=0.0):
    """Cosine sampled on the uniform grid used throughout the tests."""
    from ppgwave.timeseries import UniformSeries

    n = int(round(duration * fs))
    t = start + np.arange(n) / fs
    return UniformSeries(amplitude * np.cos(2 * np.pi * freq * t + phase), fs, start)
