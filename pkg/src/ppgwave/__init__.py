"""Cardiac-cycle prototypes from photoplethysmogram (PPG) recordings.

Segment a PPG trace into cycles (with or without ECG R-peaks), reduce them
to a median prototype with an IQR band, describe the prototype with a
harmonic model and timing markers, and estimate where the R-peak falls
from the ECG-blind prototype alone.
"""

from .errors import (
    EmptyResultError,
    InsufficientEventsError,
    InvalidInputError,
    InvalidOrderError,
    InvalidSpecError,
    PPGWaveError,
    RankDeficientError,
    SupportRangeError,
    UndeterminableError,
)
from .features import MarkerSet, extract_markers
from .harmonics import HarmonicFit, fit_harmonics, smooth, unmodeled_energy_curve
from .predictor import EvaluationReport, LinearPredictor, PredictorSample, constant_baseline, evaluate, fit_predictor
from .prototype import Prototype, build_prototype, compare_prototypes, detect_deviant
from .segmentation import (
    CycleSet,
    SegmentationMethod,
    bin_by_ibi,
    reject_outlier_cycles,
    segment_by_ecg,
    segment_by_ppg,
)
from .timeseries import EventTrain, UniformSeries, find_zero_crossings

__version__ = "0.1.0"
