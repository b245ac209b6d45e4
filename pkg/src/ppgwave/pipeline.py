"""End-to-end cohort run: synth -> prototypes -> harmonics -> features -> predict.

Everything goes through the same functions as the command line, including the
file round trip, so a run here is a run of the tool.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import io
from .cli import (
    build_condition_prototypes,
    cmd_features,
    cmd_harmonics,
    cmd_predict,
    cmd_synth,
    write_prototype,
)
from .ibi import feature_changes
from .prototype import Prototype
from .segmentation import SegmentationMethod


@dataclass
class PipelineResult:
    out: Path
    subjects: list
    prototypes: list = field(default_factory=list)
    features: list = field(default_factory=list)
    predictor: dict = field(default_factory=dict)
    ibi_study: dict | None = None


def run_pipeline(config: dict, out, m_max: int = 10, ibi_study: bool = True) -> PipelineResult:
    """Run the whole chain on a synthetic cohort written under ``out``.

    Layout: ``cohort/`` (recordings), ``prototypes/``, ``harmonics/``,
    ``features/``, ``predict/`` and, with ``ibi_study``, ``ibi/``.
    """
    out = Path(out)
    names = cmd_synth(config, out / "cohort")
    protos: list[Prototype] = []
    binned = {}
    for name in names:
        bundle = out / "cohort" / name
        ppg = io.read_ppg(bundle / "ppg.csv")
        rpeaks = io.read_rpeaks(bundle / "rpeaks.csv")
        epochs = io.read_epochs(bundle / "epochs.csv")
        for method in (SegmentationMethod.ECG_BASED, SegmentationMethod.PPG_BLIND):
            protos += build_condition_prototypes(ppg, rpeaks, epochs, name, method)
        if ibi_study:
            binned[name] = build_condition_prototypes(ppg, rpeaks, epochs, name, SegmentationMethod.ECG_BASED, ibi_bins=True)
    for p in protos + [p for triple in binned.values() for p in triple]:
        write_prototype(p, out / "prototypes")
    # reload so downstream steps see exactly what is on disk
    on_disk = [Prototype.from_dict(io.read_json(f)) for f in sorted((out / "prototypes").glob("*.json"))]
    main = [p for p in on_disk if p.condition == "all" and p.method is SegmentationMethod.ECG_BASED]
    cmd_harmonics(main, m_max, out / "harmonics", ibi_split=len(main) >= 6)
    rows = cmd_features(on_disk, out / "features")
    table = io.read_csv_dicts(out / "features" / "features.csv")
    report = cmd_predict(table, out / "predict")
    study = None
    if ibi_study:
        study = feature_changes(binned).to_dict()
        io.write_json(out / "ibi" / "feature_changes.json", study)
    return PipelineResult(out, names, on_disk, rows, report, study)
