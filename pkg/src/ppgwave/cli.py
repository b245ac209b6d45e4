"""Command-line front end.

Subcommands::

    ppgwave synth       write a synthetic cohort (ppg.csv, rpeaks.csv, epochs.csv, truth.json)
    ppgwave prototype   segment one subject and write prototype JSON + plot CSV
    ppgwave harmonics   unmodeled-energy curves and cohort summaries
    ppgwave features    marker table for a set of prototypes
    ppgwave predict     fit and evaluate the ECG-blind R-peak predictor

Exit codes: 0 ok, 2 usage/config, 3 insufficient data, 4 I/O.
The output directory defaults to ``$PPGWAVE_OUTPUT_DIR`` when ``--out`` is omitted.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path


from . import io
from .errors import (
    EmptyResultError,
    InsufficientEventsError,
    InvalidInputError,
    InvalidSpecError,
    PPGWaveError,
    RankDeficientError,
    UndeterminableError,
)
from .features import cyclic_difference, extract_markers
from .harmonics import SMOOTHING_ORDER, fit_harmonics, unmodeled_energy_curve
from .ibi import boxplot_summary
from .predictor import (
    PredictorSample,
    compare_feature_sets,
    constant_baseline,
    evaluate,
    fit_predictor,
    leave_one_out,
)
from .prototype import Prototype, build_prototype, detect_deviant
from .segmentation import (
    DEFAULT_GRID_SIZE,
    DEFAULT_REJECT_HIGH,
    DEFAULT_REJECT_LOW,
    SegmentationMethod,
    attach_labels,
    bin_by_ibi,
    partition_by_label,
    reject_outlier_cycles,
    segment_by_ecg,
    segment_by_ppg,
)
from .synth import CohortSpec, generate_cohort

log = logging.getLogger("ppgwave")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_IO = 0, 2, 3, 4
OUTPUT_ENV = "PPGWAVE_OUTPUT_DIR"

METHODS = {"ecg": SegmentationMethod.ECG_BASED, "blind": SegmentationMethod.PPG_BLIND}
FEATURE_COLUMNS = (
    "subject", "method", "condition", "ibi_s", "m_pos_s", "f_pos_s", "d_pos_s",
    "z_pos_s", "d_zm_s", "amplitude", "max_slope_pos_s", "deviant", "status",
)


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _out_dir(arg) -> Path:
    if arg:
        return Path(arg)
    return Path(os.environ.get(OUTPUT_ENV, "ppgwave_out"))


# -- synth -----------------------------------------------------------------

def cmd_synth(config: dict, out: Path) -> list[str]:
    """Write one directory per synthetic subject plus ``cohort_truth.json``."""
    spec = CohortSpec.from_dict(config)
    subjects, truth = generate_cohort(spec)
    names = []
    for s in subjects:
        d = out / s.spec.subject_id
        io.write_ppg(d / "ppg.csv", s.ppg)
        io.write_rpeaks(d / "rpeaks.csv", s.rpeaks)
        io.write_epochs(d / "epochs.csv", s.spec.epochs)
        io.write_json(d / "truth.json", s.truth.to_dict())
        names.append(s.spec.subject_id)
    io.write_json(out / "cohort_truth.json", truth.to_dict())
    return names


# -- prototype -------------------------------------------------------------

def build_condition_prototypes(
    ppg,
    rpeaks,
    epochs,
    subject: str,
    method: SegmentationMethod,
    grid_size: int = DEFAULT_GRID_SIZE,
    low: float = DEFAULT_REJECT_LOW,
    high: float = DEFAULT_REJECT_HIGH,
    label: str | None = None,
    ibi_bins: bool = False,
) -> list[Prototype]:
    """Segmentation -> rejection -> optional partition/binning -> prototypes."""
    if method is SegmentationMethod.ECG_BASED:
        if rpeaks is None:
            raise InvalidInputError("ECG-based segmentation needs an R-peak file")
        cs = segment_by_ecg(ppg, rpeaks, grid_size)
    else:
        cs = segment_by_ppg(ppg, grid_size)
    if epochs:
        cs = attach_labels(cs, epochs)
    cs = reject_outlier_cycles(cs, low, high)

    groups = []
    if label:
        with_, without = partition_by_label(cs, label)
        groups += [(label, with_, (label,)), (f"not_{label}", without, ())]
    if ibi_bins:
        q1, mid, q4 = bin_by_ibi(cs)
        groups += [("ibi_D", q1, ()), ("ibi_N", mid, ()), ("ibi_I", q4, ())]
    if not groups:
        groups = [("all", cs, ())]
    protos = []
    for cond, part, labels in groups:
        if len(part) == 0:
            raise InsufficientEventsError(f"condition {cond!r} has no cycles")
        p = build_prototype(part, method, labels=labels, subject=subject, condition=cond)
        # discards happen before partitioning; report them on every condition
        protos.append(p)
    return protos


def prototype_stem(p: Prototype) -> str:
    return f"{p.subject}_{p.method.value}_{p.condition}"


def write_prototype(p: Prototype, out: Path) -> Path:
    stem = out / prototype_stem(p)
    io.write_json(stem.with_suffix(".json"), p.to_dict())
    io.write_csv(
        stem.with_suffix(".csv"),
        ("k", "median", "q1", "q3"),
        zip(range(p.grid_size), p.waveform, p.lower, p.upper),
    )
    return stem.with_suffix(".json")


def _load_bundle(args):
    if args.bundle:
        b = Path(args.bundle)
        ppg_path = args.ppg or b / "ppg.csv"
        rpeaks_path = args.rpeaks or b / "rpeaks.csv"
        epochs_path = args.epochs or (b / "epochs.csv" if (b / "epochs.csv").exists() else None)
        subject = args.subject or b.name
    else:
        if not args.ppg:
            raise CliError("either --bundle or --ppg is required", EXIT_USAGE)
        ppg_path, rpeaks_path, epochs_path = args.ppg, args.rpeaks, args.epochs
        subject = args.subject or Path(args.ppg).stem
    ppg = io.read_ppg(ppg_path)
    rpeaks = io.read_rpeaks(rpeaks_path) if rpeaks_path and Path(rpeaks_path).exists() else None
    epochs = io.read_epochs(epochs_path) if epochs_path else []
    if rpeaks is not None and len(rpeaks) and (rpeaks.times[-1] < ppg.start_time or rpeaks.times[0] > ppg.end_time):
        raise InvalidInputError("R-peak times do not overlap the PPG recording")
    return ppg, rpeaks, epochs, subject


def _run_prototype(args) -> int:
    ppg, rpeaks, epochs, subject = _load_bundle(args)
    out = _out_dir(args.out)
    methods = ["ecg", "blind"] if args.method == "both" else [args.method]
    for name in methods:
        protos = build_condition_prototypes(
            ppg, rpeaks, epochs, subject, METHODS[name], args.ns, args.reject_low, args.reject_high,
            args.labels, args.bins == "ibi3",
        )
        for p in protos:
            path = write_prototype(p, out)
            flag = "n/a"
            if p.method is SegmentationMethod.ECG_BASED:
                try:
                    flag = detect_deviant(p).label
                except UndeterminableError:
                    flag = "undeterminable"
            print(f"{path}\tcycles={p.n_cycles}\tdiscarded={p.n_discarded}\tdeviant={flag}")
    return EXIT_OK


# -- harmonics -------------------------------------------------------------

def cmd_harmonics(protos: list[Prototype], m_max: int, out: Path, ibi_split: bool = False, outer: int | None = None) -> dict:
    orders = list(range(m_max + 1))
    curves = {}
    fits = {}
    for p in protos:
        name = prototype_stem(p)
        curve = unmodeled_energy_curve(p.waveform, m_max)
        curves[name] = [float(v) for v in curve]
        fits[name] = fit_harmonics(p.waveform, min(SMOOTHING_ORDER, p.grid_size // 2 - 1)).to_dict()
        io.write_csv(out / f"{name}_energy.csv", ("order", "unmodeled_energy_db"), zip(orders, curve))
    summary = {
        "orders": orders,
        "per_prototype": curves,
        "fits": fits,
        "summary": {str(m): boxplot_summary([c[m] for c in curves.values()]) for m in orders},
    }
    if ibi_split:
        ranked = sorted(protos, key=lambda p: (p.median_ibi, prototype_stem(p)))
        k = outer if outer is not None else len(ranked) // 3
        if k < 1 or 2 * k > len(ranked):
            raise InsufficientEventsError(f"cannot form two outer groups of {k} from {len(ranked)} prototypes")
        groups = {"low_ibi": ranked[:k], "high_ibi": ranked[-k:]}
        summary["ibi_split"] = {
            g: {
                "subjects": [prototype_stem(p) for p in members],
                "median_ibi_s": [p.median_ibi for p in members],
                "by_order": {str(m): boxplot_summary([curves[prototype_stem(p)][m] for p in members]) for m in orders},
            }
            for g, members in groups.items()
        }
    io.write_json(out / "harmonics_summary.json", summary)
    return summary


# -- features --------------------------------------------------------------

def feature_row(p: Prototype) -> dict:
    row = {
        "subject": p.subject,
        "method": p.method.value,
        "condition": p.condition,
        "ibi_s": p.median_ibi,
    }
    try:
        mk = extract_markers(p)
        row.update(
            m_pos_s=mk.m_pos, f_pos_s=mk.f_pos, d_pos_s=mk.d_pos, z_pos_s=mk.z_pos,
            d_zm_s=mk.d_zm, amplitude=mk.amplitude, max_slope_pos_s=mk.max_slope_pos, status="ok",
        )
    except UndeterminableError as exc:
        row["status"] = f"undeterminable: {exc}"
    if p.method is SegmentationMethod.ECG_BASED:
        try:
            row["deviant"] = detect_deviant(p).deviant
        except UndeterminableError:
            row["deviant"] = None
    return row


def cmd_features(protos: list[Prototype], out: Path) -> list[dict]:
    rows = [feature_row(p) for p in protos]
    io.write_json(out / "markers.json", rows)
    io.write_csv(out / "features.csv", FEATURE_COLUMNS, ([r.get(c) for c in FEATURE_COLUMNS] for r in rows))
    return rows


# -- predict ---------------------------------------------------------------

def samples_from_rows(rows: list[dict], condition: str = "all") -> list[PredictorSample]:
    """Pair each subject's ECG-based ``m_pos`` with its ECG-blind ``d_zm``."""
    ecg, blind = {}, {}
    for r in rows:
        if r.get("condition", "all") != condition or r.get("status", "ok") != "ok":
            continue
        (ecg if r["method"] == SegmentationMethod.ECG_BASED.value else blind)[r["subject"]] = r
    samples = []
    for subject in sorted(set(ecg) & set(blind)):
        e, b = ecg[subject], blind[subject]
        ibi = float(b["ibi_s"])
        m, f, d = float(b["m_pos_s"]), float(b["f_pos_s"]), float(b["d_pos_s"])
        extras = {
            "f_minus_m": (f - m) % ibi,
            "d_minus_f": (d - f) % ibi,
            "max_slope_minus_m": cyclic_difference(float(b["max_slope_pos_s"]), m, ibi),
        }
        samples.append(PredictorSample(subject, float(e["m_pos_s"]), float(b["d_zm_s"]), extras))
    return samples


DEFAULT_SUBSETS = ((), ("d_zm",), ("d_zm", "f_minus_m"), ("d_zm", "d_minus_f"), ("max_slope_minus_m",))


def cmd_predict(rows: list[dict], out: Path, loso: bool = False) -> dict:
    samples = samples_from_rows(rows)
    if len(samples) < 2:
        raise InsufficientEventsError(f"need at least two subjects with both prototypes, got {len(samples)}")
    base = evaluate(constant_baseline(samples), samples)
    try:
        model = evaluate(fit_predictor(samples), samples)
        warning = None
    except RankDeficientError as exc:
        warning = f"{exc}; reporting the constant baseline only"
        log.warning(warning)
        print(f"warning: {warning}", file=sys.stderr)
        model = base
    report = model.to_dict()
    report["baseline"] = base.to_dict()
    report["warning"] = warning
    report["subjects"] = [s.subject for s in samples]
    report["feature_sets"] = {k: v.to_dict() for k, v in compare_feature_sets(samples, DEFAULT_SUBSETS).items()}
    if loso and len(samples) >= 3 and warning is None:
        report["leave_one_out"] = leave_one_out(samples).to_dict()
    io.write_json(out / "predictor_report.json", report)
    io.write_csv(out / "cdf_model.csv", ("error_s", "fraction"), model.cdf)
    io.write_csv(out / "cdf_baseline.csv", ("error_s", "fraction"), base.cdf)
    return report


# -- argument parsing ------------------------------------------------------

def _load_prototypes(paths) -> list[Prototype]:
    return [Prototype.from_dict(io.read_json(p)) for p in paths]


def _expand(paths) -> list[Path]:
    out = []
    for p in map(Path, paths):
        out += sorted(p.glob("*.json")) if p.is_dir() else [p]
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ppgwave", description=__doc__.split("\n\n")[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("synth", help="generate a synthetic cohort")
    sp.add_argument("--config", help="cohort config JSON (defaults: 25 subjects)")
    sp.add_argument("--seed", type=int, help="override the config seed")
    sp.add_argument("--out")

    pp = sub.add_parser("prototype", help="build prototypes for one subject")
    pp.add_argument("--bundle", help="directory with ppg.csv, rpeaks.csv and optional epochs.csv")
    pp.add_argument("--ppg")
    pp.add_argument("--rpeaks")
    pp.add_argument("--epochs")
    pp.add_argument("--subject")
    pp.add_argument("--method", choices=["ecg", "blind", "both"], default="ecg")
    pp.add_argument("--ns", type=int, default=DEFAULT_GRID_SIZE, help="samples per cycle")
    pp.add_argument("--reject-low", type=float, default=DEFAULT_REJECT_LOW)
    pp.add_argument("--reject-high", type=float, default=DEFAULT_REJECT_HIGH)
    pp.add_argument("--labels", help="split cycles by this epoch label")
    pp.add_argument("--bins", choices=["ibi3"], help="split cycles into D/N/I IBI bins")
    pp.add_argument("--out")

    hp = sub.add_parser("harmonics", help="unmodeled energy per harmonic order")
    hp.add_argument("prototypes", nargs="+", help="prototype JSON files or directories")
    hp.add_argument("--m-max", type=int, default=10)
    hp.add_argument("--ibi-split", action="store_true", help="compare lowest/highest-IBI prototype groups")
    hp.add_argument("--outer", type=int, help="size of each outer group (default n // 3)")
    hp.add_argument("--out")

    fp = sub.add_parser("features", help="marker table for prototypes")
    fp.add_argument("prototypes", nargs="+")
    fp.add_argument("--out")

    rp = sub.add_parser("predict", help="fit the R-peak offset predictor")
    rp.add_argument("tables", nargs="+", help="features.csv files from the features command")
    rp.add_argument("--loso", action="store_true", help="also report leave-one-subject-out errors")
    rp.add_argument("--out")
    return ap


def _dispatch(args) -> int:
    out = _out_dir(getattr(args, "out", None))
    if args.command == "synth":
        config = io.read_json(args.config) if args.config else {}
        if not isinstance(config, dict):
            raise InvalidSpecError("config must be a JSON object")
        if args.seed is not None:
            config["seed"] = args.seed
        try:
            names = cmd_synth(config, out)
        except OSError as exc:
            # an unwritable target is a configuration problem for synth
            raise CliError(f"cannot write cohort: {exc}", EXIT_USAGE) from exc
        print(f"wrote {len(names)} subjects to {out}")
    elif args.command == "prototype":
        return _run_prototype(args)
    elif args.command == "harmonics":
        protos = _load_prototypes(_expand(args.prototypes))
        if not protos:
            raise InsufficientEventsError("no prototypes given")
        cmd_harmonics(protos, args.m_max, out, args.ibi_split, args.outer)
        print(f"wrote energy curves for {len(protos)} prototypes to {out}")
    elif args.command == "features":
        protos = _load_prototypes(_expand(args.prototypes))
        rows = cmd_features(protos, out)
        flagged = sum(r["status"] != "ok" for r in rows)
        print(f"wrote {len(rows)} marker rows ({flagged} flagged) to {out}")
    elif args.command == "predict":
        rows = [r for t in args.tables for r in io.read_csv_dicts(t)]
        rep = cmd_predict(rows, out, args.loso)
        print(f"k1={rep['k1_s']} s  k2={rep['k2']}  sigma={rep['sigma_s']} s  ci90={rep['ci90_s']} s  (baseline ci90={rep['baseline']['ci90_s']} s)")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return _dispatch(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (InsufficientEventsError, EmptyResultError) as exc:
        print(f"error: insufficient data: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (InvalidSpecError, InvalidInputError, PPGWaveError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
