"""Intraperson IBI-variation study.

Each subject's cycles are split into decreased (D), normal (N) and increased
(I) IBI bins. The ratios ``r_d = T_D / T_N`` and ``r_i = T_I / T_N`` place
subjects into large/small decrease (LD/SD) and large/small increase (LI/SI)
groups by median split, and marker changes relative to the N bin are
summarised per group.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import InsufficientEventsError, InvalidInputError
from .features import cyclic_difference, extract_markers
from .prototype import Prototype
from .timeseries import quantile

CATEGORIES = ("LD", "SD", "SI", "LI")
CHANGE_FEATURES = ("amplitude_db", "dm_ms", "df_ms", "dd_ms")
SPREAD_THRESHOLD = 0.05


@dataclass(frozen=True)
class IbiTriple:
    subject: str
    t_d: float
    t_n: float
    t_i: float

    def __post_init__(self):
        if not 0 < self.t_d <= self.t_n <= self.t_i:
            raise InvalidInputError(f"IBI triple for {self.subject!r} must satisfy 0 < t_d <= t_n <= t_i")

    @classmethod
    def from_prototypes(cls, subject: str, d: Prototype, n: Prototype, i: Prototype) -> "IbiTriple":
        return cls(subject, d.median_ibi, n.median_ibi, i.median_ibi)

    @property
    def small_spread(self) -> bool:
        """Both outer medians within 5% of the central one."""
        return abs(self.t_d / self.t_n - 1) < SPREAD_THRESHOLD and abs(self.t_i / self.t_n - 1) < SPREAD_THRESHOLD


@dataclass(frozen=True)
class CategoryAssignment:
    subject: str
    r_d: float
    r_i: float
    d_class: str = ""
    i_class: str = ""

    def to_dict(self) -> dict:
        return {
            "subject": self.subject,
            "r_d": self.r_d,
            "r_i": self.r_i,
            "d_class": self.d_class,
            "i_class": self.i_class,
        }


def compute_ratios(t: IbiTriple) -> tuple[float, float]:
    return t.t_d / t.t_n, t.t_i / t.t_n


def split_cohort(assignments: Sequence[CategoryAssignment]) -> dict[str, set]:
    """Median split of ``r_d`` (LD strictly below) and ``r_i`` (LI strictly above).

    Subjects at the median fall into the "small" class.
    """
    if len(assignments) < 2:
        raise InsufficientEventsError("cohort split needs at least two subjects")
    r_d = np.array([a.r_d for a in assignments])
    r_i = np.array([a.r_i for a in assignments])
    med_d, med_i = np.median(r_d), np.median(r_i)
    groups = {c: set() for c in CATEGORIES}
    for a, rd, ri in zip(assignments, r_d, r_i):
        groups["LD" if rd < med_d else "SD"].add(a.subject)
        groups["LI" if ri > med_i else "SI"].add(a.subject)
    return groups


def assign_categories(triples: Sequence[IbiTriple]) -> list[CategoryAssignment]:
    raw = [CategoryAssignment(t.subject, *compute_ratios(t)) for t in triples]
    groups = split_cohort(raw)
    return [
        CategoryAssignment(
            a.subject,
            a.r_d,
            a.r_i,
            "LD" if a.subject in groups["LD"] else "SD",
            "LI" if a.subject in groups["LI"] else "SI",
        )
        for a in raw
    ]


def boxplot_summary(values: Sequence[float]) -> dict:
    """Quartiles, 1.5 IQR whiskers and outliers of a sample."""
    v = np.sort(np.asarray(values, dtype=float))
    if v.size == 0:
        return {"n": 0, "q1": None, "median": None, "q3": None, "whiskers": [None, None], "outliers": [], "whisker_rule": "1.5*IQR"}
    q1, med, q3 = quantile(v, 0.25), quantile(v, 0.5), quantile(v, 0.75)
    iqr = q3 - q1
    inside = v[(v >= q1 - 1.5 * iqr) & (v <= q3 + 1.5 * iqr)]
    return {
        "n": int(v.size),
        "q1": q1,
        "median": med,
        "q3": q3,
        "whiskers": [float(inside.min()), float(inside.max())],
        "outliers": [float(x) for x in v if x < inside.min() or x > inside.max()],
        "whisker_rule": "1.5*IQR",
    }


def _change(outer, normal, period: float) -> dict[str, float]:
    # positions are cyclic; differences are reduced to (-T_N/2, T_N/2]
    return {
        "amplitude_db": 20 * np.log10(outer.amplitude / normal.amplitude),
        "dm_ms": 1e3 * cyclic_difference(outer.m_pos, normal.m_pos, period),
        "df_ms": 1e3 * cyclic_difference(outer.f_pos, normal.f_pos, period),
        "dd_ms": 1e3 * cyclic_difference(outer.d_pos, normal.d_pos, period),
    }


@dataclass
class FeatureChangeReport:
    assignments: list
    changes: dict          # category -> feature -> list of values
    per_subject: dict      # subject -> {"D": change, "I": change, "small_spread": bool}

    def summaries(self) -> dict:
        return {
            cat: {feat: boxplot_summary(vals) for feat, vals in feats.items()}
            for cat, feats in self.changes.items()
        }

    def to_dict(self) -> dict:
        return {
            "assignments": [a.to_dict() for a in self.assignments],
            "sign_convention": "outer bin minus N bin; positive shift = later in cycle",
            "per_subject": self.per_subject,
            "summaries": self.summaries(),
        }


def feature_changes(binned: Mapping[str, Sequence[Prototype]]) -> FeatureChangeReport:
    """Marker and amplitude changes of the outer bins against the N bin.

    ``binned`` maps subject -> ``(D, N, I)`` prototypes from ECG-based
    segmentation. Decrease changes are grouped under LD/SD, increase changes
    under LI/SI.
    """
    triples, markers = [], {}
    for subject, protos in binned.items():
        if len(protos) != 3 or any(p is None for p in protos):
            raise InsufficientEventsError(f"subject {subject!r} lacks one of the D/N/I prototypes")
        d, n, i = protos
        triples.append(IbiTriple.from_prototypes(subject, d, n, i))
        markers[subject] = tuple(extract_markers(p) for p in protos)
    assignments = assign_categories(triples)
    changes = {c: {f: [] for f in CHANGE_FEATURES} for c in CATEGORIES}
    per_subject = {}
    for a, t in zip(assignments, triples):
        md, mn, mi = markers[a.subject]
        dec, inc = _change(md, mn, t.t_n), _change(mi, mn, t.t_n)
        for f in CHANGE_FEATURES:
            changes[a.d_class][f].append(dec[f])
            changes[a.i_class][f].append(inc[f])
        per_subject[a.subject] = {"D": dec, "I": inc, "small_spread": t.small_spread}
    return FeatureChangeReport(assignments, changes, per_subject)
