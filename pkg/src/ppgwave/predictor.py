"""ECG-blind estimate of the R-peak to maximum distance.

The distance ``d`` from the R-peak to the prototype maximum is modelled as
``d = k1 + k2 * d_zm + e`` where ``d_zm`` is the phase-zero to maximum
distance of the ECG-blind prototype. ``d`` itself comes from the ECG-based
prototype of the same subject.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import InsufficientEventsError, InvalidInputError, RankDeficientError
from .timeseries import quantile


@dataclass(frozen=True)
class PredictorSample:
    subject: str
    d: float
    d_zm: float
    extras: Mapping[str, float] = field(default_factory=dict)

    def feature(self, name: str) -> float:
        return self.d_zm if name == "d_zm" else self.extras[name]


@dataclass(frozen=True)
class LinearPredictor:
    k1: float
    k2: float = 0.0
    training_n: int = 0
    kind: str = "linear"

    def predict(self, d_zm):
        return self.k1 + self.k2 * np.asarray(d_zm, dtype=float)


@dataclass(frozen=True, eq=False)
class EvaluationReport:
    errors: np.ndarray
    sigma: float
    ci90_width: float
    mu_d: float
    predictor: LinearPredictor | None = None

    @property
    def cdf(self) -> list[tuple[float, float]]:
        e = np.sort(self.errors)
        n = e.size
        return [(float(x), (i + 1) / n) for i, x in enumerate(e)]

    def to_dict(self) -> dict:
        p = self.predictor
        return {
            "kind": None if p is None else p.kind,
            "k1_s": None if p is None else p.k1,
            "k2": None if p is None else p.k2,
            "n": int(self.errors.size),
            "sigma_s": self.sigma,
            "ci90_s": self.ci90_width,
            "mu_d_s": self.mu_d,
            "conventions": {"sigma": "population std (divide by n)", "ci90": "95th minus 5th percentile, linear interpolation"},
            "cdf": [[e, f] for e, f in self.cdf],
        }


def _arrays(samples: Sequence[PredictorSample]):
    d = np.array([s.d for s in samples], dtype=float)
    x = np.array([s.d_zm for s in samples], dtype=float)
    return d, x


def fit_predictor(samples: Sequence[PredictorSample]) -> LinearPredictor:
    """Ordinary least-squares fit of ``d`` on ``d_zm``."""
    if len(samples) < 2:
        raise InsufficientEventsError("fitting needs at least two samples")
    d, x = _arrays(samples)
    xc = x - x.mean()
    sxx = float(xc @ xc)
    if sxx <= (1e-12 * max(1.0, float(np.abs(x).max()))) ** 2 * x.size:
        raise RankDeficientError("all d_zm values are identical; fit a constant instead")
    k2 = float(xc @ (d - d.mean())) / sxx
    k1 = float(d.mean() - k2 * x.mean())
    return LinearPredictor(k1, k2, len(samples))


def constant_baseline(samples: Sequence[PredictorSample]) -> LinearPredictor:
    """Predict the mean distance for every subject."""
    if len(samples) == 0:
        raise InsufficientEventsError("no samples")
    d, _ = _arrays(samples)
    return LinearPredictor(float(d.mean()), 0.0, len(samples), kind="constant")


def _report(errors: np.ndarray, mu_d: float, predictor) -> EvaluationReport:
    return EvaluationReport(
        errors=errors,
        sigma=float(np.sqrt(np.mean((errors - errors.mean()) ** 2))),
        ci90_width=quantile(errors, 0.95) - quantile(errors, 0.05),
        mu_d=mu_d,
        predictor=predictor,
    )


def evaluate(pred: LinearPredictor, samples: Sequence[PredictorSample]) -> EvaluationReport:
    """Prediction errors ``d - d_hat`` with their spread statistics."""
    if len(samples) == 0:
        raise InsufficientEventsError("no samples to evaluate")
    d, x = _arrays(samples)
    return _report(d - pred.predict(x), float(d.mean()), pred)


def leave_one_out(samples: Sequence[PredictorSample]) -> EvaluationReport:
    """Held-out errors: each subject predicted from a fit on the others.

    Not part of the in-sample analysis; offered to judge generalisation.
    """
    if len(samples) < 3:
        raise InsufficientEventsError("leave-one-out needs at least three samples")
    d, x = _arrays(samples)
    errors = np.empty(len(samples))
    for i in range(len(samples)):
        rest = [s for j, s in enumerate(samples) if j != i]
        errors[i] = d[i] - fit_predictor(rest).predict(x[i])
    return _report(errors, float(d.mean()), LinearPredictor(float("nan"), float("nan"), len(samples) - 1, kind="loso"))


@dataclass
class SubsetResult:
    features: tuple
    report: EvaluationReport | None
    coefficients: list | None
    diagnostic: str = ""

    def to_dict(self) -> dict:
        return {
            "features": list(self.features),
            "coefficients": self.coefficients,
            "report": None if self.report is None else self.report.to_dict(),
            "diagnostic": self.diagnostic,
        }


def compare_feature_sets(samples: Sequence[PredictorSample], subsets: Sequence[Sequence[str]]) -> dict:
    """In-sample OLS report for every feature subset (intercept always included).

    Rank-deficient subsets are kept in the result with a diagnostic and no report.
    """
    if len(samples) < 2:
        raise InsufficientEventsError("need at least two samples")
    d, _ = _arrays(samples)
    out = {}
    for subset in subsets:
        names = tuple(subset)
        key = "+".join(names) if names else "constant"
        try:
            cols = [[s.feature(f) for s in samples] for f in names]
        except KeyError as exc:
            raise InvalidInputError(f"unknown feature {exc.args[0]!r}") from exc
        X = np.column_stack([np.ones(len(samples))] + [np.asarray(c, dtype=float) for c in cols])
        if np.linalg.matrix_rank(X) < X.shape[1]:
            out[key] = SubsetResult(names, None, None, "rank-deficient design matrix; subset skipped")
            continue
        beta = np.linalg.solve(X.T @ X, X.T @ d)
        errors = d - X @ beta
        kind = "constant" if not names else "linear"
        pred = LinearPredictor(float(beta[0]), float(beta[1]) if len(beta) == 2 else float("nan"), len(samples), kind)
        out[key] = SubsetResult(names, _report(errors, float(d.mean()), pred), [float(b) for b in beta])
    return out
