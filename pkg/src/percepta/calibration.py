"""Linear threshold calibration from (stimulus, response) records.

Each record pairs the encoding factors of one stimulus with the cluster
count a user reported for it. The user count is inverted through the
stimulus's merge tree to a persistence threshold, a linear model maps
factors to thresholds by ordinary least squares, and the differential
(user count minus model-predicted count) measures how well the model
captures perception. Summaries stop at mean/standard deviation/histogram;
no significance testing here.
"""

import csv
import dataclasses
from dataclasses import dataclass

import numpy as np

from .errors import DataError, DegenerateDesignError, ParameterError
from .jsonutil import SCHEMA_VERSION, as_int, as_real, check_schema, require
from .topology import cluster_count_at, threshold_for_count

PREDICTORS = ("S", "N", "P", "N_and_P", "O")

RESPONSE_CSV_HEADER = ["participant", "S", "N", "P", "O", "C", "U"]


@dataclass(frozen=True)
class ResponseRecord:
    """One stimulus/response observation.

    S: cluster spread (pixels); N: point count; P: point area (square
    pixels); O: opacity fraction; C: generated cluster count; U: user
    selected cluster count. The extraction fields are filled by
    extract_thresholds: the representative threshold, its half-open
    [lo, hi) interval kept for audit, and whether U was achievable
    exactly.
    """

    S: float
    N: int
    P: float
    O: float
    C: int
    U: int
    participant: str | None = None
    extracted_threshold: float | None = None
    threshold_interval: tuple | None = None
    extraction_exact: bool | None = None

    def __post_init__(self):
        if self.U < 1:
            raise ParameterError("U must be >= 1")
        if self.C < 1:
            raise ParameterError("C must be >= 1")

    def factor(self, name):
        return getattr(self, name)


@dataclass(frozen=True)
class LinearThresholdModel:
    """Least-squares fit mapping encoding factors to a threshold.

    coefficients holds the slope(s) followed by the intercept: (c1,
    intercept) for the single-factor predictors, (c1, c2, intercept) for
    the N*P interaction model.
    """

    predictor: str
    coefficients: tuple
    n_obs: int
    residual_rms: float

    def __post_init__(self):
        if self.predictor not in PREDICTORS:
            raise ParameterError(f"unknown predictor {self.predictor!r}")
        expected = self.arity + 1
        if len(self.coefficients) != expected:
            raise ParameterError(
                f"predictor {self.predictor} expects {expected} coefficients")
        object.__setattr__(self, "coefficients", tuple(float(c) for c in self.coefficients))

    @property
    def arity(self):
        return 2 if self.predictor == "N_and_P" else 1

    def predict(self, record):
        """Threshold for a record's factors, unclamped."""
        inputs = _predictor_inputs(record, self.predictor)
        slopes = self.coefficients[:-1]
        return float(np.dot(slopes, inputs) + self.coefficients[-1])

    def to_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "predictor": self.predictor,
            "coefficients": list(self.coefficients),
            "n_obs": self.n_obs,
            "residual_rms": float(self.residual_rms),
        }

    @classmethod
    def from_dict(cls, data, context="model"):
        check_schema(data, context)
        return cls(
            predictor=str(require(data, "predictor", context)),
            coefficients=tuple(
                as_real(c, context + ".coefficients")
                for c in require(data, "coefficients", context)),
            n_obs=as_int(require(data, "n_obs", context), context + ".n_obs"),
            residual_rms=as_real(require(data, "residual_rms", context),
                                 context + ".residual_rms"),
        )


@dataclass(frozen=True)
class DifferentialSummary:
    """Mean, sample (n-1) standard deviation, and unit-width integer-bin
    histogram of a batch of differentials. With a single observation the
    standard deviation is reported as 0 and n_obs flags the degeneracy."""

    mean: float
    std: float
    n_obs: int
    bin_start: int
    counts: tuple

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(int(c) for c in self.counts))
        if sum(self.counts) != self.n_obs:
            raise ParameterError("histogram counts must sum to n_obs")

    def to_dict(self):
        return {
            "schema": SCHEMA_VERSION,
            "mean": float(self.mean),
            "std": float(self.std),
            "n_obs": self.n_obs,
            "histogram": {"bin_start": self.bin_start, "counts": list(self.counts)},
        }


def _predictor_inputs(record, predictor):
    if predictor == "N_and_P":
        return (record.N, record.P)
    return (record.factor(predictor),)


def extract_thresholds(records, trees):
    """Fill each record's threshold by inverting its tree at the user count.

    Records and trees are aligned one to one. Inexact extractions (U not
    achievable on that tree) are kept but flagged via extraction_exact.
    """
    if len(records) != len(trees):
        raise ParameterError("records and trees must be aligned 1:1")
    filled = []
    for record, tree in zip(records, trees):
        pick = threshold_for_count(tree, record.U)
        filled.append(dataclasses.replace(
            record,
            extracted_threshold=pick.threshold,
            threshold_interval=pick.interval,
            extraction_exact=pick.exact,
        ))
    return filled


def fit_threshold_model(records, predictor):
    """Ordinary least squares of extracted thresholds on a factor.

    Exact on noiseless linear data to machine precision (solved by SVD).
    Raises DegenerateDesignError when the design matrix is rank
    deficient, e.g. all predictor values equal.
    """
    if predictor not in PREDICTORS:
        raise ParameterError(f"unknown predictor {predictor!r}")
    arity = 2 if predictor == "N_and_P" else 1
    if len(records) < arity + 1:
        raise ParameterError(
            f"need at least {arity + 1} records to fit predictor {predictor}")
    if any(r.extracted_threshold is None for r in records):
        raise ParameterError("records must have extracted thresholds; "
                             "run extract_thresholds first")
    design = np.array(
        [list(_predictor_inputs(r, predictor)) + [1.0] for r in records],
        dtype=np.float64,
    )
    target = np.array([r.extracted_threshold for r in records], dtype=np.float64)
    solution, _, rank, _ = np.linalg.lstsq(design, target, rcond=None)
    if rank < design.shape[1]:
        raise DegenerateDesignError(
            f"design matrix for predictor {predictor} is rank deficient")
    residuals = target - design @ solution
    return LinearThresholdModel(
        predictor=predictor,
        coefficients=tuple(solution),
        n_obs=len(records),
        residual_rms=float(np.sqrt(np.mean(residuals ** 2))),
    )


def model_differential(record, model, tree):
    """User count minus the model-predicted count on the record's tree.

    The linear model can extrapolate below zero; negative predicted
    thresholds are clamped to 0 before counting.
    """
    predicted = max(0.0, model.predict(record))
    return record.U - cluster_count_at(tree, predicted)


def raw_differential(record):
    """User count minus the generated cluster count."""
    return record.U - record.C


def summarize_differentials(values):
    """Mean, sample std, and unit-bin histogram of integer differentials."""
    if len(values) == 0:
        raise ParameterError("cannot summarize an empty differential list")
    arr = np.asarray(values, dtype=np.int64)
    lo, hi = int(arr.min()), int(arr.max())
    counts = np.zeros(hi - lo + 1, dtype=np.int64)
    np.add.at(counts, arr - lo, 1)
    return DifferentialSummary(
        mean=float(arr.mean()),
        std=0.0 if len(arr) == 1 else float(arr.std(ddof=1)),
        n_obs=len(arr),
        bin_start=lo,
        counts=tuple(counts),
    )


def read_response_csv(path):
    """Load response records from the participant,S,N,P,O,C,U CSV."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.DictReader(fh)
            fields = [f.strip() for f in reader.fieldnames or []]
            missing = [name for name in RESPONSE_CSV_HEADER if name not in fields]
            if missing:
                raise DataError(f"responses: {path}: missing columns {missing}")
            records = []
            for i, row in enumerate(reader):
                try:
                    records.append(ResponseRecord(
                        participant=row["participant"],
                        S=float(row["S"]),
                        N=int(row["N"]),
                        P=float(row["P"]),
                        O=float(row["O"]),
                        C=int(row["C"]),
                        U=int(row["U"]),
                    ))
                except (ValueError, ParameterError) as exc:
                    raise DataError(f"responses: {path} row {i + 2}: {exc}") from exc
    except OSError as exc:
        raise DataError(f"responses: cannot read {path}: {exc}") from exc
    return records


def write_response_csv(path, records):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(RESPONSE_CSV_HEADER)
        for r in records:
            writer.writerow([r.participant or "", r.S, r.N, r.P, r.O, r.C, r.U])
