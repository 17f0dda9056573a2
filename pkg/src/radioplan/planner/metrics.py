"""Classification / regression quality metrics and the report table."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..dataset import NO_COVERAGE_DBM, RX_SENSITIVITY_DBM
from ..errors import EmptySubset

#: Upper edge (dBm) of the near-sensitivity band entering A_fs.
FULL_SCALE_UPPER_DBM = -110.0


@dataclass(frozen=True)
class EvaluationReport:
    accuracy: float                    # percent
    full_scale_accuracy: float | None  # percent, None when undefined
    false_positive_pct: float          # percent
    rmse: float | None                 # dBm, None when no regression subset
    n_test: int
    n_full_scale: int
    n_regression: int

    def __post_init__(self):
        assert 0.0 <= self.accuracy <= 100.0
        assert 0.0 <= self.false_positive_pct <= 100.0
        if self.full_scale_accuracy is not None:
            assert 0.0 <= self.full_scale_accuracy <= 100.0
        if self.rmse is not None:
            assert self.rmse >= 0.0


def full_scale_mask(rssi_values) -> np.ndarray:
    """Samples whose RSS sits near the sensitivity threshold: within
    [-119, -110] dBm, or exactly the no-coverage value."""
    rssi = np.asarray(rssi_values, dtype=float)
    return ((rssi >= RX_SENSITIVITY_DBM) & (rssi <= FULL_SCALE_UPPER_DBM)) \
        | (rssi == NO_COVERAGE_DBM)


def _full_scale_accuracy(correct: np.ndarray, mask: np.ndarray) -> float:
    if not np.any(mask):
        raise EmptySubset("no sample lies in the near-sensitivity band")
    return 100.0 * float(np.mean(correct[mask]))


def compute_metrics(predictions, labels, rssi_values,
                    predicted_rss=None, regression_mask=None) -> EvaluationReport:
    """Assemble the report from aligned per-sample vectors.

    predictions/labels are +-1; rssi_values are the measured dBm.  When
    predicted_rss is given the RMSE is computed over regression_mask
    (defaulting to samples that are both covered and classified as covered).
    An empty near-sensitivity subset leaves the full-scale accuracy
    undefined rather than zero.
    """
    predictions = np.asarray(predictions, dtype=int)
    labels = np.asarray(labels, dtype=int)
    rssi = np.asarray(rssi_values, dtype=float)
    n = len(labels)
    if n == 0:
        raise ValueError("empty evaluation set")
    correct = predictions == labels
    accuracy = 100.0 * float(np.mean(correct))
    false_pos = 100.0 * float(np.sum((predictions == 1) & (labels == -1))) / n

    fs_mask = full_scale_mask(rssi)
    try:
        fs_accuracy = _full_scale_accuracy(correct, fs_mask)
    except EmptySubset:
        fs_accuracy = None

    rmse = None
    n_regression = 0
    if predicted_rss is not None:
        predicted_rss = np.asarray(predicted_rss, dtype=float)
        if regression_mask is None:
            regression_mask = (labels == 1) & (predictions == 1)
        else:
            regression_mask = np.asarray(regression_mask, dtype=bool)
        n_regression = int(np.sum(regression_mask))
        if n_regression:
            err = predicted_rss[regression_mask] - rssi[regression_mask]
            rmse = float(np.sqrt(np.mean(err * err)))

    return EvaluationReport(
        accuracy=accuracy,
        full_scale_accuracy=fs_accuracy,
        false_positive_pct=false_pos,
        rmse=rmse,
        n_test=n,
        n_full_scale=int(np.sum(fs_mask)),
        n_regression=n_regression,
    )


REPORT_HEADER = "| area | PM | A | RMSE | A_fs | P_fp |"
REPORT_RULE = "|---|---|---|---|---|---|"


def _cell(value: float | None) -> str:
    return "undefined" if value is None else f"{value:.2f}"


def render_report_row(area: str, pm: str, report: EvaluationReport) -> str:
    """One table row in the fixed column order: area, prediction mode,
    accuracy, RMSE, full-scale accuracy, false-positive percentage."""
    return (f"| {area} | {pm} | {_cell(report.accuracy)} "
            f"| {_cell(report.rmse)} | {_cell(report.full_scale_accuracy)} "
            f"| {_cell(report.false_positive_pct)} |")


def render_report_table(rows: list[tuple[str, str, EvaluationReport]]) -> str:
    lines = [REPORT_HEADER, REPORT_RULE]
    lines += [render_report_row(area, pm, rep) for area, pm, rep in rows]
    return "\n".join(lines) + "\n"
