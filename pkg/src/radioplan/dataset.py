"""Measurement logs, class labels and the train/test split machinery.

Measurement log layout (UTF-8 CSV with a header row, exactly this column
order; extra trailing columns are ignored with a warning):

    timestamp,lat,lon,alt_m,speed_mps,heading_deg,satellites,meter_address,rssi_dbm

A receiver either reports an RSSI at or above its sensitivity (-119 dBm) or
the conventional no-coverage value of exactly -120 dBm; readings strictly
between the two cannot occur and are rejected as input errors rather than
silently clamped.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InsufficientData, ParseError, RangeError
from .features import FeatureVector
from .geodata import GeoPoint

#: Receiver sensitivity threshold (dBm): coverage means rssi >= this.
RX_SENSITIVITY_DBM = -119.0

#: Conventional value recorded where the signal is not received at all.
NO_COVERAGE_DBM = -120.0

EXPECTED_COLUMNS = [
    "timestamp", "lat", "lon", "alt_m", "speed_mps", "heading_deg",
    "satellites", "meter_address", "rssi_dbm",
]

#: A warning is emitted when the covered fraction leaves this band, since
#: heavily unbalanced classes degrade the classifier.
BALANCE_BAND = (0.3, 0.7)


@dataclass(frozen=True)
class Measurement:
    timestamp: str
    position: GeoPoint
    speed: float
    heading: float
    satellite_count: int
    meter_address: str
    rssi: float

    def __post_init__(self):
        _check_rssi(self.rssi)
        if self.satellite_count < 0:
            raise RangeError("satellite_count must be >= 0")


def _check_rssi(rssi: float) -> None:
    if rssi == NO_COVERAGE_DBM or rssi >= RX_SENSITIVITY_DBM:
        return
    raise RangeError(
        f"rssi {rssi} dBm is not reportable: expected exactly "
        f"{NO_COVERAGE_DBM:g} or >= {RX_SENSITIVITY_DBM:g}")


def coverage_label(rssi: float) -> int:
    """+1 when the signal was received (coverage), -1 otherwise."""
    _check_rssi(rssi)
    return 1 if rssi >= RX_SENSITIVITY_DBM else -1


@dataclass(frozen=True)
class LabeledSample:
    features: FeatureVector
    rssi: float
    label: int
    source_area: str

    def __post_init__(self):
        if self.label != coverage_label(self.rssi):
            raise ValueError("label contradicts the rssi threshold rule")


def label(measurement: Measurement, features: FeatureVector,
          area: str) -> LabeledSample:
    return LabeledSample(
        features=features,
        rssi=measurement.rssi,
        label=coverage_label(measurement.rssi),
        source_area=area,
    )


@dataclass(frozen=True)
class SplitDataset:
    """Classification train/test sets plus the regression subsets derived by
    dropping no-coverage samples (with index renumbering implied by order)."""

    train_cls: tuple[LabeledSample, ...]
    test_cls: tuple[LabeledSample, ...]
    train_reg: tuple[LabeledSample, ...]
    test_reg: tuple[LabeledSample, ...]
    seed: int


def load_measurements(path) -> list[Measurement]:
    """Parse and validate a measurement log."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: {exc}") from exc
    return parse_measurements(text, source=str(path))


def parse_measurements(text: str, source: str = "<memory>") -> list[Measurement]:
    rows = list(csv.reader(text.splitlines()))
    if not rows:
        return []
    header = [c.strip() for c in rows[0]]
    if header[:len(EXPECTED_COLUMNS)] != EXPECTED_COLUMNS:
        raise ParseError(
            f"{source}: header must start with {','.join(EXPECTED_COLUMNS)}")
    if len(header) > len(EXPECTED_COLUMNS):
        extra = header[len(EXPECTED_COLUMNS):]
        warnings.warn(f"{source}: ignoring extra columns {extra}")

    out = []
    for lineno, row in enumerate(rows[1:], start=2):
        if not row or all(not c.strip() for c in row):
            continue
        if len(row) < len(EXPECTED_COLUMNS):
            raise ParseError(f"{source}:{lineno}: expected "
                             f"{len(EXPECTED_COLUMNS)} columns, got {len(row)}")
        try:
            lat = float(row[1])
            lon = float(row[2])
            alt = float(row[3]) if row[3].strip() else None
            speed = float(row[4])
            heading = float(row[5])
            sats = int(row[6])
            rssi = float(row[8])
        except ValueError as exc:
            raise ParseError(f"{source}:{lineno}: {exc}") from exc
        try:
            out.append(Measurement(
                timestamp=row[0].strip(),
                position=GeoPoint(latitude=lat, longitude=lon, altitude=alt),
                speed=speed,
                heading=heading,
                satellite_count=sats,
                meter_address=row[7].strip(),
                rssi=rssi,
            ))
        except (RangeError, ValueError) as exc:
            raise type(exc)(f"{source}:{lineno}: {exc}") from exc
    return out


def permute_and_split(samples, seed: int,
                      train_fraction: float = 0.8) -> SplitDataset:
    """Pseudorandom permutation followed by the train/test cut.

    The training set takes round(train_fraction * N) samples, rounding halves
    up.  Regression sets are the same splits with all no-coverage samples
    removed.
    """
    samples = list(samples)
    n = len(samples)
    if n < 5:
        raise InsufficientData(f"need at least 5 samples, got {n}")
    order = np.random.default_rng(seed).permutation(n)
    shuffled = [samples[i] for i in order]
    n_train = int(np.floor(train_fraction * n + 0.5))
    train_cls = tuple(shuffled[:n_train])
    test_cls = tuple(shuffled[n_train:])

    covered = sum(1 for s in samples if s.label == 1)
    fraction = covered / n
    if not BALANCE_BAND[0] <= fraction <= BALANCE_BAND[1]:
        warnings.warn(
            f"covered fraction {fraction:.2f} outside {BALANCE_BAND}; "
            "consider balancing the measurement campaign")

    return SplitDataset(
        train_cls=train_cls,
        test_cls=test_cls,
        train_reg=tuple(s for s in train_cls if s.label == 1),
        test_reg=tuple(s for s in test_cls if s.label == 1),
        seed=seed,
    )


def filter_test_by_decision(test_reg, decide) -> list[LabeledSample]:
    """Keep only the samples the trained classifier assigns to the coverage
    area; used to make blind regression scoring fair."""
    return [s for s in test_reg if decide(s.features) == 1]


def partition_by_area(samples, areas) -> tuple[list[LabeledSample], list[LabeledSample]]:
    """(matching, rest) split by source_area membership."""
    areas = set(areas)
    inside = [s for s in samples if s.source_area in areas]
    outside = [s for s in samples if s.source_area not in areas]
    return inside, outside


def feature_matrix(samples) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(features, labels, rssi) arrays for a list of samples."""
    x = np.asarray([s.features.values for s in samples], dtype=float)
    z = np.asarray([s.label for s in samples], dtype=float)
    m = np.asarray([s.rssi for s in samples], dtype=float)
    return x, z, m
