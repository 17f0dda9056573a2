"""Concentrators and the link-budget constants."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from ..features import Antenna

#: The four selectable radio output levels, dBm.
TX_POWER_LEVELS = (21.0, 24.0, 27.0, 30.0)

#: Receiver sensitivity threshold, dBm.
DEFAULT_SENSITIVITY = -119.0


@dataclass(frozen=True)
class Concentrator:
    """A data-collector transmitter of the star network."""

    antenna: Antenna
    tx_power: float
    label: str

    def __post_init__(self):
        if float(self.tx_power) not in TX_POWER_LEVELS:
            raise ValueError(
                f"tx_power {self.tx_power} dBm is not one of {TX_POWER_LEVELS}")


@dataclass(frozen=True)
class LinkBudget:
    """Gains, sensitivity and the power level the training data were
    acquired at.

    Predictions made for a different transmit power are shifted by the dB
    delta against reference_tx_power; training at the lowest level makes the
    unshifted coverage the worst case.
    """

    tx_gain: float = 0.0
    rx_gain: float = 0.0
    sensitivity: float = DEFAULT_SENSITIVITY
    reference_tx_power: float = 21.0

    def __post_init__(self):
        if self.sensitivity != DEFAULT_SENSITIVITY:
            warnings.warn(
                f"receiver sensitivity overridden to {self.sensitivity} dBm "
                f"(hardware default is {DEFAULT_SENSITIVITY})")

    def power_adjustment(self, tx_power: float) -> float:
        """dB shift applied to predictions for a transmitter at tx_power."""
        return float(tx_power) - self.reference_tx_power
