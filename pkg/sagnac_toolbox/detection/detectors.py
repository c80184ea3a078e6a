"""
Gated single-photon detector model and the expected count rates it produces.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from sagnac_toolbox.constants import calibration as cal
from sagnac_toolbox.source.sagnac_source import SourceConfig, pair_rate
from sagnac_toolbox.utils.errors import InvalidArgumentError

NS = 1e-9


@dataclass(frozen=True)
class DetectorConfig:
    """Gated avalanche photodiode.

    Attributes:
        efficiency: Detection efficiency. 0 models a blocked detector.
        gate_window: Gate width in ns.
        dark_prob_per_gate: Dark count probability per gate.
        trigger_rate: Gate trigger rate in Hz.
        duty_cycle: Fraction of time the detector is live.
    """

    efficiency: float = cal.APD1_EFFICIENCY
    gate_window: float = cal.APD1_GATE_WINDOW
    dark_prob_per_gate: float = cal.APD1_DARK_PROB
    trigger_rate: float = cal.APD1_TRIGGER_RATE
    duty_cycle: float = cal.DUTY_CYCLE

    def __post_init__(self):
        if not 0.0 <= self.efficiency <= 1.0:
            raise InvalidArgumentError('efficiency',
                                       f'must lie in [0, 1], got {self.efficiency}')
        if not self.gate_window > 0:
            raise InvalidArgumentError('gate_window', f'must be > 0, got {self.gate_window}')
        if not 0.0 <= self.dark_prob_per_gate < 1.0:
            raise InvalidArgumentError('dark_prob_per_gate',
                                       f'must lie in [0, 1), got {self.dark_prob_per_gate}')
        if not self.trigger_rate >= 0:
            raise InvalidArgumentError('trigger_rate',
                                       f'must be >= 0, got {self.trigger_rate}')
        if not 0.0 < self.duty_cycle <= 1.0:
            raise InvalidArgumentError('duty_cycle',
                                       f'must lie in (0, 1], got {self.duty_cycle}')

    @classmethod
    def apd1(cls) -> 'DetectorConfig':
        return cls()

    @classmethod
    def apd2(cls) -> 'DetectorConfig':
        return cls(
            efficiency=cal.APD2_EFFICIENCY,
            gate_window=cal.APD2_GATE_WINDOW,
            dark_prob_per_gate=cal.APD2_DARK_PROB,
            trigger_rate=cal.APD2_TRIGGER_RATE,
            duty_cycle=cal.APD2_DUTY_CYCLE,
        )

    @property
    def dark_rate(self) -> float:
        """Dark counts per second."""
        return self.dark_prob_per_gate * self.trigger_rate


class ExpectedRates(NamedTuple):
    """Rates in counts per second."""

    singles_a: float
    singles_b: float
    true_coinc: float
    accidental_coinc: float

    @property
    def coincidences(self) -> float:
        return self.true_coinc + self.accidental_coinc


def coincidence_window(det_a: DetectorConfig, det_b: DetectorConfig) -> float:
    """Coincidence window in seconds, the wider of the two gates."""
    return max(det_a.gate_window, det_b.gate_window) * NS


def expected_rates(
    p_joint: float,
    source: SourceConfig,
    det_a: DetectorConfig,
    det_b: DetectorConfig,
    marginal_a: float = 0.5,
    marginal_b: float = 0.5,
) -> ExpectedRates:
    """Expected singles, true and accidental coincidence rates.

    Darks enter the singles and through them the accidentals, never the true
    coincidences. Coincidences need both detectors live, so the effective duty
    cycle is d_a * d_b.

    Args:
        p_joint: Probability a collected pair passes both analyzers.
        source: The source.
        det_a: Detector on arm a.
        det_b: Detector on arm b.
        marginal_a: Probability a photon passes the arm a analyzer.
        marginal_b: Probability a photon passes the arm b analyzer.

    Returns: The expected rates.
    """
    for name, value in (('p_joint', p_joint), ('marginal_a', marginal_a),
                        ('marginal_b', marginal_b)):
        if not 0.0 <= value <= 1.0:
            raise InvalidArgumentError(name, f'must lie in [0, 1], got {value}')
    rate = pair_rate(source)
    singles_a = rate * marginal_a * det_a.efficiency * det_a.duty_cycle + det_a.dark_rate
    singles_b = rate * marginal_b * det_b.efficiency * det_b.duty_cycle + det_b.dark_rate
    true_coinc = (rate * p_joint * det_a.efficiency * det_b.efficiency
                  * det_a.duty_cycle * det_b.duty_cycle)
    accidental = singles_a * singles_b * coincidence_window(det_a, det_b)
    return ExpectedRates(float(singles_a), float(singles_b), float(true_coinc),
                         float(accidental))
