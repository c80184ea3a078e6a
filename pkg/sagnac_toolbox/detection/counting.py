"""
Monte Carlo coincidence counting on top of the expected rates.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.stats import norm, poisson

from sagnac_toolbox.detection.detectors import DetectorConfig, expected_rates
from sagnac_toolbox.quantum.polarization_optics import (
    AnalyzerSetting, joint_probability, single_probability
)
from sagnac_toolbox.quantum.qstate import DensityMatrix
from sagnac_toolbox.source.sagnac_source import SourceConfig
from sagnac_toolbox.utils.errors import InvalidArgumentError

# Above this mean a Poisson draw is replaced by its normal approximation.
NORMAL_APPROX_THRESHOLD = 1e6


@dataclass(frozen=True)
class CountRecord:
    """One accumulation of singles and coincidences.

    Attributes:
        setting_a: Analyzer on arm a, None when there is no analyzer (HOM).
        setting_b: Analyzer on arm b, None when there is no analyzer (HOM).
        duration: Accumulation time in s.
        singles_a: Counts on arm a.
        singles_b: Counts on arm b.
        coincidences: Coincidence counts.
        rng_seed: Seed the record was drawn with.
        gap_position: Air gap position in mm for HOM scans.
    """

    setting_a: Optional[AnalyzerSetting]
    setting_b: Optional[AnalyzerSetting]
    duration: float
    singles_a: float
    singles_b: float
    coincidences: float
    rng_seed: int = 0
    gap_position: Optional[float] = None

    def __post_init__(self):
        if self.duration < 0:
            raise InvalidArgumentError('duration', f'must be >= 0, got {self.duration}')
        for name in ('singles_a', 'singles_b', 'coincidences'):
            if getattr(self, name) < 0:
                raise InvalidArgumentError(name, f'must be >= 0, got {getattr(self, name)}')
        if self.coincidences > min(self.singles_a, self.singles_b):
            raise InvalidArgumentError('coincidences',
                                       f'{self.coincidences} exceeds the singles '
                                       f'({self.singles_a}, {self.singles_b})')


def poisson_draw(means: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Poisson samples by inverse CDF, one uniform per sample.

    Means above NORMAL_APPROX_THRESHOLD use the normal approximation, rounded
    and clipped at zero.

    Args:
        means: Non-negative means.
        rng: Generator supplying the uniforms.

    Returns: Integer-valued float array of samples.
    """
    means = np.asarray(means, dtype=float)
    if np.any(means < 0):
        raise InvalidArgumentError('means', 'Poisson means must be >= 0')
    uniforms = rng.random(means.shape)
    safe = np.where(means > 0, means, 1.0)
    small = poisson.ppf(uniforms, safe)
    large = np.rint(norm.ppf(uniforms, loc=safe, scale=np.sqrt(safe)))
    draws = np.where(means > NORMAL_APPROX_THRESHOLD, large, small)
    draws = np.where(means > 0, draws, 0.0)
    return np.maximum(draws, 0.0)


def simulate_counts(
    p_joint: float,
    source: SourceConfig,
    det_a: DetectorConfig,
    det_b: DetectorConfig,
    duration: float,
    seed: int,
    setting_a: Optional[AnalyzerSetting] = None,
    setting_b: Optional[AnalyzerSetting] = None,
    marginal_a: float = 0.5,
    marginal_b: float = 0.5,
    gap_position: Optional[float] = None,
) -> CountRecord:
    """Draw one CountRecord, deterministic given the seed.

    Coincidences are Poisson(true) + Poisson(accidental), clamped to the
    smaller of the two singles.

    Args:
        p_joint: Probability a collected pair passes both analyzers.
        source: The source.
        det_a: Detector on arm a.
        det_b: Detector on arm b.
        duration: Accumulation time in s.
        seed: Seed of the record.
        setting_a: Analyzer on arm a, stored in the record.
        setting_b: Analyzer on arm b, stored in the record.
        marginal_a: Single-arm transmission probability on a.
        marginal_b: Single-arm transmission probability on b.
        gap_position: HOM gap position, stored in the record.

    Returns: The drawn record.
    """
    if duration < 0:
        raise InvalidArgumentError('duration', f'must be >= 0, got {duration}')
    rates = expected_rates(p_joint, source, det_a, det_b, marginal_a, marginal_b)
    rng = np.random.default_rng(seed)
    singles_a, singles_b, true_coinc, accidental = poisson_draw(
        duration * np.array([rates.singles_a, rates.singles_b,
                             rates.true_coinc, rates.accidental_coinc]),
        rng,
    )
    coincidences = min(true_coinc + accidental, singles_a, singles_b)
    return CountRecord(
        setting_a=setting_a,
        setting_b=setting_b,
        duration=float(duration),
        singles_a=float(singles_a),
        singles_b=float(singles_b),
        coincidences=float(coincidences),
        rng_seed=int(seed),
        gap_position=gap_position,
    )


def expected_record(
    rho: DensityMatrix,
    setting_a: AnalyzerSetting,
    setting_b: AnalyzerSetting,
    scale: float,
    duration: float = 1.0,
) -> CountRecord:
    """Noiseless record with counts proportional to exact probabilities.

    Args:
        rho: The density matrix.
        setting_a: Analyzer on arm a.
        setting_b: Analyzer on arm b.
        scale: Counts per unit probability.
        duration: Duration stamped on the record.

    Returns: The record.
    """
    coincidences = scale * joint_probability(rho, setting_a, setting_b)
    return CountRecord(
        setting_a=setting_a,
        setting_b=setting_b,
        duration=duration,
        singles_a=max(scale * single_probability(rho, setting_a, 'a'), coincidences),
        singles_b=max(scale * single_probability(rho, setting_b, 'b'), coincidences),
        coincidences=coincidences,
    )
