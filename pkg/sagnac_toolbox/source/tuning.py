"""
Temperature tuning of the degenerate signal wavelength, interpolated from
calibration points.
"""
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
from scipy.interpolate import interp1d

from sagnac_toolbox.constants import calibration as cal
from sagnac_toolbox.utils.errors import InvalidArgumentError, OutOfRangeError

# How far past the calibrated range we are willing to extrapolate, in C.
EXTRAPOLATION_MARGIN = 5.0


@dataclass(frozen=True)
class TuningCurve:
    """Ordered (temperature C, signal wavelength nm) calibration points."""

    points: Tuple[Tuple[float, float], ...] = cal.TUNING_TABLE

    def __post_init__(self):
        points = tuple((float(t), float(w)) for t, w in self.points)
        if len(points) < 2:
            raise InvalidArgumentError('points', 'need at least 2 calibration points')
        diffs = np.diff([t for t, _ in points])
        if not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise InvalidArgumentError('points', 'temperatures must be strictly monotonic')
        object.__setattr__(self, 'points', points)

    @classmethod
    def from_lists(
        cls,
        temperatures: Sequence[float],
        wavelengths: Sequence[float],
    ) -> 'TuningCurve':
        if len(temperatures) != len(wavelengths):
            raise InvalidArgumentError('wavelengths',
                                       'need one wavelength per temperature')
        return cls(tuple(zip(temperatures, wavelengths)))

    @property
    def temperatures(self) -> np.ndarray:
        return np.array([t for t, _ in self.points])

    @property
    def wavelengths(self) -> np.ndarray:
        return np.array([w for _, w in self.points])


def degenerate_temperature_lookup(curve: TuningCurve, temperature: float) -> float:
    """Signal wavelength at a crystal temperature.

    Piecewise linear between calibration points, linear extrapolation up to
    EXTRAPOLATION_MARGIN past either end. Calibration points are returned
    verbatim.

    Args:
        curve: The calibration curve.
        temperature: Crystal temperature in C.

    Returns: Signal wavelength in nm.
    """
    temps, wls = curve.temperatures, curve.wavelengths
    low, high = temps.min() - EXTRAPOLATION_MARGIN, temps.max() + EXTRAPOLATION_MARGIN
    if not low <= temperature <= high:
        raise OutOfRangeError(f'Temperature {temperature} C is outside the '
                              f'calibrated range [{low}, {high}] C.')
    hits = np.flatnonzero(temps == temperature)
    if hits.size:
        return float(wls[hits[0]])
    interpolator = interp1d(temps, wls, kind='linear', fill_value='extrapolate',
                            assume_sorted=False)
    return float(interpolator(temperature))
