"""
Parameterized model of the Sagnac down-conversion source: emitted state and
pair rate.
"""
from dataclasses import dataclass, fields

import numpy as np

from sagnac_toolbox.constants import basis, calibration as cal
from sagnac_toolbox.quantum.qstate import DensityMatrix, KetState, mix_with_white_noise
from sagnac_toolbox.utils.errors import InvalidArgumentError


@dataclass(frozen=True)
class SourceConfig:
    """Source parameters. Defaults are the measured calibration.

    Attributes:
        pump_power: Pump power in mW.
        pump_wavelength: Pump wavelength in nm.
        crystal_temperature: Crystal temperature in degrees C.
        theta: Relative Sagnac phase in radians.
        balance: Amplitude ratio r of the VH term to the HV term.
        noise_p: Weight of the pure component against white noise.
        pair_rate_coeff: Pairs/s/mW at the source, before collection losses.
        alpha1: Filter transmission.
        alpha2: Fiber coupling efficiency.
        coherence_length: Two-photon coherence length in mm.
    """

    pump_power: float = cal.PUMP_POWER
    pump_wavelength: float = cal.PUMP_WAVELENGTH
    crystal_temperature: float = cal.CRYSTAL_TEMPERATURE
    theta: float = 0.0
    balance: float = cal.BALANCE
    noise_p: float = cal.NOISE_P
    pair_rate_coeff: float = cal.PAIR_RATE_COEFF
    alpha1: float = cal.ALPHA1
    alpha2: float = cal.ALPHA2
    coherence_length: float = cal.COHERENCE_LENGTH

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not np.isfinite(value):
                raise InvalidArgumentError(f.name, f'must be finite, got {value}')
        # Zero power is allowed here so rates can be evaluated at the origin;
        # experiment configs demand a strictly positive power.
        if self.pump_power < 0:
            raise InvalidArgumentError('pump_power', f'must be >= 0, got {self.pump_power}')
        if self.pump_wavelength <= 0:
            raise InvalidArgumentError('pump_wavelength',
                                       f'must be > 0, got {self.pump_wavelength}')
        if not 0.0 <= self.noise_p <= 1.0:
            raise InvalidArgumentError('noise_p', f'must lie in [0, 1], got {self.noise_p}')
        if self.balance < 0:
            raise InvalidArgumentError('balance', f'must be >= 0, got {self.balance}')
        if self.pair_rate_coeff < 0:
            raise InvalidArgumentError('pair_rate_coeff',
                                       f'must be >= 0, got {self.pair_rate_coeff}')
        if self.coherence_length <= 0:
            raise InvalidArgumentError('coherence_length',
                                       f'must be > 0, got {self.coherence_length}')
        for name in ('alpha1', 'alpha2'):
            value = getattr(self, name)
            if not 0.0 < value <= 1.0:
                raise InvalidArgumentError(name, f'must lie in (0, 1], got {value}')

    @property
    def collection_efficiency(self) -> float:
        """Pair collection efficiency (alpha1 alpha2)^2."""
        return (self.alpha1 * self.alpha2) ** 2


def output_ket(config: SourceConfig) -> KetState:
    """(|HV> + r e^{i theta} |VH>) / sqrt(1 + r^2)."""
    amps = np.zeros(4, dtype=complex)
    amps[basis.HV] = 1.0
    amps[basis.VH] = config.balance * np.exp(1j * config.theta)
    return KetState(amps)


def output_state(config: SourceConfig) -> DensityMatrix:
    """Emitted two-photon polarization state, white noise included."""
    return mix_with_white_noise(output_ket(config), config.noise_p)


def pair_rate(config: SourceConfig) -> float:
    """Pairs/s reaching the fiber outputs, linear in pump power."""
    return config.pair_rate_coeff * config.pump_power * config.collection_efficiency


def idler_wavelength(pump_wavelength: float, signal_wavelength: float) -> float:
    """Idler wavelength in nm from energy conservation."""
    if pump_wavelength <= 0 or signal_wavelength <= 0:
        raise InvalidArgumentError('wavelength', 'wavelengths must be > 0')
    inverse = 1.0 / pump_wavelength - 1.0 / signal_wavelength
    if inverse <= 0:
        raise InvalidArgumentError('signal_wavelength',
                                   f'{signal_wavelength} nm must be longer than the pump '
                                   f'at {pump_wavelength} nm')
    return 1.0 / inverse


def degenerate_pump_wavelength(signal_wavelength: float) -> float:
    """Pump wavelength making signal and idler degenerate."""
    return signal_wavelength / 2.0
