"""
Spectral brightness in pairs per (s mW nm).
"""
from sagnac_toolbox.utils.errors import InvalidArgumentError


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not value > 0:
            raise InvalidArgumentError(name, f'must be > 0, got {value}')


def brightness_detected(coincidence_rate: float, pump_power: float, bandwidth: float) -> float:
    """2 Nc / (P dlambda), counting both photons of each pair.

    Args:
        coincidence_rate: Detected coincidences per second, >= 0.
        pump_power: Pump power in mW.
        bandwidth: Photon bandwidth in nm.

    Returns: The detected brightness.
    """
    if coincidence_rate < 0:
        raise InvalidArgumentError('coincidence_rate', f'must be >= 0, got {coincidence_rate}')
    _require_positive(pump_power=pump_power, bandwidth=bandwidth)
    return 2 * coincidence_rate / (pump_power * bandwidth)


def brightness_inferred(
    coincidence_rate: float,
    alpha1: float,
    alpha2: float,
    duty_cycle: float,
    eta1: float,
    eta2: float,
    pump_power: float,
    bandwidth: float,
) -> float:
    """Detected brightness with every loss backed out.

    2 Nc / (alpha1^2 alpha2^2 d eta1 eta2 P dlambda), where alpha1 and alpha2
    are the per-photon collection and fiber coupling transmissions, d the
    detector duty cycle and eta1, eta2 the detector efficiencies.
    """
    _require_positive(alpha1=alpha1, alpha2=alpha2, duty_cycle=duty_cycle,
                      eta1=eta1, eta2=eta2)
    losses = alpha1 ** 2 * alpha2 ** 2 * duty_cycle * eta1 * eta2
    return brightness_detected(coincidence_rate, pump_power, bandwidth) / losses
