"""
Spectral relations and the triangular HOM dip.
"""
from typing import Union

import numpy as np

from sagnac_toolbox.utils.errors import InvalidArgumentError

ArrayLike = Union[float, np.ndarray]

# Shape factor relating bandwidth and coherence length.
BANDWIDTH_FACTOR = 1.39
NM_PER_MM = 1e6


def bandwidth_from_coherence_length(l_c: float, wavelength: float) -> float:
    """Delta lambda = 1.39 lambda^2 / (pi l_c).

    Args:
        l_c: Coherence length in mm.
        wavelength: Central wavelength in nm.

    Returns: Bandwidth in nm.
    """
    if l_c <= 0 or wavelength <= 0:
        raise InvalidArgumentError('l_c' if l_c <= 0 else 'wavelength',
                                   'coherence length and wavelength must be > 0')
    return BANDWIDTH_FACTOR * wavelength ** 2 / (np.pi * l_c * NM_PER_MM)


def coherence_length_from_bandwidth(dlambda: float, wavelength: float) -> float:
    """Inverse of bandwidth_from_coherence_length, returns mm."""
    if dlambda <= 0 or wavelength <= 0:
        raise InvalidArgumentError('dlambda' if dlambda <= 0 else 'wavelength',
                                   'bandwidth and wavelength must be > 0')
    return BANDWIDTH_FACTOR * wavelength ** 2 / (np.pi * dlambda * NM_PER_MM)


def triangle(x: ArrayLike, center: float, half_width: float) -> ArrayLike:
    """Unit triangle max(0, 1 - |x - center| / half_width)."""
    return np.maximum(0.0, 1.0 - np.abs(np.asarray(x, dtype=float) - center) / half_width)


def hom_coincidence_curve(
    gap_position: ArrayLike,
    center: float,
    l_c: float,
    visibility: float,
    baseline: float,
) -> ArrayLike:
    """Expected coincidences across a triangular HOM dip of half-width l_c.

    Args:
        gap_position: Air gap position(s) in mm.
        center: Dip center in mm.
        l_c: Coherence length (dip half-width) in mm.
        visibility: (C_max - C_min) / C_max of the dip.
        baseline: Coincidences far from the dip.

    Returns: Expected counts at each position.
    """
    if l_c <= 0:
        raise InvalidArgumentError('l_c', f'must be > 0, got {l_c}')
    if not 0.0 <= visibility <= 1.0:
        raise InvalidArgumentError('visibility', f'must lie in [0, 1], got {visibility}')
    if baseline < 0:
        raise InvalidArgumentError('baseline', f'must be >= 0, got {baseline}')
    curve = baseline * (1.0 - visibility * triangle(gap_position, center, l_c))
    return float(curve) if np.ndim(curve) == 0 else curve


def hom_joint_probability(
    gap_position: float,
    center: float,
    l_c: float,
    visibility: float,
) -> float:
    """Coincidence probability per collected pair behind the beam splitter.

    Distinguishable photons split into both outputs half the time.
    """
    return float(0.5 * (1.0 - visibility * triangle(gap_position, center, l_c)))
