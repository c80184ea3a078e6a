"""
Jones-calculus model of the polarization analyzers.

Each arm is analyzed by an optional quarter-wave plate, a half-wave plate and
a horizontally transmitting polarizer, in that order along the beam. A chain
with HWP angle h and no QWP transmits linear polarization at 2h.
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from sagnac_toolbox.constants import basis
from sagnac_toolbox.quantum.qstate import DensityMatrix, check_physical
from sagnac_toolbox.utils.errors import InvalidArgumentError


@dataclass(frozen=True)
class AnalyzerSetting:
    """Waveplate angles in degrees, stored modulo 180."""

    hwp_angle: float
    qwp_angle: Optional[float] = None

    def __post_init__(self):
        for name in ('hwp_angle', 'qwp_angle'):
            value = getattr(self, name)
            if value is None:
                continue
            if not np.isfinite(value):
                raise InvalidArgumentError(name, f'must be finite, got {value}')
            object.__setattr__(self, name, float(value) % 180.0)

    @classmethod
    def linear(cls, polarization_angle: float) -> 'AnalyzerSetting':
        """HWP-only setting analyzing linear polarization at the given angle."""
        return cls(hwp_angle=polarization_angle / 2)

    def key(self, decimals: int = 6) -> Tuple[float, Optional[float]]:
        """Rounded hashable key used to match records against setting tables."""
        qwp = None if self.qwp_angle is None else round(self.qwp_angle, decimals) % 180.0
        return round(self.hwp_angle, decimals) % 180.0, qwp


@dataclass(frozen=True, eq=False)
class Projector2:
    """Rank-1 single-arm projector |phi><phi|."""

    state: np.ndarray

    @property
    def matrix(self) -> np.ndarray:
        return np.outer(self.state, self.state.conj())


def _rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]], dtype=complex)


def hwp_jones(theta: float) -> np.ndarray:
    """Half-wave plate with fast axis at theta degrees.

    [[cos 2t, sin 2t], [sin 2t, -cos 2t]]
    """
    two_t = np.deg2rad(2 * theta)
    return np.array([[np.cos(two_t), np.sin(two_t)],
                     [np.sin(two_t), -np.cos(two_t)]], dtype=complex)


def qwp_jones(theta: float) -> np.ndarray:
    """Quarter-wave plate with fast axis at theta degrees.

    Global phase is fixed to e^{-i pi/4} so that qwp_jones(0) = e^{-i pi/4} diag(1, i).
    """
    t = np.deg2rad(theta)
    retarder = np.diag([1.0, 1.0j])
    return np.exp(-1j * np.pi / 4) * (_rotation(-t) @ retarder @ _rotation(t))


def analyzer_unitary(setting: AnalyzerSetting) -> np.ndarray:
    """Waveplate part of the chain, QWP first then HWP."""
    unitary = hwp_jones(setting.hwp_angle)
    if setting.qwp_angle is not None:
        unitary = unitary @ qwp_jones(setting.qwp_angle)
    return unitary


def analyzer_projector(setting: AnalyzerSetting) -> Projector2:
    """Projector onto the polarization transmitted by the whole chain.

    The polarizer passes H after the waveplates, so the analyzed state is
    U^dagger |H> with U the waveplate unitary.
    """
    state = analyzer_unitary(setting).conj().T @ basis.H_KET
    return Projector2(state / np.linalg.norm(state))


def orthogonal_setting(setting: AnalyzerSetting) -> AnalyzerSetting:
    """The setting projecting onto the orthogonal complement (HWP + 45)."""
    return AnalyzerSetting(setting.hwp_angle + 45.0, setting.qwp_angle)


def measurement_operator(a: AnalyzerSetting, b: AnalyzerSetting) -> np.ndarray:
    """Two-arm operator Pi_a (x) Pi_b over (HH, HV, VH, VV)."""
    return np.kron(analyzer_projector(a).matrix, analyzer_projector(b).matrix)


def joint_probability(
    rho: DensityMatrix,
    a: AnalyzerSetting,
    b: AnalyzerSetting,
) -> float:
    """Coincidence probability Tr(rho Pi_a (x) Pi_b).

    Args:
        rho: A physical density matrix.
        a: Setting on arm a (first qubit).
        b: Setting on arm b (second qubit).

    Returns: Probability in [0, 1].
    """
    check_physical(rho)
    prob = np.real(np.trace(rho.matrix @ measurement_operator(a, b)))
    return float(np.clip(prob, 0.0, 1.0))


def single_probability(rho: DensityMatrix, setting: AnalyzerSetting, arm: str) -> float:
    """Marginal transmission probability on one arm.

    Args:
        rho: A physical density matrix.
        setting: The analyzer on that arm.
        arm: 'a' or 'b'.

    Returns: Probability in [0, 1].
    """
    check_physical(rho)
    proj = analyzer_projector(setting).matrix
    if arm == 'a':
        op = np.kron(proj, np.eye(2))
    elif arm == 'b':
        op = np.kron(np.eye(2), proj)
    else:
        raise InvalidArgumentError('arm', f"must be 'a' or 'b', got {arm}")
    return float(np.clip(np.real(np.trace(rho.matrix @ op)), 0.0, 1.0))


# Single-arm tomography states as (QWP, HWP) angles in degrees:
#   H: QWP 0,  HWP 0      V: QWP 0,  HWP 45
#   D: QWP 45, HWP 22.5   R: QWP 45, HWP 0      with R = (H + iV)/sqrt(2)
TOMOGRAPHY_STATES: Dict[str, AnalyzerSetting] = {
    'H': AnalyzerSetting(hwp_angle=0.0, qwp_angle=0.0),
    'V': AnalyzerSetting(hwp_angle=45.0, qwp_angle=0.0),
    'D': AnalyzerSetting(hwp_angle=22.5, qwp_angle=45.0),
    'R': AnalyzerSetting(hwp_angle=0.0, qwp_angle=45.0),
}


def tomography_settings() -> List[Tuple[str, AnalyzerSetting, AnalyzerSetting]]:
    """The 16 settings {H, V, D, R} x {H, V, D, R} as (label, arm a, arm b)."""
    return [(la + lb, TOMOGRAPHY_STATES[la], TOMOGRAPHY_STATES[lb])
            for la in 'HVDR' for lb in 'HVDR']
