"""
Two-qubit state algebra: kets, density matrices, Bell states, white-noise
mixing and the fidelity/purity metrics.

All matrices are over the ordered basis of sagnac_toolbox.constants.basis.
"""
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

from sagnac_toolbox.constants import basis
from sagnac_toolbox.utils.errors import InvalidArgumentError, InvalidStateError


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class KetState:
    """Normalized pure state with 4 complex amplitudes over (HH, HV, VH, VV)."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (4,):
            raise InvalidArgumentError('amplitudes',
                                       f'expected 4 amplitudes, got {amps.shape}')
        if not np.all(np.isfinite(amps)):
            raise InvalidArgumentError('amplitudes', 'amplitudes must be finite')
        norm = np.linalg.norm(amps)
        if norm == 0:
            raise InvalidArgumentError('amplitudes', 'cannot normalize a zero vector')
        object.__setattr__(self, 'amplitudes', _frozen(amps / norm))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A 4x4 two-qubit density matrix. Physicality is checked by is_physical."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        if mat.shape != (4, 4):
            raise InvalidArgumentError('matrix', f'expected shape (4, 4), got {mat.shape}')
        object.__setattr__(self, 'matrix', _frozen(mat))

    def __add__(self, other: 'DensityMatrix') -> 'DensityMatrix':
        return DensityMatrix(self.matrix + other.matrix)

    def __mul__(self, scalar: float) -> 'DensityMatrix':
        return DensityMatrix(self.matrix * scalar)

    __rmul__ = __mul__


@dataclass(frozen=True)
class PhysicalityReport:
    """Outcome of is_physical. Truthy only when every check passed."""

    hermitian_deviation: float
    trace: float
    min_eigenvalue: float
    failed: Tuple[str, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return len(self.failed) == 0

    def __bool__(self) -> bool:
        return self.ok


def bell_state(theta: float) -> KetState:
    """The Sagnac output state (|HV> + e^{i theta}|VH>) / sqrt(2).

    Args:
        theta: Relative phase in radians.

    Returns: The normalized ket.
    """
    if not np.isfinite(theta):
        raise InvalidArgumentError('theta', f'must be finite, got {theta}')
    amps = np.zeros(4, dtype=complex)
    amps[basis.HV] = 1.0
    amps[basis.VH] = np.exp(1j * theta)
    return KetState(amps / np.sqrt(2))


def phi_plus() -> KetState:
    return bell_state(0.0)


def maximally_mixed() -> DensityMatrix:
    return DensityMatrix(np.eye(4) / 4)


def pure_density(psi: KetState) -> DensityMatrix:
    """Outer product |psi><psi|."""
    return DensityMatrix(np.outer(psi.amplitudes, psi.amplitudes.conj()))


def mix_with_white_noise(psi: KetState, p: float) -> DensityMatrix:
    """Werner-like state p |psi><psi| + (1 - p) I / 4.

    Args:
        psi: The pure component.
        p: Weight of the pure component in [0, 1].

    Returns: The mixed density matrix.
    """
    if not 0.0 <= p <= 1.0:
        raise InvalidArgumentError('p', f'must lie in [0, 1], got {p}')
    return DensityMatrix(p * pure_density(psi).matrix + (1 - p) * np.eye(4) / 4)


def is_physical(rho: DensityMatrix) -> PhysicalityReport:
    """Check hermiticity, unit trace and positive semidefiniteness.

    Returns: Report listing which of 'hermitian', 'trace', 'psd' failed.
    """
    mat = rho.matrix
    herm_dev = float(np.max(np.abs(mat - mat.conj().T)))
    trace = float(np.real(np.trace(mat)))
    min_eig = float(np.min(np.linalg.eigvalsh((mat + mat.conj().T) / 2)))
    failed = []
    if herm_dev > basis.HERMITIAN_TOL:
        failed.append('hermitian')
    if abs(trace - 1) > basis.TRACE_TOL or abs(np.imag(np.trace(mat))) > basis.TRACE_TOL:
        failed.append('trace')
    if min_eig < -basis.PSD_SLACK:
        failed.append('psd')
    return PhysicalityReport(herm_dev, trace, min_eig, tuple(failed))


def check_physical(rho: DensityMatrix) -> None:
    """Raise InvalidStateError if rho fails any physicality check."""
    report = is_physical(rho)
    if not report.ok:
        raise InvalidStateError(report.failed)


def sanitize(rho: DensityMatrix) -> DensityMatrix:
    """Symmetrize, clip eigenvalues within the PSD slack to 0 and renormalize.

    Eigenvalues below -PSD_SLACK are left alone so that is_physical still
    reports them.
    """
    mat = (rho.matrix + rho.matrix.conj().T) / 2
    vals, vecs = np.linalg.eigh(mat)
    jitter = (vals < 0) & (vals >= -basis.PSD_SLACK)
    vals = np.where(jitter, 0.0, vals)
    mat = (vecs * vals) @ vecs.conj().T
    return DensityMatrix(mat / np.real(np.trace(mat)))


def fidelity(rho: DensityMatrix, psi: KetState) -> float:
    """Fidelity <psi|rho|psi> of a density matrix to a pure target.

    Args:
        rho: A physical density matrix.
        psi: The target state.

    Returns: Fidelity clamped to [0, 1].
    """
    check_physical(rho)
    value = np.vdot(psi.amplitudes, rho.matrix @ psi.amplitudes)
    return float(np.clip(np.real(value), 0.0, 1.0))


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2)."""
    return float(np.real(np.trace(rho.matrix @ rho.matrix)))


def diagonal_visibility(rho: DensityMatrix) -> float:
    """Correlation contrast in the 45 degree basis.

    (C(D, D) - C(D, A)) / (C(D, D) + C(D, A)) from exact probabilities. For
    output states this equals noise_p * 2 r cos(theta) / (1 + r^2).
    """
    check_physical(rho)
    dd = np.kron(basis.D_KET, basis.D_KET)
    da = np.kron(basis.D_KET, basis.A_KET)
    c_dd = np.real(np.vdot(dd, rho.matrix @ dd))
    c_da = np.real(np.vdot(da, rho.matrix @ da))
    total = c_dd + c_da
    if total <= 0:
        return 0.0
    return float((c_dd - c_da) / total)


def density_to_report(rho: DensityMatrix) -> Dict[str, List]:
    """Serialize to {'basis': [...], 're': 4x4, 'im': 4x4}."""
    return {
        'basis': list(basis.BASIS_LABELS),
        're': [[float(v) for v in row] for row in np.real(rho.matrix)],
        'im': [[float(v) for v in row] for row in np.imag(rho.matrix)],
    }


def density_from_report(report: Dict[str, List]) -> DensityMatrix:
    """Inverse of density_to_report."""
    if tuple(report.get('basis', ())) != basis.BASIS_LABELS:
        raise InvalidArgumentError('basis', f'expected {basis.BASIS_LABELS}, '
                                            f'got {report.get("basis")}')
    return DensityMatrix(np.array(report['re']) + 1j * np.array(report['im']))
