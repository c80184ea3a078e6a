"""
Two-qubit state reconstruction from 16 coincidence records.

The density matrix is parameterized as rho = T^dagger T / Tr(T^dagger T) with T
lower triangular: 4 real diagonal entries and 6 complex entries below it, 16
reals in total. The Poisson log-likelihood of the coincidences is maximized
with L-BFGS-B; its gradient comes from torch autograd in double precision.
"""
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import torch
from scipy.optimize import minimize

from sagnac_toolbox.detection.counting import CountRecord
from sagnac_toolbox.quantum.polarization_optics import measurement_operator
from sagnac_toolbox.quantum.qstate import DensityMatrix, check_physical, sanitize
from sagnac_toolbox.utils.errors import FitError, InvalidArgumentError, ReconstructionError

NUM_PARAMS = 16
MAX_ITERATIONS = 100000
RELATIVE_FTOL = 1e-15
# Added inside the log so outcomes the state cannot produce stay finite.
PROBABILITY_FLOOR = 1e-12
# Weight of I/4 mixed into the linear inversion seed so its Cholesky exists.
SEED_MIXING = 1e-8
RESTART_SCALE = 0.05
# Weight of (Tr(T^dagger T) - 1)^2, which pins the scale the likelihood ignores.
SCALE_PENALTY = 1.0
# Gradient norm of the per-count objective above which a run has not converged.
GRADIENT_TOLERANCE = 1e-5
# L-BFGS-B runs chained from the previous end point before giving up.
MAX_ROUNDS = 10

_TRIL_ROWS, _TRIL_COLS = np.tril_indices(4, k=-1)


@dataclass
class MleDiagnostics:
    """Optimizer record of the best restart.

    Attributes:
        nll: Final negative log-likelihood per detected coincidence.
        iterations: Optimizer iterations.
        grad_norm: Final gradient norm.
        history: Objective value after every accepted step, starting value first.
        restarts: Number of restarts run.
    """

    nll: float
    iterations: int
    grad_norm: float
    history: List[float] = field(default_factory=list)
    restarts: int = 1


@dataclass
class MleResult:
    rho: DensityMatrix
    diagnostics: MleDiagnostics


def pauli_basis() -> np.ndarray:
    """The 16 Hermitian matrices sigma_i (x) sigma_j / 2, identity first."""
    paulis = [np.eye(2), np.array([[0, 1], [1, 0]]),
              np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]])]
    return np.array([np.kron(p, q) / 2 for p in paulis for q in paulis], dtype=complex)


def measurement_operators(records: Sequence[CountRecord]) -> np.ndarray:
    """Stack of Pi_a (x) Pi_b for every record, shape (n, 4, 4)."""
    operators = []
    for record in records:
        if record.setting_a is None or record.setting_b is None:
            raise InvalidArgumentError('records', 'tomography records need analyzer settings')
        operators.append(measurement_operator(record.setting_a, record.setting_b))
    return np.array(operators)


def net_coincidences(
    records: Sequence[CountRecord],
    subtract_accidentals: bool = False,
    coincidence_window: Optional[float] = None,
) -> np.ndarray:
    """Coincidences per record, optionally minus the expected accidentals.

    Args:
        records: The records.
        subtract_accidentals: Subtract singles_a * singles_b * window / duration.
        coincidence_window: Window in s, required when subtracting.

    Returns: Non-negative counts.
    """
    counts = np.array([r.coincidences for r in records], dtype=float)
    if not subtract_accidentals:
        return counts
    if coincidence_window is None or coincidence_window <= 0:
        raise InvalidArgumentError('coincidence_window',
                                   'a positive window is needed to subtract accidentals')
    accidentals = np.array([r.singles_a * r.singles_b * coincidence_window / r.duration
                            if r.duration > 0 else 0.0 for r in records])
    return np.clip(counts - accidentals, 0.0, None)


def linear_inversion(
    records: Sequence[CountRecord],
    counts: Optional[np.ndarray] = None,
) -> DensityMatrix:
    """Least squares Hermitian estimate, not necessarily positive.

    Solves Re Tr(Pi_k X) = n_k for X in the Pauli basis, then normalizes the
    trace to one.

    Args:
        records: At least 16 informationally complete records.
        counts: Counts to invert, defaults to the raw coincidences.

    Returns: The unit-trace estimate.
    """
    operators = measurement_operators(records)
    if counts is None:
        counts = net_coincidences(records)
    gammas = pauli_basis()
    design = np.real(np.einsum('kij,mji->km', operators, gammas))
    coeffs, _, rank, _ = np.linalg.lstsq(design, counts, rcond=None)
    if rank < NUM_PARAMS:
        raise FitError(f'Tomography settings are not informationally complete '
                       f'(rank {rank} < {NUM_PARAMS})')
    estimate = np.einsum('m,mij->ij', coeffs, gammas)
    trace = float(np.real(np.trace(estimate)))
    if trace <= 0:
        return DensityMatrix(np.eye(4) / 4)
    return DensityMatrix(estimate / trace)


def _positive_seed(rho: DensityMatrix) -> np.ndarray:
    mat = (rho.matrix + rho.matrix.conj().T) / 2
    vals, vecs = np.linalg.eigh(mat)
    vals = np.clip(vals, 0.0, None)
    vals = vals / vals.sum() if vals.sum() > 0 else np.full(4, 0.25)
    mat = (vecs * vals) @ vecs.conj().T
    return (1 - SEED_MIXING) * mat + SEED_MIXING * np.eye(4) / 4


def params_from_density(matrix: np.ndarray) -> np.ndarray:
    """Parameters t with rho = T^dagger T for a positive definite matrix.

    With J the exchange matrix, the Cholesky factor L L^dagger = J rho J gives
    the lower triangular T = J L^dagger J.
    """
    exchange = np.eye(4)[::-1]
    lower = np.linalg.cholesky(exchange @ matrix @ exchange)
    factor = exchange @ lower.conj().T @ exchange
    # Fix the gauge so the diagonal is real and positive.
    phases = np.exp(-1j * np.angle(np.diag(factor)))
    factor = phases[:, None] * factor
    off_diag = factor[_TRIL_ROWS, _TRIL_COLS]
    params = np.empty(NUM_PARAMS)
    params[:4] = np.real(np.diag(factor))
    params[4::2] = np.real(off_diag)
    params[5::2] = np.imag(off_diag)
    return params


def _factor(params: torch.Tensor) -> torch.Tensor:
    rows = torch.as_tensor(np.concatenate([np.arange(4), _TRIL_ROWS]))
    cols = torch.as_tensor(np.concatenate([np.arange(4), _TRIL_COLS]))
    zeros = torch.zeros(4, 4, dtype=torch.float64)
    real = zeros.index_put((rows, cols), torch.cat([params[:4], params[4::2]]))
    imag = zeros.index_put((rows[4:], cols[4:]), params[5::2])
    return torch.complex(real, imag)


def density_from_params(params: np.ndarray) -> np.ndarray:
    """rho = T^dagger T / Tr(T^dagger T) as a numpy matrix."""
    with torch.no_grad():
        factor = _factor(torch.as_tensor(params, dtype=torch.float64))
        rho = factor.conj().T @ factor
        rho = rho / torch.real(torch.trace(rho))
    return rho.numpy()


class _Likelihood:
    """Profile Poisson negative log-likelihood per count.

    -sum f_k log(p_k / sum p) with f_k = n_k / sum n, plus a penalty on the
    trace of T^dagger T. The likelihood is invariant under scaling T, so the
    penalty vanishes at every stationary point.
    """

    def __init__(self, operators: np.ndarray, counts: np.ndarray):
        self._operators = torch.as_tensor(operators, dtype=torch.complex128)
        self._frequencies = torch.as_tensor(counts / counts.sum(), dtype=torch.float64)

    def _nll(self, params: torch.Tensor) -> torch.Tensor:
        factor = _factor(params)
        rho = factor.conj().T @ factor
        scale = torch.real(torch.trace(rho))
        probs = torch.real(torch.einsum('kij,ji->k', self._operators, rho / scale))
        log_probs = torch.log(probs + PROBABILITY_FLOOR) - torch.log(probs.sum())
        return -torch.sum(self._frequencies * log_probs) + SCALE_PENALTY * (scale - 1.0) ** 2

    def value(self, params: np.ndarray) -> float:
        with torch.no_grad():
            return float(self._nll(torch.as_tensor(params, dtype=torch.float64)))

    def value_and_grad(self, params: np.ndarray) -> Tuple[float, np.ndarray]:
        tensor = torch.tensor(params, dtype=torch.float64, requires_grad=True)
        nll = self._nll(tensor)
        nll.backward()
        return float(nll.detach()), tensor.grad.numpy().copy()


def _run_optimizer(likelihood: _Likelihood, start: np.ndarray) -> Tuple[np.ndarray, MleDiagnostics]:
    """L-BFGS-B, restarted from its own end point until the gradient is flat.

    Raises:
        ReconstructionError: If the objective turns non-finite, the iteration
            budget runs out or the runs stop improving with a gradient above
            GRADIENT_TOLERANCE.
    """
    history = [likelihood.value(start)]

    def record_step(params: np.ndarray) -> None:
        history.append(likelihood.value(params))

    params, value, iterations = start, history[0], 0
    grad_norm = float(np.linalg.norm(likelihood.value_and_grad(start)[1]))
    for _ in range(MAX_ROUNDS):
        result = minimize(likelihood.value_and_grad, params, jac=True, method='L-BFGS-B',
                          callback=record_step,
                          options={'maxiter': MAX_ITERATIONS - iterations,
                                   'maxfun': 10 * MAX_ITERATIONS,
                                   'ftol': RELATIVE_FTOL, 'gtol': 1e-12})
        iterations += int(result.nit)
        if not np.isfinite(result.fun):
            raise ReconstructionError('Likelihood became non-finite', grad_norm, iterations)
        improved = result.fun < value
        if improved:
            params, value = result.x, float(result.fun)
            grad_norm = float(np.linalg.norm(likelihood.value_and_grad(params)[1]))
        if grad_norm <= GRADIENT_TOLERANCE:
            break
        if iterations >= MAX_ITERATIONS:
            raise ReconstructionError('Iteration limit reached', grad_norm, iterations)
        if not improved:
            raise ReconstructionError(f'Optimizer stalled: {result.message}',
                                      grad_norm, iterations)
    else:
        raise ReconstructionError('Gradient still large after chained runs',
                                  grad_norm, iterations)
    return params, MleDiagnostics(nll=value, iterations=iterations,
                                  grad_norm=grad_norm, history=history)


def mle_tomography_with_diagnostics(
    records: Sequence[CountRecord],
    restarts: int = 3,
    seed: int = 0,
    subtract_accidentals: bool = False,
    coincidence_window: Optional[float] = None,
) -> MleResult:
    """Maximum likelihood density matrix with optimizer diagnostics.

    The first run starts from the positive-fixed linear inversion, further
    restarts perturb that start with Gaussian noise from the seeded generator.
    The lowest objective among the converged runs wins.

    Args:
        records: At least 16 informationally complete records.
        restarts: Number of optimizer runs, >= 1.
        seed: Seed of the restart perturbations.
        subtract_accidentals: Subtract expected accidentals before fitting.
        coincidence_window: Coincidence window in s for the subtraction.

    Returns: The reconstruction and diagnostics of the winning run.
    """
    if len(records) < NUM_PARAMS:
        raise FitError(f'Need at least {NUM_PARAMS} records, got {len(records)}')
    if restarts < 1:
        raise InvalidArgumentError('restarts', f'must be >= 1, got {restarts}')
    counts = net_coincidences(records, subtract_accidentals, coincidence_window)
    if counts.sum() <= 0:
        raise FitError('Tomography records hold no coincidences')
    operators = measurement_operators(records)
    likelihood = _Likelihood(operators, counts)
    start = params_from_density(_positive_seed(linear_inversion(records, counts)))
    rng = np.random.default_rng(seed)
    best_params, best, first_error = None, None, None
    for restart in range(restarts):
        if restart == 0:
            initial = start
        else:
            initial = start + rng.normal(scale=RESTART_SCALE * np.max(np.abs(start)),
                                         size=NUM_PARAMS)
        try:
            params, diagnostics = _run_optimizer(likelihood, initial)
        except ReconstructionError as err:
            first_error = first_error or err
            continue
        if best is None or diagnostics.nll < best.nll:
            best_params, best = params, diagnostics
    if best is None:
        raise first_error
    best.restarts = restarts
    rho = sanitize(DensityMatrix(density_from_params(best_params)))
    check_physical(rho)
    return MleResult(rho=rho, diagnostics=best)


def mle_tomography(
    records: Sequence[CountRecord],
    restarts: int = 3,
    seed: int = 0,
    subtract_accidentals: bool = False,
    coincidence_window: Optional[float] = None,
) -> DensityMatrix:
    """Maximum likelihood density matrix, see mle_tomography_with_diagnostics."""
    return mle_tomography_with_diagnostics(records, restarts, seed, subtract_accidentals,
                                           coincidence_window).rho
