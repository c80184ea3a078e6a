"""
Least squares fit of the triangular Hong-Ou-Mandel dip.
"""
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike
from scipy.integrate import trapezoid
from scipy.optimize import least_squares

from sagnac_toolbox.source.spectral import (
    bandwidth_from_coherence_length,
    hom_coincidence_curve,
    triangle,
)
from sagnac_toolbox.utils.errors import FitError

MIN_HOM_POINTS = 8
# A scan whose minimum is above this fraction of its maximum has no dip.
NO_DIP_RATIO = 0.9


@dataclass(frozen=True)
class HomFit:
    """Result of fit_triangle.

    Attributes:
        baseline: Coincidences away from the dip.
        visibility: (C_max - C_min) / C_max.
        coherence_length: Fitted dip half-width in mm.
        center: Dip center in mm.
        residual_rms: Root mean square of data minus fit.
    """

    baseline: float
    visibility: float
    coherence_length: float
    center: float
    residual_rms: float

    def evaluate(self, positions: ArrayLike) -> np.ndarray:
        return np.asarray(hom_coincidence_curve(np.asarray(positions, dtype=float),
                                                self.center, self.coherence_length,
                                                self.visibility, self.baseline))

    def bandwidth(self, wavelength: float) -> float:
        """Photon bandwidth in nm implied by the fitted coherence length."""
        return bandwidth_from_coherence_length(self.coherence_length, wavelength)


def _initial_guess(positions: np.ndarray, counts: np.ndarray) -> np.ndarray:
    baseline = float(np.max(counts))
    c_min = float(np.min(counts))
    # Midpoint of the minimal-count plateau keeps flat dips deterministic.
    at_min = positions[counts == c_min]
    center = float((at_min.min() + at_min.max()) / 2)
    visibility = float(np.clip(1.0 - c_min / baseline, 0.05, 0.999))
    deficit = np.clip(baseline - counts, 0.0, None)
    order = np.argsort(positions)
    area = float(trapezoid(deficit[order], positions[order]))
    spacing = float(np.min(np.diff(np.unique(positions))))
    span = float(np.ptp(positions))
    half_width = float(np.clip(area / (baseline * visibility), 2 * spacing, span))
    return np.array([baseline, visibility, half_width, center])


def fit_triangle(positions: Sequence[float], counts: Sequence[float]) -> HomFit:
    """Fit baseline * (1 - V * triangle) to a scanned dip.

    Residuals are weighted by Poisson standard deviations with a floor of one
    count; the Jacobian is analytic.

    Args:
        positions: Air gap positions in mm.
        counts: Coincidence counts at those positions.

    Returns: The fit.
    """
    positions = np.asarray(positions, dtype=float)
    counts = np.asarray(counts, dtype=float)
    if positions.shape != counts.shape or positions.ndim != 1:
        raise FitError(f'positions and counts must be 1-d of equal length, got '
                       f'{positions.shape} and {counts.shape}')
    if len(positions) < MIN_HOM_POINTS:
        raise FitError(f'Need at least {MIN_HOM_POINTS} points, got {len(positions)}')
    if len(np.unique(positions)) < 2:
        raise FitError('Positions must not all coincide')
    c_max = float(np.max(counts))
    if c_max <= 0 or float(np.min(counts)) / c_max > NO_DIP_RATIO:
        raise FitError(f'No dip detected, min/max ratio exceeds {NO_DIP_RATIO}')
    sigma = np.sqrt(np.maximum(counts, 1.0))

    def residuals(params: np.ndarray) -> np.ndarray:
        baseline, visibility, half_width, center = params
        model = baseline * (1.0 - visibility * triangle(positions, center, half_width))
        return (model - counts) / sigma

    def jacobian(params: np.ndarray) -> np.ndarray:
        baseline, visibility, half_width, center = params
        tri = triangle(positions, center, half_width)
        inside = tri > 0
        offset = positions - center
        jac = np.zeros((len(positions), 4))
        jac[:, 0] = 1.0 - visibility * tri
        jac[:, 1] = -baseline * tri
        jac[:, 2] = np.where(inside, -baseline * visibility * np.abs(offset) / half_width ** 2, 0.0)
        jac[:, 3] = np.where(inside, -baseline * visibility * np.sign(offset) / half_width, 0.0)
        return jac / sigma[:, None]

    span = float(np.ptp(positions))
    lower = np.array([0.0, 0.0, 1e-9, float(positions.min())])
    upper = np.array([np.inf, 1.0, span, float(positions.max())])
    x0 = np.clip(_initial_guess(positions, counts), lower, upper)
    result = least_squares(residuals, x0, jac=jacobian, bounds=(lower, upper),
                           method='trf', x_scale='jac',
                           ftol=1e-12, xtol=1e-12, gtol=1e-12, max_nfev=10000)
    if not result.success:
        raise FitError(f'Triangle fit did not converge: {result.message}')
    baseline, visibility, half_width, center = (float(v) for v in result.x)
    model = baseline * (1.0 - visibility * triangle(positions, center, half_width))
    return HomFit(
        baseline=baseline,
        visibility=visibility,
        coherence_length=half_width,
        center=center,
        residual_rms=float(np.sqrt(np.mean((counts - model) ** 2))),
    )
