"""
Sinusoidal fit of polarization correlation fringes.

A fringe is scanned by rotating one arm's HWP while the other stays fixed. The
coincidence rate then follows c = A + B cos(4 (phi - phi0)) in the HWP angle
phi, i.e. a 90 degree period.
"""
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike

from sagnac_toolbox.utils.errors import FitError

FRINGE_PERIOD = 90.0
MIN_FRINGE_POINTS = 6


@dataclass(frozen=True)
class FringeFit:
    """Result of fit_sinusoid.

    Attributes:
        c_max: Fitted coincidence maximum A + B.
        c_min: Fitted coincidence minimum A - B, clamped at 0.
        phase: Angle of the maximum in degrees, in [0, 90).
        visibility: (c_max - c_min) / (c_max + c_min).
        residual_rms: Root mean square of data minus fit.
        offset: Fitted A.
        amplitude: Fitted B >= 0.
        visibility_sigma: Standard error of B / A from the fit covariance.
        clamped: Whether A - B came out negative and was clamped.
    """

    c_max: float
    c_min: float
    phase: float
    visibility: float
    residual_rms: float
    offset: float
    amplitude: float
    visibility_sigma: float
    clamped: bool = False

    def evaluate(self, angles: ArrayLike) -> np.ndarray:
        """Fitted curve at the given HWP angles in degrees."""
        radians = np.deg2rad(4 * (np.asarray(angles, dtype=float) - self.phase))
        return self.offset + self.amplitude * np.cos(radians)


def _design_matrix(angles: np.ndarray) -> np.ndarray:
    four_phi = np.deg2rad(4 * angles)
    return np.stack([np.ones_like(angles), np.cos(four_phi), np.sin(four_phi)], axis=1)


def fit_sinusoid(angles: Sequence[float], counts: Sequence[float]) -> FringeFit:
    """Weighted linear least squares fit of a fringe.

    The model is linear in (A, B cos 4phi0, B sin 4phi0), so the fit is solved
    in closed form. Each point is weighted by the inverse of its Poisson
    variance, with a floor of one count.

    Args:
        angles: HWP angles in degrees.
        counts: Coincidence counts at those angles.

    Returns: The fit.
    """
    angles = np.asarray(angles, dtype=float)
    counts = np.asarray(counts, dtype=float)
    if angles.shape != counts.shape or angles.ndim != 1:
        raise FitError(f'angles and counts must be 1-d of equal length, got '
                       f'{angles.shape} and {counts.shape}')
    if len(angles) < MIN_FRINGE_POINTS:
        raise FitError(f'Need at least {MIN_FRINGE_POINTS} points, got {len(angles)}')
    span = float(np.ptp(angles))
    if span < FRINGE_PERIOD - 1e-9:
        raise FitError(f'Scan spans {span} degrees, need at least one period '
                       f'({FRINGE_PERIOD} degrees)')
    weights = 1.0 / np.maximum(counts, 1.0)
    design = _design_matrix(angles)
    sqrt_w = np.sqrt(weights)[:, None]
    coeffs, _, rank, _ = np.linalg.lstsq(design * sqrt_w, counts * sqrt_w[:, 0], rcond=None)
    if rank < 3:
        raise FitError('Fringe design matrix is rank deficient, angles are degenerate')
    offset, b_cos, b_sin = (float(c) for c in coeffs)
    amplitude = float(np.hypot(b_cos, b_sin))
    phase = float(np.rad2deg(np.arctan2(b_sin, b_cos)) / 4) % FRINGE_PERIOD
    c_max = offset + amplitude
    c_min = offset - amplitude
    clamped = c_min < 0
    if clamped:
        c_min = 0.0
    visibility = (c_max - c_min) / (c_max + c_min) if c_max + c_min > 0 else 0.0
    residuals = counts - design @ coeffs
    residual_rms = float(np.sqrt(np.mean(residuals ** 2)))
    visibility_sigma = fringe_visibility_sigma(design, weights, offset, b_cos, b_sin)
    return FringeFit(
        c_max=float(c_max),
        c_min=float(c_min),
        phase=phase,
        visibility=float(visibility),
        residual_rms=residual_rms,
        offset=offset,
        amplitude=amplitude,
        visibility_sigma=visibility_sigma,
        clamped=bool(clamped),
    )


def fringe_visibility_sigma(
    design: np.ndarray,
    weights: np.ndarray,
    offset: float,
    b_cos: float,
    b_sin: float,
) -> float:
    """Standard error of B / A propagated from the least squares covariance.

    Args:
        design: The (n, 3) design matrix.
        weights: Inverse variances of the points.
        offset: Fitted A.
        b_cos: Fitted B cos(4 phi0).
        b_sin: Fitted B sin(4 phi0).

    Returns: The standard error, 0 when it is undefined.
    """
    if offset <= 0:
        return 0.0
    amplitude = np.hypot(b_cos, b_sin)
    covariance = np.linalg.pinv(design.T @ (design * weights[:, None]))
    if amplitude > 0:
        grad = np.array([-amplitude / offset ** 2,
                         b_cos / (amplitude * offset),
                         b_sin / (amplitude * offset)])
    else:
        grad = np.array([0.0, 1.0 / offset, 0.0])
    variance = float(grad @ covariance @ grad)
    return float(np.sqrt(max(variance, 0.0)))
