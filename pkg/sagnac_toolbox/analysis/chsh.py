"""
CHSH Bell parameter from 16 coincidence records.

Analyzers transmit linear polarization at a = 0, a' = 45 on arm a and
b = 22.5, b' = 67.5 on arm b (degrees, HWP at half the angle). For each of the
four angle pairs the correlation

    E = (C(x, y) + C(x', y') - C(x, y') - C(x', y)) / (sum of the four)

uses the setting and its orthogonal complement on each arm, and
S = sum_i CHSH_SIGNS[i] * E_i.
"""
import itertools
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

import numpy as np

from sagnac_toolbox.detection.counting import CountRecord
from sagnac_toolbox.quantum.polarization_optics import (
    AnalyzerSetting,
    joint_probability,
    orthogonal_setting,
)
from sagnac_toolbox.quantum.qstate import DensityMatrix, phi_plus, pure_density
from sagnac_toolbox.utils.errors import FitError, InvalidArgumentError

# Polarization angles (arm a, arm b) of the four correlation terms.
CHSH_ANGLE_PAIRS: Tuple[Tuple[float, float], ...] = (
    (0.0, 22.5),
    (0.0, 67.5),
    (45.0, 22.5),
    (45.0, 67.5),
)
# Maximizes S for Phi+ at CHSH_ANGLE_PAIRS, recomputed by select_chsh_signs.
CHSH_SIGNS: Tuple[int, ...] = (-1, 1, 1, 1)
# (sign on a, sign on b) of each coincidence term in E.
_OUTCOMES = ((1, 1), (-1, -1), (1, -1), (-1, 1))

ProbabilityFn = Callable[[AnalyzerSetting, AnalyzerSetting], float]


@dataclass(frozen=True)
class ChshResult:
    """Result of chsh.

    Attributes:
        correlations: The four E values in CHSH_ANGLE_PAIRS order.
        s: The Bell parameter.
        sigma_s: Poisson-propagated standard error of s.
        totals: Coincidence totals behind each E.
        signs: Sign pattern combining the correlations.
    """

    correlations: Tuple[float, ...]
    s: float
    sigma_s: float
    totals: Tuple[float, ...]
    signs: Tuple[int, ...] = CHSH_SIGNS


def _oriented(setting: AnalyzerSetting, outcome: int) -> AnalyzerSetting:
    return setting if outcome > 0 else orthogonal_setting(setting)


def chsh_settings() -> List[Tuple[int, int, int, AnalyzerSetting, AnalyzerSetting]]:
    """The 16 CHSH settings.

    Returns: Entries (pair index, outcome on a, outcome on b, setting a,
        setting b) with outcomes +1 for the setting and -1 for its complement.
    """
    entries = []
    for idx, (angle_a, angle_b) in enumerate(CHSH_ANGLE_PAIRS):
        for out_a, out_b in _OUTCOMES:
            entries.append((idx, out_a, out_b,
                            _oriented(AnalyzerSetting.linear(angle_a), out_a),
                            _oriented(AnalyzerSetting.linear(angle_b), out_b)))
    return entries


def _correlation(counts: Dict[Tuple[int, int], float]) -> Tuple[float, float]:
    total = sum(counts.values())
    if total <= 0:
        raise FitError('Zero total coincidences in a CHSH basis')
    signed = sum(out_a * out_b * c for (out_a, out_b), c in counts.items())
    return signed / total, total


def _combine(
    correlations: Sequence[float],
    totals: Sequence[float],
    signs: Sequence[int] = CHSH_SIGNS,
) -> ChshResult:
    correlations = tuple(float(e) for e in correlations)
    s = float(sum(sign * e for sign, e in zip(signs, correlations)))
    variance = sum((1.0 - e ** 2) / n for e, n in zip(correlations, totals))
    return ChshResult(correlations=correlations, s=s,
                      sigma_s=float(np.sqrt(max(variance, 0.0))),
                      totals=tuple(float(n) for n in totals), signs=tuple(signs))


def chsh(records: Sequence[CountRecord], signs: Sequence[int] = CHSH_SIGNS) -> ChshResult:
    """Bell parameter from records at the chsh_settings.

    Args:
        records: At least one record per CHSH setting. Records at other
            settings are ignored, repeated settings are summed.
        signs: Sign pattern for S.

    Returns: The result.
    """
    by_setting: Dict[Tuple, float] = {}
    for record in records:
        if record.setting_a is None or record.setting_b is None:
            raise InvalidArgumentError('records', 'CHSH records need analyzer settings')
        key = (record.setting_a.key(), record.setting_b.key())
        by_setting[key] = by_setting.get(key, 0.0) + record.coincidences
    grouped: List[Dict[Tuple[int, int], float]] = [{} for _ in CHSH_ANGLE_PAIRS]
    for idx, out_a, out_b, setting_a, setting_b in chsh_settings():
        key = (setting_a.key(), setting_b.key())
        if key not in by_setting:
            raise FitError(f'Missing CHSH record for HWP angles '
                           f'({setting_a.hwp_angle}, {setting_b.hwp_angle})')
        grouped[idx][(out_a, out_b)] = by_setting[key]
    correlations, totals = zip(*(_correlation(group) for group in grouped))
    return _combine(correlations, totals, signs)


def chsh_from_probabilities(
    prob_fn: ProbabilityFn,
    signs: Sequence[int] = CHSH_SIGNS,
) -> ChshResult:
    """Bell parameter from exact joint probabilities.

    Args:
        prob_fn: Maps (setting a, setting b) to a coincidence probability.
        signs: Sign pattern for S.

    Returns: The result, sigma_s computed as if each basis held one count.
    """
    grouped: List[Dict[Tuple[int, int], float]] = [{} for _ in CHSH_ANGLE_PAIRS]
    for idx, out_a, out_b, setting_a, setting_b in chsh_settings():
        grouped[idx][(out_a, out_b)] = prob_fn(setting_a, setting_b)
    correlations, totals = zip(*(_correlation(group) for group in grouped))
    return _combine(correlations, totals, signs)


def chsh_for_state(rho: DensityMatrix, signs: Sequence[int] = CHSH_SIGNS) -> ChshResult:
    return chsh_from_probabilities(lambda a, b: joint_probability(rho, a, b), signs)


def select_chsh_signs() -> Tuple[int, ...]:
    """Sign pattern with an odd number of minus signs maximizing S on Phi+.

    Patterns are scanned in itertools.product order; ties keep the first.
    """
    correlations = chsh_for_state(pure_density(phi_plus())).correlations
    best, best_s = None, -np.inf
    for signs in itertools.product((1, -1), repeat=len(CHSH_ANGLE_PAIRS)):
        if signs.count(-1) % 2 == 0:
            continue
        s = sum(sign * e for sign, e in zip(signs, correlations))
        if s > best_s + 1e-12:
            best, best_s = signs, s
    return tuple(best)
