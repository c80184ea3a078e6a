"""
Polarization correlation fringes: one arm's HWP is held at each fixed angle
while the other arm's HWP is scanned.
"""
from dataclasses import asdict
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sagnac_toolbox.analysis.brightness import brightness_detected, brightness_inferred
from sagnac_toolbox.analysis.fringe_fit import FRINGE_PERIOD, fit_sinusoid
from sagnac_toolbox.constants import calibration as cal, experiment_kinds
from sagnac_toolbox.detection.counting import CountRecord
from sagnac_toolbox.experiments.abstract_experiment import (
    AbstractExperiment,
    MeasurementPoint,
)
from sagnac_toolbox.quantum.polarization_optics import (
    AnalyzerSetting,
    joint_probability,
    single_probability,
)
from sagnac_toolbox.quantum.qstate import DensityMatrix
from sagnac_toolbox.source.sagnac_source import output_state
from sagnac_toolbox.source.spectral import bandwidth_from_coherence_length
from sagnac_toolbox.utils.errors import InvalidArgumentError

# HWP angle analyzing the 45 degree (diagonal) basis.
DIAGONAL_HWP = 22.5


def fringe_plan(
    rho: DensityMatrix,
    fixed_angles: Sequence[float],
    scan_angles: Sequence[float],
    fixed_arm: str = 'a',
) -> List[MeasurementPoint]:
    """Measurement points of fringe scans, fixed angle by fixed angle.

    Args:
        rho: The emitted state.
        fixed_angles: HWP angles of the fixed arm.
        scan_angles: HWP angles of the scanned arm.
        fixed_arm: 'a' or 'b'.

    Returns: The plan.
    """
    if fixed_arm not in ('a', 'b'):
        raise InvalidArgumentError('fixed_arm', f"must be 'a' or 'b', got {fixed_arm}")
    plan = []
    for fixed in fixed_angles:
        for scanned in scan_angles:
            fixed_setting, scan_setting = AnalyzerSetting(fixed), AnalyzerSetting(scanned)
            if fixed_arm == 'a':
                setting_a, setting_b = fixed_setting, scan_setting
            else:
                setting_a, setting_b = scan_setting, fixed_setting
            plan.append(MeasurementPoint(
                p_joint=joint_probability(rho, setting_a, setting_b),
                marginal_a=single_probability(rho, setting_a, 'a'),
                marginal_b=single_probability(rho, setting_b, 'b'),
                setting_a=setting_a,
                setting_b=setting_b,
            ))
    return plan


def infer_fixed_arm(records: Sequence[CountRecord]) -> str:
    """The arm with fewer distinct HWP angles, 'a' on ties."""
    angles_a = {r.setting_a.hwp_angle for r in records}
    angles_b = {r.setting_b.hwp_angle for r in records}
    return 'a' if len(angles_a) <= len(angles_b) else 'b'


def group_fringes(
    records: Sequence[CountRecord],
) -> Tuple[str, List[Tuple[float, List[float], List[float]]]]:
    """Split records into fringes.

    Returns: The fixed arm and, per fixed angle in ascending order, the
        scanned HWP angles and coincidences in record order.
    """
    if any(r.setting_a is None or r.setting_b is None for r in records):
        raise InvalidArgumentError('records', 'fringe records need analyzer settings')
    fixed_arm = infer_fixed_arm(records)
    groups: Dict[float, Tuple[List[float], List[float]]] = {}
    for record in records:
        if fixed_arm == 'a':
            fixed, scanned = record.setting_a.hwp_angle, record.setting_b.hwp_angle
        else:
            fixed, scanned = record.setting_b.hwp_angle, record.setting_a.hwp_angle
        angles, counts = groups.setdefault(fixed, ([], []))
        angles.append(scanned)
        counts.append(record.coincidences)
    return fixed_arm, [(fixed, *groups[fixed]) for fixed in sorted(groups)]


def analyze_fringes(records: Sequence[CountRecord]) -> Dict[str, Any]:
    """Fit every fringe in the records.

    Returns: {'fixed_arm', 'fringes': [{'fixed_hwp', 'hwp_deg', 'counts',
        'fit', 'fit_curve'}]}.
    """
    fixed_arm, groups = group_fringes(records)
    fringes = []
    for fixed, angles, counts in groups:
        fit = fit_sinusoid(angles, counts)
        fringes.append({
            'fixed_hwp': float(fixed),
            'hwp_deg': [float(a) for a in angles],
            'counts': [float(c) for c in counts],
            'fit': asdict(fit),
            'fit_curve': [float(v) for v in fit.evaluate(angles)],
        })
    return {'fixed_arm': fixed_arm, 'fringes': fringes}


def diagonal_fringe(analysis: Dict[str, Any]) -> Optional[Dict[str, Any]]:
    """The fringe whose fixed analyzer sits in the 45 degree basis, if any."""
    for fringe in analysis['fringes']:
        offset = (fringe['fixed_hwp'] - DIAGONAL_HWP) % (FRINGE_PERIOD / 2)
        if min(offset, FRINGE_PERIOD / 2 - offset) < 1e-9:
            return fringe
    return None


def fringe_label(fixed_hwp: float) -> str:
    return f'visibility_{fixed_hwp:g}'


class FringeExperiment(AbstractExperiment):
    """Fringes at each scans.fringe_fixed_hwp angle."""

    kind = experiment_kinds.FRINGE

    def measurement_plan(self) -> List[MeasurementPoint]:
        scans = self.config.scans
        return fringe_plan(output_state(self.source), scans.fringe_fixed_hwp,
                           scans.fringe_hwp_angles, scans.fixed_arm)

    def analyze(self, records: Sequence[CountRecord]) -> Dict[str, Any]:
        return analyze_fringes(records)

    def headline(self, analysis: Dict[str, Any]) -> Dict[str, float]:
        return {fringe_label(f['fixed_hwp']): f['fit']['visibility']
                for f in analysis['fringes']}

    def extra_sections(self, analysis: Dict[str, Any]) -> Dict[str, Any]:
        """Spectral brightness from the maximum of the diagonal fringe."""
        fringe = diagonal_fringe(analysis)
        if fringe is None:
            return {}
        cfg = self.config
        coincidence_rate = fringe['fit']['c_max'] / cfg.duration_per_point
        bandwidth = bandwidth_from_coherence_length(cfg.source.coherence_length,
                                                    cal.CENTRAL_WAVELENGTH)
        duty_cycle = cfg.detector_a.duty_cycle * cfg.detector_b.duty_cycle
        inferred = brightness_inferred(
            coincidence_rate, cfg.source.alpha1, cfg.source.alpha2, duty_cycle,
            cfg.detector_a.efficiency, cfg.detector_b.efficiency,
            cfg.source.pump_power, bandwidth)
        return {'brightness': {
            'coincidence_rate': float(coincidence_rate),
            'bandwidth_nm': float(bandwidth),
            'pump_power_mw': float(cfg.source.pump_power),
            'detected': float(brightness_detected(coincidence_rate, cfg.source.pump_power,
                                                  bandwidth)),
            'inferred': float(inferred),
        }}
