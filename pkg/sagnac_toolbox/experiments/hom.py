"""
Hong-Ou-Mandel dip: the polarizers are removed, both photons meet on a beam
splitter and an air gap scans their relative delay.
"""
from dataclasses import asdict, replace
from typing import Any, Dict, List, Sequence

from sagnac_toolbox.analysis.hom_fit import fit_triangle
from sagnac_toolbox.constants import calibration as cal, experiment_kinds
from sagnac_toolbox.detection.counting import CountRecord
from sagnac_toolbox.experiments.abstract_experiment import (
    AbstractExperiment,
    MeasurementPoint,
)
from sagnac_toolbox.source.sagnac_source import SourceConfig
from sagnac_toolbox.source.spectral import hom_joint_probability
from sagnac_toolbox.utils.errors import InvalidArgumentError


def analyze_hom(records: Sequence[CountRecord]) -> Dict[str, Any]:
    """Fit the dip in HOM records.

    Returns: {'gap_mm', 'counts', 'fit', 'fit_curve', 'bandwidth_nm'} with the
        bandwidth evaluated at the telecom design wavelength.
    """
    if any(r.gap_position is None for r in records):
        raise InvalidArgumentError('records', 'HOM records need gap positions')
    positions = [float(r.gap_position) for r in records]
    counts = [float(r.coincidences) for r in records]
    fit = fit_triangle(positions, counts)
    return {
        'gap_mm': positions,
        'counts': counts,
        'fit': asdict(fit),
        'fit_curve': [float(v) for v in fit.evaluate(positions)],
        'bandwidth_nm': float(fit.bandwidth(cal.CENTRAL_WAVELENGTH)),
    }


class HomExperiment(AbstractExperiment):
    """Dip scan over scans.hom_gap_positions at scans.hom_pump_power."""

    kind = experiment_kinds.HOM

    @property
    def source(self) -> SourceConfig:
        return replace(self.config.source, pump_power=self.config.scans.hom_pump_power)

    def measurement_plan(self) -> List[MeasurementPoint]:
        scans = self.config.scans
        return [
            MeasurementPoint(
                p_joint=hom_joint_probability(x, scans.hom_center,
                                              self.source.coherence_length,
                                              scans.hom_visibility),
                gap_position=float(x),
            )
            for x in scans.hom_gap_positions
        ]

    def analyze(self, records: Sequence[CountRecord]) -> Dict[str, Any]:
        return analyze_hom(records)

    def headline(self, analysis: Dict[str, Any]) -> Dict[str, float]:
        return {
            'visibility': analysis['fit']['visibility'],
            'coherence_length': analysis['fit']['coherence_length'],
            'bandwidth_nm': analysis['bandwidth_nm'],
        }
