"""
CHSH Bell test at the documented analyzer settings.
"""
from dataclasses import asdict
from typing import Any, Dict, List, Sequence

from sagnac_toolbox.analysis.chsh import chsh, chsh_settings
from sagnac_toolbox.constants import experiment_kinds
from sagnac_toolbox.detection.counting import CountRecord
from sagnac_toolbox.experiments.abstract_experiment import (
    AbstractExperiment,
    MeasurementPoint,
)
from sagnac_toolbox.quantum.polarization_optics import joint_probability, single_probability
from sagnac_toolbox.source.sagnac_source import output_state

# Local realism bound on |S|.
CLASSICAL_BOUND = 2.0


def analyze_chsh(records: Sequence[CountRecord]) -> Dict[str, Any]:
    """S with its Poisson error and the violation in standard deviations."""
    result = asdict(chsh(records))
    for key in ('correlations', 'totals', 'signs'):
        result[key] = list(result[key])
    sigma = result['sigma_s']
    result['violation_sigmas'] = ((abs(result['s']) - CLASSICAL_BOUND) / sigma
                                  if sigma > 0 else None)
    return result


class ChshExperiment(AbstractExperiment):

    kind = experiment_kinds.CHSH

    def measurement_plan(self) -> List[MeasurementPoint]:
        rho = output_state(self.source)
        return [
            MeasurementPoint(
                p_joint=joint_probability(rho, setting_a, setting_b),
                marginal_a=single_probability(rho, setting_a, 'a'),
                marginal_b=single_probability(rho, setting_b, 'b'),
                setting_a=setting_a,
                setting_b=setting_b,
            )
            for _, _, _, setting_a, setting_b in chsh_settings()
        ]

    def analyze(self, records: Sequence[CountRecord]) -> Dict[str, Any]:
        return analyze_chsh(records)

    def headline(self, analysis: Dict[str, Any]) -> Dict[str, float]:
        return {'s': analysis['s'], 'sigma_s': analysis['sigma_s']}
