"""
Two-qubit state tomography over {H, V, D, R} x {H, V, D, R}.
"""
from typing import Any, Dict, List, Optional, Sequence

from sagnac_toolbox.analysis.tomography import mle_tomography_with_diagnostics
from sagnac_toolbox.constants import experiment_kinds
from sagnac_toolbox.detection.counting import CountRecord
from sagnac_toolbox.detection.detectors import coincidence_window
from sagnac_toolbox.experiments.abstract_experiment import (
    AbstractExperiment,
    MeasurementPoint,
)
from sagnac_toolbox.quantum.polarization_optics import (
    joint_probability,
    single_probability,
    tomography_settings,
)
from sagnac_toolbox.quantum.qstate import (
    density_to_report,
    diagonal_visibility,
    fidelity,
    phi_plus,
    purity,
)
from sagnac_toolbox.source.sagnac_source import output_state
from sagnac_toolbox.utils.config import AnalysisConfig


def analyze_tomography(
    records: Sequence[CountRecord],
    settings: AnalysisConfig = AnalysisConfig(),
    seed: int = 0,
    window: Optional[float] = None,
) -> Dict[str, Any]:
    """Reconstruct the state and its figures of merit.

    Args:
        records: Records at the tomography settings.
        settings: Restarts and accidental subtraction.
        seed: Seed of the restart perturbations.
        window: Coincidence window in s, used when subtracting accidentals.

    Returns: {'density', 'fidelity', 'purity', 'diagonal_visibility', 'optimizer'}.
    """
    result = mle_tomography_with_diagnostics(
        records, restarts=settings.tomography_restarts, seed=seed,
        subtract_accidentals=settings.subtract_accidentals, coincidence_window=window)
    rho, diagnostics = result.rho, result.diagnostics
    return {
        'density': density_to_report(rho),
        'fidelity': fidelity(rho, phi_plus()),
        'purity': purity(rho),
        'diagonal_visibility': diagonal_visibility(rho),
        'optimizer': {
            'nll': diagnostics.nll,
            'iterations': diagnostics.iterations,
            'grad_norm': diagnostics.grad_norm,
            'restarts': diagnostics.restarts,
        },
    }


class TomographyExperiment(AbstractExperiment):

    kind = experiment_kinds.TOMOGRAPHY

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
            for _, setting_a, setting_b in tomography_settings()
        ]

    def analyze(self, records: Sequence[CountRecord]) -> Dict[str, Any]:
        cfg = self.config
        return analyze_tomography(
            records, cfg.analysis,
            seed=cfg.analysis.tomography_seed,
            window=coincidence_window(cfg.detector_a, cfg.detector_b))

    def headline(self, analysis: Dict[str, Any]) -> Dict[str, float]:
        return {'fidelity': analysis['fidelity'], 'purity': analysis['purity']}
