"""
Robustness sweeps: the diagonal-basis fringe visibility as a function of pump
power or crystal temperature.
"""
import abc
from dataclasses import replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sagnac_toolbox.constants import experiment_kinds
from sagnac_toolbox.detection.counting import CountRecord
from sagnac_toolbox.experiments.abstract_experiment import (
    AbstractExperiment,
    ExperimentRun,
    MeasurementPoint,
    reduce_ensemble,
)
from sagnac_toolbox.experiments.experiment_logger import ExperimentLogger
from sagnac_toolbox.experiments.fringe import DIAGONAL_HWP, FringeExperiment
from sagnac_toolbox.source.sagnac_source import (
    SourceConfig,
    degenerate_pump_wavelength,
    idler_wavelength,
)
from sagnac_toolbox.source.spectral import bandwidth_from_coherence_length
from sagnac_toolbox.source.tuning import degenerate_temperature_lookup


class SweepExperiment(AbstractExperiment, metaclass=abc.ABCMeta):
    """A diagonal fringe measured at every value of one source parameter.

    Sweep point i of repeat k draws its record seeds from the spawn key (k, i).
    """

    sweep_name: str = ''
    parameter: str = ''

    @abc.abstractmethod
    def sweep_values(self) -> Tuple[float, ...]:
        """The swept parameter values."""

    @abc.abstractmethod
    def point_source(self, value: float) -> SourceConfig:
        """The source at one sweep value."""

    def point_details(self, value: float) -> Dict[str, float]:
        """Extra per-point report entries."""
        return {}

    def point_experiment(self, index: int, value: float) -> FringeExperiment:
        config = replace(
            self.config,
            source=self.point_source(value),
            scans=replace(self.config.scans, fringe_fixed_hwp=(DIAGONAL_HWP,)),
        )
        return FringeExperiment(config, seed_key=(index,))

    def measurement_plan(self) -> List[MeasurementPoint]:
        plan = []
        for index, value in enumerate(self.sweep_values()):
            plan.extend(self.point_experiment(index, value).measurement_plan())
        return plan

    def analyze(self, records: Sequence[CountRecord]) -> Dict[str, Any]:
        """Analyze the records of a single sweep point."""
        return self.point_experiment(0, self.sweep_values()[0]).analyze(records)

    def headline(self, analysis: Dict[str, Any]) -> Dict[str, float]:
        return {'visibility': analysis['fringes'][0]['fit']['visibility']}

    @property
    def progress_steps(self) -> int:
        return len(self.sweep_values())

    def run(self, logger: Optional[ExperimentLogger] = None) -> ExperimentRun:
        """Simulate every sweep point over all repeats.

        Args:
            logger: Optional progress logger, advanced once per sweep point.

        Returns: The run with per-record sweep values and repeats for the CSV.
        """
        records: List[CountRecord] = []
        sweep_column, repeat_column = [], []
        points = []
        for index, value in enumerate(self.sweep_values()):
            experiment = self.point_experiment(index, value)
            if logger is not None:
                logger.start_inner_loop(f'{self.parameter}={value:g}', self.config.repeats)
            point_records, per_repeat = [], []
            for repeat in range(self.config.repeats):
                repeat_records = experiment.simulate_repeat(repeat)
                per_repeat.append(self.headline(experiment.analyze(repeat_records)))
                point_records.extend(repeat_records)
                sweep_column.extend([value] * len(repeat_records))
                repeat_column.extend([repeat] * len(repeat_records))
                if logger is not None:
                    logger.end_inner_loop()
            records.extend(point_records)
            fit = experiment.analyze(point_records)['fringes'][0]['fit']
            ensemble = reduce_ensemble(per_repeat)['visibility']
            points.append({
                'sweep_value': float(value),
                'visibility': fit['visibility'],
                'visibility_sigma': fit['visibility_sigma'],
                'mean': ensemble['mean'],
                'sigma': ensemble['std'],
                **self.point_details(value),
            })
            if logger is not None:
                logger.log_repeat(index, len(records), {'visibility': fit['visibility']})
        analysis = {'sweep': self.sweep_name, 'parameter': self.parameter, 'points': points}
        ensemble = reduce_ensemble([{'visibility': p['visibility']} for p in points])
        return ExperimentRun(records=records, analysis=analysis, ensemble=ensemble,
                             csv_columns={'sweep_values': sweep_column,
                                          'repeats': repeat_column})


class PowerSweep(SweepExperiment):
    """Sweep over scans.sweep_powers in mW."""

    kind = experiment_kinds.SWEEP_POWER
    sweep_name = 'power'
    parameter = 'pump_power_mw'

    def sweep_values(self) -> Tuple[float, ...]:
        return self.config.scans.sweep_powers

    def point_source(self, value: float) -> SourceConfig:
        return replace(self.config.source, pump_power=value)


class TemperatureSweep(SweepExperiment):
    """Sweep over scans.sweep_temperatures in C, reporting the tuned wavelengths."""

    kind = experiment_kinds.SWEEP_TEMPERATURE
    sweep_name = 'temperature'
    parameter = 'crystal_temperature_c'

    def sweep_values(self) -> Tuple[float, ...]:
        return self.config.scans.sweep_temperatures

    def point_source(self, value: float) -> SourceConfig:
        return replace(self.config.source, crystal_temperature=value)

    def point_details(self, value: float) -> Dict[str, float]:
        signal = degenerate_temperature_lookup(self.config.tuning, value)
        return {
            'signal_wavelength_nm': signal,
            'idler_wavelength_nm': idler_wavelength(self.config.source.pump_wavelength,
                                                    signal),
            'degenerate_pump_wavelength_nm': degenerate_pump_wavelength(signal),
            'bandwidth_nm': bandwidth_from_coherence_length(
                self.config.source.coherence_length, signal),
        }
