"""
Abstract class for all simulated experiments.

An experiment owns a measurement plan, simulates it once per repeat with
seeds derived from the master seed, analyzes every repeat and the pooled
records, and reduces the per-repeat headline statistics into an ensemble.
"""
import abc
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from sagnac_toolbox.detection.counting import CountRecord, simulate_counts
from sagnac_toolbox.detection.seeds import derive_seeds
from sagnac_toolbox.experiments.experiment_logger import ExperimentLogger
from sagnac_toolbox.quantum.polarization_optics import AnalyzerSetting
from sagnac_toolbox.source.sagnac_source import SourceConfig
from sagnac_toolbox.utils.config import ExperimentConfig


@dataclass(frozen=True)
class MeasurementPoint:
    """Probabilities and settings of one record to simulate."""

    p_joint: float
    marginal_a: float = 0.5
    marginal_b: float = 0.5
    setting_a: Optional[AnalyzerSetting] = None
    setting_b: Optional[AnalyzerSetting] = None
    gap_position: Optional[float] = None


@dataclass
class ExperimentRun:
    """Everything a run produces before it is written out.

    Attributes:
        records: All records, repeat by repeat.
        analysis: Analysis of the pooled records.
        ensemble: Mean and standard deviation of the headline statistics.
        extras: Further report sections.
        csv_columns: Extra per-record columns for the CSV writer.
    """

    records: List[CountRecord]
    analysis: Dict[str, Any]
    ensemble: Dict[str, Any]
    extras: Dict[str, Any] = field(default_factory=dict)
    csv_columns: Dict[str, Sequence] = field(default_factory=dict)


def reduce_ensemble(per_repeat: Sequence[Dict[str, float]]) -> Dict[str, Dict[str, Any]]:
    """Mean, sample standard deviation and values of each statistic.

    Args:
        per_repeat: Headline statistics of each repeat, in repeat order.

    Returns: Mapping from statistic to {'mean', 'std', 'values'}.
    """
    ensemble = {}
    for key in (per_repeat[0] if per_repeat else {}):
        values = np.array([stats[key] for stats in per_repeat], dtype=float)
        std = float(np.std(values, ddof=1)) if len(values) > 1 else 0.0
        ensemble[key] = {'mean': float(np.mean(values)), 'std': std,
                         'values': [float(v) for v in values]}
    return ensemble


class AbstractExperiment(metaclass=abc.ABCMeta):
    """A virtual experiment on the simulated source."""

    kind: str = ''

    def __init__(self, config: ExperimentConfig, seed_key: Tuple[int, ...] = ()):
        """Constructor.

        Args:
            config: The validated configuration.
            seed_key: Extra spawn key entries after the repeat index.
        """
        self.config = config
        self.seed_key = tuple(seed_key)

    @property
    def source(self) -> SourceConfig:
        """The source as it is set up for this experiment."""
        return self.config.source

    @property
    def progress_steps(self) -> int:
        """Number of logger steps of run."""
        return self.config.repeats

    @abc.abstractmethod
    def measurement_plan(self) -> List[MeasurementPoint]:
        """The records to simulate in one repeat, in order."""

    @abc.abstractmethod
    def analyze(self, records: Sequence[CountRecord]) -> Dict[str, Any]:
        """Analyze records into a JSON-ready mapping.

        Args:
            records: Records of this experiment, possibly from several repeats.

        Returns: The analysis section of the report.
        """

    @abc.abstractmethod
    def headline(self, analysis: Dict[str, Any]) -> Dict[str, float]:
        """The statistics tracked across repeats."""

    def extra_sections(self, analysis: Dict[str, Any]) -> Dict[str, Any]:
        """Report sections that need the configuration, not only the records."""
        return {}

    def simulate_repeat(self, repeat: int) -> List[CountRecord]:
        """Simulate the plan once, deterministic given (master seed, repeat).

        Args:
            repeat: Repeat index.

        Returns: One record per plan entry.
        """
        cfg = self.config
        plan = self.measurement_plan()
        seeds = derive_seeds(cfg.master_seed, len(plan), repeat, *self.seed_key)
        return [
            simulate_counts(
                point.p_joint, self.source, cfg.detector_a, cfg.detector_b,
                cfg.duration_per_point, seed,
                setting_a=point.setting_a, setting_b=point.setting_b,
                marginal_a=point.marginal_a, marginal_b=point.marginal_b,
                gap_position=point.gap_position,
            )
            for point, seed in zip(plan, seeds)
        ]

    def run(self, logger: Optional[ExperimentLogger] = None) -> ExperimentRun:
        """Simulate and analyze every repeat, then the pooled records.

        Args:
            logger: Optional progress logger.

        Returns: The run.
        """
        records: List[CountRecord] = []
        per_repeat = []
        for repeat in range(self.config.repeats):
            if logger is not None:
                logger.set_phase(f'Simulating repeat {repeat}')
            repeat_records = self.simulate_repeat(repeat)
            records.extend(repeat_records)
            stats = self.headline(self.analyze(repeat_records))
            per_repeat.append(stats)
            if logger is not None:
                logger.log_repeat(repeat, len(records), stats)
        if logger is not None:
            logger.set_phase('Analyzing')
        analysis = self.analyze(records)
        return ExperimentRun(records=records, analysis=analysis,
                             ensemble=reduce_ensemble(per_repeat),
                             extras=self.extra_sections(analysis))
