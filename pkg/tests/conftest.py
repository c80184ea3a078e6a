"""
Shared fixtures: sources, detectors, exact-probability records and small
experiment configs.
"""
from dataclasses import replace
from typing import Callable, List

import pytest

from sagnac_toolbox.detection.counting import CountRecord, expected_record
from sagnac_toolbox.detection.detectors import DetectorConfig
from sagnac_toolbox.quantum.polarization_optics import tomography_settings
from sagnac_toolbox.quantum.qstate import DensityMatrix
from sagnac_toolbox.source.sagnac_source import SourceConfig
from sagnac_toolbox.utils.config import AnalysisConfig, ExperimentConfig, ScanConfig

WERNER_WEIGHTS = (0.25, 0.5, 0.9, 0.964)


@pytest.fixture
def calibrated_source() -> SourceConfig:
    return SourceConfig()


@pytest.fixture
def ideal_source() -> SourceConfig:
    return SourceConfig(balance=1.0, noise_p=1.0)


@pytest.fixture
def apd1() -> DetectorConfig:
    return DetectorConfig.apd1()


@pytest.fixture
def apd2() -> DetectorConfig:
    return DetectorConfig.apd2()


@pytest.fixture
def tomography_records() -> Callable[[DensityMatrix, float], List[CountRecord]]:
    """Noiseless records at the 16 tomography settings."""

    def build(rho: DensityMatrix, scale: float = 1e4) -> List[CountRecord]:
        return [expected_record(rho, setting_a, setting_b, scale)
                for _, setting_a, setting_b in tomography_settings()]

    return build


@pytest.fixture
def make_config(tmp_path) -> Callable[..., ExperimentConfig]:
    """Calibrated ExperimentConfig writing below tmp_path."""

    def build(experiment: str, **kwargs) -> ExperimentConfig:
        base = ExperimentConfig(name=experiment, experiment=experiment, repeats=2,
                                out_dir=str(tmp_path / 'runs'), digest='test')
        return replace(base, **kwargs)

    return build


@pytest.fixture
def fast_analysis() -> AnalysisConfig:
    return AnalysisConfig(tomography_restarts=1)


@pytest.fixture
def coarse_scans() -> ScanConfig:
    return ScanConfig(fringe_hwp_angles=tuple(float(a) for a in range(0, 91, 10)),
                      hom_gap_positions=tuple(round(-1 + 0.02 * i, 10) for i in range(101)))
