"""
Loading and validation of experiment configurations.

Configs are YAML, either a flat file or composed by hydra from the packaged
example_configs tree. Validation turns the resolved config into frozen
dataclasses and reports every problem as a ConfigError with a dotted path.
"""
import hashlib
import json
import os
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Mapping, Optional, Sequence, Tuple

import numpy as np
from hydra import compose, initialize_config_dir
from omegaconf import DictConfig, OmegaConf
from omegaconf.errors import OmegaConfBaseException

from sagnac_toolbox import SAGNAC_TOOLBOX_PATH
from sagnac_toolbox.constants import calibration as cal, experiment_kinds
from sagnac_toolbox.detection.detectors import DetectorConfig
from sagnac_toolbox.source.sagnac_source import SourceConfig
from sagnac_toolbox.source.tuning import EXTRAPOLATION_MARGIN, TuningCurve
from sagnac_toolbox.utils.errors import ConfigError, InvalidArgumentError

SCHEMA_VERSION = 1
CONFIG_DIR = os.path.join(SAGNAC_TOOLBOX_PATH, 'example_configs')
PAPER_DEFAULTS = 'paper_defaults'
# Keys that only steer where and how a run is logged, left out of the digest.
NON_SCIENTIFIC_KEYS = ('out_dir', 'record_tensorboard', 'show_pbar', 'hydra')


@dataclass(frozen=True)
class ScanConfig:
    """Scan grids and HOM setup. Angles in degrees, positions in mm."""

    fringe_hwp_angles: Tuple[float, ...] = tuple(float(a) for a in range(0, 91, 5))
    fringe_fixed_hwp: Tuple[float, ...] = (0.0, 22.5)
    fixed_arm: str = 'a'
    hom_gap_positions: Tuple[float, ...] = tuple(
        float(x) for x in np.round(np.linspace(-1, 1, int(round(2 / cal.HOM_STEP)) + 1), 10))
    hom_center: float = 0.0
    hom_visibility: float = cal.HOM_VISIBILITY
    hom_pump_power: float = cal.HOM_PUMP_POWER
    sweep_powers: Tuple[float, ...] = (15.0, 30.0, 60.0, 90.0, 120.0)
    sweep_temperatures: Tuple[float, ...] = (15.0, 17.5, 27.0, 32.0, 41.0, 51.0, 55.0)


@dataclass(frozen=True)
class AnalysisConfig:
    tomography_restarts: int = 3
    subtract_accidentals: bool = False
    tomography_seed: int = 0


@dataclass(frozen=True)
class ExperimentConfig:
    """A validated experiment configuration.

    Attributes:
        name: Name of the run.
        experiment: One of experiment_kinds.ALL_KINDS.
        master_seed: Seed every record seed is derived from.
        duration_per_point: Accumulation time per record in s.
        repeats: Number of seed-ensemble repetitions.
        out_dir: Directory receiving the outputs.
        source: The source.
        tuning: The temperature tuning calibration.
        detector_a: Detector on arm a.
        detector_b: Detector on arm b.
        scans: Scan grids.
        analysis: Estimator settings.
        record_tensorboard: Whether to also log to tensorboard.
        show_pbar: Whether to show progress bars.
        digest: sha256 of the canonical scientific part of the config.
    """

    name: str
    experiment: str
    master_seed: int = 0
    duration_per_point: float = cal.MEASUREMENT_TIME
    repeats: int = 10
    out_dir: str = 'runs'
    source: SourceConfig = field(default_factory=SourceConfig)
    tuning: TuningCurve = field(default_factory=TuningCurve)
    detector_a: DetectorConfig = field(default_factory=DetectorConfig.apd1)
    detector_b: DetectorConfig = field(default_factory=DetectorConfig.apd2)
    scans: ScanConfig = field(default_factory=ScanConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)
    record_tensorboard: bool = False
    show_pbar: bool = False
    digest: str = ''

    @property
    def run_dir(self) -> str:
        return os.path.join(self.out_dir, self.name)


def load_config(
    path: Optional[str] = None,
    paper_defaults: bool = False,
    overrides: Sequence[str] = (),
) -> DictConfig:
    """Load a raw config and apply key=value overrides.

    Args:
        path: A flat YAML config file.
        paper_defaults: Compose the packaged paper_defaults config instead.
        overrides: Dotted key=value overrides, e.g. source.noise_p=0.9.

    Returns: The merged, unvalidated config.
    """
    if path is not None and paper_defaults:
        raise ConfigError('config', 'give either a config file or --paper-defaults')
    try:
        if path is not None:
            if not os.path.isfile(path):
                raise ConfigError('config', f'no config file at {path}')
            cfg = OmegaConf.load(path)
        elif paper_defaults:
            with initialize_config_dir(config_dir=CONFIG_DIR, job_name='sagnac_toolbox'):
                cfg = compose(config_name=PAPER_DEFAULTS)
        else:
            raise ConfigError('config', 'a config file or --paper-defaults is required')
        OmegaConf.set_struct(cfg, False)
        if overrides:
            cfg = OmegaConf.merge(cfg, OmegaConf.from_dotlist(list(overrides)))
    except OmegaConfBaseException as err:
        raise ConfigError('config', str(err)) from err
    if not isinstance(cfg, DictConfig):
        raise ConfigError('config', 'top level of the config must be a mapping')
    return cfg


def _check_keys(section: Mapping, allowed: Sequence[str], path: str) -> None:
    for key in section:
        if key not in allowed:
            where = f'{path}.{key}' if path else str(key)
            raise ConfigError(where, 'unknown key')


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f'expected a number, got {value!r}')
    if not np.isfinite(value):
        raise ConfigError(path, f'must be finite, got {value}')
    return float(value)


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f'expected an integer, got {value!r}')
    return int(value)


def _boolean(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(path, f'expected true or false, got {value!r}')
    return value


def expand_grid(value: Any, path: str, monotonic: bool = True) -> Tuple[float, ...]:
    """A grid given as a list or as {start, stop, step} with inclusive stop.

    Args:
        value: The raw grid.
        path: Dotted path for errors.
        monotonic: Require strictly increasing or decreasing values.

    Returns: The grid values.
    """
    if isinstance(value, Mapping):
        _check_keys(value, ('start', 'stop', 'step'), path)
        for key in ('start', 'stop', 'step'):
            if key not in value:
                raise ConfigError(f'{path}.{key}', 'missing')
        start = _number(value['start'], f'{path}.start')
        stop = _number(value['stop'], f'{path}.stop')
        step = _number(value['step'], f'{path}.step')
        if step == 0 or (stop - start) * step < 0:
            raise ConfigError(f'{path}.step', f'step {step} does not lead from {start} to {stop}')
        num = int(np.floor((stop - start) / step + 1e-9)) + 1
        grid = tuple(float(v) for v in np.round(start + step * np.arange(num), 10))
    elif isinstance(value, (list, tuple)):
        grid = tuple(_number(v, f'{path}[{i}]') for i, v in enumerate(value))
    else:
        raise ConfigError(path, f'expected a list or a start/stop/step mapping, got {value!r}')
    if not grid:
        raise ConfigError(path, 'grid is empty')
    if monotonic and len(grid) > 1:
        diffs = np.diff(grid)
        if not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ConfigError(path, 'grid must be strictly monotonic')
    return grid


def _dataclass_section(cls, raw: Any, path: str, base=None):
    if not isinstance(raw, Mapping):
        raise ConfigError(path, f'expected a mapping, got {raw!r}')
    allowed = list(cls.__dataclass_fields__)
    _check_keys(raw, allowed, path)
    values = {key: _number(val, f'{path}.{key}') for key, val in raw.items()}
    try:
        if base is not None:
            return replace(base, **values)
        return cls(**values)
    except InvalidArgumentError as err:
        raise ConfigError(f'{path}.{err.field}', str(err).split(': ', 1)[-1]) from err


def _source(raw: Any) -> SourceConfig:
    source = _dataclass_section(SourceConfig, raw, 'source', base=SourceConfig())
    if not source.pump_power > 0:
        raise ConfigError('source.pump_power', f'must be > 0, got {source.pump_power}')
    return source


def _detector(raw: Any, path: str, default: DetectorConfig) -> DetectorConfig:
    detector = _dataclass_section(DetectorConfig, raw, path, base=default)
    if not detector.efficiency > 0:
        raise ConfigError(f'{path}.efficiency', f'must be > 0, got {detector.efficiency}')
    return detector


def _tuning(raw: Any) -> TuningCurve:
    if raw is None:
        return TuningCurve()
    if not isinstance(raw, Mapping):
        raise ConfigError('tuning', f'expected a mapping, got {raw!r}')
    _check_keys(raw, ('temperatures', 'wavelengths'), 'tuning')
    temps = expand_grid(raw.get('temperatures', []), 'tuning.temperatures')
    wavelengths = expand_grid(raw.get('wavelengths', []), 'tuning.wavelengths',
                              monotonic=False)
    try:
        return TuningCurve.from_lists(temps, wavelengths)
    except InvalidArgumentError as err:
        raise ConfigError('tuning.wavelengths', str(err)) from err


def _scans(raw: Any) -> ScanConfig:
    if raw is None:
        return ScanConfig()
    if not isinstance(raw, Mapping):
        raise ConfigError('scans', f'expected a mapping, got {raw!r}')
    allowed = list(ScanConfig.__dataclass_fields__)
    _check_keys(raw, allowed, 'scans')
    values: Dict[str, Any] = {}
    for key in ('fringe_hwp_angles', 'hom_gap_positions', 'sweep_powers',
                'sweep_temperatures', 'fringe_fixed_hwp'):
        if key in raw:
            values[key] = expand_grid(raw[key], f'scans.{key}')
    for key in ('hom_center', 'hom_visibility', 'hom_pump_power'):
        if key in raw:
            values[key] = _number(raw[key], f'scans.{key}')
    if 'fixed_arm' in raw:
        if raw['fixed_arm'] not in ('a', 'b'):
            raise ConfigError('scans.fixed_arm', f"must be 'a' or 'b', got {raw['fixed_arm']!r}")
        values['fixed_arm'] = raw['fixed_arm']
    scans = ScanConfig(**values)
    if not 0.0 <= scans.hom_visibility <= 1.0:
        raise ConfigError('scans.hom_visibility',
                          f'must lie in [0, 1], got {scans.hom_visibility}')
    if not scans.hom_pump_power > 0:
        raise ConfigError('scans.hom_pump_power', f'must be > 0, got {scans.hom_pump_power}')
    if any(p <= 0 for p in scans.sweep_powers):
        raise ConfigError('scans.sweep_powers', 'powers must be > 0')
    return scans


def _analysis(raw: Any) -> AnalysisConfig:
    if raw is None:
        return AnalysisConfig()
    if not isinstance(raw, Mapping):
        raise ConfigError('analysis', f'expected a mapping, got {raw!r}')
    _check_keys(raw, list(AnalysisConfig.__dataclass_fields__), 'analysis')
    values: Dict[str, Any] = {}
    if 'tomography_restarts' in raw:
        values['tomography_restarts'] = _integer(raw['tomography_restarts'],
                                                 'analysis.tomography_restarts')
        if values['tomography_restarts'] < 1:
            raise ConfigError('analysis.tomography_restarts', 'must be >= 1')
    if 'subtract_accidentals' in raw:
        values['subtract_accidentals'] = _boolean(raw['subtract_accidentals'],
                                                  'analysis.subtract_accidentals')
    if 'tomography_seed' in raw:
        values['tomography_seed'] = _integer(raw['tomography_seed'], 'analysis.tomography_seed')
        if values['tomography_seed'] < 0:
            raise ConfigError('analysis.tomography_seed', 'must be >= 0')
    return AnalysisConfig(**values)


def _check_tuning_range(tuning: TuningCurve, temperatures: Sequence[float]) -> None:
    low = tuning.temperatures.min() - EXTRAPOLATION_MARGIN
    high = tuning.temperatures.max() + EXTRAPOLATION_MARGIN
    for i, temperature in enumerate(temperatures):
        if not low <= temperature <= high:
            raise ConfigError(f'scans.sweep_temperatures[{i}]',
                              f'{temperature} C is outside the tuning range [{low}, {high}] C')


def config_digest(container: Mapping) -> str:
    """sha256 of the canonical JSON of the scientific config keys."""
    scientific = {k: v for k, v in container.items() if k not in NON_SCIENTIFIC_KEYS}
    canonical = json.dumps(scientific, sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


TOP_LEVEL_KEYS = ('schema_version', 'name', 'experiment', 'master_seed',
                  'duration_per_point', 'repeats', 'out_dir', 'record_tensorboard',
                  'show_pbar', 'source', 'tuning', 'detector_a', 'detector_b', 'scans',
                  'analysis', 'hydra')


def validate_config(cfg: DictConfig) -> ExperimentConfig:
    """Validate a raw config.

    Args:
        cfg: Config as returned by load_config.

    Returns: The validated config.
    """
    try:
        container = OmegaConf.to_container(cfg, resolve=True)
    except OmegaConfBaseException as err:
        raise ConfigError('config', str(err)) from err
    _check_keys(container, TOP_LEVEL_KEYS, '')
    if container.get('schema_version') != SCHEMA_VERSION:
        raise ConfigError('schema_version',
                          f'expected {SCHEMA_VERSION}, got {container.get("schema_version")!r}')
    experiment = container.get('experiment')
    if experiment not in experiment_kinds.ALL_KINDS:
        raise ConfigError('experiment', f'must be one of {experiment_kinds.ALL_KINDS}, '
                                        f'got {experiment!r}')
    name = container.get('name', experiment)
    if not isinstance(name, str) or not name:
        raise ConfigError('name', f'expected a non-empty string, got {name!r}')
    master_seed = _integer(container.get('master_seed', 0), 'master_seed')
    if master_seed < 0:
        raise ConfigError('master_seed', f'must be >= 0, got {master_seed}')
    duration = _number(container.get('duration_per_point', cal.MEASUREMENT_TIME),
                       'duration_per_point')
    if not duration > 0:
        raise ConfigError('duration_per_point', f'must be > 0, got {duration}')
    repeats = _integer(container.get('repeats', 10), 'repeats')
    if repeats < 1:
        raise ConfigError('repeats', f'must be >= 1, got {repeats}')
    out_dir = container.get('out_dir', 'runs')
    if not isinstance(out_dir, str):
        raise ConfigError('out_dir', f'expected a path, got {out_dir!r}')
    if 'source' not in container:
        raise ConfigError('source', 'missing')
    config = ExperimentConfig(
        name=name,
        experiment=experiment,
        master_seed=master_seed,
        duration_per_point=duration,
        repeats=repeats,
        out_dir=out_dir,
        source=_source(container['source']),
        tuning=_tuning(container.get('tuning')),
        detector_a=_detector(container.get('detector_a', {}), 'detector_a',
                             DetectorConfig.apd1()),
        detector_b=_detector(container.get('detector_b', {}), 'detector_b',
                             DetectorConfig.apd2()),
        scans=_scans(container.get('scans')),
        analysis=_analysis(container.get('analysis')),
        record_tensorboard=_boolean(container.get('record_tensorboard', False),
                                    'record_tensorboard'),
        show_pbar=_boolean(container.get('show_pbar', False), 'show_pbar'),
        digest=config_digest(container),
    )
    if experiment == experiment_kinds.SWEEP_TEMPERATURE:
        _check_tuning_range(config.tuning, config.scans.sweep_temperatures)
    return config
