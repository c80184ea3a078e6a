"""
Orchestration of runs, offline analysis of count files and plot data export.

A run directory <out_dir>/<name> receives config.yaml, counts.csv,
report.json and the logger's stats.txt.
"""
import hashlib
import os
from dataclasses import dataclass, replace
from typing import Any, Dict, Optional

from hydra.utils import get_class
from omegaconf import DictConfig, OmegaConf

from sagnac_toolbox import __version__
from sagnac_toolbox.constants import experiment_kinds
from sagnac_toolbox.experiments.abstract_experiment import AbstractExperiment
from sagnac_toolbox.experiments.experiment_logger import ExperimentLogger
from sagnac_toolbox.utils.config import SCHEMA_VERSION, ExperimentConfig
from sagnac_toolbox.utils.errors import InvalidArgumentError, OutputError
from sagnac_toolbox.utils.storage.atomic import atomic_write_text, dump_json, read_json, write_json
from sagnac_toolbox.utils.storage.plot_data import render_plot_data
from sagnac_toolbox.utils.storage.records_io import read_records, records_to_csv

COUNTS_FILE = 'counts.csv'
REPORT_FILE = 'report.json'
CONFIG_FILE = 'config.yaml'
SEED_SCHEME = ('SeedSequence(master_seed, spawn_key=(repeat, *point_key))'
               '.spawn(num_records)[record].generate_state(1)[0]')


@dataclass
class RunOutputs:
    counts_path: str
    report_path: str
    report: Dict[str, Any]


def build_experiment(config: ExperimentConfig) -> AbstractExperiment:
    """Instantiate the experiment class registered for config.experiment."""
    if config.experiment not in experiment_kinds.EXPERIMENT_TARGETS:
        raise InvalidArgumentError('experiment', f'unknown experiment {config.experiment!r}')
    return get_class(experiment_kinds.EXPERIMENT_TARGETS[config.experiment])(config)


def run_experiment(
    config: ExperimentConfig,
    raw_config: Optional[DictConfig] = None,
) -> RunOutputs:
    """Simulate, analyze and write one experiment.

    Every output is serialized before the first file is written, each file
    then goes to disk with write-then-rename.

    Args:
        config: The validated configuration.
        raw_config: The config as loaded, saved next to the outputs.

    Returns: Paths of the counts file and report, and the report itself.
    """
    run_dir = config.run_dir
    try:
        os.makedirs(run_dir, exist_ok=True)
    except OSError as err:
        raise OutputError(f'Cannot create run directory {run_dir}: {err}') from err
    experiment = build_experiment(config)
    logger = ExperimentLogger(run_dir, record_tensorboard=config.record_tensorboard,
                              show_pbar=config.show_pbar)
    logger.start(experiment.progress_steps)
    try:
        run = experiment.run(logger)
        logger.set_phase('Writing')
        report = {
            'schema_version': SCHEMA_VERSION,
            'kind': config.experiment,
            'provenance': {
                'config_digest': config.digest,
                'version': __version__,
                'master_seed': config.master_seed,
                'repeats': config.repeats,
                'seed_scheme': SEED_SCHEME,
            },
            'analysis': run.analysis,
            'ensemble': run.ensemble,
            **run.extras,
        }
        try:
            report_text = dump_json(report)
        except ValueError as err:
            raise OutputError(f'Report of {config.name} is not serializable: {err}') from err
        counts_text = records_to_csv(run.records, **run.csv_columns)
        if raw_config is not None:
            atomic_write_text(os.path.join(run_dir, CONFIG_FILE), OmegaConf.to_yaml(raw_config))
        counts_path = os.path.join(run_dir, COUNTS_FILE)
        atomic_write_text(counts_path, counts_text)
        report_path = os.path.join(run_dir, REPORT_FILE)
        atomic_write_text(report_path, report_text)
    finally:
        logger.end()
    return RunOutputs(counts_path=counts_path, report_path=report_path, report=report)


def _file_digest(path: str) -> str:
    with open(path, 'rb') as f:
        return hashlib.sha256(f.read()).hexdigest()


def analyze_records_file(
    kind: str,
    path: str,
    config: Optional[ExperimentConfig] = None,
) -> Dict[str, Any]:
    """Analyze an external count file into a report.

    Args:
        kind: One of experiment_kinds.FILE_KINDS.
        path: The CSV file.
        config: Config supplying estimator settings, defaults otherwise.

    Returns: The report.
    """
    if kind not in experiment_kinds.FILE_KINDS:
        raise InvalidArgumentError('kind', f'must be one of {experiment_kinds.FILE_KINDS}, '
                                           f'got {kind!r}')
    records = read_records(path, hom=(kind == experiment_kinds.HOM))
    if config is None:
        config = ExperimentConfig(name=kind, experiment=kind)
    else:
        config = replace(config, experiment=kind)
    analysis = build_experiment(config).analyze(records)
    return {
        'schema_version': SCHEMA_VERSION,
        'kind': kind,
        'provenance': {
            'input_file': os.path.basename(path),
            'input_digest': _file_digest(path),
            'version': __version__,
        },
        'analysis': analysis,
    }


def analyze_file(
    kind: str,
    path: str,
    out_path: Optional[str] = None,
    config: Optional[ExperimentConfig] = None,
) -> str:
    """Analyze a count file and write the report.

    Args:
        kind: One of experiment_kinds.FILE_KINDS.
        path: The CSV file.
        out_path: Report destination, defaults to <path stem>_report.json.
        config: Config supplying estimator settings.

    Returns: The report path.
    """
    report = analyze_records_file(kind, path, config)
    if out_path is None:
        out_path = os.path.splitext(path)[0] + '_report.json'
    return write_json(out_path, report)


def emit_plot_data(
    report_path: str,
    kind: Optional[str] = None,
    out_path: Optional[str] = None,
) -> str:
    """Write the plot table of a report.

    Args:
        report_path: The JSON report.
        kind: Expected kind of the report.
        out_path: Destination, defaults to <report stem>_plot.txt.

    Returns: The table path.
    """
    text = render_plot_data(read_json(report_path), kind)
    if out_path is None:
        out_path = os.path.splitext(report_path)[0] + '_plot.txt'
    atomic_write_text(out_path, text)
    return out_path
