"""
Command line interface.

    sagnac-toolbox simulate <experiment> [--config F | --paper-defaults] [key=value ...]
    sagnac-toolbox analyze <kind> --input counts.csv [--out report.json]
    sagnac-toolbox plot-data report.json [--kind K] [--out table.txt]
    sagnac-toolbox validate-config [--config F | --paper-defaults] [key=value ...]

Exit codes: 0 success, 1 invalid argument, 2 config error, 3 fit or
reconstruction error, 4 I/O or parse error.
"""
import argparse
import sys
from typing import List, Optional, Sequence

from omegaconf import DictConfig, OmegaConf

from sagnac_toolbox.constants import experiment_kinds
from sagnac_toolbox.experiments.runner import analyze_file, emit_plot_data, run_experiment
from sagnac_toolbox.utils.config import load_config, validate_config
from sagnac_toolbox.utils.errors import ConfigError, FitError, ParseError

EXIT_OK = 0
EXIT_INVALID_ARGUMENT = 1
EXIT_CONFIG = 2
EXIT_FIT = 3
EXIT_IO = 4


def _add_config_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--config', type=str, default=None, help='Flat YAML config file.')
    parser.add_argument('--paper-defaults', action='store_true',
                        help='Compose the packaged paper_defaults config.')
    parser.add_argument('--seed', type=int, default=None, help='Overrides master_seed.')
    parser.add_argument('--out-dir', type=str, default=None, help='Overrides out_dir.')
    parser.add_argument('--repeats', type=int, default=None, help='Overrides repeats.')
    parser.add_argument('overrides', nargs='*', help='Dotted key=value overrides.')


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='sagnac-toolbox')
    subparsers = parser.add_subparsers(dest='command', required=True)
    simulate = subparsers.add_parser('simulate', help='Run a virtual experiment.')
    simulate.add_argument('experiment', choices=experiment_kinds.ALL_KINDS)
    _add_config_arguments(simulate)
    analyze = subparsers.add_parser('analyze', help='Analyze a count file.')
    analyze.add_argument('kind', choices=experiment_kinds.FILE_KINDS)
    analyze.add_argument('--input', type=str, required=True)
    analyze.add_argument('--out', type=str, default=None)
    analyze.add_argument('--config', type=str, default=None,
                         help='Config supplying estimator settings.')
    plot = subparsers.add_parser('plot-data', help='Write the plot table of a report.')
    plot.add_argument('report', type=str)
    plot.add_argument('--kind', type=str, default=None)
    plot.add_argument('--out', type=str, default=None)
    validate = subparsers.add_parser('validate-config', help='Validate and print a config.')
    _add_config_arguments(validate)
    return parser


def _raw_config(args: argparse.Namespace, extra: Sequence[str] = ()) -> DictConfig:
    overrides: List[str] = list(extra)
    if args.seed is not None:
        overrides.append(f'master_seed={args.seed}')
    if args.out_dir is not None:
        overrides.append(f'out_dir={args.out_dir}')
    if args.repeats is not None:
        overrides.append(f'repeats={args.repeats}')
    overrides.extend(args.overrides)
    return load_config(args.config, paper_defaults=args.paper_defaults, overrides=overrides)


def _simulate(args: argparse.Namespace) -> None:
    raw = _raw_config(args, extra=[f'experiment={args.experiment}'])
    outputs = run_experiment(validate_config(raw), raw)
    print(f'Counts written to {outputs.counts_path}')
    print(f'Report written to {outputs.report_path}')


def _analyze(args: argparse.Namespace) -> None:
    config = None
    if args.config is not None:
        raw = load_config(args.config, overrides=[f'experiment={args.kind}'])
        config = validate_config(raw)
    print(f'Report written to {analyze_file(args.kind, args.input, args.out, config)}')


def _plot_data(args: argparse.Namespace) -> None:
    print(f'Plot data written to {emit_plot_data(args.report, args.kind, args.out)}')


def _validate_config(args: argparse.Namespace) -> None:
    raw = _raw_config(args)
    config = validate_config(raw)
    print(OmegaConf.to_yaml(raw))
    print(f'config_digest: {config.digest}')


COMMANDS = {
    'simulate': _simulate,
    'analyze': _analyze,
    'plot-data': _plot_data,
    'validate-config': _validate_config,
}


def parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse the command line, collecting key=value overrides wherever they appear.

    argparse binds an empty override list to the positional right after the
    experiment name, so overrides following the flags arrive as extras.
    """
    parser = build_parser()
    args, extras = parser.parse_known_args(argv)
    if extras:
        if not hasattr(args, 'overrides') or any('=' not in e or e.startswith('-')
                                                 for e in extras):
            parser.error(f'unrecognized arguments: {" ".join(extras)}')
        args.overrides = list(args.overrides) + extras
    return args


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except ConfigError as err:
        print(f'Config error: {err}', file=sys.stderr)
        return EXIT_CONFIG
    except FitError as err:
        print(f'Fit error: {err}', file=sys.stderr)
        return EXIT_FIT
    except (OSError, ParseError) as err:
        print(f'I/O error: {err}', file=sys.stderr)
        return EXIT_IO
    except ValueError as err:
        print(f'Invalid argument: {err}', file=sys.stderr)
        return EXIT_INVALID_ARGUMENT
    return EXIT_OK


if __name__ == '__main__':
    sys.exit(main())
