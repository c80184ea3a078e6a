"""
Run the fringe, CHSH and tomography pipeline over many master seeds with the
calibrated defaults and report mean +- standard error of each statistic.

    python scripts/evaluation/reproduce_characterization.py --num_seeds 25
"""
import argparse
from collections import defaultdict

import numpy as np

from sagnac_toolbox.constants import experiment_kinds
from sagnac_toolbox.experiments.runner import build_experiment
from sagnac_toolbox.utils.config import load_config, validate_config

###########################################################################
# %% The arguments.
###########################################################################
parser = argparse.ArgumentParser()
parser.add_argument('--num_seeds', type=int, default=25)
parser.add_argument('--first_seed', type=int, default=0)
parser.add_argument('--repeats', type=int, default=1)  # Repeats per seed.
parser.add_argument('overrides', nargs='*')  # Dotted key=value config overrides.
args = parser.parse_args()

###########################################################################
# %% Run the experiments.
###########################################################################
results = defaultdict(list)
for seed in range(args.first_seed, args.first_seed + args.num_seeds):
    for kind in (experiment_kinds.FRINGE, experiment_kinds.CHSH,
                 experiment_kinds.TOMOGRAPHY):
        raw = load_config(paper_defaults=True, overrides=[
            f'experiment={kind}', f'master_seed={seed}', f'repeats={args.repeats}',
            'show_pbar=false', *args.overrides])
        run = build_experiment(validate_config(raw)).run()
        for key, stats in run.ensemble.items():
            results[f'{kind}/{key}'].append(stats['mean'])

###########################################################################
# %% Display the averages.
###########################################################################
for k, d in results.items():
    mean = np.mean(d)
    err = np.std(d) / np.sqrt(len(d))
    print(f'{k}: {mean} +- {err}')
