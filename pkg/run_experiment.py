"""
Main file to run a virtual experiment on the simulated Sagnac source.

    python run_experiment.py experiment=chsh master_seed=3 source=ideal
"""
import os

import hydra
from omegaconf import DictConfig, OmegaConf, open_dict

from sagnac_toolbox.experiments.runner import run_experiment
from sagnac_toolbox.utils.config import validate_config


@hydra.main(config_path='./example_configs', config_name='paper_defaults')
def run(cfg: DictConfig) -> float:
    """Run the experiment and return its first headline statistic."""
    with open_dict(cfg):
        # Hydra already moved into <out_dir>/<name>.
        cfg['out_dir'] = os.path.dirname(os.getcwd())
        cfg['name'] = os.path.basename(os.getcwd())
    config = validate_config(cfg)
    print(OmegaConf.to_yaml(cfg))
    outputs = run_experiment(config, cfg)
    ensemble = outputs.report['ensemble']
    for key, stats in ensemble.items():
        print(f'{key}: {stats["mean"]} +- {stats["std"]}')
    return next(iter(ensemble.values()))['mean'] if ensemble else 0.0


if __name__ == '__main__':
    run()
