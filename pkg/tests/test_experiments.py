"""
End to end experiment runs on the simulated source.
"""
import numpy as np
import pytest

from sagnac_toolbox.constants import calibration as cal
from sagnac_toolbox.experiments.abstract_experiment import reduce_ensemble
from sagnac_toolbox.experiments.fringe import diagonal_fringe
from sagnac_toolbox.experiments.runner import build_experiment
from sagnac_toolbox.utils.config import ScanConfig
from sagnac_toolbox.utils.errors import InvalidArgumentError


def test_ideal_source_gives_full_visibility(make_config, ideal_source, coarse_scans):
    run = build_experiment(make_config('fringe', source=ideal_source, scans=coarse_scans,
                                       duration_per_point=10000.0, repeats=1)).run()
    for fringe in run.analysis['fringes']:
        assert fringe['fit']['visibility'] > 0.995
    assert set(run.ensemble) == {'visibility_0', 'visibility_22.5'}


def test_fringe_reports_brightness(make_config, coarse_scans):
    run = build_experiment(make_config('fringe', scans=coarse_scans)).run()
    brightness = run.extras['brightness']
    assert brightness['bandwidth_nm'] == pytest.approx(2.416, abs=1e-3)
    assert brightness['pump_power_mw'] == cal.PUMP_POWER
    assert brightness['detected'] == pytest.approx(2.0, rel=0.1)
    assert brightness['inferred'] == pytest.approx(2.8e4, rel=0.1)


def test_fringe_without_diagonal_has_no_brightness(make_config, coarse_scans):
    scans = ScanConfig(fringe_hwp_angles=coarse_scans.fringe_hwp_angles,
                       fringe_fixed_hwp=(0.0,))
    run = build_experiment(make_config('fringe', scans=scans, repeats=1)).run()
    assert diagonal_fringe(run.analysis) is None
    assert run.extras == {}


def test_fringe_with_scanned_arm_a(make_config, coarse_scans):
    scans = ScanConfig(fringe_hwp_angles=coarse_scans.fringe_hwp_angles, fixed_arm='b')
    run = build_experiment(make_config('fringe', scans=scans, repeats=1)).run()
    assert run.analysis['fixed_arm'] == 'b'
    assert diagonal_fringe(run.analysis)['fit']['visibility'] == \
        pytest.approx(cal.NOISE_P, abs=0.03)


def test_hom_dip(make_config, coarse_scans):
    run = build_experiment(make_config('hom', scans=coarse_scans)).run()
    fit = run.analysis['fit']
    assert fit['visibility'] == pytest.approx(cal.HOM_VISIBILITY, abs=0.03)
    assert fit['coherence_length'] == pytest.approx(cal.COHERENCE_LENGTH, rel=0.1)
    assert run.analysis['bandwidth_nm'] == pytest.approx(2.4, rel=0.1)
    assert all(r.gap_position is not None for r in run.records)
    assert len(run.records) == 2 * len(coarse_scans.hom_gap_positions)


def test_runs_are_deterministic(make_config):
    first = build_experiment(make_config('chsh', master_seed=5)).run()
    again = build_experiment(make_config('chsh', master_seed=5)).run()
    other = build_experiment(make_config('chsh', master_seed=6)).run()
    assert first.records == again.records
    assert first.analysis == again.analysis
    assert first.records != other.records


def test_repeats_draw_fresh_seeds(make_config):
    run = build_experiment(make_config('chsh', repeats=3)).run()
    seeds = [r.rng_seed for r in run.records]
    assert len(set(seeds)) == len(seeds)
    assert len(run.ensemble['s']['values']) == 3


def test_power_sweep_is_flat(make_config, coarse_scans):
    run = build_experiment(make_config('sweep-power', scans=coarse_scans, repeats=5,
                                       duration_per_point=100.0)).run()
    points = run.analysis['points']
    assert [p['sweep_value'] for p in points] == [15.0, 30.0, 60.0, 90.0, 120.0]
    visibilities = [p['visibility'] for p in points]
    assert max(visibilities) - min(visibilities) < 0.02
    assert np.mean(visibilities) == pytest.approx(cal.NOISE_P, abs=0.02)
    assert all(p['sigma'] > 0 for p in points)
    assert len(run.csv_columns['sweep_values']) == len(run.records)


def test_temperature_sweep_follows_the_tuning_table(make_config, coarse_scans):
    run = build_experiment(make_config('sweep-temperature', scans=coarse_scans,
                                       repeats=1)).run()
    points = {p['sweep_value']: p for p in run.analysis['points']}
    for temperature, wavelength in cal.TUNING_TABLE:
        assert points[temperature]['signal_wavelength_nm'] == wavelength
    assert points[32.0]['idler_wavelength_nm'] == pytest.approx(1550.07, abs=0.01)
    assert points[15.0]['signal_wavelength_nm'] > cal.TUNING_TABLE[0][1]
    assert points[55.0]['signal_wavelength_nm'] < cal.TUNING_TABLE[-1][1]


def test_reduce_ensemble():
    ensemble = reduce_ensemble([{'s': 2.5}, {'s': 2.7}])
    assert ensemble['s']['mean'] == pytest.approx(2.6)
    assert ensemble['s']['std'] == pytest.approx(np.sqrt(0.02))
    assert reduce_ensemble([{'s': 2.5}])['s']['std'] == 0.0


def test_unknown_experiment(make_config):
    with pytest.raises(InvalidArgumentError):
        build_experiment(make_config('interferometry'))


def test_calibrated_results_over_seeds(make_config, fast_analysis):
    visibilities, bell, fidelities = [], [], []
    for seed in range(25):
        fringe = build_experiment(make_config('fringe', master_seed=seed, repeats=1)).run()
        visibilities.append(diagonal_fringe(fringe.analysis)['fit']['visibility'])
        chsh = build_experiment(make_config('chsh', master_seed=seed, repeats=1)).run()
        bell.append(chsh.analysis['s'])
        tomography = build_experiment(make_config('tomography', master_seed=seed, repeats=1,
                                                  analysis=fast_analysis)).run()
        fidelities.append(tomography.analysis['fidelity'])
    assert 0.944 <= np.mean(visibilities) <= 0.984
    assert 2.55 <= np.mean(bell) <= 2.83
    assert 0.914 <= np.mean(fidelities) <= 0.956
