from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sagnac_toolbox.constants import calibration as cal
from sagnac_toolbox.detection.counting import (
    CountRecord,
    expected_record,
    poisson_draw,
    simulate_counts,
)
from sagnac_toolbox.detection.detectors import (
    DetectorConfig,
    coincidence_window,
    expected_rates,
)
from sagnac_toolbox.detection.seeds import derive_seeds
from sagnac_toolbox.quantum.polarization_optics import AnalyzerSetting
from sagnac_toolbox.quantum.qstate import phi_plus, pure_density
from sagnac_toolbox.source.sagnac_source import SourceConfig
from sagnac_toolbox.utils.errors import InvalidArgumentError


def test_dark_rates(apd1, apd2):
    assert apd1.dark_rate == pytest.approx(504.0)
    assert apd2.dark_rate == pytest.approx(500.0)


def test_coincidence_window_is_wider_gate(apd1, apd2):
    assert coincidence_window(apd1, apd2) == pytest.approx(2.5e-9)


@pytest.mark.parametrize('field, value', [
    ('efficiency', 1.5),
    ('gate_window', 0.0),
    ('dark_prob_per_gate', 1.0),
    ('duty_cycle', 0.0),
    ('trigger_rate', -1.0),
])
def test_detector_rejects_bad_values(field, value):
    with pytest.raises(InvalidArgumentError) as err:
        DetectorConfig(**{field: value})
    assert err.value.field == field


def test_calibrated_coincidence_rate(calibrated_source, apd1, apd2):
    rates = expected_rates(0.5, calibrated_source, apd1, apd2)
    assert rates.true_coinc == pytest.approx(cal.COINCIDENCE_RATE, rel=1e-3)
    assert rates.accidental_coinc < 0.01 * rates.true_coinc
    assert rates.coincidences == rates.true_coinc + rates.accidental_coinc


def test_darks_only_when_pump_is_off(apd1, apd2):
    rates = expected_rates(0.5, SourceConfig(pump_power=0.0), apd1, apd2)
    assert rates.true_coinc == 0.0
    assert rates.singles_a == pytest.approx(apd1.dark_rate)
    assert rates.accidental_coinc == pytest.approx(
        apd1.dark_rate * apd2.dark_rate * coincidence_window(apd1, apd2))


def test_blocked_detector_sees_only_darks(calibrated_source, apd2):
    blocked = DetectorConfig(efficiency=0.0)
    rates = expected_rates(0.5, calibrated_source, blocked, apd2)
    assert rates.true_coinc == 0.0
    assert rates.singles_a == pytest.approx(blocked.dark_rate)


def test_expected_rates_rejects_bad_probability(calibrated_source, apd1, apd2):
    with pytest.raises(InvalidArgumentError):
        expected_rates(1.5, calibrated_source, apd1, apd2)


def test_seeds_are_deterministic_and_distinct():
    seeds = derive_seeds(7, 50, 0)
    assert seeds == derive_seeds(7, 50, 0)
    assert len(set(seeds)) == 50
    assert seeds != derive_seeds(7, 50, 1)
    assert seeds != derive_seeds(8, 50, 0)
    assert derive_seeds(7, 10, 0) == seeds[:10]


def test_seeds_reject_negative_master():
    with pytest.raises(InvalidArgumentError):
        derive_seeds(-1, 3)


def test_simulate_counts_is_deterministic(calibrated_source, apd1, apd2):
    first = simulate_counts(0.3, calibrated_source, apd1, apd2, 10.0, seed=1234)
    again = simulate_counts(0.3, calibrated_source, apd1, apd2, 10.0, seed=1234)
    other = simulate_counts(0.3, calibrated_source, apd1, apd2, 10.0, seed=1235)
    assert first == again
    assert first != other
    assert first.rng_seed == 1234


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0, max_value=1), st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_coincidences_never_exceed_singles(p_joint, seed):
    record = simulate_counts(p_joint, SourceConfig(), DetectorConfig.apd1(),
                             DetectorConfig.apd2(), 10.0, seed)
    assert 0 <= record.coincidences <= min(record.singles_a, record.singles_b)
    assert float(record.coincidences).is_integer()


def test_zero_duration_gives_zero_counts(calibrated_source, apd1, apd2):
    record = simulate_counts(0.5, calibrated_source, apd1, apd2, 0.0, seed=3)
    assert (record.singles_a, record.singles_b, record.coincidences) == (0, 0, 0)


def test_negative_duration_rejected(calibrated_source, apd1, apd2):
    with pytest.raises(InvalidArgumentError):
        simulate_counts(0.5, calibrated_source, apd1, apd2, -1.0, seed=3)


def test_mean_coincidences_match_rates(calibrated_source, apd1, apd2):
    draws = [simulate_counts(0.5, calibrated_source, apd1, apd2, 10.0, seed).coincidences
             for seed in derive_seeds(0, 10000)]
    expected = 10.0 * expected_rates(0.5, calibrated_source, apd1, apd2).coincidences
    assert np.mean(draws) == pytest.approx(expected, rel=0.01)
    assert np.var(draws) == pytest.approx(expected, rel=0.06)


def test_poisson_draw_large_means_use_normal_approximation():
    rng = np.random.default_rng(0)
    draws = poisson_draw(np.full(2000, 4e6), rng)
    assert np.mean(draws) == pytest.approx(4e6, rel=1e-3)
    assert np.std(draws) == pytest.approx(2e3, rel=0.1)
    assert np.all(draws == np.rint(draws))


def test_poisson_draw_rejects_negative_means():
    with pytest.raises(InvalidArgumentError):
        poisson_draw(np.array([-1.0]), np.random.default_rng(0))


def test_count_record_invariants():
    with pytest.raises(InvalidArgumentError):
        CountRecord(None, None, 1.0, singles_a=5, singles_b=10, coincidences=6)
    with pytest.raises(InvalidArgumentError):
        CountRecord(None, None, -1.0, singles_a=5, singles_b=10, coincidences=1)


def test_expected_record_is_proportional_to_probability():
    rho = pure_density(phi_plus())
    record = expected_record(rho, AnalyzerSetting.linear(0.0), AnalyzerSetting.linear(90.0),
                             scale=1000.0)
    assert record.coincidences == pytest.approx(500.0)
    assert record.singles_a == pytest.approx(500.0)


@given(st.floats(min_value=0.01, max_value=0.5), st.floats(min_value=0.01, max_value=0.5))
def test_rates_grow_with_efficiency(low, step):
    source = SourceConfig()
    slow = DetectorConfig.apd1()
    fast = replace(slow, efficiency=low + step)
    slow = replace(slow, efficiency=low)
    before = expected_rates(0.3, source, slow, slow)
    after = expected_rates(0.3, source, fast, fast)
    assert after.singles_a > before.singles_a
    assert after.singles_b > before.singles_b
    assert after.true_coinc > before.true_coinc
    assert after.coincidences > before.coincidences


@pytest.mark.parametrize('power', [5.0, 30.0, 60.0])
def test_accidentals_scale_with_power_squared(power):
    quiet_a = replace(DetectorConfig.apd1(), dark_prob_per_gate=0.0)
    quiet_b = replace(DetectorConfig.apd2(), dark_prob_per_gate=0.0)
    base = expected_rates(0.5, SourceConfig(pump_power=power), quiet_a, quiet_b)
    doubled = expected_rates(0.5, SourceConfig(pump_power=2 * power), quiet_a, quiet_b)
    assert doubled.accidental_coinc == pytest.approx(4 * base.accidental_coinc, rel=1e-12)
    assert doubled.true_coinc == pytest.approx(2 * base.true_coinc, rel=1e-12)


def test_poisson_variance_matches_mean():
    draws = poisson_draw(np.full(20000, 150.0), np.random.default_rng(7))
    assert np.mean(draws) == pytest.approx(150.0, rel=0.01)
    assert np.var(draws) == pytest.approx(150.0, rel=0.06)
