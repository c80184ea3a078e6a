import numpy as np
import pytest

from sagnac_toolbox.analysis import tomography
from sagnac_toolbox.analysis.tomography import (
    GRADIENT_TOLERANCE,
    density_from_params,
    linear_inversion,
    mle_tomography,
    mle_tomography_with_diagnostics,
    net_coincidences,
    params_from_density,
)
from sagnac_toolbox.detection.counting import CountRecord, simulate_counts
from sagnac_toolbox.detection.seeds import derive_seeds
from sagnac_toolbox.quantum.polarization_optics import (
    joint_probability,
    single_probability,
    tomography_settings,
)
from sagnac_toolbox.quantum.qstate import (
    fidelity,
    is_physical,
    maximally_mixed,
    mix_with_white_noise,
    phi_plus,
    pure_density,
    purity,
)
from sagnac_toolbox.source.sagnac_source import SourceConfig, output_state
from sagnac_toolbox.utils.errors import FitError, InvalidArgumentError, ReconstructionError

from conftest import WERNER_WEIGHTS


def _poisson_records(rho, scale, seed):
    rng = np.random.default_rng(seed)
    records = []
    for _, a, b in tomography_settings():
        coincidences = float(rng.poisson(scale * joint_probability(rho, a, b)))
        records.append(CountRecord(a, b, 1.0, max(scale, coincidences),
                                   max(scale, coincidences), coincidences))
    return records


@pytest.mark.parametrize('scale', [1e4, 1e7])
def test_pure_state_is_recovered(tomography_records, scale):
    result = mle_tomography_with_diagnostics(
        tomography_records(pure_density(phi_plus()), scale=scale), restarts=1)
    assert is_physical(result.rho)
    assert fidelity(result.rho, phi_plus()) >= 0.9999
    assert result.diagnostics.grad_norm <= GRADIENT_TOLERANCE


def test_infidelity_falls_as_one_over_counts():
    truth = pure_density(phi_plus())
    scales = np.array([1e3, 1e4, 1e5, 1e6])
    infidelity = [np.mean([1 - fidelity(mle_tomography(_poisson_records(truth, scale, seed),
                                                       restarts=1), phi_plus())
                           for seed in range(8)])
                  for scale in scales]
    slope, _ = np.polyfit(np.log(1 / scales), np.log(infidelity), 1)
    assert 0.6 <= slope <= 1.4
    assert np.all(np.diff(infidelity) < 0)
    assert infidelity[-1] <= 20 / scales[-1]


def test_maximally_mixed_counts(tomography_records):
    rho = mle_tomography(tomography_records(maximally_mixed()), restarts=1)
    assert purity(rho) == pytest.approx(0.25, abs=1e-6)


def test_stalled_optimizer_raises(tomography_records, monkeypatch):
    monkeypatch.setattr(tomography, 'GRADIENT_TOLERANCE', 0.0)
    monkeypatch.setattr(tomography, 'MAX_ROUNDS', 2)
    records = tomography_records(mix_with_white_noise(phi_plus(), 0.8), scale=800.0)
    with pytest.raises(ReconstructionError) as err:
        mle_tomography(records, restarts=2)
    assert err.value.iterations >= 0


@pytest.mark.parametrize('p', WERNER_WEIGHTS)
def test_werner_fidelity_chain(tomography_records, p):
    rho = mle_tomography(tomography_records(mix_with_white_noise(phi_plus(), p)), restarts=1)
    assert fidelity(rho, phi_plus()) == pytest.approx((3 * p + 1) / 4, abs=1e-4)


def test_linear_inversion_is_exact_on_exact_counts(tomography_records):
    truth = output_state(SourceConfig(theta=0.7))
    estimate = linear_inversion(tomography_records(truth))
    np.testing.assert_allclose(estimate.matrix, truth.matrix, atol=1e-9)


def test_objective_decreases_monotonically(tomography_records):
    result = mle_tomography_with_diagnostics(
        tomography_records(mix_with_white_noise(phi_plus(), 0.9), scale=1500.0), restarts=1)
    history = np.array(result.diagnostics.history)
    assert len(history) >= 2
    assert np.all(np.diff(history) <= 1e-9 * np.abs(history[:-1]))
    assert result.diagnostics.nll == pytest.approx(history[-1])


def test_noisy_reconstruction_is_physical(calibrated_source, apd1, apd2):
    rho = output_state(calibrated_source)
    settings = tomography_settings()
    records = [
        simulate_counts(joint_probability(rho, a, b), calibrated_source, apd1, apd2, 10.0, seed,
                        setting_a=a, setting_b=b,
                        marginal_a=single_probability(rho, a, 'a'),
                        marginal_b=single_probability(rho, b, 'b'))
        for (_, a, b), seed in zip(settings, derive_seeds(11, len(settings)))
    ]
    result = mle_tomography_with_diagnostics(records, restarts=3, seed=4)
    assert is_physical(result.rho)
    assert result.diagnostics.restarts == 3
    assert fidelity(result.rho, phi_plus()) == pytest.approx(0.935, abs=0.05)


def test_restarts_are_seeded(tomography_records):
    records = tomography_records(mix_with_white_noise(phi_plus(), 0.8), scale=800.0)
    first = mle_tomography(records, restarts=3, seed=2)
    again = mle_tomography(records, restarts=3, seed=2)
    np.testing.assert_array_equal(first.matrix, again.matrix)


def test_cholesky_parameters_round_trip():
    truth = mix_with_white_noise(phi_plus(), 0.7).matrix
    np.testing.assert_allclose(density_from_params(params_from_density(truth)), truth,
                               atol=1e-12)


def test_accidental_subtraction():
    record = CountRecord(None, None, 10.0, singles_a=1e4, singles_b=1e5, coincidences=100.0)
    counts = net_coincidences([record], subtract_accidentals=True, coincidence_window=2.5e-9)
    assert counts[0] == pytest.approx(100.0 - 1e4 * 1e5 * 2.5e-9 / 10.0)
    with pytest.raises(InvalidArgumentError):
        net_coincidences([record], subtract_accidentals=True)


def test_too_few_records(tomography_records):
    with pytest.raises(FitError):
        mle_tomography(tomography_records(pure_density(phi_plus()))[:15])


def test_incomplete_settings(tomography_records):
    records = tomography_records(pure_density(phi_plus()))
    with pytest.raises(FitError):
        linear_inversion(records[:4] * 4)


def test_no_coincidences(tomography_records):
    records = [CountRecord(r.setting_a, r.setting_b, 1.0, 5.0, 5.0, 0.0)
               for r in tomography_records(pure_density(phi_plus()))]
    with pytest.raises(FitError):
        mle_tomography(records)
