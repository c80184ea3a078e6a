import numpy as np
import pytest
from hypothesis import given, strategies as st

from sagnac_toolbox.constants import basis
from sagnac_toolbox.quantum.qstate import (
    DensityMatrix,
    KetState,
    bell_state,
    check_physical,
    density_from_report,
    density_to_report,
    diagonal_visibility,
    fidelity,
    is_physical,
    maximally_mixed,
    mix_with_white_noise,
    phi_plus,
    pure_density,
    purity,
    sanitize,
)
from sagnac_toolbox.source.sagnac_source import SourceConfig, output_state
from sagnac_toolbox.utils.errors import InvalidArgumentError, InvalidStateError

from conftest import WERNER_WEIGHTS


def test_basis_order():
    assert basis.BASIS_LABELS == ('HH', 'HV', 'VH', 'VV')
    assert (basis.HH, basis.HV, basis.VH, basis.VV) == (0, 1, 2, 3)


def test_ket_is_normalized():
    psi = KetState(np.array([3.0, 4.0, 0.0, 0.0]))
    np.testing.assert_allclose(psi.amplitudes, [0.6, 0.8, 0, 0])
    assert psi.amplitudes.flags.writeable is False


def test_zero_ket_rejected():
    with pytest.raises(InvalidArgumentError):
        KetState(np.zeros(4))


def test_wrong_shape_rejected():
    with pytest.raises(InvalidArgumentError):
        KetState(np.ones(3))
    with pytest.raises(InvalidArgumentError):
        DensityMatrix(np.eye(3))


def test_phi_plus_amplitudes():
    amps = phi_plus().amplitudes
    np.testing.assert_allclose(amps, [0, 1 / np.sqrt(2), 1 / np.sqrt(2), 0], atol=1e-15)


@given(st.floats(min_value=-10, max_value=10))
def test_bell_state_is_normalized(theta):
    psi = bell_state(theta)
    assert np.linalg.norm(psi.amplitudes) == pytest.approx(1.0, abs=1e-12)
    assert abs(psi.amplitudes[basis.HH]) == 0
    assert abs(psi.amplitudes[basis.VV]) == 0


def test_bell_state_rejects_nan():
    with pytest.raises(InvalidArgumentError):
        bell_state(float('nan'))


@pytest.mark.parametrize('p', WERNER_WEIGHTS)
def test_werner_fidelity(p):
    rho = mix_with_white_noise(phi_plus(), p)
    assert fidelity(rho, phi_plus()) == pytest.approx((3 * p + 1) / 4, abs=1e-12)


def test_white_noise_limits():
    np.testing.assert_allclose(mix_with_white_noise(phi_plus(), 0.0).matrix,
                               maximally_mixed().matrix)
    np.testing.assert_allclose(mix_with_white_noise(phi_plus(), 1.0).matrix,
                               pure_density(phi_plus()).matrix)


@pytest.mark.parametrize('p', [-0.1, 1.1])
def test_white_noise_weight_out_of_range(p):
    with pytest.raises(InvalidArgumentError):
        mix_with_white_noise(phi_plus(), p)


def test_purity_bounds():
    assert purity(pure_density(phi_plus())) == pytest.approx(1.0)
    assert purity(maximally_mixed()) == pytest.approx(0.25)


def test_is_physical_flags_each_check():
    assert is_physical(maximally_mixed())
    assert 'trace' in is_physical(DensityMatrix(np.eye(4) / 2)).failed
    non_hermitian = np.eye(4) / 4
    non_hermitian[0, 1] = 0.1
    assert 'hermitian' in is_physical(DensityMatrix(non_hermitian)).failed
    negative = np.diag([0.6, 0.6, -0.1, -0.1])
    assert 'psd' in is_physical(DensityMatrix(negative)).failed


def test_check_physical_raises():
    with pytest.raises(InvalidStateError) as err:
        check_physical(DensityMatrix(np.diag([0.6, 0.6, -0.1, -0.1])))
    assert 'psd' in err.value.failed_checks


def test_fidelity_rejects_unphysical():
    with pytest.raises(InvalidStateError):
        fidelity(DensityMatrix(np.eye(4)), phi_plus())


def test_sanitize_clips_jitter_only():
    jitter = np.diag([0.5, 0.5 + 5e-10, 0.0, -5e-10])
    cleaned = sanitize(DensityMatrix(jitter))
    assert is_physical(cleaned)
    assert np.min(np.linalg.eigvalsh(cleaned.matrix)) >= 0
    assert np.real(np.trace(cleaned.matrix)) == pytest.approx(1.0, abs=1e-15)
    assert not is_physical(sanitize(DensityMatrix(np.diag([0.6, 0.6, -0.1, -0.1]))))


@pytest.mark.parametrize('balance, theta, noise_p', [
    (1.0, 0.0, 1.0),
    (0.663, 0.0, 0.964),
    (0.5, 0.3, 0.8),
])
def test_diagonal_visibility_of_output_state(balance, theta, noise_p):
    rho = output_state(SourceConfig(balance=balance, theta=theta, noise_p=noise_p))
    expected = noise_p * 2 * balance * np.cos(theta) / (1 + balance ** 2)
    assert diagonal_visibility(rho) == pytest.approx(expected, abs=1e-12)


def test_density_report_round_trip():
    rho = output_state(SourceConfig(theta=0.4))
    report = density_to_report(rho)
    assert report['basis'] == ['HH', 'HV', 'VH', 'VV']
    np.testing.assert_array_equal(density_from_report(report).matrix, rho.matrix)


def test_density_report_rejects_other_basis():
    report = density_to_report(maximally_mixed())
    report['basis'] = ['VV', 'VH', 'HV', 'HH']
    with pytest.raises(InvalidArgumentError):
        density_from_report(report)


@pytest.mark.parametrize('p', WERNER_WEIGHTS + (0.0, 1.0))
def test_werner_purity(p):
    assert purity(mix_with_white_noise(phi_plus(), p)) == pytest.approx((1 + 3 * p ** 2) / 4,
                                                                        abs=1e-12)


@given(st.floats(min_value=0, max_value=1), st.floats(min_value=0, max_value=1),
       st.floats(min_value=-np.pi, max_value=np.pi))
def test_fidelity_is_linear_in_rho(weight, p, theta):
    first = mix_with_white_noise(bell_state(theta), p)
    second = pure_density(bell_state(np.pi))
    mixed = DensityMatrix(weight * first.matrix + (1 - weight) * second.matrix)
    expected = weight * fidelity(first, phi_plus()) + (1 - weight) * fidelity(second, phi_plus())
    assert fidelity(mixed, phi_plus()) == pytest.approx(expected, abs=1e-12)


def test_bell_state_phases():
    assert abs(np.vdot(bell_state(np.pi).amplitudes, phi_plus().amplitudes)) < 1e-15
    np.testing.assert_allclose(bell_state(np.pi / 2).amplitudes,
                               [0, 1 / np.sqrt(2), 1j / np.sqrt(2), 0], atol=1e-15)


@given(st.floats(min_value=0, max_value=5), st.floats(min_value=-10, max_value=10),
       st.floats(min_value=0, max_value=1), st.floats(min_value=0, max_value=200))
def test_output_state_is_physical(balance, theta, noise_p, pump_power):
    rho = output_state(SourceConfig(balance=balance, theta=theta, noise_p=noise_p,
                                    pump_power=pump_power))
    assert is_physical(rho)
