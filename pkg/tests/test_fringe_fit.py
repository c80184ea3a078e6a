import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from sagnac_toolbox.analysis.fringe_fit import fit_sinusoid
from sagnac_toolbox.quantum.polarization_optics import AnalyzerSetting, joint_probability
from sagnac_toolbox.quantum.qstate import mix_with_white_noise, phi_plus
from sagnac_toolbox.utils.errors import FitError

from conftest import WERNER_WEIGHTS

SCAN = np.arange(0.0, 91.0, 5.0)


@pytest.mark.parametrize('p', WERNER_WEIGHTS)
@pytest.mark.parametrize('fixed_hwp', [0.0, 22.5])
def test_werner_fringe_visibility_is_p(p, fixed_hwp):
    rho = mix_with_white_noise(phi_plus(), p)
    counts = [1e4 * joint_probability(rho, AnalyzerSetting(fixed_hwp), AnalyzerSetting(h))
              for h in SCAN]
    fit = fit_sinusoid(SCAN, counts)
    assert fit.visibility == pytest.approx(p, abs=1e-9)
    assert fit.residual_rms == pytest.approx(0.0, abs=1e-8)
    assert not fit.clamped


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=10, max_value=1e5),
       st.floats(min_value=0.0, max_value=0.99),
       st.floats(min_value=0.0, max_value=89.9))
def test_recovers_noiseless_sinusoid(offset, visibility, phase):
    counts = offset * (1 + visibility * np.cos(np.deg2rad(4 * (SCAN - phase))))
    fit = fit_sinusoid(SCAN, counts)
    assert fit.visibility == pytest.approx(visibility, abs=1e-8)
    assert fit.offset == pytest.approx(offset, rel=1e-8)
    if visibility > 0.01:
        distance = abs(fit.phase - phase) % 90.0
        assert min(distance, 90.0 - distance) < 1e-5


def test_evaluate_reproduces_data():
    counts = 100 + 80 * np.cos(np.deg2rad(4 * (SCAN - 10.0)))
    fit = fit_sinusoid(SCAN, counts)
    np.testing.assert_allclose(fit.evaluate(SCAN), counts, atol=1e-8)
    assert fit.c_max == pytest.approx(180.0)
    assert fit.c_min == pytest.approx(20.0)


def test_negative_minimum_is_clamped():
    counts = 10 + 12 * np.cos(np.deg2rad(4 * SCAN))
    fit = fit_sinusoid(SCAN, counts)
    assert fit.clamped
    assert fit.c_min == 0.0
    assert fit.visibility == pytest.approx(1.0)


def test_visibility_sigma_shrinks_with_counts():
    rng = np.random.default_rng(5)
    shape = 1 + 0.9 * np.cos(np.deg2rad(4 * SCAN))
    small = fit_sinusoid(SCAN, rng.poisson(100 * shape))
    large = fit_sinusoid(SCAN, rng.poisson(10000 * shape))
    assert large.visibility_sigma < small.visibility_sigma
    assert large.visibility_sigma == pytest.approx(small.visibility_sigma / 10, rel=0.3)


def test_too_few_points():
    with pytest.raises(FitError):
        fit_sinusoid([0, 20, 40, 60, 90], [1, 2, 3, 4, 5])


def test_scan_shorter_than_a_period():
    angles = np.linspace(0, 60, 13)
    with pytest.raises(FitError):
        fit_sinusoid(angles, np.ones_like(angles))


def test_mismatched_lengths():
    with pytest.raises(FitError):
        fit_sinusoid(SCAN, SCAN[:-1])


def test_degenerate_angles():
    angles = np.array([0.0, 0.0, 0.0, 90.0, 90.0, 90.0])
    with pytest.raises(FitError):
        fit_sinusoid(angles, np.ones_like(angles))


@pytest.mark.parametrize('level', [0.0, 7.0, 1e4])
def test_flat_counts_have_no_visibility(level):
    fit = fit_sinusoid(SCAN, np.full_like(SCAN, level))
    assert fit.visibility == pytest.approx(0.0, abs=1e-9)
    assert fit.offset == pytest.approx(level, abs=1e-9 * max(level, 1.0))
