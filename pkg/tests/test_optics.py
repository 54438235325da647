import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import probabilities
from nomaq.channel import apply_channel, joint_map
from nomaq.optics import (
    ANALYZERS, BenchConfig, JonesState, WavePlate, analyzer_states, hwp, ideal_intensities,
    measure_tomography, p_from_theta, pbs_combine, qwp, reduced_state, run_bench, theta_from_p,
)
from nomaq.qubit import GROUND, PLUS
from nomaq.tomography import reconstruct

R2 = 1 / math.sqrt(2)
ideal = dict(visibility=1.0, sigma=0.0)


def test_theta_from_p_examples():
    assert theta_from_p(1.0) == 0.0
    assert theta_from_p(0.0) == pytest.approx(math.pi / 4, abs=1e-15)
    assert theta_from_p(0.75) == pytest.approx(math.pi / 12, abs=1e-15)
    with pytest.raises(ValueError):
        theta_from_p(1.5)


@given(probabilities)
def test_theta_round_trip(p):
    th = theta_from_p(p)
    assert 0 <= th <= math.pi / 4
    assert p_from_theta(th) == pytest.approx(p, abs=1e-12)
    assert math.sin(2 * th) == pytest.approx(math.sqrt(1 - p), abs=1e-12)


@pytest.mark.parametrize("theta", [0, math.pi / 8, math.pi / 4, 0.3])
def test_hwp2_transformation_on_vertical(theta):
    out = WavePlate("HWP", theta, from_vertical=True).matrix @ np.array([0, 1])
    np.testing.assert_allclose(out, [math.sin(2 * theta), math.cos(2 * theta)], atol=1e-15)


def test_preparation_gives_plus_45():
    np.testing.assert_allclose(hwp(math.radians(22.5)) @ np.array([1, 0]), [R2, R2], atol=1e-15)


@given(st.floats(-10, 10))
def test_elements_are_unitary(angle):
    for m in (hwp(angle), qwp(angle), WavePlate("HWP", angle, True).matrix):
        np.testing.assert_allclose(m.conj().T @ m, np.eye(2), atol=1e-12)


def test_pbs_is_a_permutation():
    rng = np.random.default_rng(1)
    amp = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    out = pbs_combine(amp)
    assert np.linalg.norm(out) == pytest.approx(np.linalg.norm(amp), rel=1e-15)
    assert sorted(np.abs(out).ravel()) == sorted(np.abs(amp).ravel())


def test_bench_examples():
    np.testing.assert_allclose(run_bench(BenchConfig(0.0, **ideal)).vector, [R2, R2, 0, 0], atol=1e-15)
    np.testing.assert_allclose(run_bench(BenchConfig(math.pi / 4, **ideal)).vector, [R2, 0, R2, 0],
                               atol=1e-15)
    np.testing.assert_allclose(run_bench(BenchConfig(math.pi / 12, **ideal)).vector,
                               [0.7071, 0.6124, 0.3536, 0], atol=1e-4)


@given(st.floats(0, math.pi / 4))
def test_bench_matches_circuit_map(theta):
    v = run_bench(BenchConfig(theta, **ideal)).vector
    expected = R2 * np.array([1, math.cos(2 * theta), math.sin(2 * theta), 0])
    np.testing.assert_allclose(v, expected, atol=1e-15)


@given(st.floats(0, math.pi / 4), st.floats(-math.pi, math.pi))
def test_phase_shift_and_norm(theta, dphi):
    s = run_bench(BenchConfig(theta, dphi, **ideal))
    assert isinstance(s, JonesState)
    assert abs(s.norm - 1) <= 1e-12
    assert s.a_V0 == pytest.approx(R2 * math.cos(2 * theta) * np.exp(1j * dphi), abs=1e-15)
    assert s.a_H0 == pytest.approx(R2, abs=1e-15)
    assert s.a_V1 == 0


def test_reduced_state_examples():
    assert np.allclose(reduced_state(run_bench(BenchConfig(0.0, **ideal))).matrix, PLUS.matrix,
                       atol=1e-15)
    rho = reduced_state(JonesState((R2, 0, R2, 0)))
    np.testing.assert_allclose(rho.matrix, GROUND.matrix, atol=1e-15)


@given(st.floats(0, math.pi / 4))
def test_reduced_state_closed_form(theta):
    rho = reduced_state(run_bench(BenchConfig(theta, **ideal)))
    assert rho.r12 == pytest.approx(math.cos(2 * theta) / 2, abs=1e-15)
    assert rho.r22 == pytest.approx(math.cos(2 * theta) ** 2 / 2, abs=1e-15)


def test_circuit_equals_kraus_and_joint_map():
    rng = np.random.default_rng(11)
    for p in rng.uniform(size=1000):
        s = run_bench(BenchConfig(theta_from_p(p), **ideal))
        ref = apply_channel(PLUS, p)
        np.testing.assert_allclose(reduced_state(s).matrix, ref.matrix, atol=1e-12)
        np.testing.assert_allclose(s.vector, joint_map(p).vector, atol=1e-12)


def test_analyzers_project_on_named_bases():
    states = analyzer_states()
    expected = {
        "HV": ([1, 0], [0, 1]),
        "diag": ([R2, R2], [R2, -R2]),
        "circ": ([R2, 1j * R2], [R2, -1j * R2]),
    }
    for key, (a, b) in expected.items():
        got_a, got_b = states[key]
        # equal up to a global phase
        assert abs(np.vdot(got_a, a)) == pytest.approx(1, abs=1e-15)
        assert abs(np.vdot(got_b, b)) == pytest.approx(1, abs=1e-15)
    assert list(ANALYZERS) == ["HV", "diag", "circ"]


def test_tomography_examples():
    rec = measure_tomography(run_bench(BenchConfig(0.0, **ideal)), BenchConfig(0.0, **ideal))
    np.testing.assert_allclose(rec.intensities, [0.5, 0.5, 1, 0, 0.5, 0.5], atol=1e-15)
    cfg = BenchConfig(math.pi / 4, **ideal)
    rec = measure_tomography(run_bench(cfg), cfg)
    np.testing.assert_allclose(rec.intensities, [1, 0, 0.5, 0.5, 0.5, 0.5], atol=1e-15)
    cfg = BenchConfig(0.0, visibility=0.98, sigma=0.0)
    assert reconstruct(measure_tomography(run_bench(cfg), cfg)).coherence == pytest.approx(0.98,
                                                                                          abs=1e-12)


def test_visibility_scales_off_diagonal_only():
    i = ideal_intensities(PLUS, 0.5)
    np.testing.assert_allclose(i, [0.5, 0.5, 0.75, 0.25, 0.5, 0.5], atol=1e-15)


def test_noise_is_deterministic_per_seed():
    cfg = BenchConfig(0.2, sigma=0.015, rng_seed=42)
    s = run_bench(cfg)
    assert measure_tomography(s, cfg) == measure_tomography(s, cfg)
    other = BenchConfig(0.2, sigma=0.015, rng_seed=43)
    assert measure_tomography(s, cfg) != measure_tomography(s, other)


@given(st.floats(0, math.pi / 4), st.integers(0, 2**32), st.floats(0, 0.5))
def test_noisy_record_is_normalized(theta, seed, sigma):
    cfg = BenchConfig(theta, sigma=sigma, rng_seed=seed)
    rec = measure_tomography(run_bench(cfg), cfg)
    rec.check()
    assert all(0 <= x <= 1 for x in rec.intensities)


def test_noise_sanity_band():
    # the spread of C(0) is checked separately in test_acceptance
    cs = []
    for seed in range(1000):
        cfg = BenchConfig(0.0, visibility=0.98, sigma=0.015, rng_seed=seed)
        cs.append(reconstruct(measure_tomography(run_bench(cfg), cfg)).coherence)
    assert np.mean(cs) == pytest.approx(0.98, abs=0.01)


def test_bench_config_validation():
    with pytest.raises(ValueError):
        BenchConfig(visibility=1.2)
    with pytest.raises(ValueError):
        BenchConfig(sigma=-0.1)
    with pytest.raises(ValueError):
        BenchConfig(rng_seed=-1)
    with pytest.raises(ValueError):
        WavePlate("FOO", 0.0)
