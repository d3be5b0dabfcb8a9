import math

import numpy as np
import pytest
from scipy import special

from qdcluster.analysis.cluster import generated_cluster_state
from qdcluster.analysis.dotmodel import solve_schedule, uev_to_rad_s
from qdcluster.analysis.noise import (
    CURVE_COLUMNS,
    BoxSpectrum,
    FidelityMethod,
    FidelityResult,
    LorentzianSpectrum,
    NoiseSpec,
    characteristic,
    combined_sigma,
    fidelity_brute_force,
    fidelity_curve,
    fidelity_floor,
    fidelity_monte_carlo,
    fidelity_transfer_matrix,
    low_frequency_variance,
    sample_noisy_state,
    validate_variance_by_sampling,
    variance_integral,
    variance_integral_terms,
    variance_theta1,
    variance_theta2,
)
from qdcluster.core.errors import NoiseModelError
from qdcluster.core.qsys import overlap

SIGMA_DEVICE = 0.023 * math.pi
G0 = 2 * math.pi * 125e6


def ideal_state(n_qubits):
    return generated_cluster_state(n_qubits, solve_schedule(G0, 1, 0, n_qubits))


class TestNoiseSpec:
    def test_defaults(self):
        noise = NoiseSpec()
        assert noise.sigma1 == pytest.approx(0.022 * math.pi)
        assert noise.sigma2 == pytest.approx(0.006 * math.pi)
        assert noise.sigma == pytest.approx(0.023 * math.pi)

    def test_from_parts(self):
        noise = NoiseSpec.from_parts(0.3, 0.4)
        assert noise.sigma == pytest.approx(0.5)

    def test_matched_keeps_proportions(self):
        noise = NoiseSpec.from_parts(0.3, 0.4).matched(1.0)
        assert (noise.sigma1, noise.sigma2, noise.sigma) == pytest.approx((0.6, 0.8, 1.0))

    def test_matched_from_zero(self):
        noise = NoiseSpec(sigma1=0.0, sigma2=0.0, sigma=0.0).matched(0.2)
        assert (noise.sigma1, noise.sigma2) == (0.2, 0.0)

    @pytest.mark.parametrize("kwargs", [{'sigma': -0.1}, {'sigma1': math.nan}, {'t2_bare': 0.0}])
    def test_invalid(self, kwargs):
        with pytest.raises(NoiseModelError):
            NoiseSpec(**kwargs)

    def test_low_frequency_check(self, caplog):
        noise = NoiseSpec(spectrum=BoxSpectrum(1.0, 1e6))
        assert noise.low_frequency_ok(1e-9)
        assert not noise.low_frequency_ok(1e-6)
        assert "low-frequency" in caplog.text
        assert NoiseSpec().low_frequency_ok(1.0)

    def test_as_dict(self):
        report = NoiseSpec(spectrum=BoxSpectrum(2.0, 3.0)).as_dict()
        assert report['spectrum'] == {'model': 'BoxSpectrum', 'amplitude': 2.0, 'cutoff_rad_s': 3.0}


class TestVariances:
    def test_theta1_at_device_point(self):
        schedule = solve_schedule(G0, 1, 0, 2)
        result = variance_theta1(G0, schedule.delta, uev_to_rad_s(10.0), schedule.tau, 1e-8)
        assert result.variance == pytest.approx(result.intermediate, rel=1e-12)
        assert result.sigma / math.pi == pytest.approx(7.258e-4, rel=1e-3)

    def test_theta1_without_noise(self):
        result = variance_theta1(1.0, 2.0, 3.0, 4.0, math.inf)
        assert result.variance == 0.0

    def test_theta1_scales_with_tau_squared(self):
        one = variance_theta1(1.0, 2.0, 3.0, 1.0, 5.0).variance
        two = variance_theta1(1.0, 2.0, 3.0, 2.0, 5.0).variance
        assert two == pytest.approx(4 * one)

    def test_theta1_invalid(self):
        with pytest.raises(ValueError):
            variance_theta1(0.0, 2.0, 3.0, 1.0, 5.0)

    @pytest.mark.parametrize("n_qubits", [2, 5, 30])
    def test_theta2_independent_of_n(self, n_qubits):
        lam_tau = math.pi / 4
        assert variance_theta2(0.02, lam_tau, 1.0, n_qubits) == pytest.approx((0.02 * math.pi) ** 2)

    def test_theta2_needs_two_qubits(self):
        with pytest.raises(ValueError):
            variance_theta2(0.02, 1.0, 1.0, 1)

    def test_combined_sigma(self):
        assert combined_sigma(0.022 * math.pi, 0.006 * math.pi) / math.pi == pytest.approx(0.0228, abs=1e-4)
        with pytest.raises(ValueError):
            combined_sigma(-1.0, 0.0)


class TestSpectra:
    def test_box_total_power(self):
        box = BoxSpectrum.from_t2_bare(1e-8, 1e6)
        assert box.total_power() == pytest.approx(1e16)
        np.testing.assert_allclose(box.density([0.0, 2e6]), [box.amplitude, 0.0])

    def test_box_integral_matches_sine_integral(self):
        box = BoxSpectrum(2.0, 3.0)
        tau = 0.7
        first, second = variance_integral_terms(box, tau)
        si, _ = special.sici(3.0 * tau)
        assert first == pytest.approx((2 * 2.0 * 3.0 * tau) ** 2, rel=1e-9)
        assert second == pytest.approx(2 * (2 * 2.0 * si) ** 2, rel=1e-9)

    @pytest.mark.parametrize("spectrum", [BoxSpectrum(1.0, 1e5), LorentzianSpectrum(1.0, 1e5)])
    def test_low_frequency_limit(self, spectrum):
        tau = 0.005 / spectrum.cutoff
        assert variance_integral(spectrum, tau) == pytest.approx(low_frequency_variance(spectrum, tau),
                                                                 rel=0.01)

    def test_lorentzian_power_matches_quadrature(self):
        spectrum = LorentzianSpectrum(3.0, 2.0, cutoff_factor=50.0)
        first, _ = variance_integral_terms(spectrum, 1.0)
        assert math.sqrt(first) == pytest.approx(spectrum.total_power(), rel=1e-8)

    def test_very_low_frequency_ratio(self):
        box = BoxSpectrum(1.0, 1.0)
        ratio = variance_integral(box, 0.001) / low_frequency_variance(box, 0.001)
        assert 0.999 <= ratio <= 1.001

    def test_high_frequency_suppresses_second_term(self):
        box = BoxSpectrum(1.0, 100.0)
        first, second = variance_integral_terms(box, 1.0)
        assert second < 1e-3 * first
        assert variance_integral(box, 1.0) / first == pytest.approx(1.0, rel=0.05)

    def test_zero_spectrum(self):
        assert variance_integral(BoxSpectrum(0.0, 1.0), 1.0) == 0.0
        result = validate_variance_by_sampling(BoxSpectrum(0.0, 1.0), 1e-3, samples=100, rng_seed=0)
        assert (result.analytic, result.empirical, result.rel_err) == (0.0, 0.0, 0.0)

    def test_invalid_tau(self):
        with pytest.raises(ValueError):
            variance_integral(BoxSpectrum(1.0, 1.0), 0.0)

    @pytest.mark.slow
    def test_sampling_matches_integral(self):
        spectrum = BoxSpectrum(1.0, 1e6)
        tau = 0.005 / spectrum.cutoff
        result = validate_variance_by_sampling(spectrum, tau, samples=100000, rng_seed=3)
        assert result.rel_err < 0.05
        assert result.analytic == pytest.approx(variance_integral(spectrum, tau))
        assert result.time_points >= 17

    def test_sampling_is_deterministic(self):
        spectrum = BoxSpectrum(1.0, 1e6)
        a = validate_variance_by_sampling(spectrum, 5e-9, samples=500, rng_seed=9, chunk=200)
        b = validate_variance_by_sampling(spectrum, 5e-9, samples=500, rng_seed=9, chunk=200)
        assert a.empirical == b.empirical

    def test_box_sampling_refines_grid(self):
        spectrum = BoxSpectrum(1.0, 1e6)
        tau = 0.005 / spectrum.cutoff
        result = validate_variance_by_sampling(spectrum, tau, samples=300, rng_seed=1, time_points=3)
        assert result.time_points >= 5
        assert math.isfinite(result.empirical) and result.empirical > 0
        assert result.stderr > 0

    @pytest.mark.slow
    def test_sampling_with_five_thousand_samples(self):
        spectrum = BoxSpectrum(1.0, 1e6)
        tau = 0.005 / spectrum.cutoff
        result = validate_variance_by_sampling(spectrum, tau, samples=5000, rng_seed=5)
        # (∫ε²)² de una gaussiana casi constante: desviación relativa √96/3 por muestra
        assert result.stderr / result.analytic < 0.08
        assert abs(result.empirical - result.analytic) <= 3 * result.stderr

    @pytest.mark.slow
    def test_broadband_sampling_exceeds_two_term_formula(self):
        # γτ = 50: la varianza de ∫ε² crece como 2π/(γτ) respecto al primer término
        spectrum = BoxSpectrum(1.0, 1e6)
        gamma_tau = 50.0
        tau = gamma_tau / spectrum.cutoff
        result = validate_variance_by_sampling(spectrum, tau, samples=10000, rng_seed=8, chunk=1000)
        ratio = result.empirical / result.analytic
        assert ratio == pytest.approx(1 + 2 * math.pi / gamma_tau, abs=0.05)
        assert result.rel_err > 0.05


class TestClosedFormFidelity:
    def test_two_qubits(self):
        c = math.exp(-SIGMA_DEVICE ** 2 / 2)
        expected = ((3 + c) / 4) ** 2
        assert fidelity_transfer_matrix(2, SIGMA_DEVICE).value == pytest.approx(expected, rel=1e-14)
        assert expected == pytest.approx(0.99870, abs=1e-5)

    def test_thirty_qubits(self):
        value = fidelity_transfer_matrix(30, SIGMA_DEVICE).value
        assert 0.957 <= value <= 0.967

    def test_no_noise(self):
        assert fidelity_transfer_matrix(12, 0.0).value == pytest.approx(1.0)

    @pytest.mark.parametrize("n_qubits", [2, 3, 10])
    def test_large_noise_reaches_floor(self, n_qubits):
        assert fidelity_transfer_matrix(n_qubits, 50.0).value == pytest.approx(fidelity_floor(n_qubits))

    def test_monotone_in_n_and_sigma(self):
        values = [fidelity_transfer_matrix(n, SIGMA_DEVICE).value for n in range(2, 31)]
        assert all(a > b for a, b in zip(values, values[1:]))
        assert fidelity_transfer_matrix(5, 0.1).value > fidelity_transfer_matrix(5, 0.2).value

    def test_transfer_matrix_matches_brute_force(self):
        rng = np.random.default_rng(2024)
        for sigma in rng.uniform(0.0, 1.0, size=20):
            for n_qubits in range(2, 15):
                tm = fidelity_transfer_matrix(n_qubits, sigma).value
                bf = fidelity_brute_force(n_qubits, sigma).value
                assert tm == pytest.approx(bf, rel=1e-12)

    def test_complete_graph_brute_force(self):
        c = characteristic(0.4)
        expected = ((4 + 3 * c + c ** 3) / 8) ** 2
        result = fidelity_brute_force(3, 0.4, 'complete')
        assert result.value == pytest.approx(expected)
        assert result.graph == 'complete'

    def test_per_edge_sigmas(self):
        uniform = fidelity_brute_force(4, 0.3).value
        per_edge = fidelity_brute_force(4, [0.3, 0.3, 0.3]).value
        assert per_edge == pytest.approx(uniform)
        assert fidelity_brute_force(4, [0.0, 0.0, 0.0]).value == pytest.approx(1.0)

    def test_empty_per_edge_sigmas(self):
        result = fidelity_brute_force(1, [])
        assert result.sigma == 0.0
        assert result.value == pytest.approx(1.0)

    @pytest.mark.parametrize("sigma", [[], [0.1, 0.2], [0.1, -0.2, 0.3], -0.1])
    def test_invalid_per_edge_sigmas(self, sigma):
        with pytest.raises(ValueError):
            fidelity_brute_force(4, sigma)

    def test_transfer_matrix_rejects_other_graphs(self):
        with pytest.raises(NoiseModelError):
            fidelity_transfer_matrix(4, 0.1, 'complete')

    def test_brute_force_limit(self):
        with pytest.raises(ValueError):
            fidelity_brute_force(15, 0.1)

    def test_characteristic(self):
        assert characteristic(0.0) == 1.0
        with pytest.raises(ValueError):
            characteristic(-0.1)

    def test_fibonacci_floor(self):
        assert fidelity_floor(2) == pytest.approx((3 / 4) ** 2)
        assert fidelity_floor(5) == pytest.approx((13 / 32) ** 2)


class TestFidelityResult:
    def test_monte_carlo_fields_required(self):
        with pytest.raises(ValueError):
            FidelityResult(2, 0.1, 0.9, FidelityMethod.MONTE_CARLO, 'chain')

    def test_monte_carlo_fields_forbidden(self):
        with pytest.raises(ValueError):
            FidelityResult(2, 0.1, 0.9, FidelityMethod.TRANSFER_MATRIX, 'chain', mc_samples=10)

    def test_value_range(self):
        with pytest.raises(ValueError):
            FidelityResult(2, 0.1, 1.5, FidelityMethod.BRUTE_FORCE, 'chain')

    def test_as_dict(self):
        report = fidelity_transfer_matrix(3, 0.1).as_dict()
        assert report['method'] == 'transfer_matrix'
        assert 'mc_stderr' not in report


class TestNoisyStates:
    def test_zero_bond_phases_give_ideal_state(self):
        state = sample_noisy_state(4, NoiseSpec(), 'bond_phase', 0, bond_phases=[0.0, 0.0, 0.0])
        assert abs(overlap(ideal_state(4), state)) == pytest.approx(1.0)

    def test_pi_bond_phase_undoes_the_gate(self):
        state = sample_noisy_state(2, NoiseSpec(), 'bond_phase', 0, bond_phases=[math.pi])
        assert abs(overlap(ideal_state(2), state)) ** 2 == pytest.approx(0.25)

    def test_forced_phases_only_for_bond_model(self):
        with pytest.raises(NoiseModelError):
            sample_noisy_state(3, NoiseSpec(), 'widetext', 0, bond_phases=[0.1, 0.2])
        with pytest.raises(NoiseModelError):
            sample_noisy_state(3, NoiseSpec(), 'bond_phase', 0, bond_phases=[0.1])

    def test_unknown_model(self):
        with pytest.raises(NoiseModelError):
            sample_noisy_state(3, NoiseSpec(), 'telegraph', 0)

    def test_samples_are_reproducible(self):
        a = sample_noisy_state(3, NoiseSpec(), 'widetext', 5, sample_index=2)
        b = sample_noisy_state(3, NoiseSpec(), 'widetext', 5, sample_index=2)
        np.testing.assert_array_equal(a.amplitudes, b.amplitudes)
        assert a.norm == pytest.approx(1.0)


class TestMonteCarlo:
    def test_converges_to_transfer_matrix(self):
        sigma = 0.05 * math.pi
        result = fidelity_monte_carlo(6, NoiseSpec(sigma=sigma), samples=20000, rng_seed=11, batches=50)
        exact = fidelity_transfer_matrix(6, sigma).value
        assert abs(result.value - exact) <= 3 * result.mc_stderr
        assert result.mc_stderr > 0
        assert result.mc_mean_fidelity >= result.value - 1e-12
        assert len(result.mc_batch_means) == 50

    def test_complete_graph_matches_brute_force(self):
        sigma = 0.1 * math.pi
        result = fidelity_monte_carlo(4, NoiseSpec(sigma=sigma), graph='complete', samples=20000,
                                      rng_seed=4, batches=50)
        exact = fidelity_brute_force(4, sigma, 'complete').value
        assert abs(result.value - exact) <= 3 * result.mc_stderr

    @pytest.mark.slow
    def test_pooled_z_score_over_seeds(self):
        sigma = 0.05 * math.pi
        exact = fidelity_transfer_matrix(6, sigma).value
        scores = []
        for seed in range(20):
            result = fidelity_monte_carlo(6, NoiseSpec(sigma=sigma), samples=5000, rng_seed=100 + seed,
                                          batches=50)
            scores.append((result.value - exact) / result.mc_stderr)
        pooled = sum(scores) / math.sqrt(len(scores))
        assert -4.0 <= pooled <= 4.0

    def test_seed_determinism(self):
        noise = NoiseSpec(sigma=0.1)
        a = fidelity_monte_carlo(5, noise, samples=1000, rng_seed=1)
        b = fidelity_monte_carlo(5, noise, samples=1000, rng_seed=1)
        c = fidelity_monte_carlo(5, noise, samples=1000, rng_seed=2)
        assert a.value == b.value
        assert a.mc_stderr == b.mc_stderr
        assert a.value != c.value

    @pytest.mark.slow
    def test_worker_count_does_not_change_result(self):
        noise = NoiseSpec(sigma=0.1)
        single = fidelity_monte_carlo(5, noise, 'widetext', samples=2000, rng_seed=7, workers=1)
        pooled = fidelity_monte_carlo(5, noise, 'widetext', samples=2000, rng_seed=7, workers=4)
        assert single.value == pooled.value
        assert single.mc_batch_means == pooled.mc_batch_means

    def test_widetext_without_noise(self):
        noise = NoiseSpec(sigma1=0.0, sigma2=0.0, sigma=0.0)
        result = fidelity_monte_carlo(4, noise, 'widetext', samples=200)
        assert result.value == pytest.approx(1.0)
        assert result.model == 'widetext'

    def test_widetext_degrades_fidelity(self):
        result = fidelity_monte_carlo(4, NoiseSpec(), 'widetext', samples=2000, rng_seed=3)
        assert 0.9 < result.value < 1.0

    @pytest.mark.parametrize("kwargs", [{'samples': 10}, {'batches': 2}, {'workers': 0}])
    def test_invalid_arguments(self, kwargs):
        options = {'samples': 1000, 'batches': 10, 'workers': 1}
        options.update(kwargs)
        with pytest.raises(ValueError):
            fidelity_monte_carlo(3, NoiseSpec(), **options)

    def test_widetext_limited_in_size(self):
        with pytest.raises(ValueError):
            fidelity_monte_carlo(20, NoiseSpec(), 'widetext', samples=200)


class TestFidelityCurve:
    def test_columns_and_gaps(self):
        frame = fidelity_curve([2, 3, 15], SIGMA_DEVICE)
        assert list(frame.columns) == CURVE_COLUMNS
        assert list(frame['N']) == [2, 3, 15]
        assert frame['F_mc'].isna().all()
        assert np.isnan(frame.loc[2, 'F_bruteforce'])
        np.testing.assert_allclose(frame['F_transfer'][:2], frame['F_bruteforce'][:2], rtol=1e-12)

    def test_with_monte_carlo(self):
        frame = fidelity_curve([4], 0.1, mc_samples=500, rng_seed=1)
        assert frame.loc[0, 'mc_stderr'] > 0
        assert 0.0 < frame.loc[0, 'F_mc'] <= 1.0
