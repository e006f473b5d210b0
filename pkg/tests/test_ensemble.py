import numpy as np
import pytest

from cyclewalk import (
    DisorderModel,
    InitialStateParams,
    LITERAL,
    QuadratureSpec,
    SingleInitial,
    SYMMETRIC,
    build_step_unitary,
    derive_subseed,
    e_av,
    ensemble_average,
    evolve_state,
    initial_state,
    parity_profile,
    realization_plan,
    sample_realization,
    simpson_weights,
    sweep_strength,
    sweep_time,
    time_cone_check,
)
from cyclewalk.ensemble import _ensemble_arrays
from cyclewalk.state import coin_density_from_amplitudes, coin_entropy

CLEAN = DisorderModel.clean()
ALL_KINDS = ("clean", "static-phase", "dynamic-phase", "static-coin", "dynamic-coin", "position")


def reference_e_av(k, t, nodes=10001):
    """Independent oracle: trapezoid quadrature over explicit matrix evolution."""
    thetas = np.linspace(0.0, np.pi, nodes)
    matrix = np.linalg.matrix_power(build_step_unitary(k, realization_plan(
        sample_realization(CLEAN, k, t, 0), 1)), t)
    batch = np.zeros((nodes, 2 * k), dtype=complex)
    batch[:, 0] = np.cos(thetas / 2)
    batch[:, 1] = np.exp(1j * np.pi / 2) * np.sin(thetas / 2)
    evolved = batch @ matrix.T
    rho = coin_density_from_amplitudes(evolved.reshape(nodes, k, 2))
    entropies = coin_entropy(rho)
    w = np.full(nodes, np.pi / (nodes - 1))
    w[0] = w[-1] = np.pi / (2 * (nodes - 1))
    return float(entropies @ w / np.pi)


class TestSimpsonWeights:
    def test_integrates_pi_exactly(self):
        assert simpson_weights(201).sum() == pytest.approx(np.pi, abs=1e-14)

    def test_rejects_even_or_tiny_node_counts(self):
        with pytest.raises(ValueError):
            simpson_weights(200)
        with pytest.raises(ValueError):
            QuadratureSpec(nodes=1)


class TestEAv:
    def test_clean_first_step_is_maximal(self):
        real = sample_realization(CLEAN, 4, 1, 0)
        assert e_av(4, CLEAN, real, 1) == pytest.approx(1.0, abs=1e-8)

    def test_clean_t4_is_separable(self):
        real = sample_realization(CLEAN, 4, 4, 0)
        assert e_av(4, CLEAN, real, 4) == pytest.approx(0.0, abs=1e-8)

    def test_clean_t2_matches_independent_quadrature_oracle(self):
        real = sample_realization(CLEAN, 4, 2, 0)
        value = e_av(4, CLEAN, real, 2)
        assert value == pytest.approx(reference_e_av(4, 2), abs=1e-6)
        assert value == pytest.approx(0.55730495911060274, abs=1e-6)

    def test_rejects_model_mismatch(self):
        real = sample_realization(CLEAN, 4, 2, 0)
        with pytest.raises(ValueError, match="different model"):
            e_av(4, DisorderModel.static_phase(0.5), real, 2)


class TestEnsembleAverage:
    def test_phase_disorder_first_step_robustness(self):
        for kind in ("static-phase", "dynamic-phase"):
            model = DisorderModel(kind=kind, delta=0.7)
            result = ensemble_average(4, model, 1, 50, master_seed=3)
            assert result.mean_e_av[0] == pytest.approx(1.0, abs=1e-8)
            assert result.se_e_av[0] < 1e-10

    def test_clean_ensemble_has_zero_standard_error(self):
        result = ensemble_average(4, CLEAN, 6, 10, master_seed=5)
        np.testing.assert_array_equal(result.se_e_av, np.zeros(6))
        np.testing.assert_array_equal(result.se_p0, np.zeros(6))

    def test_bitwise_deterministic(self):
        model = DisorderModel.position(1.5)
        a = ensemble_average(4, model, 8, 25, 42, convention=SYMMETRIC)
        b = ensemble_average(4, model, 8, 25, 42, convention=SYMMETRIC)
        np.testing.assert_array_equal(a.mean_e_av, b.mean_e_av)
        np.testing.assert_array_equal(a.se_e_av, b.se_e_av)
        np.testing.assert_array_equal(a.mean_p0, b.mean_p0)

    def test_zero_strength_reproduces_clean_exactly(self):
        clean = ensemble_average(4, CLEAN, 10, 4, 42)
        for kind in ("static-phase", "dynamic-phase", "static-coin", "dynamic-coin"):
            zero = ensemble_average(4, make_strength(kind, 0.0), 10, 4, 42)
            np.testing.assert_array_equal(zero.mean_e_av, clean.mean_e_av)
            np.testing.assert_array_equal(zero.mean_p0, clean.mean_p0)

    def test_means_stay_in_unit_interval(self):
        for kind, strength in (("static-phase", 1.0), ("dynamic-coin", 1.0), ("position", 2.0)):
            result = ensemble_average(4, make_strength(kind, strength), 10, 20, 7)
            assert np.all(result.mean_e_av >= 0.0) and np.all(result.mean_e_av <= 1.0)
            assert np.all(result.mean_p0 >= 0.0) and np.all(result.mean_p0 <= 1.0)

    def test_collect_samples_shapes(self):
        result = ensemble_average(4, CLEAN, 5, 3, 1, collect_samples=True)
        assert result.e_av_samples.shape == (3, 5)
        assert result.p0_samples.shape == (3, 5)

    def test_rejects_empty_ensemble(self):
        with pytest.raises(ValueError):
            ensemble_average(4, CLEAN, 5, 0, 1)

    def test_single_initial_mode_uses_raw_entropy(self):
        result = ensemble_average(4, CLEAN, 2, 1, 0,
                                  SingleInitial(theta=np.pi / 2, phi=np.pi / 2))
        assert result.mean_e_av[0] == pytest.approx(1.0, abs=1e-12)
        # At theta=pi/2 the second clean step is a product state, below
        # the theta-averaged value 0.557.
        assert result.mean_e_av[1] == pytest.approx(0.0, abs=1e-10)


def make_strength(kind, value):
    from cyclewalk import make_model

    return make_model(kind, value)


class TestQuadratureConvergence:
    def test_simpson_201_vs_401_on_clean_walks(self):
        coarse = ensemble_average(4, CLEAN, 15, 1, 0, QuadratureSpec(nodes=201))
        fine = ensemble_average(4, CLEAN, 15, 1, 0, QuadratureSpec(nodes=401))
        assert np.max(np.abs(coarse.mean_e_av - fine.mean_e_av)) < 1e-6


class TestBatchedEngineMatchesScalarPath:
    @pytest.mark.parametrize("kind,strength", [
        ("clean", None),
        ("static-phase", 0.8),
        ("dynamic-phase", 0.8),
        ("static-coin", 0.9),
        ("dynamic-coin", 0.9),
        ("position", 1.5),
    ])
    @pytest.mark.parametrize("convention", [LITERAL, SYMMETRIC])
    def test_engine_equals_stepwise_evolution(self, kind, strength, convention):
        k, t_max, nodes = 4, 5, 21
        model = make_strength(kind, strength)
        reals = [sample_realization(model, k, t_max, derive_subseed(99, j))
                 for j in (1, 2, 3)]
        quad = QuadratureSpec(nodes=nodes)
        e_batch, p_batch, _ = _ensemble_arrays(k, reals, t_max, quad, convention)
        weights = simpson_weights(nodes)
        thetas = np.linspace(0.0, np.pi, nodes)
        for j, real in enumerate(reals):
            entropies = np.empty((t_max, nodes))
            origins = np.empty((t_max, nodes))
            for q, theta in enumerate(thetas):
                states = evolve_state(k, real, t_max,
                                      InitialStateParams(theta, np.pi / 2), convention)
                for t in range(1, t_max + 1):
                    grid = states[t].grid
                    rho = coin_density_from_amplitudes(grid)
                    entropies[t - 1, q] = coin_entropy(rho[np.newaxis])[0]
                    origins[t - 1, q] = float(np.sum(np.abs(grid[0]) ** 2))
            np.testing.assert_allclose(e_batch[:, j], entropies @ weights / np.pi,
                                       atol=1e-12)
            np.testing.assert_allclose(p_batch[:, j], origins @ weights / np.pi,
                                       atol=1e-12)


class TestParityProfile:
    def test_clean_4cycle_preserves_parity(self):
        profile = parity_profile(4, CLEAN, 9, 1, 0)
        assert profile.violation_score <= 1e-12
        assert profile.wrong_parity_max < 1e-10

    def test_unit_jump_disorders_preserve_parity(self):
        for kind, strength in (("static-phase", 1.0), ("dynamic-phase", 1.0),
                               ("static-coin", 1.0), ("dynamic-coin", 1.0)):
            profile = parity_profile(4, make_strength(kind, strength), 9, 10, 4)
            assert profile.wrong_parity_max < 1e-10

    def test_position_disorder_breaks_parity(self):
        profile = parity_profile(4, DisorderModel.position(1.5), 3, 120, 11)
        t3 = profile.result.mean_p0[2]
        se3 = profile.result.se_p0[2]
        assert profile.violation_score > 0.0
        assert t3 > 5 * se3 > 0.0

    def test_odd_cycle_breaks_parity_even_when_clean(self):
        profile = parity_profile(3, CLEAN, 9, 1, 0)
        assert profile.violation_score > 1e-6


class TestTimeConeCheck:
    def test_clean_8cycle_passes_every_step(self):
        real = sample_realization(CLEAN, 8, 3, 0)
        assert time_cone_check(8, CLEAN, real, 3).all()

    def test_position_disorder_breaks_the_cone(self):
        model = DisorderModel.position(3.0)
        # Seed chosen arbitrarily; a jump != 1 appears in the first three
        # draws with overwhelming probability.
        real = sample_realization(model, 8, 3, derive_subseed(31, 1))
        assert not time_cone_check(8, model, real, 3).all()

    def test_full_support_is_trivially_closed(self):
        # On a 3-cycle the clean walk reaches all sites by t=2; from then
        # on the neighborhood of the support is the whole cycle.
        real = sample_realization(CLEAN, 3, 8, 0)
        states = evolve_state(3, real, 8, InitialStateParams(np.pi / 2, np.pi / 2))
        from cyclewalk import position_probability

        assert all(position_probability(states[2], x) > 1e-12 for x in range(3))
        assert time_cone_check(3, CLEAN, real, 8).all()


class TestSweeps:
    def test_sweep_time_is_ensemble_average(self):
        a = sweep_time(4, CLEAN, 5, 2, 9)
        b = ensemble_average(4, CLEAN, 5, 2, 9)
        np.testing.assert_array_equal(a.mean_e_av, b.mean_e_av)

    def test_zero_strength_row_equals_clean_curve(self):
        sweep = sweep_strength(4, "static-phase", [0.0, 0.5], ts=[1, 2, 3, 4],
                               n_realizations=3, master_seed=6)
        clean = ensemble_average(4, CLEAN, 4, 3, 6)
        np.testing.assert_array_equal(sweep.mean[0], clean.mean_e_av)

    def test_single_state_coin_sweep_pins_first_step_at_one(self):
        sweep = sweep_strength(
            4, "static-coin", np.linspace(0.0, 1.0, 6), ts=[1],
            n_realizations=20, master_seed=13,
            quad=SingleInitial(theta=np.pi / 2, phi=np.pi / 2))
        np.testing.assert_allclose(sweep.mean[:, 0], np.ones(6), atol=1e-10)

    def test_rejects_bad_steps(self):
        with pytest.raises(ValueError):
            sweep_strength(4, "static-phase", [0.5], ts=[], n_realizations=1, master_seed=0)
        with pytest.raises(ValueError):
            sweep_strength(4, "static-phase", [0.5], ts=[0], n_realizations=1, master_seed=0)
