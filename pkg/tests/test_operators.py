import numpy as np
import pytest

from cyclewalk import (
    HADAMARD,
    LITERAL,
    SYMMETRIC,
    CoinSpec,
    InitialStateParams,
    ShiftSpec,
    StepPlan,
    WalkerState,
    apply_coin,
    apply_shift,
    build_step_unitary,
    clean_plan,
    coin_matrix,
    entanglement_entropy,
    initial_state,
    is_unitary,
    position_probability,
    reduced_coin_density,
    step,
)

INV_SQRT2 = 1.0 / np.sqrt(2.0)


def random_state(rng, k):
    raw = rng.normal(size=2 * k) + 1j * rng.normal(size=2 * k)
    return WalkerState(k=k, t=0, amplitudes=raw / np.linalg.norm(raw))


def random_plan(rng, k):
    choice = rng.integers(0, 6)
    coins = HADAMARD
    shift = ShiftSpec(jump=1)
    if choice == 1:
        coins = tuple(CoinSpec(float(r)) for r in rng.uniform(0, 1, size=k))
    elif choice == 2:
        coins = CoinSpec(float(rng.uniform(0, 1)))
    elif choice == 3:
        shift = ShiftSpec(jump=1, phase0=rng.uniform(0, np.pi, size=k))
    elif choice == 4:
        shift = ShiftSpec(jump=1, phase0=float(rng.uniform(0, np.pi)))
    elif choice == 5:
        shift = ShiftSpec(jump=int(rng.integers(0, 2 * k + 1)))
    return StepPlan(coins=coins, shift=shift)


class TestCoinMatrix:
    def test_hadamard_at_half(self):
        np.testing.assert_allclose(coin_matrix(CoinSpec(0.5)),
                                   INV_SQRT2 * np.array([[1, 1], [1, -1]]), atol=1e-15)

    def test_rho_one_is_signed_identity(self):
        np.testing.assert_allclose(coin_matrix(CoinSpec(1.0)), [[1, 0], [0, -1]], atol=0)

    def test_rho_zero_is_swap(self):
        np.testing.assert_allclose(coin_matrix(CoinSpec(0.0)), [[0, 1], [1, 0]], atol=0)

    def test_family_is_real_symmetric_unitary(self):
        for rho in np.linspace(0.0, 1.0, 21):
            m = coin_matrix(CoinSpec(float(rho)))
            assert np.allclose(m, m.T)
            assert is_unitary(m)

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            CoinSpec(-0.01)
        with pytest.raises(ValueError):
            CoinSpec(1.01)


class TestApplyCoin:
    def test_hadamard_column(self):
        state = initial_state(4, InitialStateParams(0.0, 0.0))
        out = apply_coin(state, StepPlan(coins=HADAMARD))
        assert out.amplitude(0, 0) == pytest.approx(INV_SQRT2)
        assert out.amplitude(0, 1) == pytest.approx(INV_SQRT2)
        assert out.t == state.t

    def test_site_indexed_coin_acts_locally(self):
        state = initial_state(4, InitialStateParams(np.pi, np.pi / 2))  # i|0,1>
        coins = (CoinSpec(1.0), CoinSpec(0.3), CoinSpec(0.7), CoinSpec(0.5))
        out = apply_coin(state, StepPlan(coins=coins))
        assert out.amplitude(0, 1) == pytest.approx(-1j, abs=1e-15)

    def test_hadamard_on_phase_symmetric_state(self):
        state = initial_state(4, InitialStateParams(np.pi / 2, np.pi / 2))
        out = apply_coin(state, StepPlan(coins=HADAMARD))
        assert out.amplitude(0, 0) == pytest.approx((1 + 1j) / 2)
        assert out.amplitude(0, 1) == pytest.approx((1 - 1j) / 2)

    def test_rejects_wrong_coin_count(self):
        state = initial_state(4, InitialStateParams(0.0, 0.0))
        with pytest.raises(ValueError, match="length"):
            apply_coin(state, StepPlan(coins=(HADAMARD, HADAMARD)))


class TestApplyShift:
    def test_coin0_moves_left(self):
        state = initial_state(4, InitialStateParams(0.0, 0.0))  # |0,0>
        out = apply_shift(state, ShiftSpec(jump=1))
        assert out.amplitude(3, 0) == pytest.approx(1.0)

    def test_coin1_moves_right(self):
        state = initial_state(4, InitialStateParams(np.pi, 0.0))  # |0,1>
        out = apply_shift(state, ShiftSpec(jump=1))
        assert out.amplitude(1, 1) == pytest.approx(1.0)

    def test_site_phase_rides_along(self):
        state = initial_state(4, InitialStateParams(0.0, 0.0))
        phases = np.array([np.pi / 3, 0.0, 0.0, 0.0])
        out = apply_shift(state, ShiftSpec(jump=1, phase0=phases))
        assert out.amplitude(3, 0) == pytest.approx(np.exp(1j * np.pi / 3))

    def test_rejects_negative_jump(self):
        with pytest.raises(ValueError):
            ShiftSpec(jump=-1)


class TestStep:
    def test_clean_step_makes_bell_state(self):
        state = initial_state(4, InitialStateParams(np.pi / 2, np.pi / 2))
        out = step(state, clean_plan())
        assert out.t == 1
        assert out.amplitude(3, 0) == pytest.approx((1 + 1j) / 2)
        assert out.amplitude(1, 1) == pytest.approx((1 - 1j) / 2)
        assert abs(out.amplitude(3, 0)) ** 2 == pytest.approx(0.5)
        assert abs(out.amplitude(1, 1)) ** 2 == pytest.approx(0.5)

    def test_identity_like_plan_fixes_origin(self):
        state = initial_state(4, InitialStateParams(0.0, 0.0))
        out = step(state, StepPlan(coins=CoinSpec(1.0), shift=ShiftSpec(jump=0)))
        assert out.amplitude(0, 0) == pytest.approx(1.0)
        assert out.t == 1

    def test_two_clean_steps_frozen_amplitudes(self):
        state = initial_state(4, InitialStateParams(np.pi / 2, np.pi / 2))
        out = step(step(state, clean_plan()), clean_plan())
        quarter = 1.0 / (2.0 * np.sqrt(2.0))
        assert out.amplitude(0, 0) == pytest.approx(quarter * (1 - 1j), abs=1e-12)
        assert out.amplitude(0, 1) == pytest.approx(quarter * (1 + 1j), abs=1e-12)
        assert out.amplitude(2, 0) == pytest.approx(quarter * (1 + 1j), abs=1e-12)
        assert out.amplitude(2, 1) == pytest.approx(quarter * (-1 + 1j), abs=1e-12)

    def test_unitarity_over_random_inputs(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            k = int(rng.choice([3, 4, 5, 8]))
            state = random_state(rng, k)
            out = step(state, random_plan(rng, k))
            assert abs(np.linalg.norm(out.amplitudes) - 1.0) < 1e-10


class TestBuildStepUnitary:
    def test_clean_k3_is_unitary(self):
        matrix = build_step_unitary(3, clean_plan())
        assert matrix.shape == (6, 6)
        assert is_unitary(matrix)

    def test_matrix_action_matches_step(self):
        state = initial_state(4, InitialStateParams(np.pi / 2, np.pi / 2))
        matrix = build_step_unitary(4, clean_plan())
        direct = step(state, clean_plan())
        np.testing.assert_allclose(matrix @ state.amplitudes,
                                   direct.amplitudes, atol=1e-12)

    def test_jump_k_equals_jump_zero(self):
        for k in (3, 4, 5):
            a = build_step_unitary(k, clean_plan(jump=k))
            b = build_step_unitary(k, clean_plan(jump=0))
            np.testing.assert_allclose(a, b, atol=0)

    def test_oracle_equivalence_across_conventions(self):
        rng = np.random.default_rng(23)
        for k in (3, 4, 5, 8):
            for _ in range(20):
                plan = random_plan(rng, k)
                state = random_state(rng, k)
                for convention in (LITERAL, SYMMETRIC):
                    matrix = build_step_unitary(k, plan, convention)
                    assert is_unitary(matrix)
                    np.testing.assert_allclose(
                        step(state, plan, convention).amplitudes,
                        matrix @ state.amplitudes,
                        atol=1e-12)


class TestShiftProperties:
    def test_factored_phase_equivalence(self):
        # Only the relative phase of the two coin branches is observable:
        # (gamma(x), 0) and (gamma(x)+c, c) give identical E and P(x).
        rng = np.random.default_rng(5)
        k = 4
        gamma = rng.uniform(0, 2 * np.pi, size=k)
        c = 1.2345
        base = initial_state(k, InitialStateParams(1.1, np.pi / 2))
        shifted = base
        plain = base
        for _ in range(6):
            plain = step(plain, StepPlan(coins=HADAMARD, shift=ShiftSpec(1, phase0=gamma)))
            shifted = step(shifted, StepPlan(
                coins=HADAMARD, shift=ShiftSpec(1, phase0=gamma + c, phase1=np.full(k, c))))
            e_plain = entanglement_entropy(reduced_coin_density(plain))
            e_shift = entanglement_entropy(reduced_coin_density(shifted))
            assert e_shift == pytest.approx(e_plain, abs=1e-12)
            for x in range(k):
                assert position_probability(shifted, x) == pytest.approx(
                    position_probability(plain, x), abs=1e-12)

    def test_mod_k_jump_periodicity(self):
        rng = np.random.default_rng(9)
        for k in (3, 5):
            state = random_state(rng, k)
            for jump in (0, 1, 2):
                a = step(state, clean_plan(jump=jump))
                b = step(state, clean_plan(jump=jump + k))
                np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=0)

    def test_conventions_agree_at_unit_jump(self):
        rng = np.random.default_rng(31)
        state = random_state(rng, 5)
        plan = StepPlan(coins=CoinSpec(0.3), shift=ShiftSpec(jump=1, phase0=0.7))
        np.testing.assert_allclose(step(state, plan, LITERAL).amplitudes,
                                   step(state, plan, SYMMETRIC).amplitudes, atol=0)

    def test_rejects_unknown_convention(self):
        state = initial_state(4, InitialStateParams(0.0, 0.0))
        with pytest.raises(ValueError, match="convention"):
            step(state, clean_plan(), "sideways")
