"""Instance invariants, gap truth, and file round trips."""

import numpy as np
import pytest

from streambandit import (
    AmbiguousBestError,
    BanditInstance,
    gap_profile,
    hardness_budget,
    load_instance,
    save_instance,
)
from streambandit.instances import dumps_instance


class TestBanditInstance:
    def test_mean_bounds_enforced(self):
        with pytest.raises(ValueError):
            BanditInstance(means=(0.5, 1.2))
        with pytest.raises(ValueError):
            BanditInstance(means=(-0.1,))

    def test_exact_delta2_must_match_realized(self):
        BanditInstance(means=(0.9, 0.5), known_delta2=0.9 - 0.5, delta2_mode="exact")
        with pytest.raises(ValueError):
            BanditInstance(means=(0.9, 0.5), known_delta2=0.3, delta2_mode="exact")

    def test_lower_bound_mode_bracket(self):
        BanditInstance(means=(0.9, 0.5), known_delta2=0.1, delta2_mode="lower_bound")
        with pytest.raises(ValueError):
            BanditInstance(means=(0.9, 0.5), known_delta2=0.5, delta2_mode="lower_bound")
        with pytest.raises(ValueError):
            BanditInstance(means=(0.9, 0.5), known_delta2=0.0, delta2_mode="lower_bound")

    def test_single_arm_rejects_gap_information(self):
        BanditInstance(means=(0.4,))  # fine without side information
        with pytest.raises(ValueError):
            BanditInstance(means=(0.4,), known_delta2=0.1)

    def test_with_delta2_swaps_side_information(self):
        inst = BanditInstance(means=(0.9, 0.5), known_delta2=0.4, delta2_mode="exact")
        lb = inst.with_delta2(0.1, "lower_bound")
        assert lb.means == inst.means
        assert lb.known_delta2 == 0.1
        assert lb.delta2_mode == "lower_bound"


class TestGapProfile:
    def test_hand_arithmetic(self):
        prof = gap_profile((0.9, 0.5, 0.3))
        assert prof.best_index == 0
        assert prof.gaps == (0.0, 0.9 - 0.5, 0.9 - 0.3)
        assert prof.sorted_gaps == (0.9 - 0.5, 0.9 - 0.3)
        assert hardness_budget((0.9, 0.5, 0.3)) == pytest.approx(
            1 / (0.9 - 0.5) ** 2 + 1 / (0.9 - 0.3) ** 2
        )
        assert hardness_budget((0.9, 0.5, 0.3)) == pytest.approx(9.0278, abs=1e-3)

    def test_single_nonbest_arm(self):
        assert hardness_budget((0.7, 0.2)) == pytest.approx(1 / 0.5**2)

    def test_best_gap_zero_and_nonnegative(self):
        rng = np.random.default_rng(0)
        means = tuple(rng.random(40))
        prof = gap_profile(means)
        assert prof.gaps[prof.best_index] == 0.0
        assert all(g >= 0 for g in prof.gaps)

    def test_tie_raises(self):
        with pytest.raises(AmbiguousBestError):
            gap_profile((0.5, 0.7, 0.7))

    def test_budget_matches_double_loop_oracle(self):
        rng = np.random.default_rng(3)
        means = tuple(rng.random(100))
        best = max(range(100), key=lambda i: means[i])
        oracle = 0.0
        for i in range(100):
            if i != best:
                oracle += 1.0 / (means[best] - means[i]) ** 2
        got = hardness_budget(means)
        assert abs(got - oracle) <= 10 * np.spacing(oracle)

    def test_single_arm_budget_is_zero(self):
        assert hardness_budget((0.4,)) == 0.0


class TestRoundTrip:
    def test_json_round_trip_bit_exact(self, tmp_path):
        rng = np.random.default_rng(11)
        inst = BanditInstance(
            means=tuple(rng.random(25)),
            known_delta2=None,
            delta2_mode="exact",
            label="round-trip",
        )
        path = tmp_path / "inst.json"
        save_instance(inst, path)
        back = load_instance(path)
        assert back == inst

    def test_serialized_means_have_17_significant_digits(self):
        inst = BanditInstance(means=(1 / 3, 0.1), known_delta2=None)
        text = dumps_instance(inst)
        assert "0.33333333333333331" in text

    def test_delta2_round_trips(self, tmp_path):
        inst = BanditInstance(means=(0.9, 0.5), known_delta2=0.1, delta2_mode="lower_bound")
        path = tmp_path / "inst.json"
        save_instance(inst, path)
        assert load_instance(path) == inst
