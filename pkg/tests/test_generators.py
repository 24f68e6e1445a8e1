from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from distvote import (
    CPartitionInstance,
    DomainError,
    TieBreakOrder,
    ValuationProfile,
    gen_t2,
    gen_t3,
    gen_t4,
    gen_t5,
    gen_t6_gadget,
    gen_t9,
    induce_ordinal,
    run_and_measure,
    social_welfare,
)
from distvote.engine import DistrictElection

EPS_SEQUENCE = (1e-3, 1e-6, 1e-9)


def measure(inst):
    outcome, report = run_and_measure(inst.election)
    return outcome, report


def assert_witness(inst, rel_tol=1e-3):
    outcome, report = measure(inst)
    assert outcome.winner == inst.expected_winner
    assert report.optimal_alt == inst.optimal_alt
    gap = abs(report.distortion - inst.limit_distortion) / inst.limit_distortion
    assert gap <= rel_tol
    assert report.distortion <= inst.limit_distortion + 1e-9
    return report.distortion


class TestT2:
    def test_symmetric_frozen_example(self):
        inst = gen_t2("symmetric", 3, 2, [2, 2], 1e-6)
        assert inst.limit_distortion == 4.0  # 1 + mk/2
        assert_witness(inst)

    def test_unrestricted_two_voters(self):
        inst = gen_t2("unrestricted", 2, 2, [1, 1], 1e-6)
        assert inst.limit_distortion == 3.0  # 1 + m (n - 1)
        assert_witness(inst)

    def test_unweighted_uses_actual_sizes(self):
        sizes = [2, 6, 4]
        inst = gen_t2("unweighted", 5, 3, sizes, 1e-6)
        n, n1, n2 = sum(sizes), sizes[0], sizes[1]
        expected = 1 + Fraction(5, 2) * (Fraction(n + n2, n1) - 1)
        assert inst.limit_distortion == pytest.approx(float(expected))
        assert_witness(inst)

    def test_distortion_grows_as_epsilon_shrinks(self):
        values = [measure(gen_t2("symmetric", 4, 2, [3, 3], e))[1].distortion for e in EPS_SEQUENCE]
        assert values[0] < values[1] < values[2] < 9.0  # limit 1 + mk/2

    def test_rejects_m_not_above_k(self):
        with pytest.raises(DomainError):
            gen_t2("symmetric", 3, 3, [2, 2, 2], 1e-6)

    def test_rejects_epsilon_out_of_range(self):
        with pytest.raises(DomainError):
            gen_t2("symmetric", 3, 2, [2, 2], 0.5)

    def test_rows_sum_to_one(self):
        inst = gen_t2("unweighted", 4, 3, [1, 4, 2], 1e-3)
        sums = inst.election.profile.values.sum(axis=1)
        assert np.allclose(sums, 1.0, atol=1e-12)


class TestT3:
    def test_symmetric_frozen_example(self):
        inst = gen_t3("symmetric", 4, 2, [4, 4])
        assert inst.limit_distortion == 25.0  # 1 + 3 m^2 k / 4
        assert assert_witness(inst) == pytest.approx(25.0, abs=1e-9)

    def test_unrestricted_frozen_example(self):
        inst = gen_t3("unrestricted", 4, 2, [4, 4])
        assert inst.limit_distortion == 25.0  # 1 + m^2 (n/n0 - 1/2)
        assert assert_witness(inst) == pytest.approx(25.0, abs=1e-9)

    def test_local_plurality_winner_in_first_district(self):
        inst = gen_t3("symmetric", 5, 2, [10, 10])
        outcome, _ = measure(inst)
        assert outcome.local_winners[0] == inst.expected_winner == 3  # m - 2

    def test_measured_is_constant_in_epsilon(self):
        values = [measure(gen_t3("symmetric", 4, 2, [4, 4], e))[1].distortion for e in EPS_SEQUENCE]
        assert values[0] == values[1] == values[2]

    def test_strict_margin_variant_still_elects_the_witness(self):
        for eclass, sizes in (("symmetric", [8, 8]), ("unrestricted", [4, 4])):
            inst = gen_t3(eclass, 4, 2, sizes, 1e-6, strict_margins=True)
            outcome, report = measure(inst)
            assert outcome.winner == inst.expected_winner
            assert report.distortion <= inst.limit_distortion
            assert report.distortion == pytest.approx(inst.limit_distortion, rel=1e-3)

    def test_divisibility_preconditions(self):
        with pytest.raises(DomainError):
            gen_t3("symmetric", 4, 2, [6, 6])  # district 0 not a multiple of m
        with pytest.raises(DomainError):
            gen_t3("unweighted", 4, 3, [4, 4, 3])  # odd half-district

    def test_rows_sum_to_one(self):
        inst = gen_t3("unweighted", 4, 3, [8, 5, 2])
        sums = inst.election.profile.values.sum(axis=1)
        assert np.allclose(sums, 1.0, atol=1e-12)


class TestT4:
    def test_unrestricted_frozen_example(self):
        inst = gen_t4("unrestricted", 3, 2, [3, 6])
        # exact ratio 1 + m + m^2 (n/n0 - 1) = 22; the stated floor is 19
        assert inst.limit_distortion == 22.0
        assert assert_witness(inst) == pytest.approx(22.0, abs=1e-9)

    def test_unweighted_frozen_example(self):
        inst = gen_t4("unweighted", 4, 2, [4, 4])
        # exact ratio = (1 + (m^2/4)((3n + n2)/n1 - 3)) + m = 17 + 4
        assert inst.limit_distortion == 21.0
        assert assert_witness(inst) == pytest.approx(21.0, abs=1e-9)

    def test_first_district_has_balanced_first_choices(self):
        inst = gen_t4("unweighted", 4, 2, [8, 2])
        d0 = ValuationProfile(inst.election.profile.values[:8])
        tops = induce_ordinal(d0, inst.election.tiebreak.as_fixed()).first_positions()
        assert list(np.bincount(tops, minlength=4)) == [2, 2, 2, 2]

    def test_measured_is_constant_in_epsilon(self):
        values = [measure(gen_t4("unweighted", 4, 2, [4, 4], e))[1].distortion for e in EPS_SEQUENCE]
        assert values[0] == values[1] == values[2]

    def test_strict_margin_variant_still_elects_the_witness(self):
        inst = gen_t4("unrestricted", 4, 2, [4, 4], 1e-6, strict_margins=True)
        outcome, report = measure(inst)
        assert outcome.winner == inst.expected_winner
        assert report.distortion == pytest.approx(inst.limit_distortion, rel=1e-3)

    def test_preconditions(self):
        with pytest.raises(DomainError):
            gen_t4("unweighted", 3, 3, [3, 3, 3])  # m must exceed k
        with pytest.raises(DomainError):
            gen_t4("unrestricted", 3, 2, [4, 4])  # district 0 not a multiple of m


class TestT5:
    def test_welfare_margins_k2_q2(self):
        eps = 1e-6
        inst = gen_t5(2, 2, eps)
        p = inst.election.profile
        assert social_welfare(p, 2) == pytest.approx(2 + 6 * eps, abs=1e-12)
        assert social_welfare(p, 0) == pytest.approx(2 - 3 * eps, abs=1e-12)
        assert inst.optimal_alt == 2

    def test_k3_shape(self):
        inst = gen_t5(3, 3)
        assert inst.election.profile.n == 6
        assert inst.election.profile.m == 4
        assert inst.election.k == 3

    def test_rejects_non_integer_district_size(self):
        with pytest.raises(DomainError):
            gen_t5(3, 2)  # n = 4 voters cannot split into 3 districts

    def test_rejects_odd_q_for_two_districts(self):
        with pytest.raises(DomainError):
            gen_t5(2, 3)

    def test_rejects_epsilon_out_of_range(self):
        with pytest.raises(DomainError):
            gen_t5(2, 2, 1.0)

    def test_witness_runs(self):
        inst = gen_t5(2, 4)
        outcome, report = measure(inst)
        assert outcome.winner == inst.expected_winner
        assert report.distortion >= 1.0


class TestT9:
    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
    def test_adversarial_distortion(self, m):
        inst = gen_t9(m)
        _, report = measure(inst)
        assert report.distortion == pytest.approx(1 + m * m / 2, abs=1e-9)
        assert inst.limit_distortion == 1 + m * m / 2

    def test_favorable_tiebreak_elects_the_optimum(self):
        inst = gen_t9(4)
        e = inst.election
        favorable = TieBreakOrder.prefer([inst.optimal_alt], e.profile.m)
        outcome, report = run_and_measure(
            DistrictElection(e.profile, e.partition, e.weights, e.rule, favorable)
        )
        assert outcome.winner == inst.optimal_alt
        assert report.distortion == 1.0

    def test_m_lower_bound(self):
        with pytest.raises(DomainError):
            gen_t9(1)


class TestCPartition:
    def test_from_integers_normalizes(self):
        inst = CPartitionInstance.from_integers([3, 2, 3, 2])
        assert sum(inst.numbers) == 1
        assert inst.q == 4

    def test_rejects_odd_count(self):
        with pytest.raises(DomainError):
            CPartitionInstance.from_integers([1, 1, 1])

    def test_rejects_number_above_half(self):
        with pytest.raises(DomainError):
            CPartitionInstance.from_integers([4, 1, 1, 1])

    def test_equal_split_ground_truth(self):
        assert CPartitionInstance.from_integers([3, 2, 3, 2]).has_equal_split()
        assert CPartitionInstance.from_integers([4, 4, 1, 1]).has_equal_split()  # 4+1 = 5 = half
        assert not CPartitionInstance.from_integers([7, 7, 4, 2]).has_equal_split()
        assert CPartitionInstance.from_integers([1, 1]).has_equal_split()

    def test_safe_epsilon_is_small_enough(self):
        inst = CPartitionInstance.from_integers([3, 2, 3, 2])
        eps = inst.safe_epsilon()
        assert 0 < eps < min(inst.numbers) / 2


class TestT6:
    def test_target_welfare_is_one(self):
        inst = CPartitionInstance.from_integers([3, 2, 3, 2])
        gadget = gen_t6_gadget(inst, 2)
        assert social_welfare(gadget.election.profile, gadget.optimal_alt) == pytest.approx(1.0)

    def test_shapes(self):
        gadget = gen_t6_gadget(CPartitionInstance.from_integers([3, 2, 3, 2]), 3)
        p = gadget.election.profile
        assert p.n == 3 * 4 // 2
        assert p.m == 3 * 4 + 1

    def test_emitted_election_matches_expected_winner(self):
        gadget = gen_t6_gadget(CPartitionInstance.from_integers([5, 3, 1, 1]), 2)
        outcome, _ = measure(gadget)
        assert outcome.winner == gadget.expected_winner

    def test_rows_sum_to_one(self):
        gadget = gen_t6_gadget(CPartitionInstance.from_integers([4, 4, 1, 1]), 4)
        sums = gadget.election.profile.values.sum(axis=1)
        assert np.allclose(sums, 1.0, atol=1e-12)
