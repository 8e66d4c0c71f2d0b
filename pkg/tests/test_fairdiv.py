import random
from fractions import Fraction

import pytest

from equibase.bitset import mask_of, popcount
from equibase.brute import brute_ef1_exists, brute_mms, enumerate_basis_partitions
from equibase.errors import InfeasibleError, MalformedInputError, PreconditionError
from equibase.fairdiv import (
    FairDivisionInstance,
    bundle_value,
    cut_and_choose_ef1_two_agents,
    ef1_allocate_trivalued,
    ef1_check,
    ef1_violation,
    instance_from_doc,
    instance_to_doc,
    mms_allocate_bivalued,
    mms_value_binary,
    normalize_valuation,
    parse_values,
)
from equibase.matroids import GraphicMatroid, UniformMatroid, k4_matroid
from equibase.partition import PartitionStats

M = mask_of
F = Fraction


def vals(*nums):
    return tuple(F(x) for x in nums)


def identical_instance(matroid, values, n):
    return FairDivisionInstance(matroid, tuple([vals(*values)] * n))


class TestNormalize:
    def test_trivalued_shift_only(self):
        out, shift, scale = normalize_valuation(vals(2, 3, 5))
        assert out == vals(0, 1, 3)
        assert (shift, scale) == (F(2), F(1))

    def test_bivalued_shift_and_scale(self):
        out, shift, scale = normalize_valuation(vals(1, 4, 1))
        assert out == vals(0, 1, 0)
        assert (shift, scale) == (F(1), F(1, 3))

    def test_binary_identity(self):
        out, shift, scale = normalize_valuation(vals(0, 1, 0, 1))
        assert out == vals(0, 1, 0, 1)
        assert (shift, scale) == (F(0), F(1))

    def test_negative_bivalued(self):
        out, shift, scale = normalize_valuation(vals(-2, 3))
        assert out == vals(0, 1)
        assert (shift, scale) == (F(-2), F(1, 5))


class TestEf1Check:
    def test_equal_values_pass(self):
        inst = identical_instance(UniformMatroid(6, 3), (1, 1, 0, 1, 1, 0), 2)
        assert ef1_check(inst, [M([0, 1, 2]), M([3, 4, 5])])

    def test_binary_one_versus_three(self):
        inst = identical_instance(UniformMatroid(8, 4), (1, 1, 1, 1, 0, 0, 0, 0), 2)
        bundles = [M([0, 4, 5, 6]), M([1, 2, 3, 7])]
        assert not ef1_check(inst, bundles)
        assert ef1_violation(inst, bundles) == (0, 1)

    def test_k4_figure_partition(self, k4):
        inst = identical_instance(k4, (1, 0, 0, 0, 0, 1), 2)
        assert ef1_check(inst, [M([1, 0, 4]), M([2, 3, 5])])

    def test_infeasible_allocation_rejected(self, k4):
        inst = identical_instance(k4, (1, 0, 0, 0, 0, 1), 2)
        with pytest.raises(InfeasibleError):
            ef1_check(inst, [M([0, 1, 3]), M([2, 4, 5])])


class TestEf1Trivalued:
    def test_binary_special_case(self, k4):
        inst = identical_instance(k4, (1, 1, 0, 0, 1, 0), 2)
        bundles = ef1_allocate_trivalued(inst)
        ones = M([0, 1, 4])
        assert sorted(popcount(b & ones) for b in bundles) == [1, 2]
        assert ef1_check(inst, bundles)

    def test_uniform_wide_gap_no_repairs(self):
        inst = identical_instance(UniformMatroid(6, 3), (3, 3, 1, 1, 0, 0), 2)
        stats = PartitionStats()
        bundles = ef1_allocate_trivalued(inst, stats)
        assert stats.repairs == 0
        assert ef1_check(inst, bundles)

    def test_k4_narrow_gap_needs_repair(self, k4):
        # High goods on one disjoint basis, mid goods on another, with
        # 2a > b: the two-set split leaves profiles (1,0) / (1,2), and
        # one spare-goods exchange evens the totals out.
        inst = identical_instance(k4, (3, 2, 0, 0, 2, 3), 2)
        stats = PartitionStats()
        bundles = ef1_allocate_trivalued(inst, stats)
        assert stats.repairs >= 1
        assert ef1_check(inst, bundles)
        assert brute_ef1_exists(inst)
        # Post-repair profiles stay within one step of the balanced ones.
        high, low = M([0, 5]), M([1, 4])
        profiles = {(popcount(b & high), popcount(b & low)) for b in bundles}
        assert profiles <= {(0, 2), (1, 0), (1, 1), (1, 2), (2, 0)}

    def test_all_values_equal(self):
        inst = identical_instance(UniformMatroid(4, 2), (5, 5, 5, 5), 2)
        bundles = ef1_allocate_trivalued(inst)
        assert ef1_check(inst, bundles)

    def test_single_agent(self, k4):
        inst = identical_instance(k4, (1, 2, 3, 1, 2, 3), 1)
        with pytest.raises(InfeasibleError):
            ef1_allocate_trivalued(inst)  # m != 1 * r

    def test_single_agent_uniform(self):
        inst = identical_instance(UniformMatroid(3, 3), (1, 2, 3), 1)
        assert ef1_allocate_trivalued(inst) == [M([0, 1, 2])]

    def test_rejects_non_identical(self, k4):
        inst = FairDivisionInstance(
            k4, (vals(1, 0, 0, 0, 0, 1), vals(0, 1, 0, 0, 1, 0))
        )
        with pytest.raises(PreconditionError):
            ef1_allocate_trivalued(inst)

    def test_rejects_four_values(self):
        inst = identical_instance(UniformMatroid(4, 2), (0, 1, 2, 3), 2)
        with pytest.raises(PreconditionError):
            ef1_allocate_trivalued(inst)

    def test_rejects_negative(self):
        inst = identical_instance(UniformMatroid(4, 2), (-1, 0, 1, 0), 2)
        with pytest.raises(PreconditionError):
            ef1_allocate_trivalued(inst)

    def test_random_small_instances(self):
        rng = random.Random(23)
        matroids = [
            k4_matroid(),
            UniformMatroid(8, 4),
            GraphicMatroid(3, [(0, 1), (0, 1), (1, 2), (1, 2), (0, 2), (0, 2)]),
        ]
        ns = [2, 2, 3]
        for matroid, n in zip(matroids, ns):
            for _ in range(25):
                levels = sorted(rng.sample(range(0, 9), 3))
                values = [levels[rng.randrange(3)] for _ in range(matroid.m)]
                inst = identical_instance(matroid, values, n)
                stats = PartitionStats()
                bundles = ef1_allocate_trivalued(inst, stats)
                assert ef1_check(inst, bundles)
                assert stats.repairs <= n


class TestCutAndChoose:
    def test_identical_agents(self, k4):
        inst = identical_instance(k4, (3, 2, 0, 0, 2, 3), 2)
        bundles = cut_and_choose_ef1_two_agents(inst)
        assert ef1_check(inst, bundles)

    def test_second_agent_gets_her_favorite(self, k4):
        v1 = vals(1, 0, 0, 0, 0, 1)
        v2 = vals(0, 5, 1, 1, 5, 0)
        inst = FairDivisionInstance(k4, (v1, v2))
        bundles = cut_and_choose_ef1_two_agents(inst)
        assert ef1_check(inst, bundles)
        assert bundle_value(v2, bundles[1]) >= bundle_value(v2, bundles[0])

    def test_binary_cutter_arbitrary_chooser(self):
        inst = FairDivisionInstance(
            UniformMatroid(6, 3),
            (vals(1, 1, 0, 0, 1, 0), vals("7/2", 2, "1/3", 5, 0, 1)),
        )
        bundles = cut_and_choose_ef1_two_agents(inst)
        assert ef1_check(inst, bundles)

    def test_requires_two_agents(self, k4):
        inst = identical_instance(k4, (1, 0, 0, 0, 0, 1), 3)
        with pytest.raises(PreconditionError):
            cut_and_choose_ef1_two_agents(inst)


class TestMmsValue:
    def test_floor_formula(self):
        u = UniformMatroid(9, 3)
        assert mms_value_binary(vals(1, 1, 1, 1, 1, 1, 1, 0, 0), 3, u) == 2

    def test_zero_values(self):
        u = UniformMatroid(6, 3)
        assert mms_value_binary(vals(0, 0, 0, 0, 0, 0), 2, u) == 0

    def test_k4_matches_brute(self, k4):
        values = vals(1, 1, 0, 0, 0, 1)
        assert mms_value_binary(values, 2, k4) == 1
        inst = identical_instance(k4, (1, 1, 0, 0, 0, 1), 2)
        assert brute_mms(inst, 0) == 1

    def test_rejects_non_binary(self, k4):
        with pytest.raises(PreconditionError):
            mms_value_binary(vals(2, 0, 0, 0, 0, 0), 2, k4)


class TestMmsAllocation:
    def test_single_agent_whole_ground_set(self):
        u = UniformMatroid(4, 4)
        inst = FairDivisionInstance(u, (vals(1, 0, 1, 0),))
        assert mms_allocate_bivalued(inst) == [M([0, 1, 2, 3])]

    def test_identical_binary(self, k4):
        inst = identical_instance(k4, (1, 1, 0, 0, 0, 1), 2)
        bundles = mms_allocate_bivalued(inst)
        for i in range(2):
            assert inst.value(i, bundles[i]) >= brute_mms(inst, i)

    def test_three_agents_tripled_star(self):
        g = GraphicMatroid(4, [(0, 1), (0, 2), (0, 3)] * 3)
        rng = random.Random(31)
        for _ in range(20):
            valuations = []
            for _ in range(3):
                a, b = sorted(rng.sample(range(-3, 7), 2))
                valuations.append(
                    tuple(F(rng.choice((a, b))) for _ in range(g.m))
                )
            inst = FairDivisionInstance(g, tuple(valuations))
            bundles = mms_allocate_bivalued(inst)
            for i in range(3):
                assert inst.value(i, bundles[i]) >= brute_mms(inst, i)

    def test_negative_values_supported(self, k4):
        inst = FairDivisionInstance(
            k4,
            (vals(-2, -2, 1, 1, -2, 1), vals(0, -3, -3, 0, 0, -3)),
        )
        bundles = mms_allocate_bivalued(inst)
        for i in range(2):
            assert inst.value(i, bundles[i]) >= brute_mms(inst, i)

    def test_rejects_three_values(self, k4):
        inst = identical_instance(k4, (0, 1, 2, 0, 1, 2), 2)
        with pytest.raises(PreconditionError):
            mms_allocate_bivalued(inst)

    def test_wrong_size_infeasible(self):
        inst = identical_instance(UniformMatroid(5, 2), (1,) * 5, 2)
        with pytest.raises(InfeasibleError):
            mms_allocate_bivalued(inst)


class TestShiftPreservation:
    def test_ef1_preserved_under_unshift(self, k4):
        rng = random.Random(41)
        for _ in range(20):
            shift = rng.randrange(0, 4)
            base = [rng.choice((0, 1, 3)) for _ in range(6)]
            shifted = identical_instance(k4, base, 2)
            original = identical_instance(k4, [x + shift for x in base], 2)
            for parts in enumerate_basis_partitions(k4, 2):
                bundles = list(parts)
                if ef1_check(shifted, bundles):
                    assert ef1_check(original, bundles)

    def test_mms_preserved_under_unshift(self, k4):
        rng = random.Random(43)
        for _ in range(10):
            shift = rng.randrange(-3, 4)
            base = [rng.choice((0, 1)) for _ in range(6)]
            shifted = identical_instance(k4, base, 2)
            original = identical_instance(k4, [x + shift for x in base], 2)
            mu_shifted = brute_mms(shifted, 0)
            mu_original = brute_mms(original, 0)
            assert mu_original == mu_shifted + shift * k4.full_rank
            for parts in enumerate_basis_partitions(k4, 2):
                val = min(shifted.value(0, p) for p in parts)
                if val >= mu_shifted:
                    assert (
                        min(original.value(0, p) for p in parts) >= mu_original
                    )


class TestDocuments:
    def test_roundtrip(self, k4):
        inst = FairDivisionInstance(
            k4, (vals(0, "3/2", 1, 0, "3/2", 1), vals(1, 1, 0, 0, 1, 1))
        )
        doc = instance_to_doc(inst)
        again = instance_from_doc(doc)
        assert again.valuations == inst.valuations
        assert again.matroid.to_doc() == k4.to_doc()

    def test_bad_values_rejected(self):
        with pytest.raises(MalformedInputError):
            parse_values(["1/0"])
        with pytest.raises(MalformedInputError):
            parse_values(["zebra"])

    def test_wrong_length_rejected(self, k4):
        with pytest.raises(MalformedInputError):
            FairDivisionInstance(k4, (vals(1, 2),))
