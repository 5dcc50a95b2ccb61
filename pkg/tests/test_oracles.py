from __future__ import annotations

from fractions import Fraction as F

import numpy as np
import pytest

from lockean.logic import ModelSet, SizeGateError
from lockean.oracles import (
    THEOREMS,
    InstanceGenerator,
    brute_closure,
    brute_conjunctive_closure,
    brute_family,
    brute_upset,
    kl_minimality_check,
    random_distribution,
    replay,
    theorem_suite,
)
from lockean.probability import DistributionError, new_distribution, revise_prob, uniform

K4 = new_distribution(["1/8", "1/4", "1/4", "3/8"])


class TestBruteOracles:
    def test_uniform_not_closed(self):
        assert not brute_closure(uniform(2), F(3, 4))
        assert not brute_conjunctive_closure(uniform(2), F(3, 4))

    def test_example_closed(self):
        p = new_distribution(["1/20", "3/10", "3/5", "1/20"])
        assert brute_closure(p, F(9, 10)) and brute_conjunctive_closure(p, F(9, 10))
        assert np.array_equal(brute_family(p, F(9, 10)), brute_upset(2, ModelSet.of(2, [1, 2])))

    def test_family_counts(self):
        assert int(brute_family(uniform(2), F(3, 4)).sum()) == 5


class TestGenerator:
    def test_reproducible(self):
        a = random_distribution(InstanceGenerator(3, 3).child(5))
        b = random_distribution(InstanceGenerator(3, 3).child(5))
        assert a == b and a.positive

    def test_children_differ(self):
        gen = InstanceGenerator(3, 3)
        assert random_distribution(gen.child(0)) != random_distribution(gen.child(1))


class TestKl:
    def test_k4_instance(self):
        verdict = kl_minimality_check(K4, ModelSet.of(2, [0, 1]), F(7, 8), trials=1000, seed=1)
        assert verdict.ok and verdict.checked == 1000
        assert verdict.details["kl_revised"] == pytest.approx(0.540206, abs=1e-6)
        assert verdict.details["min_sample_kl"] >= verdict.details["kl_revised"] - 1e-12

    def test_lambda_equal_to_prior(self):
        psi = ModelSet.of(2, [2, 3])  # probability 5/8
        assert revise_prob(K4, psi, F(5, 8)) == K4
        verdict = kl_minimality_check(K4, psi, F(5, 8), trials=200)
        assert verdict.ok and verdict.details["kl_revised"] == 0

    def test_infeasible(self):
        with pytest.raises(DistributionError):
            kl_minimality_check(K4, ModelSet.full(2), F(3, 4))
        with pytest.raises(ValueError):
            kl_minimality_check(K4, ModelSet.of(2, [0]), 1)


class TestSuite:
    @pytest.mark.parametrize("tag", THEOREMS)
    def test_small_runs_clean(self, tag):
        trials = 20 if tag == "P4" else 100
        verdict = theorem_suite(tag, InstanceGenerator(11, 2 if tag == "P4" else 3), trials, samples=200)
        assert verdict.ok, verdict.failures[:2]
        assert verdict.checked == trials

    def test_unknown_tag(self):
        with pytest.raises(ValueError, match="unknown theorem tag"):
            theorem_suite("T9", InstanceGenerator(0, 3), 1)

    def test_size_gate(self):
        with pytest.raises(SizeGateError):
            theorem_suite("T1", InstanceGenerator(0, 5), 1)

    def test_f1_beyond_enumeration_limit(self):
        assert theorem_suite("F1", InstanceGenerator(0, 6), 20).ok

    def test_replay_matches_run(self):
        verdict = replay("T1", 7, 42, 3)
        assert verdict.checked == 1 and verdict.ok
