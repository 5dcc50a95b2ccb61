from __future__ import annotations

from fractions import Fraction as F
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from lockean.analysis import (
    belief_core,
    belief_membership,
    belief_set,
    classify,
    closed,
    closed_thresholds,
    diagnostics,
    find_steps,
    image,
    is_closed,
    lambda_max,
    minimal_members,
    theorem1_generator,
    threshold_band,
)
from lockean.logic import ModelSet
from lockean.probability import Distribution, DistributionError, ThresholdError, new_distribution, prob, uniform

EXAMPLE = new_distribution(["1/20", "3/10", "3/5", "1/20"])


def ms(n, *worlds):
    return ModelSet.of(n, worlds)


def positive(n_vars):
    return st.lists(st.integers(1, 40), min_size=1 << n_vars, max_size=1 << n_vars).map(
        lambda ws: Distribution(n_vars, tuple(F(w, sum(ws)) for w in ws))
    )


def thresholds():
    return st.fractions(F(1, 2), F(1), max_denominator=200).filter(lambda x: x > F(1, 2))


def naive_members(p, lam):
    return [ModelSet(p.n_vars, e) for e in range(1 << len(p)) if prob(p, ModelSet(p.n_vars, e)) >= lam]


def naive_closed(p, lam):
    members = {s.bits for s in naive_members(p, lam)}
    return all((a & b) in members for a, b in combinations(members, 2))


class TestExample:
    def test_band(self):
        band = threshold_band(EXAMPLE, F(4, 5))
        assert (band.lambda_m, band.lambda_M) == (F(7, 10), F(9, 10))
        assert F(4, 5) in band and F(7, 10) not in band
        assert threshold_band(EXAMPLE, F(3, 5)).lambda_m == F(1, 2)

    def test_image(self):
        values = image(EXAMPLE)
        assert values[0] == 0 and values[-1] == 1
        assert F(9, 10) in values and F(4, 5) not in values

    def test_closed_thresholds(self):
        assert closed_thresholds(EXAMPLE) == [(F(3, 5), ms(2, 2)), (F(9, 10), ms(2, 1, 2))]

    def test_steps(self):
        steps = find_steps(EXAMPLE)
        assert [s.step_worlds for s in steps] == [(2,), (1,)]
        assert [s.step_mass for s in steps] == [F(3, 5), F(3, 10)]

    def test_closed_at_nine_tenths(self):
        report = is_closed(EXAMPLE, F(9, 10))
        assert report.closed and report.generator == ms(2, 1, 2)
        assert report.lambda_M == F(9, 10) and report.min_mass_on_generator == F(3, 10)
        assert classify(EXAMPLE, F(9, 10)).maximal is False

    def test_not_closed_in_between(self):
        report = is_closed(EXAMPLE, F(4, 5))
        # the band (7/10, 9/10] gives the closed set as well
        assert report.closed
        report = is_closed(EXAMPLE, F(13, 20))
        assert not report.closed
        a, b = report.witness
        assert prob(EXAMPLE, a) >= F(13, 20) and prob(EXAMPLE, b) >= F(13, 20)
        assert prob(EXAMPLE, a & b) < F(13, 20)

    def test_minimal_members(self):
        assert minimal_members(EXAMPLE, F(9, 10)) == [ms(2, 1, 2)]

    def test_trivial(self):
        # 19/20 is still an event probability; nothing lies in (19/20, 1)
        assert not classify(EXAMPLE, F(19, 20)).trivial
        assert classify(EXAMPLE, F(24, 25)).trivial


class TestUniform:
    def test_no_steps(self):
        assert find_steps(uniform(2)) == []
        assert closed_thresholds(uniform(3)) == []

    def test_open_at_three_quarters(self):
        report = is_closed(uniform(2), F(3, 4))
        assert not report.closed
        assert report.witness == (ms(2, 0, 1, 2), ms(2, 1, 2, 3))

    def test_only_trivial_closed(self):
        assert is_closed(uniform(2), 1).generator.is_full()
        assert classify(uniform(2), 1).trivial


class TestSteps:
    def test_one_step(self):
        steps = find_steps(new_distribution(["7/10", "1/10", "1/10", "1/10"]))
        assert len(steps) == 1
        assert steps[0].phi_omega == ms(2, 0) and steps[0].lambda_star == F(7, 10)

    def test_tied_step_worlds(self):
        steps = find_steps(new_distribution(["2/5", "2/5", "1/10", "1/10"]))
        assert [s.step_worlds for s in steps] == [(0, 1)]
        assert steps[0].lambda_star == F(4, 5)

    @settings(max_examples=60)
    @given(positive(2))
    def test_star_strictly_between_half_and_one(self, p):
        for step in find_steps(p):
            assert F(1, 2) < step.lambda_star < 1
            assert is_closed(p, step.lambda_star).generator == step.phi_omega


class TestDiagnostics:
    def test_tied(self):
        d = diagnostics(new_distribution(["7/10", "1/10", "1/10", "1/10"]), F(3, 4))
        assert (d.big_stepped, d.acceptance, d.p_stable) == (False, True, None)

    def test_decimal_example(self):
        d = diagnostics(new_distribution(["0.05", "0.3", "0.6", "0.05"]), F(3, 4))
        assert not d.big_stepped and d.acceptance

    def test_big_stepped(self):
        d = diagnostics(new_distribution(["1/15", "2/15", "4/15", "8/15"]), F(3, 4))
        assert d.big_stepped and d.acceptance

    def test_acceptance_tie_at_half(self):
        d = diagnostics(uniform(1), F(3, 4))
        assert d.acceptance and not d.big_stepped

    def test_p_stable(self):
        p = new_distribution(["1/8", "1/4", "1/4", "3/8"])
        # at 3/4 the bound for {1,2,3} is 3 * 1/8 = 3/8, above P(world 1)
        assert diagnostics(p, F(3, 4), ms(2, 1, 2, 3)).p_stable is False
        # at 3/5 it drops to 3/16
        assert diagnostics(p, F(3, 5), ms(2, 1, 2, 3)).p_stable is True
        assert diagnostics(p, F(3, 5), ms(2, 3)).p_stable is False
        with pytest.raises(ThresholdError):
            diagnostics(p, 1, ms(2, 3))


class TestErrors:
    def test_threshold(self):
        with pytest.raises(ThresholdError):
            is_closed(EXAMPLE, F(1, 2))

    def test_positive_required(self):
        p = new_distribution(["1/2", "1/2", "0", "0"], require_positive=False)
        with pytest.raises(DistributionError):
            is_closed(p, F(3, 4))


class TestProperties:
    @settings(max_examples=150, deadline=None)
    @given(positive(2), thresholds())
    def test_core_criterion_matches_pairwise_scan(self, p, lam):
        report = is_closed(p, lam)
        assert report.closed == naive_closed(p, lam) == closed(p, lam)
        assert (theorem1_generator(p, lam) is not None) == report.closed
        if report.closed:
            members = naive_members(p, lam)
            upset = [s for s in (ModelSet(2, e) for e in range(16)) if report.generator.issubset(s)]
            assert sorted(m.bits for m in members) == sorted(s.bits for s in upset)
            assert prob(p, report.generator) == report.lambda_M
            n = len(report.generator)
            assert report.lambda_M > F(n, n + 1)
            # the only event at exactly lam is the generator
            for s in members:
                if prob(p, s) == lam:
                    assert s == report.generator

    @settings(max_examples=100, deadline=None)
    @given(positive(2), thresholds())
    def test_band_is_equivalence_class(self, p, lam):
        band = threshold_band(p, lam)
        assert lam in band
        assert lambda_max(p, lam) == band.lambda_M
        members = belief_set(p, lam)
        assert belief_set(p, band.lambda_M) == members
        assert band.lambda_m == F(1, 2) or belief_set(p, band.lambda_m) != members

    @settings(max_examples=100, deadline=None)
    @given(positive(2), thresholds())
    def test_no_contradictory_pairs(self, p, lam):
        for s in belief_set(p, lam):
            assert not belief_membership(p, lam, s.complement())

    @settings(max_examples=100, deadline=None)
    @given(positive(2), thresholds())
    def test_core_is_intersection_of_members(self, p, lam):
        core = ModelSet.full(2)
        for s in belief_set(p, lam):
            core = core & s
        assert belief_core(p, lam) == core

    @settings(max_examples=30, deadline=None)
    @given(positive(3))
    def test_nontrivial_closed_level_iff_step(self, p):
        levels = [v for v in image(p) if F(1, 2) < v < 1 and closed(p, v)]
        assert sorted(levels) == [lam for lam, _ in closed_thresholds(p)]

    def test_subset_sum_band_above_enumeration_limit(self):
        # five variables: lambda_M found without enumerating events
        masses = [F(1, 64)] * 32
        masses[0] = F(33, 64)
        p = Distribution(5, tuple(masses))
        assert threshold_band(p, F(3, 5)).lambda_M == F(39, 64)
        assert threshold_band(p, F(3, 5)).image is None
        assert is_closed(p, F(33, 64)).generator == ModelSet.of(5, [0])
