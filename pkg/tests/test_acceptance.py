"""Acceptance criteria, one test per criterion.

Each test records a single ``PASS``/``FAIL`` line before asserting; the
``conftest.py`` terminal-summary hook prints them all at the end of the
run, so a plain ``pytest -v`` shows the verdict for every criterion.
Run alone with

    pytest tests/test_acceptance.py -v
"""

from __future__ import annotations

from fractions import Fraction as F

import numpy as np
import pytest

from lockean.analysis import (
    classify,
    closed_thresholds,
    find_steps,
    is_closed,
    lambda_max,
    threshold_band,
)
from lockean.logic import ModelSet
from lockean.oracles import (
    InstanceGenerator,
    brute_closure,
    brute_conjunctive_closure,
    brute_family,
    brute_upset,
    kl_minimality_check,
    random_distribution,
    random_event,
    random_threshold,
    theorem_suite,
)
from lockean.probability import (
    Distribution,
    conditional,
    l1_distance,
    prob,
    revise_prob,
)
from lockean.revision import agm_audit, predict_closure, revise

SEED = 7
N_VARS = 3


RESULTS: dict[int, str] = {}


def record(number: int, ok: bool, detail: str) -> None:
    status = "PASS" if ok else "FAIL"
    RESULTS[number] = f"criterion {number:2d}: {status}  {detail}"
    print(RESULTS[number])


def dist(*masses) -> Distribution:
    return Distribution(len(masses).bit_length() - 1, tuple(F(m) for m in masses))


def ms(*worlds) -> ModelSet:
    return ModelSet.of(2, worlds)


def belief_stream(trials: int = 1000):
    """(p, lambda) pairs: positive masses, lambda drawn from image values and midpoints."""
    gen = InstanceGenerator(SEED, N_VARS)
    for trial in range(trials):
        sub = gen.child(trial)
        p = random_distribution(sub)
        yield trial, p, random_threshold(sub.rng, p)


def revision_stream(trials: int = 1000, seed: int = SEED):
    """(p, lambda, psi) with psi non-empty, lambda < 1 and P(psi) < lambda."""
    gen = InstanceGenerator(seed, N_VARS)
    for trial in range(trials):
        sub = gen.child(trial)
        p = random_distribution(sub)
        lam = random_threshold(sub.rng, p, allow_one=False)
        for _ in range(64):
            psi = random_event(sub.rng, N_VARS)
            if prob(p, psi) < lam:
                break
        else:
            psi = ModelSet.of(N_VARS, [min(range(len(p)), key=lambda w: p[w])])
        yield trial, p, lam, psi


@pytest.fixture(scope="module")
def belief_instances():
    return list(belief_stream())


@pytest.fixture(scope="module")
def revision_instances():
    return list(revision_stream())


def test_criterion_01_example_steps_and_closure():
    p = dist("1/20", "3/10", "3/5", "1/20")
    steps = find_steps(p)
    got_steps = [(r.phi_omega.worlds(), r.lambda_star) for r in steps]
    want_steps = [([2], F(3, 5)), ([1, 2], F(9, 10))]
    low, high = is_closed(p, F(3, 5)), is_closed(p, F(9, 10))
    cls_low, cls_high = classify(p, F(3, 5)), classify(p, F(9, 10))
    ok = (
        got_steps == want_steps
        and closed_thresholds(p) == [(F(3, 5), ms(2)), (F(9, 10), ms(1, 2))]
        and low.closed
        and cls_low.maximal
        and high.closed
        and not cls_high.maximal
        and high.generator == ms(1, 2)
        and low.generator == ms(2)
        # the up-set of a larger generator is strictly smaller
        and low.generator.issubset(high.generator)
        and low.generator != high.generator
        and np.all(brute_family(p, F(9, 10)) <= brute_family(p, F(3, 5)))
        and not np.array_equal(brute_family(p, F(9, 10)), brute_family(p, F(3, 5)))
    )
    record(1, ok, f"steps {[(w, str(v)) for w, v in got_steps]}")
    assert ok


def test_criterion_02_preservation_counterexample():
    p = dist("1/8", "1/4", "1/4", "3/8")
    lam = F(7, 8)
    psi = ms(0, 1)
    revised = revise_prob(p, psi, lam)
    lost = ms(1, 2, 3)
    audit = agm_audit(p, lam, psi)
    ok = (
        revised.masses == (F(7, 24), F(7, 12), F(1, 20), F(3, 40))
        and prob(p, lost) == F(7, 8)
        and prob(revised, lost) == F(17, 24)
        and not audit["K4"].holds
        and audit["K4"].witness == (lost,)
    )
    record(2, ok, f"revised {[str(m) for m in revised.masses]}, P*({{w2,w3,w4}}) = {prob(revised, lost)}")
    assert ok


def test_criterion_03_closure_and_consistency_counterexample():
    p = dist("1/4", "1/4", "1/4", "1/4")
    lam = F(3, 4)
    psi = ms(0, 1, 2)
    audit = agm_audit(p, lam, psi)
    pair = (ms(0, 1, 2), ms(1, 2, 3))
    ok = (
        revise_prob(p, psi, lam) == p
        and not audit["K1"].holds
        and not audit["K5"].holds
        and audit["K1"].witness == pair
        and audit["K5"].witness[:2] == pair
    )
    record(3, ok, f"K1 witness {[s.worlds() for s in audit['K1'].witness]}")
    assert ok


def test_criterion_04_closure_criterion_matches_brute_force(belief_instances):
    bad = []
    for trial, p, lam in belief_instances:
        verdicts = {is_closed(p, lam).closed, brute_closure(p, lam), brute_conjunctive_closure(p, lam)}
        if len(verdicts) != 1:
            bad.append(trial)
    ok = not bad
    record(4, ok, f"{len(belief_instances)} instances, {len(bad)} disagreements")
    assert ok, bad[:10]


def test_criterion_05_steps_match_closed_thresholds(belief_instances):
    bad = []
    for trial, p, lam in belief_instances:
        stars = dict(closed_thresholds(p))
        for value, generator in stars.items():
            report = is_closed(p, value)
            if not (F(1, 2) < value < 1 and report.closed and report.generator == generator
                    and brute_closure(p, value)):
                bad.append((trial, "lambda*"))
        # a closed non-trivial instance lies in the band of some lambda*
        if brute_closure(p, lam):
            top = lambda_max(p, lam)
            if top < 1:
                if top not in stars or lam not in threshold_band(p, top):
                    bad.append((trial, "band"))
                elif not find_steps(p):
                    bad.append((trial, "existence"))
    # exhaustive scan of every closed non-trivial level, instance by instance
    suite = theorem_suite("T2", InstanceGenerator(SEED, N_VARS), len(belief_instances))
    ok = not bad and suite.ok and suite.checked == len(belief_instances)
    record(5, ok, f"{len(belief_instances)} instances, {len(bad) + len(suite.failures)} failures")
    assert ok, (bad[:10], suite.failures[:3])


def test_criterion_06_revision_closure_bound(revision_instances):
    bad = []
    for trial, p, lam, psi in revision_instances:
        prediction = predict_closure(p, lam, psi)
        revised = revise_prob(p, psi, lam)
        brute = brute_closure(revised, lam)
        if prediction.sufficient != brute:
            bad.append((trial, "verdict"))
        elif brute and not np.array_equal(brute_family(revised, lam), brute_upset(N_VARS, psi)):
            bad.append((trial, "up-set"))
    # closed although the bound fails, because psi was already believed
    p = dist("7/20", "7/20", "3/20", "3/20")
    psi = ms(0, 1, 2)
    outcome = revise(p, F(7, 10), psi)
    prediction = predict_closure(p, F(7, 10), psi)
    example_ok = (
        outcome.prior_believed
        and outcome.revised == p
        and not prediction.sufficient
        and outcome.closure.closed
        and outcome.closure.generator == ms(0, 1)
        and brute_closure(p, F(7, 10))
    )
    ok = not bad and example_ok
    record(6, ok, f"{len(revision_instances)} instances, {len(bad)} failures; believed-input example closed={example_ok}")
    assert ok, bad[:10]


def test_criterion_07_revision_is_jeffrey_update():
    gen = InstanceGenerator(SEED, N_VARS)
    bad = []
    jeffrey_cases = 0
    for trial in range(200):
        sub = gen.child(trial)
        p = random_distribution(sub)
        lam = random_threshold(sub.rng, p)
        psi = random_event(sub.rng, N_VARS, proper=True)
        revised = revise_prob(p, psi, lam)
        mass = prob(p, psi)
        below = mass <= lam
        jeffrey_cases += below
        for e in range(1 << (1 << N_VARS)):
            s = ModelSet(N_VARS, e)
            if below:
                want = lam * prob(p, s & psi) / mass + (1 - lam) * prob(p, s - psi) / (1 - mass)
            else:
                want = prob(p, s)
            if prob(revised, s) != want:
                bad.append((trial, e))
                break
    ok = not bad
    record(7, ok, f"200 instances x 256 events ({jeffrey_cases} Jeffrey, {200 - jeffrey_cases} identity), {len(bad)} mismatches")
    assert ok, bad[:10]


def test_criterion_08_distance_closed_forms():
    bad = []
    for trial, p, lam, psi in revision_stream(500, seed=SEED + 1):
        mass = prob(p, psi)
        d_rev = l1_distance(revise_prob(p, psi, lam), p)
        d_cond = l1_distance(conditional(p, psi), p)
        if d_rev != 2 * (lam - mass) or d_cond != 2 * (1 - mass) or not d_rev < d_cond:
            bad.append(trial)
    ok = not bad
    record(8, ok, f"500 instances, {len(bad)} failures")
    assert ok, bad[:10]


def test_criterion_09_kl_minimality():
    p = dist("1/8", "1/4", "1/4", "3/8")
    k4 = kl_minimality_check(p, ms(0, 1), F(7, 8), trials=1000, seed=SEED)
    bad = list(k4.failures)
    checked = 0
    for trial, q, lam, psi in revision_stream(100, seed=SEED + 2):
        if psi.is_full() or prob(q, psi) == 0:
            continue
        verdict = kl_minimality_check(q, psi, lam, trials=1000, seed=trial)
        checked += 1
        bad.extend(verdict.failures)
    ok = not bad and k4.checked == 1000 and checked == 100
    record(9, ok, f"worked instance KL(R,P) = {k4.details['kl_revised']:.6f}; {checked} instances x 1000 samples, {len(bad)} failures")
    assert ok, bad[:5]


def test_criterion_10_generator_size_bound(belief_instances):
    bad = []
    closed_count = 0
    for trial, p, lam in belief_instances:
        report = is_closed(p, lam)
        if report.closed:
            closed_count += 1
            n = len(report.generator)
            if not report.lambda_M > F(n, n + 1):
                bad.append(trial)
    ok = not bad and closed_count > 0
    record(10, ok, f"{closed_count} closed instances, {len(bad)} violations")
    assert ok, bad[:10]


def test_criterion_11_agm_positive_postulates(revision_instances):
    bad = []
    for trial, p, lam, psi in revision_instances:
        audit = agm_audit(p, lam, psi)
        broken = [k for k in ("K2", "K3", "K6") if not audit[k].holds]
        if broken:
            bad.append((trial, broken))
    ok = not bad
    record(11, ok, f"{len(revision_instances)} instances, {len(bad)} failures")
    assert ok, bad[:10]
