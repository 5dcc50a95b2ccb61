"""Brute-force and randomized oracles for the Lockean machinery.

The exhaustive deciders here enumerate events with their own numpy
tables and never call the decision procedures in :mod:`lockean.analysis`
they are used to validate.  Everything random flows from an integer seed;
trial ``i`` of a run draws from a generator derived from ``(seed, i)`` so
any failing trial can be replayed alone.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Any, Callable, Optional

import numpy as np

from .analysis import closed, find_steps, is_closed, lambda_max, theorem1_generator
from .logic import MAX_VARS, ModelSet, SizeGateError, check_exhaustive
from .probability import (
    HALF,
    KL_TOLERANCE,
    Distribution,
    DistributionError,
    conditional,
    format_rational,
    jeffrey,
    kl_divergence,
    kl_terms,
    l1_distance,
    prob,
    require_positive,
    revise_prob,
)
from .revision import agm_audit, predict_closure

THEOREMS = ("T1", "T2", "T3", "P3", "F1", "P4", "C1", "AGM")

_MIX = 0x9E3779B97F4A7C15
_INT64_SAFE = 1 << 62


@dataclass
class InstanceGenerator:
    seed: int
    n_vars: int
    weight_bound: int = 1000
    rng: random.Random = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 0 <= self.n_vars <= MAX_VARS:
            raise SizeGateError(f"n_vars must lie in [0, {MAX_VARS}]")
        if self.weight_bound < 1:
            raise ValueError("weight_bound must be at least 1")
        self.rng = random.Random(self.seed)

    def child(self, index: int) -> "InstanceGenerator":
        """Independent generator for trial ``index``."""
        seed = (self.seed * _MIX + index) % (1 << 64)
        return InstanceGenerator(seed, self.n_vars, self.weight_bound)


@dataclass
class Failure:
    instance: dict[str, Any]
    expected: Any
    observed: Any


@dataclass
class OracleVerdict:
    checked: int = 0
    failures: list[Failure] = field(default_factory=list)
    details: dict[str, Any] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures


def random_distribution(gen: InstanceGenerator) -> Distribution:
    """Positive distribution from integer weights drawn uniformly in ``[1, weight_bound]``."""
    weights = [gen.rng.randint(1, gen.weight_bound) for _ in range(1 << gen.n_vars)]
    total = sum(weights)
    return Distribution(gen.n_vars, tuple(Fraction(w, total) for w in weights))


# --------------------------------------------------------------------------
# exhaustive event tables
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _incidence(n_vars: int) -> np.ndarray:
    """Row ``e`` marks the worlds of event ``e``."""
    size = 1 << n_vars
    events = np.arange(1 << size, dtype=np.int64)[:, None]
    return ((events >> np.arange(size, dtype=np.int64)) & 1).astype(np.int64)


def _event_table(p: Distribution, lam: Optional[Fraction] = None):
    """Integer event weights and their common scale.

    ``object`` dtype is used whenever int64 could overflow, including in
    the cross-multiplied comparison against ``lam``.
    """
    check_exhaustive(p.n_vars)
    scale = math.lcm(*(m.denominator for m in p.masses))
    weights = [m.numerator * (scale // m.denominator) for m in p.masses]
    factor = max(lam.numerator, lam.denominator) if lam is not None else 1
    dtype = np.int64 if scale * factor < _INT64_SAFE else object
    table = _incidence(p.n_vars).astype(dtype) @ np.array(weights, dtype=dtype)
    return table, scale


def brute_family(p: Distribution, lam: Fraction) -> np.ndarray:
    """Boolean mask over all events: ``P(e) >= lam``."""
    table, scale = _event_table(p, lam)
    return np.asarray(table * lam.denominator >= lam.numerator * scale, dtype=bool)


def brute_closure(p: Distribution, lam: Fraction) -> bool:
    """Filter test by exhaustive scan.

    The believed family must be non-empty, exclude the empty event, and be
    closed under pairwise intersection and under adding single worlds.
    """
    lam = Fraction(lam)
    mask = brute_family(p, lam)
    members = np.flatnonzero(mask)
    if members.size == 0 or mask[0]:
        return False
    for start in range(0, members.size, 1024):
        block = members[start : start + 1024]
        if not mask[block[:, None] & members[None, :]].all():
            return False
    for w in range(1 << p.n_vars):
        if not mask[members | (1 << w)].all():
            return False
    return True


def brute_conjunctive_closure(p: Distribution, lam: Fraction) -> bool:
    """Is the intersection of every pair of believed events believed?"""
    lam = Fraction(lam)
    family = set(np.flatnonzero(brute_family(p, lam)).tolist())
    return all(a & b in family for a, b in combinations(family, 2))


def brute_upset(n_vars: int, generator: ModelSet) -> np.ndarray:
    events = np.arange(1 << (1 << n_vars), dtype=np.int64)
    return (events & generator.bits) == generator.bits


# --------------------------------------------------------------------------
# instance drawing
# --------------------------------------------------------------------------


def _descriptor(gen: InstanceGenerator, trial: int, p: Distribution, lam=None, psi=None) -> dict:
    out: dict[str, Any] = {
        "seed": gen.seed,
        "trial": trial,
        "n_vars": gen.n_vars,
        "weight_bound": gen.weight_bound,
        "masses": [format_rational(m) for m in p.masses],
    }
    if lam is not None:
        out["lambda"] = format_rational(lam)
    if psi is not None:
        out["psi"] = psi.worlds()
    return out


def _lambda_candidates(p: Distribution) -> list[Fraction]:
    """Event probabilities above 1/2 and midpoints between neighbouring ones."""
    table, scale = _event_table(p)
    values = sorted(set(int(t) for t in table))
    # in units of 1/(2 * scale)
    doubled = {2 * v for v in values} | {a + b for a, b in zip(values, values[1:])}
    return [Fraction(d, 2 * scale) for d in sorted(doubled) if scale < d <= 2 * scale]


def random_threshold(rng: random.Random, p: Distribution, allow_one: bool = True) -> Fraction:
    if p.n_vars <= 4:
        candidates = [v for v in _lambda_candidates(p) if allow_one or v < 1]
        if candidates:
            return rng.choice(candidates)
    return Fraction(rng.randint(501, 999), 1000)


def random_event(rng: random.Random, n_vars: int, proper: bool = False) -> ModelSet:
    size = 1 << n_vars
    top = (1 << size) - 1
    while True:
        bits = rng.randint(1, top)
        if not (proper and bits == top):
            return ModelSet(n_vars, bits)


def _under_believed_event(rng: random.Random, p: Distribution, lam: Fraction) -> ModelSet:
    """Non-empty event with ``P(psi) < lam``."""
    for _ in range(64):
        psi = random_event(rng, p.n_vars)
        if prob(p, psi) < lam:
            return psi
    lightest = min(range(len(p)), key=lambda w: p[w])
    return ModelSet.of(p.n_vars, [lightest])


def _belief_instance(gen: InstanceGenerator):
    p = random_distribution(gen)
    return p, random_threshold(gen.rng, p)


def _revision_instance(gen: InstanceGenerator):
    p = random_distribution(gen)
    lam = random_threshold(gen.rng, p, allow_one=False)
    return p, lam, _under_believed_event(gen.rng, p, lam)


# --------------------------------------------------------------------------
# KL minimality
# --------------------------------------------------------------------------


def kl_minimality_check(
    p: Distribution, psi: ModelSet, lam, trials: int = 1000, seed: int = 0
) -> OracleVerdict:
    """Sample distributions giving ``psi`` probability ``lam``; none may beat the revision.

    Half the samples are uniform over the feasible set and half are small
    multiplicative perturbations of the revised distribution.  Also checks
    that the revision rescales ``psi``-worlds by ``lam / P(psi)`` and the
    rest by ``(1 - lam) / P(not psi)``, exactly.
    """
    require_positive(p)
    lam = Fraction(lam)
    mass = prob(p, psi)
    if not 0 < mass < 1:
        raise DistributionError("KL check needs 0 < P(psi) < 1")
    if not 0 < lam < 1:
        raise ValueError("KL check needs 0 < lambda < 1")
    if HALF < lam and mass <= lam:
        target = revise_prob(p, psi, lam)
    else:
        target = jeffrey(p, psi, lam)
    verdict = OracleVerdict()
    inside = [w for w in range(len(p)) if w in psi]
    outside = [w for w in range(len(p)) if w not in psi]

    ratio_in, ratio_out = lam / mass, (1 - lam) / (1 - mass)
    bad = [w for w in inside if target[w] != p[w] * ratio_in]
    bad += [w for w in outside if target[w] != p[w] * ratio_out]
    if bad or prob(target, psi) != lam:
        verdict.failures.append(
            Failure({"check": "stationary ratio", "worlds": bad}, "constant ratios", "mismatch")
        )

    best = kl_divergence(target, p)
    prior = [float(m) for m in p.masses]
    revised = [float(m) for m in target.masses]
    rng = random.Random(seed)
    lowest = math.inf
    for t in range(trials):
        sample = [0.0] * len(p)
        for block, total in ((inside, float(lam)), (outside, 1.0 - float(lam))):
            if t % 2 == 0:
                raw = [rng.expovariate(1.0) for _ in block]
            else:
                raw = [revised[w] * math.exp(1e-3 * rng.gauss(0.0, 1.0)) for w in block]
            norm = math.fsum(raw)
            for w, r in zip(block, raw):
                sample[w] = total * r / norm
        value = kl_terms(sample, prior)
        lowest = min(lowest, value)
        verdict.checked += 1
        if value < best - KL_TOLERANCE:
            verdict.failures.append(
                Failure({"check": "kl", "sample": t, "masses": sample}, f">= {best!r}", value)
            )
    verdict.details = {"kl_revised": best, "min_sample_kl": lowest}
    return verdict


# --------------------------------------------------------------------------
# theorem checks, one instance each; return None or (expected, observed, descriptor extras)
# --------------------------------------------------------------------------


def _check_t1(gen: InstanceGenerator):
    p, lam = _belief_instance(gen)
    report = is_closed(p, lam)
    brute = brute_closure(p, lam)
    pairwise = brute_conjunctive_closure(p, lam)
    generator = theorem1_generator(p, lam)
    observed = {
        "is_closed": report.closed,
        "brute_closure": brute,
        "brute_conjunctive_closure": pairwise,
        "theorem1_generator": generator is not None,
    }
    if len(set(observed.values())) != 1:
        return p, lam, None, "all verdicts equal", observed
    if report.closed:
        family = brute_family(p, lam)
        if report.generator != generator or not np.array_equal(
            family, brute_upset(p.n_vars, report.generator)
        ):
            return p, lam, None, "belief set = up-set of generator", report.generator.worlds()
        if prob(p, report.generator) != report.lambda_M:
            return p, lam, None, "P(generator) = lambda_M", format_rational(report.lambda_M)
    return None


def _check_t2(gen: InstanceGenerator):
    p, lam = _belief_instance(gen)
    steps = find_steps(p)
    star = {r.lambda_star: r.phi_omega for r in steps}
    table, scale = _event_table(p)
    closed_levels = set()
    for v in sorted({Fraction(int(t), scale) for t in table}):
        if HALF < v < 1 and closed(p, v):
            closed_levels.add(v)
    if bool(closed_levels) != bool(steps) or closed_levels != set(star):
        return p, lam, None, sorted(map(format_rational, star)), sorted(map(format_rational, closed_levels))
    for value, phi in star.items():
        report = is_closed(p, value)
        if not (report.closed and report.generator == phi and brute_closure(p, value)):
            return p, value, None, f"closed with generator {phi.worlds()}", report
    if lam < 1 and closed(p, lam):
        top = lambda_max(p, lam)
        if top < 1 and top not in star:
            return p, lam, None, "closed band among step bands", format_rational(top)
    return None


def _check_c1(gen: InstanceGenerator):
    p, lam = _belief_instance(gen)
    report = is_closed(p, lam)
    if report.closed:
        n = len(report.generator)
        if not report.lambda_M > Fraction(n, n + 1):
            return p, lam, None, f"lambda_M > {n}/{n + 1}", format_rational(report.lambda_M)
    return None


def _check_t3(gen: InstanceGenerator):
    p, lam, psi = _revision_instance(gen)
    prediction = predict_closure(p, lam, psi)
    revised = revise_prob(p, psi, lam)
    closed = brute_closure(revised, lam)
    if prediction.sufficient != closed:
        return p, lam, psi, {"sufficient": prediction.sufficient}, {"brute_closed": closed}
    if closed and not np.array_equal(brute_family(revised, lam), brute_upset(p.n_vars, psi)):
        return p, lam, psi, "revised set = up-set of psi", "differs"
    return None


def _check_agm(gen: InstanceGenerator):
    p, lam, psi = _revision_instance(gen)
    report = agm_audit(p, lam, psi)
    broken = [k for k in ("K2", "K3", "K6") if not report[k].holds]
    if broken:
        return p, lam, psi, "K2, K3, K6 hold", broken
    return None


def _jeffrey_event(weights_psi: int, weights_rest: int, w_psi: int, w_not: int, lam: Fraction):
    return lam * Fraction(weights_psi, w_psi) + (1 - lam) * Fraction(weights_rest, w_not)


def _check_p3(gen: InstanceGenerator):
    p = random_distribution(gen)
    lam = random_threshold(gen.rng, p)
    psi = random_event(gen.rng, p.n_vars, proper=True)
    revised = revise_prob(p, psi, lam)
    prior_table, scale = _event_table(p)
    post_table, post_scale = _event_table(revised)
    w_psi = int(prior_table[psi.bits])
    w_not = scale - w_psi
    below = Fraction(w_psi, scale) <= lam
    for e in range(prior_table.size):
        got = Fraction(int(post_table[e]), post_scale)
        if below:
            want = _jeffrey_event(
                int(prior_table[e & psi.bits]), int(prior_table[e & ~psi.bits]), w_psi, w_not, lam
            )
        else:
            want = Fraction(int(prior_table[e]), scale)
        if got != want:
            return p, lam, psi, format_rational(want), {"event": e, "revised": format_rational(got)}
    return None


def _check_f1(gen: InstanceGenerator):
    p, lam, psi = _revision_instance(gen)
    mass = prob(p, psi)
    d_rev = l1_distance(revise_prob(p, psi, lam), p)
    d_cond = l1_distance(conditional(p, psi), p)
    expected = (2 * (lam - mass), 2 * (1 - mass))
    if (d_rev, d_cond) != expected or not d_rev < d_cond:
        return p, lam, psi, [format_rational(x) for x in expected], [
            format_rational(d_rev),
            format_rational(d_cond),
        ]
    return None


def _check_p4(gen: InstanceGenerator, samples: int):
    p = random_distribution(gen)
    lam = random_threshold(gen.rng, p, allow_one=False)
    psi = _under_believed_event(gen.rng, p, lam)
    if psi.is_full():
        return None
    verdict = kl_minimality_check(p, psi, lam, samples, gen.rng.getrandbits(64))
    if verdict.failures:
        return p, lam, psi, "KL(sample) >= KL(revised) - 1e-12", [f.observed for f in verdict.failures[:5]]
    return None


_CHECKS: dict[str, Callable] = {
    "T1": _check_t1,
    "T2": _check_t2,
    "T3": _check_t3,
    "P3": _check_p3,
    "F1": _check_f1,
    "C1": _check_c1,
    "AGM": _check_agm,
}
_EXHAUSTIVE = {"T1", "T2", "T3", "P3", "C1", "AGM"}


def theorem_suite(theorem: str, gen: InstanceGenerator, trials: int, samples: int = 1000) -> OracleVerdict:
    """Randomized cross-check of one result over ``trials`` seeded instances.

    Tags: ``T1`` closure criterion vs. brute force, ``T2`` steps vs. closed
    thresholds, ``T3`` revision closure bound, ``P3`` revision = Jeffrey
    update, ``F1`` L1 distances, ``P4`` KL minimality (``samples`` draws
    per instance), ``C1`` generator-size bound on ``lambda_M``, ``AGM``
    postulates K2, K3 and K6.
    """
    if theorem not in THEOREMS:
        raise ValueError(f"unknown theorem tag {theorem!r}; expected one of {', '.join(THEOREMS)}")
    if theorem in _EXHAUSTIVE:
        check_exhaustive(gen.n_vars)
    if gen.n_vars < 1:
        raise SizeGateError("need at least one variable")
    verdict = OracleVerdict()
    for trial in range(trials):
        sub = gen.child(trial)
        if theorem == "P4":
            result = _check_p4(sub, samples)
        else:
            result = _CHECKS[theorem](sub)
        verdict.checked += 1
        if result is not None:
            p, lam, psi, expected, observed = result
            verdict.failures.append(Failure(_descriptor(gen, trial, p, lam, psi), expected, observed))
    verdict.failures.sort(key=lambda f: f.instance["trial"])
    return verdict


def replay(theorem: str, seed: int, trial: int, n_vars: int, weight_bound: int = 1000) -> OracleVerdict:
    """Re-run a single trial of :func:`theorem_suite`."""
    gen = InstanceGenerator(seed, n_vars, weight_bound)
    verdict = OracleVerdict()
    sub = gen.child(trial)
    result = _check_p4(sub, 1000) if theorem == "P4" else _CHECKS[theorem](sub)
    verdict.checked = 1
    if result is not None:
        p, lam, psi, expected, observed = result
        verdict.failures.append(Failure(_descriptor(gen, trial, p, lam, psi), expected, observed))
    return verdict
