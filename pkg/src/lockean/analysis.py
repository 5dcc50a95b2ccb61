"""Lockean belief sets ``{s : P(s) >= lambda}`` and their deductive closure.

Events are :class:`~lockean.logic.ModelSet` values.  A belief set is
deductively closed exactly when it is a filter of the powerset of worlds;
because belief sets are always upward closed, this reduces to closure
under intersection.

The closure decision works on the *core* of a belief set, the
intersection of all of its members.  A world ``w`` lies outside the core
iff the co-singleton ``Omega - {w}`` is believed, i.e. iff
``P(w) <= 1 - lambda``, so the core is computable in one pass over the
worlds and the set is closed iff the core itself is believed.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .logic import EXHAUSTIVE_MAX_VARS, ModelSet, check_exhaustive
from .probability import (
    HALF,
    Distribution,
    RationalLike,
    ThresholdError,
    prob,
    require_positive,
    threshold,
)

# subset-sum bitsets above this many bits fall back to a set of sums
_BITSET_LIMIT = 1 << 26


@dataclass(frozen=True)
class ThresholdBand:
    """Thresholds in ``(lambda_m, lambda_M]`` all give the same belief set.

    ``image`` lists every probability attained by an event, and is only
    filled in when the event space is small enough to enumerate.
    """

    lam: Fraction
    lambda_m: Fraction
    lambda_M: Fraction
    image: Optional[tuple[Fraction, ...]] = None

    def __contains__(self, value: Fraction) -> bool:
        return self.lambda_m < value <= self.lambda_M


@dataclass(frozen=True)
class ClosureReport:
    closed: bool
    lambda_M: Fraction
    generator: Optional[ModelSet] = None
    min_mass_on_generator: Optional[Fraction] = None
    witness: Optional[tuple[ModelSet, ModelSet]] = None


@dataclass(frozen=True)
class Classification:
    maximal: bool
    trivial: bool


@dataclass(frozen=True)
class StepReport:
    step_worlds: tuple[int, ...]  # all worlds carrying the step mass
    step_mass: Fraction
    phi_omega: ModelSet
    lambda_star: Fraction


@dataclass(frozen=True)
class Diagnostics:
    big_stepped: bool
    acceptance: bool
    p_stable: Optional[bool] = None


# --------------------------------------------------------------------------
# event probabilities
# --------------------------------------------------------------------------


def integer_weights(p: Distribution) -> tuple[list[int], int]:
    """Masses as integers over their least common denominator."""
    return list(p.weights), p.scale


def event_weights(weights: list[int]) -> list[int]:
    """Weight of every event, indexed by the event's world bitmask."""
    table = [0]
    for w in weights:
        table += [t + w for t in table]
    return table


def _at_least(weight: int, scale: int, lam: Fraction) -> bool:
    return weight * lam.denominator >= lam.numerator * scale


def _member_table(p: Distribution, lam: Fraction) -> list[bool]:
    check_exhaustive(p.n_vars)
    weights, scale = integer_weights(p)
    return [_at_least(t, scale, lam) for t in event_weights(weights)]


def _achievable_sums(weights: list[int], scale: int):
    """Reachable event weights, as a bitset int or (if too wide) a set."""
    counts: dict[int, int] = {}
    for w in weights:
        counts[w] = counts.get(w, 0) + 1
    if scale <= _BITSET_LIMIT:
        reach = 1
        for value, count in counts.items():
            chunk = 1
            while count > 0:
                take = min(chunk, count)
                reach |= reach << (value * take)
                count -= take
                chunk *= 2
        return reach
    sums = {0}
    for value, count in counts.items():
        sums = {s + k * value for s in sums for k in range(count + 1)}
    return sums


def image(p: Distribution) -> tuple[Fraction, ...]:
    """All distinct probabilities of events, ascending (small languages only)."""
    check_exhaustive(p.n_vars)
    _, scale = integer_weights(p)
    return tuple(Fraction(t, scale) for t in _sorted_event_weights(p))


@lru_cache(maxsize=1024)
def _band_weights(p: Distribution, lam: Fraction) -> tuple[int, int, int]:
    """``(lower, upper, scale)``: event weights straddling ``lam * scale``."""
    weights, scale = integer_weights(p)
    # smallest integer weight k with k/scale >= lam
    k_min = -((-lam.numerator * scale) // lam.denominator)
    if p.n_vars <= EXHAUSTIVE_MAX_VARS:
        values = _sorted_event_weights(p)
        i = bisect_left(values, k_min)
        return values[i - 1], values[i], scale
    reach = _achievable_sums(weights, scale)
    if isinstance(reach, int):
        above = reach >> k_min
        upper = k_min + (above & -above).bit_length() - 1
        lower = (reach & ((1 << k_min) - 1)).bit_length() - 1
        return lower, upper, scale
    return max(v for v in reach if v < k_min), min(v for v in reach if v >= k_min), scale


@lru_cache(maxsize=256)
def _sorted_event_weights(p: Distribution) -> tuple[int, ...]:
    weights, _ = integer_weights(p)
    return tuple(sorted(set(event_weights(weights))))


def lambda_max(p: Distribution, lam: RationalLike) -> Fraction:
    """Least event probability that is ``>= lam``."""
    require_positive(p)
    _, upper, scale = _band_weights(p, threshold(lam))
    return Fraction(upper, scale)


def threshold_band(p: Distribution, lam: RationalLike) -> ThresholdBand:
    """The band ``(lambda_m, lambda_M]`` of thresholds equivalent to ``lam``.

    ``lambda_M`` is the least event probability ``>= lam`` and ``lambda_m``
    is the larger of 1/2 and the greatest event probability below it.
    """
    require_positive(p)
    lam = threshold(lam)
    lower, upper, scale = _band_weights(p, lam)
    img = None
    if p.n_vars <= EXHAUSTIVE_MAX_VARS:
        img = tuple(Fraction(v, scale) for v in _sorted_event_weights(p))
    return ThresholdBand(lam, max(HALF, Fraction(lower, scale)), Fraction(upper, scale), img)


# --------------------------------------------------------------------------
# belief sets
# --------------------------------------------------------------------------


def belief_membership(p: Distribution, lam: RationalLike, s: ModelSet) -> bool:
    require_positive(p)
    return prob(p, s) >= threshold(lam)


def belief_set(p: Distribution, lam: RationalLike) -> list[ModelSet]:
    """Every believed event, by bitmask (small languages only)."""
    table = _member_table(p, threshold(lam))
    return [ModelSet(p.n_vars, e) for e, member in enumerate(table) if member]


def minimal_members(p: Distribution, lam: RationalLike) -> list[ModelSet]:
    """The inclusion-minimal believed events.

    The belief set is exactly the union of their up-sets.  Upward closure
    means an event is minimal iff dropping any single world from it makes
    it unbelieved.
    """
    require_positive(p)
    return minimal_from_table(_member_table(p, threshold(lam)), p.n_vars)


def minimal_from_table(table: list[bool], n_vars: int) -> list[ModelSet]:
    size = 1 << n_vars
    found = []
    for e, member in enumerate(table):
        if member and not any(e >> w & 1 and table[e ^ (1 << w)] for w in range(size)):
            found.append(ModelSet(n_vars, e))
    return sorted(found, key=lambda s: (len(s), s.worlds()))


def belief_core(p: Distribution, lam: RationalLike) -> ModelSet:
    """Intersection of all believed events: the worlds with ``P(w) > 1 - lam``."""
    lam = threshold(lam)
    # P(w) > 1 - lam, cross-multiplied
    cut = (lam.denominator - lam.numerator) * p.scale
    return ModelSet.of(p.n_vars, (i for i, w in enumerate(p.weights) if w * lam.denominator > cut))


def closure_witness(p: Distribution, lam: Fraction, core: ModelSet) -> tuple[ModelSet, ModelSet]:
    """Two believed events whose intersection is not believed.

    Intersects co-singletons of the worlds outside the core, taken
    alternately from the highest and lowest index inward, until the running
    intersection drops below ``lam``.  Only valid when the core is not
    believed.
    """
    outside = [w for w in range(1 << p.n_vars) if w not in core]
    order = []
    while outside:
        order.append(outside.pop())
        if outside:
            order.append(outside.pop(0))
    current = ModelSet.full(p.n_vars)
    for w in order:
        co_singleton = ModelSet.of(p.n_vars, [w]).complement()
        if prob(p, current & co_singleton) < lam:
            return current, co_singleton
        current = current & co_singleton
    raise ValueError("belief set is closed; no witness exists")


def _closure_report(p: Distribution, lam: Fraction, lambda_M: Fraction) -> ClosureReport:
    core = belief_core(p, lam)
    if prob(p, core) >= lam:
        return ClosureReport(
            closed=True,
            lambda_M=lambda_M,
            generator=core,
            min_mass_on_generator=min(p[w] for w in core),
        )
    return ClosureReport(closed=False, lambda_M=lambda_M, witness=closure_witness(p, lam, core))


def closed(p: Distribution, lam: RationalLike) -> bool:
    """Verdict of :func:`is_closed` without the explanation."""
    require_positive(p)
    lam = threshold(lam)
    return prob(p, belief_core(p, lam)) >= lam


def is_closed(p: Distribution, lam: RationalLike) -> ClosureReport:
    """Decide whether the belief set at ``lam`` is deductively closed.

    When it is, ``generator`` is the strongest belief: the belief set is
    its up-set, it has probability ``lambda_M`` and every world in it
    outweighs ``1 - lambda_M``.
    """
    require_positive(p)
    lam = threshold(lam)
    return _closure_report(p, lam, lambda_max(p, lam))


def theorem1_generator(p: Distribution, lam: RationalLike) -> Optional[ModelSet]:
    """Event ``psi`` with ``P(psi) = lambda_M`` and all its worlds above ``1 - lambda_M``.

    Such an event exists iff the belief set is closed.  Any candidate is
    contained in ``{w : P(w) > 1 - lambda_M}``, so that set is the only
    one worth testing.
    """
    lam_M = lambda_max(p, lam)
    candidate = ModelSet.of(p.n_vars, (w for w, m in enumerate(p.masses) if m > 1 - lam_M))
    if candidate and prob(p, candidate) == lam_M:
        return candidate
    return None


def classify(p: Distribution, lam: RationalLike) -> Classification:
    require_positive(p)
    lam = threshold(lam)
    return Classification(
        maximal=max(p.masses) >= lam,
        trivial=lambda_max(p, lam) == 1,
    )


def find_steps(p: Distribution) -> list[StepReport]:
    """All steps of ``p``: masses exceeding the (positive) total of lighter worlds."""
    require_positive(p)
    reports = []
    for value in sorted(set(p.masses)):
        lighter = sum((m for m in p.masses if m < value), Fraction(0))
        if value > lighter > 0:
            phi = ModelSet.of(p.n_vars, (w for w, m in enumerate(p.masses) if m >= value))
            tied = tuple(w for w, m in enumerate(p.masses) if m == value)
            reports.append(StepReport(tied, value, phi, prob(p, phi)))
    return sorted(reports, key=lambda r: r.lambda_star)


def closed_thresholds(p: Distribution) -> list[tuple[Fraction, ModelSet]]:
    """One ``(lambda*, generator)`` pair per step; each gives a closed, non-trivial set."""
    return [(r.lambda_star, r.phi_omega) for r in find_steps(p)]


def diagnostics(
    p: Distribution, lam: RationalLike, psi: Optional[ModelSet] = None
) -> Diagnostics:
    require_positive(p)
    lam = threshold(lam)
    ordered = sorted(p.masses)
    distinct = len(set(ordered)) == len(ordered)
    big_stepped = distinct and all(
        ordered[i] > sum(ordered[:i], Fraction(0)) for i in range(len(ordered))
    )
    acceptance = any(m > HALF for m in ordered) or ordered.count(HALF) >= 2
    stable = None
    if psi is not None:
        if lam == 1:
            raise ThresholdError("P-stability is undefined at threshold 1")
        if not psi:
            raise ValueError("P-stability needs a consistent event")
        bound = lam / (1 - lam) * prob(p, psi.complement())
        stable = all(p[w] > bound for w in psi)
    return Diagnostics(big_stepped, acceptance, stable)
