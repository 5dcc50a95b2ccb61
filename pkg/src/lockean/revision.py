"""Minimal Lockean revision and an AGM postulate auditor.

Revising the belief set of ``P`` at threshold ``lam`` by an event ``psi``
yields the belief set of :func:`~lockean.probability.revise_prob` at the
same threshold.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Optional, Sequence

from .analysis import (
    ClosureReport,
    _closure_report,
    _member_table,
    belief_core,
    closure_witness,
    lambda_max,
    minimal_from_table,
)
from .logic import DimensionError, ModelSet, Not, formula_of_modelset, models_of
from .probability import (
    Distribution,
    DistributionError,
    RationalLike,
    ThresholdError,
    format_rational,
    prob,
    require_positive,
    revise_prob,
    threshold,
)


@dataclass(frozen=True)
class RevisionOutcome:
    revised: Distribution
    tau: Fraction  # least prior mass of a psi-world
    bound: Optional[Fraction]  # tau * lam / (1 - lam); None at lam = 1
    predicted_closed: bool
    generator: Optional[ModelSet]
    prior_believed: bool
    closure: Optional[ClosureReport] = None  # actual closure of the revised set


@dataclass(frozen=True)
class ClosurePrediction:
    sufficient: bool
    # True when psi is not believed beforehand, so `sufficient` is also necessary
    necessary_given_not_believed: bool
    tau: Fraction
    bound: Fraction


@dataclass(frozen=True)
class PostulateCheck:
    holds: bool
    witness: tuple[ModelSet, ...] = ()
    note: str = ""


@dataclass(frozen=True)
class AgmReport:
    checks: dict[str, PostulateCheck] = field(default_factory=dict)

    def __getitem__(self, key: str) -> PostulateCheck:
        return self.checks[key]

    def failed(self) -> list[str]:
        return [k for k, c in self.checks.items() if not c.holds]


def _validate(p: Distribution, psi: ModelSet) -> None:
    require_positive(p)
    if p.n_vars != psi.n_vars:
        raise DimensionError("distribution and revision input over different variables")
    if not psi:
        raise DistributionError("revision input must be consistent")


def _tau(p: Distribution, psi: ModelSet) -> Fraction:
    return min(p[w] for w in psi)


def predict_closure(p: Distribution, lam: RationalLike, psi: ModelSet) -> ClosurePrediction:
    """Is ``P(psi) < tau * lam / (1 - lam)``?

    If so the revised belief set is the up-set of ``psi``.  When ``psi`` was
    not believed the condition is also necessary for closure.
    """
    _validate(p, psi)
    lam = threshold(lam)
    if lam == 1:
        raise ThresholdError("closure prediction needs lambda < 1")
    tau = _tau(p, psi)
    bound = tau * lam / (1 - lam)
    mass = prob(p, psi)
    return ClosurePrediction(mass < bound, mass < lam, tau, bound)


def revise(p: Distribution, lam: RationalLike, psi: ModelSet) -> RevisionOutcome:
    _validate(p, psi)
    lam = threshold(lam)
    revised = revise_prob(p, psi, lam)
    believed = prob(p, psi) >= lam
    tau = _tau(p, psi)
    if lam == 1:
        # the revised set {s : R(s) = 1} is always the up-set of psi
        bound, predicted = None, True
    else:
        pred = predict_closure(p, lam, psi)
        bound, predicted = pred.bound, pred.sufficient
    closure = None
    if revised.positive:
        closure = _closure_report(revised, lam, lambda_max(revised, lam))
    return RevisionOutcome(
        revised=revised,
        tau=tau,
        bound=bound,
        predicted_closed=predicted,
        generator=psi if predicted else None,
        prior_believed=believed,
        closure=closure,
    )


def consequence_membership(
    belief_minimal_members: Sequence[ModelSet], psi: ModelSet, s: ModelSet
) -> bool:
    """Does ``s`` follow classically from the beliefs together with ``psi``?

    Finitely many premises entail ``s`` iff the intersection of their model
    sets is inside ``s``.
    """
    core = reduce(lambda a, b: a & b, belief_minimal_members, ModelSet.full(psi.n_vars))
    return (core & psi).issubset(s)


def _events(table: list[bool], n_vars: int) -> list[ModelSet]:
    return [ModelSet(n_vars, e) for e, member in enumerate(table) if member]


def agm_audit(p: Distribution, lam: RationalLike, psi: ModelSet) -> AgmReport:
    """Check the basic AGM revision postulates K1-K6 on one revision instance.

    Scans every event, so limited to small languages.  A failed postulate
    always carries witness events.
    """
    _validate(p, psi)
    lam = threshold(lam)
    n = p.n_vars
    revised = revise_prob(p, psi, lam)
    prior_table = _member_table(p, lam)
    post_table = _member_table(revised, lam)
    prior_members = _events(prior_table, n)
    prior_minimal = minimal_from_table(prior_table, n)
    post_members = _events(post_table, n)
    prior_core = belief_core(p, lam)
    post_core = belief_core(revised, lam)
    post_closed = prob(revised, post_core) >= lam
    checks: dict[str, PostulateCheck] = {}

    # K1 closure
    if post_closed:
        checks["K1"] = PostulateCheck(True, (post_core,), "revised belief set is generated by its core")
    else:
        pair = closure_witness(revised, lam, post_core)
        checks["K1"] = PostulateCheck(False, pair, "intersection of the two believed events is not believed")

    # K2 success
    if post_table[psi.bits]:
        checks["K2"] = PostulateCheck(True, note="revision input believed after revision")
    else:
        checks["K2"] = PostulateCheck(False, (psi,), "revision input not believed after revision")

    # K3 inclusion: s believed after => (psi -> s) believed before, and s in Cn(B + psi)
    not_psi = psi.complement()
    bad = [
        s
        for s in post_members
        if not prior_table[(not_psi | s).bits]
        or not consequence_membership(prior_minimal, psi, s)
    ]
    if bad:
        checks["K3"] = PostulateCheck(False, (bad[0],), "revised belief outside Cn(B + psi)")
    else:
        checks["K3"] = PostulateCheck(
            True, note=f"all {len(post_members)} revised beliefs follow from B + psi"
        )

    # K4 preservation: if B does not entail not-psi, nothing believed is lost
    if not prior_core & psi:
        checks["K4"] = PostulateCheck(True, note="vacuous: prior beliefs entail the negation of psi")
    else:
        lost = [s for s in prior_members if not post_table[s.bits]]
        if lost:
            worst = min(lost, key=lambda s: (prob(revised, s), s.bits))
            checks["K4"] = PostulateCheck(
                False,
                (worst,),
                f"prior belief dropped; revised probability {format_rational(prob(revised, worst))}",
            )
        else:
            checks["K4"] = PostulateCheck(True, note="every prior belief kept")

    # K5 consistency: psi consistent => revised beliefs share a model
    if post_core:
        checks["K5"] = PostulateCheck(True, (post_core,), "revised beliefs have common models")
    else:
        # an empty core means every co-singleton is believed
        witness = list(closure_witness(revised, lam, post_core))
        common = reduce(lambda a, b: a & b, witness, ModelSet.full(n))
        for w in reversed(range(1 << n)):
            if not common:
                break
            if w in common:
                co = ModelSet.of(n, [w]).complement()
                witness.append(co)
                common = common & co
        checks["K5"] = PostulateCheck(False, tuple(witness), "believed events with no common model")

    # K6 extensionality: two syntactically different formulas for psi
    canonical = formula_of_modelset(psi)
    a = models_of(canonical, n)
    b = models_of(Not(Not(canonical)), n)
    same = a == b == psi and revise_prob(p, a, lam) == revise_prob(p, b, lam) == revised
    checks["K6"] = PostulateCheck(same, () if same else (psi,), "revision reads only the model set of psi")

    return AgmReport(checks)

