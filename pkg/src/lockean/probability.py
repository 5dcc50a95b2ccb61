"""Exact-rational distributions over worlds and their transformations.

Every probability and threshold is a :class:`fractions.Fraction`.  Only
:func:`kl_divergence` leaves exact arithmetic, since it needs logarithms.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .logic import MAX_VARS, DimensionError, ModelSet, SizeGateError

RationalLike = Union[Fraction, int, str]

HALF = Fraction(1, 2)
KL_TOLERANCE = 1e-12


class DistributionError(ValueError):
    pass


class ThresholdError(ValueError):
    pass


def parse_rational(value: RationalLike) -> Fraction:
    """Exact rational from ``"a/b"``, a decimal string, an int or a Fraction.

    Floats are refused: ``0.35`` as a binary double is not 35/100.
    """
    if isinstance(value, float):
        raise TypeError("pass decimals as strings to keep them exact")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {value!r}") from exc


def format_rational(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def threshold(value: RationalLike) -> Fraction:
    """Validate a Lockean threshold: 1/2 < lambda <= 1."""
    lam = parse_rational(value)
    if not HALF < lam <= 1:
        raise ThresholdError(f"threshold must exceed 1/2 and be at most 1, got {format_rational(lam)}")
    return lam


@dataclass(frozen=True)
class Distribution:
    n_vars: int
    masses: tuple[Fraction, ...]
    positive: bool = field(init=False)
    # masses as integers over a common denominator, for fast exact sums
    weights: tuple[int, ...] = field(init=False, repr=False, compare=False)
    scale: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        masses = tuple(parse_rational(m) for m in self.masses)
        object.__setattr__(self, "masses", masses)
        if len(masses) != 1 << self.n_vars:
            raise DistributionError(f"{len(masses)} masses for {self.n_vars} variables")
        scale = math.lcm(*(m.denominator for m in masses))
        weights = tuple(m.numerator * (scale // m.denominator) for m in masses)
        if any(w < 0 for w in weights):
            raise DistributionError("negative mass")
        if sum(weights) != scale:
            raise DistributionError(f"masses sum to {format_rational(Fraction(sum(weights), scale))}, not 1")
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "positive", all(w > 0 for w in weights))

    def __len__(self) -> int:
        return len(self.masses)

    def __getitem__(self, world: int) -> Fraction:
        return self.masses[world]

    def support(self) -> ModelSet:
        return ModelSet.of(self.n_vars, (w for w, m in enumerate(self.masses) if m > 0))


def new_distribution(masses: Sequence[RationalLike], require_positive: bool = True) -> Distribution:
    n = len(masses)
    if n == 0 or n & (n - 1):
        raise DistributionError(f"number of masses must be a power of two, got {n}")
    n_vars = n.bit_length() - 1
    if n_vars > MAX_VARS:
        raise SizeGateError(f"at most {MAX_VARS} variables supported")
    dist = Distribution(n_vars, tuple(masses))
    if require_positive and not dist.positive:
        raise DistributionError("distribution must be positive (every world mass > 0)")
    return dist


def uniform(n_vars: int) -> Distribution:
    size = 1 << n_vars
    return Distribution(n_vars, (Fraction(1, size),) * size)


def require_positive(p: Distribution) -> None:
    if not p.positive:
        raise DistributionError("operation requires a positive distribution")


def _check_dims(p: Distribution, s: ModelSet) -> None:
    if p.n_vars != s.n_vars:
        raise DimensionError(f"distribution over {p.n_vars} variables, event over {s.n_vars}")


def prob(p: Distribution, s: ModelSet) -> Fraction:
    _check_dims(p, s)
    bits = s.bits
    return Fraction(sum(w for i, w in enumerate(p.weights) if bits >> i & 1), p.scale)


def conditional(p: Distribution, psi: ModelSet) -> Distribution:
    """Bayesian conditioning; zero mass off ``psi``."""
    mass = prob(p, psi)
    if mass == 0:
        raise DistributionError("cannot condition on a null event")
    return Distribution(
        p.n_vars,
        tuple(m / mass if w in psi else Fraction(0) for w, m in enumerate(p.masses)),
    )


def _scaled(p: Distribution, psi: ModelSet, inside: Fraction, outside: Fraction) -> Distribution:
    return Distribution(
        p.n_vars,
        tuple(m * (inside if w in psi else outside) for w, m in enumerate(p.masses)),
    )


def jeffrey(p: Distribution, psi: ModelSet, weight: RationalLike) -> Distribution:
    """Jeffrey update of ``p`` that gives ``psi`` probability ``weight``.

    The mixture ``weight * P(.|psi) + (1 - weight) * P(.|not psi)``; needs
    ``0 < P(psi) < 1``.
    """
    lam = parse_rational(weight)
    if not 0 <= lam <= 1:
        raise ValueError("Jeffrey weight must lie in [0, 1]")
    inside = prob(p, psi)
    if not 0 < inside < 1:
        raise DistributionError("Jeffrey update needs 0 < P(psi) < 1")
    return _scaled(p, psi, lam / inside, (1 - lam) / (1 - inside))


def revise_prob(p: Distribution, psi: ModelSet, lam: RationalLike) -> Distribution:
    """Minimal-change revision of ``p`` by ``psi`` at threshold ``lam``.

    Worlds in ``psi`` are scaled by ``max(1, lam / P(psi))`` and the others
    by ``min(1, (1 - lam) / P(not psi))``.  An already believed ``psi``
    leaves ``p`` untouched; otherwise ``psi`` ends with probability exactly
    ``lam``.
    """
    lam = threshold(lam)
    require_positive(p)
    _check_dims(p, psi)
    if not psi:
        raise DistributionError("revision input must be consistent")
    inside = prob(p, psi)
    if inside >= lam:
        return p
    return _scaled(p, psi, lam / inside, (1 - lam) / (1 - inside))


def l1_distance(p: Distribution, q: Distribution) -> Fraction:
    if p.n_vars != q.n_vars:
        raise DimensionError("distributions over different variable counts")
    return sum((abs(a - b) for a, b in zip(p.masses, q.masses)), Fraction(0))


def kl_terms(q: Iterable[float], p: Iterable[float]) -> float:
    """Relative entropy in nats for plain float sequences."""
    total = []
    for qi, pi in zip(q, p):
        if qi == 0:
            continue
        if pi == 0:
            raise DistributionError("KL divergence undefined: q > 0 where p = 0")
        total.append(qi * math.log(qi / pi))
    return math.fsum(total)


def kl_divergence(q: Distribution, p: Distribution) -> float:
    """``sum q(w) log(q(w)/p(w))`` with ``0 log 0 = 0``."""
    if p.n_vars != q.n_vars:
        raise DimensionError("distributions over different variable counts")
    terms = []
    for qi, pi in zip(q.masses, p.masses):
        if qi == 0:
            continue
        if pi == 0:
            raise DistributionError("KL divergence undefined: q > 0 where p = 0")
        # log of the exact ratio avoids cancellation between two float logs
        terms.append(float(qi) * math.log(qi / pi))
    return math.fsum(terms)
