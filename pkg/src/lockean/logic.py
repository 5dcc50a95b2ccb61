"""Propositional formulas over ``x1..xn`` and their model sets.

World ``i`` is the valuation spelled by the binary expansion of ``i`` on
``n_vars`` bits, first variable as the most significant bit.  A
:class:`ModelSet` stores its worlds as an integer bitmask where bit ``i``
is set iff world ``i`` is a member.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Iterator, Sequence, Union

MAX_VARS = 16
EXHAUSTIVE_MAX_VARS = 4


class FormulaError(ValueError):
    """Raised for malformed formula text."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)


class UnknownVariableError(FormulaError):
    pass


class DimensionError(ValueError):
    """Raised when objects over different numbers of variables are mixed."""


class SizeGateError(ValueError):
    """Raised when an exhaustive operation is asked for too many variables."""


def check_exhaustive(n_vars: int) -> None:
    if n_vars > EXHAUSTIVE_MAX_VARS:
        raise SizeGateError(
            f"exhaustive event scan limited to {EXHAUSTIVE_MAX_VARS} variables, got {n_vars}"
        )


# --------------------------------------------------------------------------
# AST
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    index: int  # 0-based: Var(0) is x1


@dataclass(frozen=True)
class Not:
    arg: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


Formula = Union[Var, Not, And, Or, Implies, Iff, Top, Bot]

_BINARY = {And: "&", Or: "|", Implies: "->", Iff: "<->"}
# binding strength used by format_formula; higher binds tighter
_STRENGTH = {Iff: 1, Implies: 2, Or: 3, And: 4}


def variables_of(f: Formula) -> set[int]:
    if isinstance(f, Var):
        return {f.index}
    if isinstance(f, Not):
        return variables_of(f.arg)
    if isinstance(f, (And, Or, Implies, Iff)):
        return variables_of(f.left) | variables_of(f.right)
    return set()


def format_formula(f: Formula, names: Sequence[str] | None = None) -> str:
    """Render ``f`` in the input grammar with the fewest parentheses."""

    def name(i: int) -> str:
        return names[i] if names is not None else f"x{i + 1}"

    def go(g: Formula) -> tuple[str, int]:
        if isinstance(g, Var):
            return name(g.index), 6
        if isinstance(g, Top):
            return "T", 6
        if isinstance(g, Bot):
            return "F", 6
        if isinstance(g, Not):
            s, k = go(g.arg)
            return "!" + (s if k >= 5 else f"({s})"), 5
        op = _BINARY[type(g)]
        k = _STRENGTH[type(g)]
        ls, lk = go(g.left)
        rs, rk = go(g.right)
        if type(g) in (Implies, Iff):
            # right-associative
            left_ok, right_ok = lk > k, rk >= k
        else:
            left_ok, right_ok = lk >= k, rk > k
        ls = ls if left_ok else f"({ls})"
        rs = rs if right_ok else f"({rs})"
        return f"{ls} {op} {rs}", k

    return go(f)[0]


# --------------------------------------------------------------------------
# Parsing
# --------------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(<->|->|[!&|()TF])|(x\d+)|(\S))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # only trailing whitespace left
            break
        if m.group(3) is not None:
            raise FormulaError(f"unexpected character {m.group(3)!r}", m.start(3))
        if m.group(1) is not None:
            tokens.append(("op", m.group(1), m.start(1)))
        else:
            tokens.append(("var", m.group(2), m.start(2)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, lookup: dict[str, int]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.lookup = lookup

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def take(self, value: str | None = None) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        if value is not None and tok[1] != value:
            found = tok[1] or "end of input"
            raise FormulaError(f"expected {value!r}, found {found!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.iff()
        kind, value, pos = self.peek()
        if kind != "end":
            raise FormulaError(f"unexpected token {value!r}", pos)
        return f

    def iff(self) -> Formula:
        left = self.implies()
        if self.peek()[1] == "<->":
            self.take()
            return Iff(left, self.iff())
        return left

    def implies(self) -> Formula:
        left = self.disj()
        if self.peek()[1] == "->":
            self.take()
            return Implies(left, self.implies())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek()[1] == "|":
            self.take()
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek()[1] == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, value, pos = self.peek()
        if value == "!":
            self.take()
            return Not(self.unary())
        if value == "(":
            self.take()
            f = self.iff()
            self.take(")")
            return f
        if kind == "op" and value == "T":
            self.take()
            return Top()
        if kind == "op" and value == "F":
            self.take()
            return Bot()
        if kind == "var":
            self.take()
            if value not in self.lookup:
                raise UnknownVariableError(f"unknown variable {value!r}", pos)
            return Var(self.lookup[value])
        raise FormulaError(f"unexpected {value or 'end of input'!r}", pos)


def parse_formula(text: str, n_vars: int, names: Sequence[str] | None = None) -> Formula:
    """Parse ``text`` into a formula over ``n_vars`` variables.

    Variables are ``x1..xn`` unless ``names`` gives the ordered variable
    names (each must itself look like ``x<digits>``).  Precedence, from
    tightest: ``!``, ``&``, ``|``, ``->``, ``<->``; the last two associate
    to the right.

    >>> parse_formula("x1 & !x2", 2)
    And(left=Var(index=0), right=Not(arg=Var(index=1)))
    """
    if names is None:
        names = [f"x{i + 1}" for i in range(n_vars)]
    elif len(names) != n_vars:
        raise DimensionError(f"{len(names)} names for {n_vars} variables")
    return _Parser(text, {name: i for i, name in enumerate(names)}).parse()


# --------------------------------------------------------------------------
# Model sets
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ModelSet:
    n_vars: int
    bits: int

    def __post_init__(self):
        if not 0 <= self.n_vars <= MAX_VARS:
            raise SizeGateError(f"n_vars must lie in [0, {MAX_VARS}], got {self.n_vars}")
        if self.bits < 0 or self.bits >> (1 << self.n_vars):
            raise ValueError("bitset does not fit the world count")

    @classmethod
    def full(cls, n_vars: int) -> "ModelSet":
        return cls(n_vars, (1 << (1 << n_vars)) - 1)

    @classmethod
    def empty(cls, n_vars: int) -> "ModelSet":
        return cls(n_vars, 0)

    @classmethod
    def of(cls, n_vars: int, worlds: Iterable[int]) -> "ModelSet":
        bits = 0
        size = 1 << n_vars
        for w in worlds:
            if not 0 <= w < size:
                raise ValueError(f"world {w} out of range for {n_vars} variables")
            bits |= 1 << w
        return cls(n_vars, bits)

    @property
    def size(self) -> int:
        """Number of worlds in the universe."""
        return 1 << self.n_vars

    def worlds(self) -> list[int]:
        return [w for w in range(self.size) if self.bits >> w & 1]

    def __iter__(self) -> Iterator[int]:
        return iter(self.worlds())

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __contains__(self, world: int) -> bool:
        return bool(self.bits >> world & 1)

    def __bool__(self) -> bool:
        return self.bits != 0

    def _check(self, other: "ModelSet") -> None:
        if self.n_vars != other.n_vars:
            raise DimensionError(f"model sets over {self.n_vars} and {other.n_vars} variables")

    def __and__(self, other: "ModelSet") -> "ModelSet":
        self._check(other)
        return ModelSet(self.n_vars, self.bits & other.bits)

    def __or__(self, other: "ModelSet") -> "ModelSet":
        self._check(other)
        return ModelSet(self.n_vars, self.bits | other.bits)

    def __sub__(self, other: "ModelSet") -> "ModelSet":
        self._check(other)
        return ModelSet(self.n_vars, self.bits & ~other.bits)

    def complement(self) -> "ModelSet":
        return ModelSet(self.n_vars, ((1 << self.size) - 1) ^ self.bits)

    __invert__ = complement

    def issubset(self, other: "ModelSet") -> bool:
        self._check(other)
        return self.bits & ~other.bits == 0

    __le__ = issubset

    def is_full(self) -> bool:
        return self.bits == (1 << self.size) - 1

    def __repr__(self) -> str:
        return f"ModelSet({self.n_vars}, {self.worlds()})"


def entails(a: ModelSet, b: ModelSet) -> bool:
    """``a`` entails ``b`` iff every model of ``a`` is a model of ``b``."""
    return a.issubset(b)


def world_valuation(world: int, n_vars: int) -> tuple[bool, ...]:
    return tuple(bool(world >> (n_vars - 1 - j) & 1) for j in range(n_vars))


def _var_bits(index: int, n_vars: int) -> int:
    shift = n_vars - 1 - index
    bits = 0
    for w in range(1 << n_vars):
        if w >> shift & 1:
            bits |= 1 << w
    return bits


def models_of(f: Formula, n_vars: int) -> ModelSet:
    full = (1 << (1 << n_vars)) - 1
    cache: dict[int, int] = {}

    def go(g: Formula) -> int:
        if isinstance(g, Var):
            if not 0 <= g.index < n_vars:
                raise UnknownVariableError(f"variable index {g.index} outside {n_vars} variables")
            if g.index not in cache:
                cache[g.index] = _var_bits(g.index, n_vars)
            return cache[g.index]
        if isinstance(g, Top):
            return full
        if isinstance(g, Bot):
            return 0
        if isinstance(g, Not):
            return full ^ go(g.arg)
        a, b = go(g.left), go(g.right)
        if isinstance(g, And):
            return a & b
        if isinstance(g, Or):
            return a | b
        if isinstance(g, Implies):
            return (full ^ a) | b
        if isinstance(g, Iff):
            return full ^ (a ^ b)
        raise TypeError(f"not a formula: {g!r}")

    return ModelSet(n_vars, go(f))


def evaluate(f: Formula, valuation: Sequence[bool]) -> bool:
    """Classical truth value of ``f`` under a single valuation."""
    if isinstance(f, Var):
        return valuation[f.index]
    if isinstance(f, Top):
        return True
    if isinstance(f, Bot):
        return False
    if isinstance(f, Not):
        return not evaluate(f.arg, valuation)
    a, b = evaluate(f.left, valuation), evaluate(f.right, valuation)
    if isinstance(f, And):
        return a and b
    if isinstance(f, Or):
        return a or b
    if isinstance(f, Implies):
        return (not a) or b
    return a == b


def equivalent(a: Formula, b: Formula, n_vars: int) -> bool:
    return models_of(a, n_vars) == models_of(b, n_vars)


def minterm(world: int, n_vars: int) -> Formula:
    literals: list[Formula] = [
        Var(j) if value else Not(Var(j))
        for j, value in enumerate(world_valuation(world, n_vars))
    ]
    if not literals:
        return Top()
    return reduce(And, literals)


def formula_of_modelset(s: ModelSet) -> Formula:
    """Canonical full DNF for ``s``: one minterm per world, by world index."""
    worlds = s.worlds()
    if not worlds:
        return Bot()
    return reduce(Or, (minterm(w, s.n_vars) for w in worlds))
