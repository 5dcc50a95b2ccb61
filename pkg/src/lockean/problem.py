"""Problem files: a JSON object holding variables, a distribution and a threshold.

    {
      "variables": ["x1", "x2"],
      "distribution": {"00": "1/8", "01": "1/4", "10": "1/4", "11": "3/8"},
      "lambda": "7/8"
    }

Distribution keys are world bitstrings, first listed variable as the most
significant bit.  Masses and the threshold may be ``"a/b"`` strings,
decimal strings or bare JSON numbers; all are read exactly.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .logic import MAX_VARS, Formula, parse_formula
from .probability import Distribution, format_rational, threshold

_NAME = re.compile(r"x\d+\Z")
_BITS = re.compile(r"[01]*\Z")


class ProblemError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass(frozen=True)
class Problem:
    variables: tuple[str, ...]
    distribution: Distribution
    lam: Fraction

    @property
    def n_vars(self) -> int:
        return len(self.variables)

    def formula(self, text: str) -> Formula:
        return parse_formula(text, self.n_vars, self.variables)

    def with_distribution(self, dist: Distribution) -> "Problem":
        return Problem(self.variables, dist, self.lam)


def _line_of(text: str, needle: str) -> Optional[int]:
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return None


class _DuplicateKey(Exception):
    def __init__(self, key: str):
        self.key = key


def _no_duplicates(pairs):
    seen = {}
    for key, value in pairs:
        if key in seen:
            raise _DuplicateKey(key)
        seen[key] = value
    return seen


def _exact(value, what: str, text: str, anchor: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int, Fraction)):
        raise ProblemError(f"{what} must be a rational string or number", _line_of(text, anchor))
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise ProblemError(f"{what}: not a rational number: {value!r}", _line_of(text, anchor)) from None


def parse_problem(text: str) -> Problem:
    try:
        data = json.loads(
            text, parse_float=Fraction, parse_int=Fraction, object_pairs_hook=_no_duplicates
        )
    except json.JSONDecodeError as exc:
        raise ProblemError(exc.msg + f" (column {exc.colno})", exc.lineno) from None
    except _DuplicateKey as dup:
        needle = f'"{dup.key}"'
        hits = [i for i, line in enumerate(text.splitlines(), start=1) for _ in range(line.count(needle))]
        raise ProblemError(f"duplicate key {dup.key!r}", hits[1] if len(hits) > 1 else None) from None
    if not isinstance(data, dict):
        raise ProblemError("problem file must hold a JSON object", 1)
    for key in ("variables", "distribution", "lambda"):
        if key not in data:
            raise ProblemError(f"missing field {key!r}")
    extra = sorted(set(data) - {"variables", "distribution", "lambda"})
    if extra:
        raise ProblemError(f"unknown field {extra[0]!r}", _line_of(text, f'"{extra[0]}"'))

    variables = data["variables"]
    where = _line_of(text, '"variables"')
    if not isinstance(variables, list) or not all(isinstance(v, str) for v in variables):
        raise ProblemError("variables must be a list of names", where)
    if not 1 <= len(variables) <= MAX_VARS:
        raise ProblemError(f"between 1 and {MAX_VARS} variables required", where)
    bad = [v for v in variables if not _NAME.match(v)]
    if bad:
        raise ProblemError(f"variable names must look like x<digits>, got {bad[0]!r}", where)
    if len(set(variables)) != len(variables):
        raise ProblemError("variable names must be distinct", where)
    n = len(variables)

    table = data["distribution"]
    where = _line_of(text, '"distribution"')
    if not isinstance(table, dict):
        raise ProblemError("distribution must map world bitstrings to masses", where)
    masses: list[Optional[Fraction]] = [None] * (1 << n)
    for key, value in table.items():
        anchor = f'"{key}"'
        if not _BITS.match(key) or len(key) != n:
            raise ProblemError(f"world key {key!r} is not a {n}-bit string", _line_of(text, anchor))
        mass = _exact(value, f"mass of world {key}", text, anchor)
        if mass <= 0:
            raise ProblemError(f"mass of world {key} must be positive", _line_of(text, anchor))
        masses[int(key, 2)] = mass
    missing = [format(i, f"0{n}b") for i, m in enumerate(masses) if m is None]
    if missing:
        raise ProblemError(f"world {missing[0]} has no mass", where)
    total = sum(masses, Fraction(0))
    if total != 1:
        raise ProblemError(f"masses sum to {format_rational(total)}, not 1", where)

    where = _line_of(text, '"lambda"')
    lam = _exact(data["lambda"], "lambda", text, '"lambda"')
    try:
        lam = threshold(lam)
    except ValueError as exc:
        raise ProblemError(str(exc), where) from None
    return Problem(tuple(variables), Distribution(n, tuple(masses)), lam)


def load_problem(path: str | Path) -> Problem:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ProblemError(f"cannot read {path}: {exc.strerror}") from None
    return parse_problem(text)


def dump_problem(problem: Problem) -> str:
    n = problem.n_vars
    data = {
        "variables": list(problem.variables),
        "distribution": {
            format(i, f"0{n}b"): format_rational(m) for i, m in enumerate(problem.distribution.masses)
        },
        "lambda": format_rational(problem.lam),
    }
    return json.dumps(data, indent=2) + "\n"
