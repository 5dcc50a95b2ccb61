"""Command-line front end.

Every subcommand loads a problem file, calls one library routine and
prints its result as deterministic JSON (or an indented view with
``--pretty``).  Exit codes: 0 success, 1 property failure reported by
``verify``, 2 usage or validation error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence, TextIO

from .analysis import (
    classify,
    closed_thresholds,
    diagnostics,
    find_steps,
    is_closed,
    minimal_members,
    threshold_band,
)
from .logic import EXHAUSTIVE_MAX_VARS, FormulaError, ModelSet, format_formula, models_of
from .oracles import THEOREMS, InstanceGenerator, theorem_suite
from .probability import (
    DistributionError,
    ThresholdError,
    conditional,
    format_rational,
    kl_divergence,
    l1_distance,
    prob,
)
from .problem import Problem, ProblemError, dump_problem, load_problem
from .report import dumps, pretty
from .revision import agm_audit, revise

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2


class CommandError(Exception):
    pass


# --------------------------------------------------------------------------
# reports
# --------------------------------------------------------------------------


def _event(problem: Problem, text: str) -> tuple[str, ModelSet]:
    formula = problem.formula(text)
    return format_formula(formula, problem.variables), models_of(formula, problem.n_vars)


def eval_report(problem: Problem, text: str) -> dict:
    shown, models = _event(problem, text)
    p, lam = problem.distribution, problem.lam
    mass = prob(p, models)
    return {"formula": shown, "models": models, "probability": mass, "believed": mass >= lam}


def beliefs_report(problem: Problem, text: Optional[str] = None) -> dict:
    p, lam = problem.distribution, problem.lam
    band = threshold_band(p, lam)
    psi = _event(problem, text)[1] if text is not None else None
    return {
        "lambda": lam,
        "lambda_m": band.lambda_m,
        "lambda_M": band.lambda_M,
        "minimal_members": minimal_members(p, lam) if problem.n_vars <= EXHAUSTIVE_MAX_VARS else None,
        "closure": is_closed(p, lam),
        "classification": classify(p, lam),
        "diagnostics": diagnostics(p, lam, psi),
    }


def steps_report(problem: Problem) -> dict:
    p = problem.distribution
    return {
        "steps": find_steps(p),
        "closed_thresholds": [
            {"lambda_star": lam, "generator": gen} for lam, gen in closed_thresholds(p)
        ],
    }


def revise_report(problem: Problem, text: str, trace: bool = False) -> dict:
    shown, psi = _event(problem, text)
    p, lam = problem.distribution, problem.lam
    outcome = revise(p, lam, psi)
    report = {
        "formula": shown,
        "psi": psi,
        "identity_revision": outcome.prior_believed,
        "outcome": outcome,
        "revised_distribution": _mass_table(problem, outcome.revised),
    }
    if trace:
        conditioned = conditional(p, psi)
        report["trace"] = {
            "prior_probability": prob(p, psi),
            "l1_revised": l1_distance(outcome.revised, p),
            "l1_conditioning": l1_distance(conditioned, p),
            "kl_revised": kl_divergence(outcome.revised, p),
            "kl_conditioning": kl_divergence(conditioned, p),
        }
    return report


def audit_report(problem: Problem, text: str) -> dict:
    shown, psi = _event(problem, text)
    audit = agm_audit(problem.distribution, problem.lam, psi)
    return {"formula": shown, "psi": psi, "postulates": audit.checks, "failed": audit.failed()}


def verify_report(
    theorem: str, n_vars: int, trials: int, seed: int, weight_bound: int = 1000, samples: int = 1000
) -> dict:
    verdict = theorem_suite(theorem, InstanceGenerator(seed, n_vars, weight_bound), trials, samples)
    return {
        "theorem": theorem,
        "vars": n_vars,
        "trials": trials,
        "seed": seed,
        "weight_bound": weight_bound,
        "checked": verdict.checked,
        "failures": verdict.failures,
        "details": verdict.details,
        "ok": verdict.ok,
    }


def _mass_table(problem: Problem, dist) -> dict[str, str]:
    n = problem.n_vars
    return {format(i, f"0{n}b"): format_rational(m) for i, m in enumerate(dist.masses)}


# --------------------------------------------------------------------------
# REPL
# --------------------------------------------------------------------------

REPL_HELP = """\
commands:
  believe <formula>   is the formula believed? (true/false)
  prob <formula>      probability of the formula
  revise <formula>    replace the distribution by its minimal revision
  beliefs             belief-set report for the current distribution
  show                current threshold and distribution
  steps               steps and closed thresholds
  dump <path>         write the session state as a problem file
  help                this text
  quit                leave"""


class Session:
    """A sequential revision session; failed commands leave the state alone."""

    def __init__(self, problem: Problem):
        self.problem = problem
        self.done = False

    def execute(self, line: str) -> str:
        words = line.strip().split(None, 1)
        if not words or words[0].startswith("#"):
            return ""
        command, arg = words[0], (words[1] if len(words) > 1 else "")
        handler = getattr(self, "_cmd_" + command.replace("-", "_"), None)
        if handler is None:
            return f"error: unknown command {command!r} (try 'help')"
        try:
            return handler(arg.strip())
        except CommandError as exc:
            return f"error: {exc}"
        except (FormulaError, DistributionError, ThresholdError, ProblemError, ValueError) as exc:
            return f"error: {exc}"

    def _need(self, arg: str, what: str) -> str:
        if not arg:
            raise CommandError(f"missing {what}")
        return arg

    def _cmd_believe(self, arg: str) -> str:
        report = eval_report(self.problem, self._need(arg, "formula"))
        return "true" if report["believed"] else "false"

    def _cmd_prob(self, arg: str) -> str:
        report = eval_report(self.problem, self._need(arg, "formula"))
        return format_rational(report["probability"])

    def _cmd_revise(self, arg: str) -> str:
        _, psi = _event(self.problem, self._need(arg, "formula"))
        outcome = revise(self.problem.distribution, self.problem.lam, psi)
        self.problem = self.problem.with_distribution(outcome.revised)
        if outcome.prior_believed:
            return "identity revision: formula already believed"
        closed = outcome.closure is not None and outcome.closure.closed
        return f"revised; closed={'true' if closed else 'false'}"

    def _cmd_beliefs(self, arg: str) -> str:
        return pretty(beliefs_report(self.problem))

    def _cmd_show(self, arg: str) -> str:
        lines = [f"lambda {format_rational(self.problem.lam)}"]
        lines += [f"{k} {v}" for k, v in _mass_table(self.problem, self.problem.distribution).items()]
        return "\n".join(lines)

    def _cmd_steps(self, arg: str) -> str:
        steps = find_steps(self.problem.distribution)
        if not steps:
            return "no steps"
        return "\n".join(
            f"worlds {list(s.step_worlds)} mass {format_rational(s.step_mass)} "
            f"lambda* {format_rational(s.lambda_star)} generator {s.phi_omega.worlds()}"
            for s in steps
        )

    def _cmd_dump(self, arg: str) -> str:
        path = Path(self._need(arg, "path"))
        try:
            path.write_text(dump_problem(self.problem), encoding="utf-8")
        except OSError as exc:
            raise CommandError(f"cannot write {path}: {exc.strerror}") from None
        return f"wrote {path}"

    def _cmd_help(self, arg: str) -> str:
        return REPL_HELP

    def _cmd_quit(self, arg: str) -> str:
        self.done = True
        return ""

    _cmd_exit = _cmd_quit


def run_repl(session: Session, stdin: TextIO, stdout: TextIO) -> int:
    interactive = stdin.isatty()
    while not session.done:
        if interactive:
            stdout.write("lockean> ")
            stdout.flush()
        line = stdin.readline()
        if not line:
            break
        out = session.execute(line)
        if out:
            stdout.write(out + "\n")
    return EXIT_OK


# --------------------------------------------------------------------------
# argument handling
# --------------------------------------------------------------------------


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lockean", description="Lockean belief sets, closure and minimal revision."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable output")
    with_problem = argparse.ArgumentParser(add_help=False)
    with_problem.add_argument("--problem", required=True, help="problem file (JSON)")
    with_formula = argparse.ArgumentParser(add_help=False)
    with_formula.add_argument("--formula", required=True, help="formula over the problem's variables")

    sub.add_parser("eval", parents=[common, with_problem, with_formula], help="probability and membership of a formula")
    beliefs = sub.add_parser("beliefs", parents=[common, with_problem], help="belief set, band and closure")
    beliefs.add_argument("--formula", help="also test this event for P-stability")
    sub.add_parser("steps", parents=[common, with_problem], help="steps and closed thresholds")
    revise_cmd = sub.add_parser("revise", parents=[common, with_problem, with_formula], help="minimal revision")
    revise_cmd.add_argument("--trace", action="store_true", help="add L1 distances and KL divergences")
    sub.add_parser("audit-agm", parents=[common, with_problem, with_formula], help="AGM postulates K1-K6")

    verify = sub.add_parser("verify", parents=[common], help="randomized oracle cross-check")
    verify.add_argument("--theorem", required=True, choices=THEOREMS)
    verify.add_argument("--vars", type=_positive, default=3)
    verify.add_argument("--trials", type=_positive, default=100)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--weight-bound", type=_positive, default=1000)
    verify.add_argument("--samples", type=_positive, default=1000, help="KL samples per instance (P4)")

    sub.add_parser("repl", parents=[with_problem], help="interactive revision session")
    return parser


def _emit(report: dict, as_pretty: bool, out: TextIO) -> None:
    out.write((pretty(report) if as_pretty else dumps(report)) + "\n")


def main(argv: Optional[Sequence[str]] = None, stdin: TextIO = None, stdout: TextIO = None) -> int:
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK

    try:
        if args.command == "verify":
            report = verify_report(
                args.theorem, args.vars, args.trials, args.seed, args.weight_bound, args.samples
            )
            _emit(report, args.pretty, stdout)
            return EXIT_OK if report["ok"] else EXIT_FAILURE
        problem = load_problem(args.problem)
        if args.command == "repl":
            return run_repl(Session(problem), stdin, stdout)
        if args.command == "eval":
            report = eval_report(problem, args.formula)
        elif args.command == "beliefs":
            report = beliefs_report(problem, args.formula)
        elif args.command == "steps":
            report = steps_report(problem)
        elif args.command == "revise":
            report = revise_report(problem, args.formula, args.trace)
        else:
            report = audit_report(problem, args.formula)
    except (ProblemError, FormulaError, DistributionError, ThresholdError, ValueError) as exc:
        print(f"lockean: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    _emit(report, args.pretty, stdout)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
