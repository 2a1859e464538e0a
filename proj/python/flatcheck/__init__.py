"""Exact flatness checks for finitely presented modules over power series rings."""

import json

from ._flatcheck import (
    REPORT_SCHEMA,
    Error,
    InvariantViolation,
    ParseError,
    Problem,
    ProblemError,
    SplitMismatch,
    corpus_report,
    run,
    run_corpus,
)

__all__ = [
    "REPORT_SCHEMA",
    "Error",
    "InvariantViolation",
    "ParseError",
    "Problem",
    "ProblemError",
    "SplitMismatch",
    "check",
    "flattener",
    "oracle",
    "validate",
    "run",
    "run_corpus",
    "corpus_report",
]


def _as_problem(problem):
    if isinstance(problem, Problem):
        return problem
    if isinstance(problem, dict):
        return Problem.from_text(json.dumps(problem))
    return Problem.from_file(str(problem))


def _report(command, problem, **options):
    text, _, _ = run(command, _as_problem(problem), **options)
    return json.loads(text)


def check(problem, order=0, seed=None, verify_reductions=False):
    """Flatness verdict with its certificate chain, as a dict."""
    return _report("check", problem, order=order, seed=seed, verify_reductions=verify_reductions)


def flattener(problem, order=0, seed=None, points=()):
    """Flattener ideal; `points` are "a,b" or "a,b:c" strings for openness checks."""
    return _report("flattener", problem, order=order, seed=seed, points=list(points))


def oracle(problem, order=0):
    """Direct jet-space flatness test, independent of the division engine."""
    return _report("oracle", problem, order=order)


def validate(problem, order=0, seed=None):
    """Engine against oracle cross-check."""
    return _report("validate", problem, order=order, seed=seed)
