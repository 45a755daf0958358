"""Python access to the kinder C++ core."""

import json

from . import _core
from ._core import (
    CapExceeded,
    InvalidArgument,
    KinderError,
    MalformedInput,
    PropertyViolation,
    code_class_count,
    command_names,
    criterion_ids,
    gaussian_binomial,
    legendre_valuation,
    mu,
    nu_p,
    run_criterion,
    suzuki_search,
    suzuki_verify,
)

__all__ = [
    "CapExceeded",
    "InvalidArgument",
    "KinderError",
    "MalformedInput",
    "PropertyViolation",
    "code_class_count",
    "command_names",
    "criterion_ids",
    "gaussian_binomial",
    "legendre_valuation",
    "mu",
    "nu_p",
    "run",
    "run_criterion",
    "suzuki_search",
    "suzuki_verify",
]


def run(command, seed=None, trials=None, mode="", workers=0, **params):
    """Run a kinder command and return the report as a dict.

    Keyword arguments other than the global options become command
    parameters, e.g. ``run("arith", op="legendre", k=10, p=2)``.
    """
    text = _core.run(command, json.dumps(params), seed, trials, mode, workers)
    return json.loads(text)
