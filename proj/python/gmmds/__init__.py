"""Support-constrained Reed-Solomon codes over prime fields.

Families and results are plain dicts in the same JSON layout the command
line tool uses (1-indexed columns).
"""

import json

from . import _core
from ._core import GmmdsError, InfeasibleError

__all__ = [
    "GmmdsError",
    "InfeasibleError",
    "check_condition",
    "normalize",
    "audit",
    "reduce",
    "build_t",
    "identity_test",
    "certificate",
    "enumerate_count",
    "verify",
    "construct",
    "mds_check",
    "run_cli",
]


def _call(fn, payload, *args, **kwargs):
    return json.loads(fn(json.dumps(payload), *args, **kwargs))


def check_condition(family):
    return _call(_core.check_condition, family)


def normalize(family):
    return _call(_core.normalize, family)


def audit(family):
    return _call(_core.audit, family)


def reduce(family):
    return _call(_core.reduce, family)


def build_t(family, alpha, field_size=0):
    return _call(_core.build_t, family, list(alpha), field_size)


def identity_test(family, field_size=0, trials=8, seed=0, exact_limit=8):
    return _call(_core.identity_test, family, field_size, trials, seed, exact_limit)


def certificate(family, alpha, field_size=0):
    return _call(_core.certificate, family, list(alpha), field_size)


def enumerate_count(m, k, condition_only=True):
    return _core.enumerate_count(m, k, condition_only)


def verify(m_max=3, k_max=4, seed=0, jobs=1):
    return json.loads(_core.verify(m_max, k_max, seed, jobs))


def construct(rowsets, n=None, k=None, field_size=0, seed=0):
    payload = {"rowsets": [list(r) for r in rowsets]}
    if n is not None:
        payload["n"] = n
    if k is not None:
        payload["k"] = k
    return _call(_core.construct, payload, field_size, seed)


def mds_check(artifact):
    return _call(_core.mds_check, artifact)


def run_cli(*args):
    """Runs the command line front end in-process; returns (code, stdout, stderr)."""
    return _core.run_cli([str(a) for a in args])
