"""Python front end for the cuspcount lattice library."""

import json

from ._core import (
    SCHEMA_VERSION,
    Error,
    aut_order,
    count_cusps,
    count_fm,
    gram,
    invariant_factors,
    is_isogenus,
    run,
    ur_example,
)

__all__ = [
    "SCHEMA_VERSION",
    "Error",
    "aut_order",
    "count_cusps",
    "count_fm",
    "gram",
    "invariant_factors",
    "is_isogenus",
    "report",
    "run",
    "ur_example",
]


def report(*args):
    """Run a CLI command and return (exit_code, parsed JSON report)."""
    code, out, _ = run([str(a) for a in args])
    return code, json.loads(out)
