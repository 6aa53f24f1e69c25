"""Injection-locked phase modulator model (C++ core)."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, run_scenario


def table(result, name):
    """Returns {column: list of values} for one table of a run_scenario result."""
    t = result[name]
    return {c: [row[i] for row in t["rows"]] for i, c in enumerate(t["columns"])}
