"""Three-valued verdicts for classification predicates.

Predicates over model data can be true, false, or undecidable from the
data on hand.  Indeterminate is a first-class outcome, never collapsed to
False: missing Gottlieb data must not silently classify a space.
Indeterminate deliberately has no truth value, so forgetting to handle it
raises instead of taking a branch.
"""

from __future__ import annotations

from typing import Iterable, Union


class Indeterminate:
    __slots__ = ("reason",)

    def __init__(self, reason: str):
        self.reason = reason

    def __bool__(self):
        raise TypeError("indeterminate verdict has no truth value: " + self.reason)

    def __repr__(self):
        return f"Indeterminate({self.reason!r})"


Verdict = Union[bool, Indeterminate]


def is_true(v: Verdict) -> bool:
    return v is True


def is_false(v: Verdict) -> bool:
    return v is False


def is_indeterminate(v: Verdict) -> bool:
    return isinstance(v, Indeterminate)


def tri_all(verdicts: Iterable[Verdict]) -> Verdict:
    """Conjunction: False dominates, then Indeterminate, else True."""
    pending = None
    for v in verdicts:
        if v is False:
            return False
        if isinstance(v, Indeterminate) and pending is None:
            pending = v
    return True if pending is None else pending


def verdict_label(v: Verdict) -> str:
    if isinstance(v, Indeterminate):
        return "indeterminate"
    return "true" if v else "false"
