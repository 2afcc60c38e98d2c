"""Phase 2: demand priority rules.

======  ==========================================================
rule1   (band, 1/hop_limit), non-increasing lexicographic
rule2   (1/hop_limit, band), non-increasing lexicographic
rule3   band / hop_limit, non-increasing
rule4   hop_limit * band, non-decreasing
none    input order
======  ==========================================================

Ties always fall back to ascending demand id.  Every key is an exact
integer or :class:`~fractions.Fraction`, so orderings never depend on
float rounding.
"""

from __future__ import annotations

from collections.abc import Sequence
from enum import Enum
from fractions import Fraction

from .model import Demand


class SortRule(str, Enum):
    RULE1 = "rule1"
    RULE2 = "rule2"
    RULE3 = "rule3"
    RULE4 = "rule4"
    NONE = "none"


ALL_RULES = (SortRule.RULE1, SortRule.RULE2, SortRule.RULE3, SortRule.RULE4)


def sort_key(rule: SortRule | str, demand: Demand):
    """Ascending sort key: smaller keys are served first."""
    rule = SortRule(rule)
    b, h = demand.band, demand.hop_limit
    if rule is SortRule.RULE1:
        # larger band first, then smaller hop (larger 1/hop)
        return (-b, h)
    if rule is SortRule.RULE2:
        return (h, -b)
    if rule is SortRule.RULE3:
        return -Fraction(b, h)
    if rule is SortRule.RULE4:
        return h * b
    raise ValueError("NoSorting has no key")


def order_demands(rule: SortRule | str, demands: Sequence[Demand]) -> list[Demand]:
    rule = SortRule(rule)
    if rule is SortRule.NONE:
        return list(demands)
    return sorted(demands, key=lambda d: (sort_key(rule, d), d.demand_id))
