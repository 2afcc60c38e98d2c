"""Phase 3: bandwidth filter and ranking of one demand's candidates.

The default ranking weights a path by the sum of reciprocal residual
bandwidths over its edges and prefers light paths: a path through
well-provisioned edges scores low and leaves room for later demands.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import ZeroResidual
from .model import Demand, Path, ResidualState
from .paths import CandidateSet


class Selection(str, Enum):
    WEIGHT = "weight"
    MIN_HOP = "min-hop"
    MIN_DELAY = "min-delay"
    RANDOM = "random"


@dataclass(frozen=True)
class RankedCandidates:
    demand_id: int
    entries: tuple[tuple[Path, float], ...]

    def __len__(self) -> int:
        return len(self.entries)

    def __bool__(self) -> bool:
        return bool(self.entries)

    @property
    def paths(self) -> list[Path]:
        return [p for p, _ in self.entries]

    def first(self) -> Path | None:
        return self.entries[0][0] if self.entries else None


def _values(residual):
    return residual.values if isinstance(residual, ResidualState) else residual


def path_weight(residual, path: Path, exact: bool = False) -> float | Fraction:
    """Sum of ``1 / residual(e)`` over the path's edges.

    ``math.fsum`` makes the float result independent of edge order, so two
    paths over the same residual multiset always tie exactly.
    """
    vals = _values(residual)
    res = [vals[e] for e in path.edges]
    if any(r <= 0 for r in res):
        raise ZeroResidual(f"path {path.nodes} crosses a saturated edge")
    if exact:
        return sum((Fraction(1, r) for r in res), Fraction(0))
    return math.fsum(1.0 / r for r in res)


def _feasible(vals, candidates: CandidateSet, band: int) -> list[tuple[int, Path]]:
    out = []
    for pos, p in enumerate(candidates.paths):
        for e in p.edges:
            if vals[e] < band:
                break
        else:
            out.append((pos, p))
    return out


def select_and_rank(
    residual, demand: Demand, candidates: CandidateSet, exact: bool = False
) -> RankedCandidates:
    """Drop candidates that cannot carry ``demand.band`` and sort by weight.

    Equal weights fall back to ``(hop, delay, candidate position)``.
    """
    vals = _values(residual)
    keyed = []
    for pos, p in _feasible(vals, candidates, demand.band):
        w = path_weight(vals, p, exact)
        keyed.append(((w, p.hop, p.delay, pos), p))
    keyed.sort(key=lambda kp: kp[0])
    return RankedCandidates(demand.demand_id, tuple((p, float(k[0])) for k, p in keyed))


def alt_select(
    residual,
    demand: Demand,
    candidates: CandidateSet,
    strategy: Selection | str,
    seed: int | None = None,
) -> RankedCandidates:
    """Ablation orderings over the same bandwidth-feasible candidates.

    ``min-hop`` sorts by (hop, delay, position), ``min-delay`` by
    (delay, hop, position), ``random`` shuffles with ``seed``.  The weight
    column is still ``path_weight`` for reference.
    """
    strategy = Selection(strategy)
    if strategy is Selection.WEIGHT:
        return select_and_rank(residual, demand, candidates)
    vals = _values(residual)
    feas = _feasible(vals, candidates, demand.band)
    if strategy is Selection.MIN_HOP:
        feas.sort(key=lambda pp: (pp[1].hop, pp[1].delay, pp[0]))
    elif strategy is Selection.MIN_DELAY:
        feas.sort(key=lambda pp: (pp[1].delay, pp[1].hop, pp[0]))
    else:
        random.Random(seed).shuffle(feas)
    return RankedCandidates(
        demand.demand_id, tuple((p, path_weight(vals, p)) for _, p in feas)
    )
