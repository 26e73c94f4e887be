"""Greedy redescription: pick candidate tiles that approximate a target.

Repeatedly add the candidate that most reduces the distance to the
target tile set, stopping once no candidate gives a strict improvement.
Finding the optimal subset is intractable, so greedy is the intended
trade-off.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import FreqTile, TileSet
from .divergence import distance
from .maxent import FitOptions

# Minimum decrease for a candidate to count as an improvement; ties and
# zero-improvement additions are rejected so the loop always terminates.
_MIN_GAIN = 1e-12


@dataclass(frozen=True)
class Redescription:
    """Chosen tiles in selection order, with the distance after each step."""

    selected: tuple[FreqTile, ...]
    trace: tuple[float, ...]
    final_distance: float


def fruits(
    target: TileSet,
    candidates: TileSet,
    background: TileSet | None = None,
    opts: FitOptions = FitOptions(),
) -> Redescription:
    """Greedy subset of `candidates` minimizing distance to `target`.

    Candidates are evaluated in input order each round; the first one
    achieving the best strict improvement wins, so results are
    deterministic. The selection order is preserved for top-k reading.
    """
    if background is None:
        background = TileSet(target.dims)

    chosen = TileSet(target.dims)
    remaining = list(candidates.tiles)
    best = distance(chosen, target, background, opts).value
    selected: list[FreqTile] = []
    trace: list[float] = []

    while remaining:
        round_best = best
        round_pick = None
        for i, cand in enumerate(remaining):
            d = distance(chosen.with_tile(cand), target, background, opts).value
            if d < round_best - _MIN_GAIN:
                round_best = d
                round_pick = i
        if round_pick is None:
            break
        cand = remaining.pop(round_pick)
        chosen = chosen.with_tile(cand)
        selected.append(cand)
        best = round_best
        trace.append(best)

    return Redescription(tuple(selected), tuple(trace), best)
