"""Converting mining results on binary data into tile sets.

Itemsets become tiles over their supporting rows, clusterings become
one tile per cluster or one per cluster/column pair, and global
density, column margins, and row margins become single-row or
single-column tiles. Bicluster-style results are already rectangles
and are ingested directly through the tile-set file format.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import BinaryDataset, FreqTile, Tile, TileSet, empirical_frequency
from .errors import OutOfBounds

BACKGROUND_PRESETS = ("none", "density", "columns", "rows", "columns+rows")


@dataclass(frozen=True)
class ItemsetResult:
    """Column-id sets, optionally with explicit per-itemset row supports."""

    itemsets: tuple[tuple[int, ...], ...]
    supports: tuple[tuple[int, ...] | None, ...] | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "itemsets", tuple(tuple(sorted(set(s))) for s in self.itemsets)
        )
        if self.supports is not None:
            if len(self.supports) != len(self.itemsets):
                raise ValueError("supports must align with itemsets")
            object.__setattr__(
                self,
                "supports",
                tuple(
                    None if s is None else tuple(sorted(set(s))) for s in self.supports
                ),
            )


@dataclass(frozen=True)
class ClusteringResult:
    """A total row -> cluster-id labeling with cluster ids in [1, k]."""

    labels: dict[int, int]
    k: int

    def __post_init__(self):
        for row, cid in self.labels.items():
            if not 1 <= cid <= self.k:
                raise ValueError(f"cluster id {cid} for row {row} outside [1, {self.k}]")

    def members(self, cid: int) -> tuple[int, ...]:
        return tuple(sorted(r for r, c in self.labels.items() if c == cid))


@dataclass(frozen=True)
class ConversionResult:
    """A produced tile set plus the number of inputs skipped with a warning."""

    tiles: TileSet
    skipped: int = 0


def itemsets_to_tiles(r: ItemsetResult, data: BinaryDataset) -> ConversionResult:
    """One tile per itemset over its supporting rows, frequency from data.

    Without explicit supports, the rows are those containing every
    column of the itemset; the tile is then exact with frequency 1.
    Itemsets supported by no row are skipped and counted.
    """
    tiles = []
    skipped = 0
    for i, itemset in enumerate(r.itemsets):
        if not itemset or itemset[-1] > data.m or itemset[0] < 1:
            raise OutOfBounds(f"itemset #{i + 1} has column ids outside [1, {data.m}]")
        rows = None if r.supports is None else r.supports[i]
        if rows is None:
            cols0 = np.asarray(itemset, dtype=np.intp) - 1
            support = np.flatnonzero(data.entries[:, cols0].all(axis=1)) + 1
            rows = tuple(int(x) for x in support)
        if not rows:
            skipped += 1
            continue
        tile = Tile(rows, itemset)
        tiles.append(FreqTile(tile, empirical_frequency(tile, data)))
    return ConversionResult(TileSet(data.dims, tuple(tiles)), skipped)


def clustering_to_tiles(
    r: ClusteringResult, data: BinaryDataset, mode: str = "per-column"
) -> TileSet:
    """Turn a row clustering into tiles.

    "single-tile" gives one tile per cluster over all columns;
    "per-column" gives one tile per cluster and column, with the
    column's in-cluster mean as frequency. Empty clusters are skipped.
    """
    if mode not in ("single-tile", "per-column"):
        raise ValueError(f"unknown mode {mode!r}")
    if set(r.labels) != set(range(1, data.n + 1)):
        raise ValueError("labels must cover exactly the rows 1..n")
    all_cols = tuple(range(1, data.m + 1))
    tiles = []
    for cid in range(1, r.k + 1):
        rows = r.members(cid)
        if not rows:
            continue
        if mode == "single-tile":
            tile = Tile(rows, all_cols)
            tiles.append(FreqTile(tile, empirical_frequency(tile, data)))
        else:
            for j in all_cols:
                tile = Tile(rows, (j,))
                tiles.append(FreqTile(tile, empirical_frequency(tile, data)))
    return TileSet(data.dims, tuple(tiles))


def density_tile(data: BinaryDataset) -> TileSet:
    """A single tile covering the whole dataset at its global density."""
    tile = Tile(tuple(range(1, data.n + 1)), tuple(range(1, data.m + 1)))
    return TileSet(data.dims, (FreqTile(tile, empirical_frequency(tile, data)),))


def margin_tiles(data: BinaryDataset, axis: str = "columns") -> TileSet:
    """One tile per column (or row), spanning all rows (or columns)."""
    if axis not in ("columns", "rows"):
        raise ValueError(f"axis must be 'columns' or 'rows', got {axis!r}")
    all_rows = tuple(range(1, data.n + 1))
    all_cols = tuple(range(1, data.m + 1))
    tiles = []
    if axis == "columns":
        for j in all_cols:
            tile = Tile(all_rows, (j,))
            tiles.append(FreqTile(tile, empirical_frequency(tile, data)))
    else:
        for i in all_rows:
            tile = Tile((i,), all_cols)
            tiles.append(FreqTile(tile, empirical_frequency(tile, data)))
    return TileSet(data.dims, tuple(tiles))


def background_tiles(preset: str, data: BinaryDataset) -> TileSet:
    """Build a background tile set from a named preset."""
    if preset == "none":
        return TileSet(data.dims)
    if preset == "density":
        return density_tile(data)
    if preset == "columns":
        return margin_tiles(data, "columns")
    if preset == "rows":
        return margin_tiles(data, "rows")
    if preset == "columns+rows":
        return margin_tiles(data, "columns").union(margin_tiles(data, "rows"))
    raise ValueError(f"unknown background preset {preset!r}; use one of {BACKGROUND_PRESETS}")
