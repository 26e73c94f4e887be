"""Maximum-entropy models over binary datasets, given tile frequencies.

The maximum-entropy distribution for a set of frequency-constrained
tiles factorizes into independent per-entry Bernoulli variables, so a
model is just an n x m probability matrix. Fitting runs iterative
scaling: sweep the noisy tiles, and for each one rescale its area so
the model frequency matches the target.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Tile, TileSet
from .errors import (
    ConflictingExactTiles,
    InfeasibleTile,
    NoConvergence,
    NotExact,
    OutOfBounds,
)

# Slack for deciding a target sits exactly on the attainable boundary
# (all remaining free entries forced to 0 or 1).
_BOUNDARY_EPS = 1e-9


@dataclass(frozen=True)
class FitOptions:
    """Knobs for the iterative-scaling fit."""

    tolerance: float = 1e-6  # max permitted per-tile frequency residual
    max_sweeps: int = 10_000  # cap on full passes over the noisy tiles
    bracket_growth: float = 4.0  # geometric factor for root bracketing

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be at least 1")
        if self.bracket_growth <= 1:
            raise ValueError("bracket_growth must exceed 1")


@dataclass(frozen=True, eq=False)
class EntryModel:
    """A fitted factorized model: per-entry P[(i,j) = 1] plus a clamp mask."""

    dims: tuple[int, int]
    p: np.ndarray  # n x m probabilities
    fixed: np.ndarray  # n x m bool, entries clamped by exact tiles
    fitted_for: TileSet
    residual: float

    def __post_init__(self):
        self.p.setflags(write=False)
        self.fixed.setflags(write=False)

    def prob(self, i: int, j: int) -> float:
        """1-based probability lookup."""
        n, m = self.dims
        if not (1 <= i <= n and 1 <= j <= m):
            raise OutOfBounds(f"entry ({i}, {j}) outside {n}x{m}")
        return float(self.p[i - 1, j - 1])


def bernoulli_update(y, x):
    """Rescale a Bernoulli probability y by the positive factor x.

    Strictly increasing in x for y in (0, 1); fixes 0 and 1. Accepts
    scalars or numpy arrays for y. The denominator is written as
    (1 - y) + x*y so both fixed points hold exactly in floating point.
    """
    return x * y / ((1.0 - y) + x * y)


def model_frequency(tile: Tile, model: EntryModel) -> float:
    """Mean of the model's probabilities over the tile's area."""
    n, m = model.dims
    tile.check_fits(n, m)
    return float(model.p[np.ix_(tile.row_index(), tile.col_index())].mean())


def entropy(model: EntryModel) -> float:
    """Total entropy in nats: sum of per-entry Bernoulli entropies."""
    p = model.p
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = -np.where(p > 0.0, p * np.log(p), 0.0) - np.where(
            p < 1.0, (1.0 - p) * np.log1p(-p), 0.0
        )
    return float(terms.sum())


def _clamp_exact(ts: TileSet) -> tuple[np.ndarray, np.ndarray]:
    """Apply exact tiles: returns (p, fixed) with conflicts rejected."""
    n, m = ts.dims
    p = np.full((n, m), 0.5)
    fixed = np.zeros((n, m), dtype=bool)
    for idx, ft in enumerate(ts.tiles):
        if not ft.exact:
            continue
        block = np.ix_(ft.tile.row_index(), ft.tile.col_index())
        clash = fixed[block] & (p[block] != ft.alpha)
        if clash.any():
            raise ConflictingExactTiles(
                f"tile #{idx + 1} ({ft.tile}) forces entries already "
                f"clamped to the opposite value"
            )
        p[block] = ft.alpha
        fixed[block] = True
    return p, fixed


def _check_feasible(ts: TileSet, p: np.ndarray, fixed: np.ndarray) -> None:
    """Reject noisy tiles whose target is outside the attainable range."""
    for idx, ft in enumerate(ts.tiles):
        if ft.exact:
            continue
        block = np.ix_(ft.tile.row_index(), ft.tile.col_index())
        a = ft.tile.area
        clamped_ones = float((fixed[block] & (p[block] == 1.0)).sum())
        clamped_zeros = float((fixed[block] & (p[block] == 0.0)).sum())
        lo = clamped_ones / a
        hi = (a - clamped_zeros) / a
        if ft.alpha < lo - _BOUNDARY_EPS or ft.alpha > hi + _BOUNDARY_EPS:
            raise InfeasibleTile(
                f"tile #{idx + 1} ({ft.tile}) wants frequency {ft.alpha} "
                f"but clamped entries restrict it to [{lo}, {hi}]"
            )


def _solve_scale(values: np.ndarray, target: float, opts: FitOptions) -> float:
    """Find x > 0 with sum(bernoulli_update(values, x)) == target.

    `values` are the free entries, all strictly inside (0, 1), and
    `target` lies strictly inside (0, len(values)). The sum is strictly
    increasing in x, so the root is unique: bracket geometrically, then
    run regula falsi with a bisection fallback.
    """
    g = lambda x: float(bernoulli_update(values, x).sum())
    grow = opts.bracket_growth
    lo, hi = 1.0 / grow, grow
    while g(lo) > target:
        lo /= grow
    while g(hi) < target:
        hi *= grow
    f_lo, f_hi = g(lo) - target, g(hi) - target
    # tolerance/10 on the tile *frequency*, i.e. the sum scaled by area
    tol = opts.tolerance / 10.0 * len(values)
    x = lo
    stuck_side, stuck_count = 0, 0
    for _ in range(500):
        if f_hi == f_lo or stuck_count >= 2:
            x = 0.5 * (lo + hi)  # bisection fallback when regula falsi stalls
            stuck_count = 0
        else:
            x = lo - f_lo * (hi - lo) / (f_hi - f_lo)
            if not lo < x < hi:
                x = 0.5 * (lo + hi)
        f_x = g(x) - target
        if abs(f_x) < tol:
            return x
        side = -1 if f_x < 0.0 else 1
        stuck_count = stuck_count + 1 if side == stuck_side else 0
        stuck_side = side
        if f_x < 0.0:
            lo, f_lo = x, f_x
        else:
            hi, f_hi = x, f_x
    return x


def _sigmoid(s: np.ndarray) -> np.ndarray:
    """Numerically stable logistic function."""
    out = np.empty_like(s)
    pos = s >= 0.0
    out[pos] = 1.0 / (1.0 + np.exp(-s[pos]))
    e = np.exp(s[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _newton_fit(
    ts: TileSet,
    noisy: list,
    blocks: list,
    opts: FitOptions,
) -> np.ndarray:
    """Fit by damped Newton on the per-tile log-scale multipliers.

    Each scaling update multiplies entry odds by a per-tile factor, so
    the model is logistic in the tile multipliers: an entry's log-odds
    is the sum of the multipliers of the noisy tiles covering it. The
    dual objective (log-partition minus the linear target term) is
    convex and smooth; Newton with backtracking converges fast even
    when the optimum pushes entries to 0 or 1, where plain per-tile
    sweeps slow to a crawl.
    """
    n, m = ts.dims
    p, pinned = _clamp_exact(ts)

    # Pin entries forced to 0/1 by targets that sit on the attainable
    # boundary; pinning one tile can expose another, so run to fixpoint.
    changed = True
    while changed:
        changed = False
        for ft, block in zip(noisy, blocks):
            sub_p, sub_pin = p[block], pinned[block]
            free = ~sub_pin
            nfree = int(free.sum())
            if nfree == 0:
                continue
            settled = float(sub_p[sub_pin].sum())
            target = ft.alpha * ft.tile.area
            if target <= settled + _BOUNDARY_EPS:
                sub_p[free] = 0.0
            elif target >= settled + nfree - _BOUNDARY_EPS:
                sub_p[free] = 1.0
            else:
                continue
            sub_pin[free] = True
            p[block], pinned[block] = sub_p, sub_pin
            changed = True

    k = len(noisy)
    rows = []
    targets = np.empty(k)
    for j, (ft, block) in enumerate(zip(noisy, blocks)):
        mask = np.zeros((n, m), dtype=bool)
        mask[block] = True
        targets[j] = ft.alpha * ft.tile.area - float(p[mask & pinned].sum())
        mask &= ~pinned
        rows.append(mask.ravel())
    incidence = np.array(rows, dtype=float)  # k x (n*m), free entries only
    areas = np.array([ft.tile.area for ft in noisy], dtype=float)

    multipliers = np.zeros(k)
    s = incidence.T @ multipliers
    q = _sigmoid(s)
    objective = float(np.logaddexp(0.0, s).sum() - multipliers @ targets)
    budget = min(opts.max_sweeps, 500)
    for _ in range(budget):
        grad = incidence @ q - targets
        residual = np.max(np.abs(grad) / areas) if k else 0.0
        if k == 0 or residual <= opts.tolerance:
            break
        weights = q * (1.0 - q)
        hess = (incidence * weights) @ incidence.T
        ridge = 1e-12 * max(float(hess.diagonal().max()), 1.0)
        step = np.linalg.solve(hess + ridge * np.eye(k), -grad)
        descent = float(grad @ step)
        if descent >= 0.0:  # numerical breakdown: fall back to steepest descent
            step = -grad
            descent = float(grad @ step)
        # Backtracking: accept on sufficient objective decrease, or --
        # once improvements drop below float resolution of the objective
        # -- on a shrinking gradient residual.
        scale = 1.0
        for _ in range(60):
            cand = multipliers + scale * step
            s2 = incidence.T @ cand
            obj2 = float(np.logaddexp(0.0, s2).sum() - cand @ targets)
            if obj2 <= objective + 1e-4 * scale * descent:
                break
            q2 = _sigmoid(s2)
            res2 = np.max(np.abs(incidence @ q2 - targets) / areas)
            if res2 <= 0.5 * residual:
                break
            scale *= 0.5
        multipliers, s, objective = cand, s2, obj2
        q = _sigmoid(s)

    flat = p.ravel()
    free_flat = ~pinned.ravel()
    flat[free_flat] = q[free_flat]
    return flat.reshape(n, m)


def fit(ts: TileSet, opts: FitOptions = FitOptions()) -> EntryModel:
    """Fit the factorized maximum-entropy model for a tile set.

    Starts from the uniform 1/2 matrix, clamps exact tiles, then sweeps
    the noisy tiles in set order until every tile's model frequency is
    within `opts.tolerance` of its target. If the sweeps stall -- which
    happens when the optimum drives entries to exactly 0 or 1 -- the
    fit switches to a Newton solve on the tile multipliers.
    """
    n, m = ts.dims
    p, fixed = _clamp_exact(ts)
    _check_feasible(ts, p, fixed)

    noisy = [ft for ft in ts.tiles if not ft.exact]
    blocks = [np.ix_(ft.tile.row_index(), ft.tile.col_index()) for ft in noisy]

    sweep_budget = min(opts.max_sweeps, 64)
    residual = _max_residual(ts, p)
    sweeps = 0
    while residual > opts.tolerance:
        if sweeps >= sweep_budget:
            p = _newton_fit(ts, noisy, blocks, opts)
            residual = _max_residual(ts, p)
            if residual > opts.tolerance:
                raise NoConvergence(
                    f"residual {residual:.3g} > tolerance "
                    f"{opts.tolerance:.3g}; the given frequencies appear "
                    f"mutually inconsistent"
                )
            break
        for ft, block in zip(noisy, blocks):
            vals = p[block]
            a = ft.tile.area
            target = ft.alpha * a
            free = (vals > 0.0) & (vals < 1.0)
            settled = float(vals[~free].sum())
            nfree = int(free.sum())
            if nfree == 0:
                continue  # settled entries decide this tile entirely
            room_lo, room_hi = settled, settled + nfree
            if target <= room_lo + _BOUNDARY_EPS:
                # all target mass already accounted for: free entries -> 0
                vals[free] = 0.0
            elif target >= room_hi - _BOUNDARY_EPS:
                vals[free] = 1.0
            else:
                x = _solve_scale(vals[free], target - settled, opts)
                vals[free] = bernoulli_update(vals[free], x)
            p[block] = vals
        sweeps += 1
        residual = _max_residual(ts, p)

    return EntryModel(dims=(n, m), p=p, fixed=fixed, fitted_for=ts, residual=residual)


def _max_residual(ts: TileSet, p: np.ndarray) -> float:
    worst = 0.0
    for ft in ts.tiles:
        block = np.ix_(ft.tile.row_index(), ft.tile.col_index())
        worst = max(worst, abs(float(p[block].mean()) - ft.alpha))
    return worst


def exact_fastpath(ts: TileSet) -> EntryModel:
    """Closed form for all-exact tile sets: clamp areas, 1/2 elsewhere."""
    for ft in ts.tiles:
        if not ft.exact:
            raise NotExact(f"exact_fastpath requires exact tiles, got {ft}")
    p, fixed = _clamp_exact(ts)
    return EntryModel(dims=ts.dims, p=p, fixed=fixed, fitted_for=ts, residual=0.0)
