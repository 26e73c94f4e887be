"""KL divergence between fitted models and the normalized tile-set distance.

The distance between two tile sets, given background knowledge, is
(KL(M || right+bg) + KL(M || left+bg)) / KL(M || bg) with M the model
for the union of all three sets. When every tile involved is exact the
same value equals the Jaccard dissimilarity of the covered areas minus
the background area, which is used as a fast path.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import TileSet, area_union
from .errors import (
    DimMismatch,
    ConsistencyError,
    InfiniteDivergence,
    NoConvergence,
    NotExact,
)
from .maxent import EntryModel, FitOptions, entropy, exact_fastpath, fit

# Below this, KL(M || bg) is treated as zero and the distance defined as 1.
_ZERO_KL = 1e-12


@dataclass(frozen=True)
class DistanceReport:
    """Distance value plus the three KL terms (nats) behind it."""

    value: float
    kl_m_t: float
    kl_m_u: float
    kl_m_b: float
    used_jaccard_path: bool


def _entry_kl(pa: np.ndarray, pb: np.ndarray) -> float:
    """Sum over entries and both outcomes of pa * log(pa / pb)."""
    det_clash = ((pb == 0.0) & (pa > 0.0)) | ((pb == 1.0) & (pa < 1.0))
    if det_clash.any():
        i, j = np.argwhere(det_clash)[0]
        raise InfiniteDivergence(
            f"entry ({i + 1}, {j + 1}) is deterministic in the reference "
            f"model but not in the compared model"
        )
    with np.errstate(divide="ignore", invalid="ignore"):
        pos = np.where(pa > 0.0, pa * (np.log(pa) - np.log(pb)), 0.0)
        neg = np.where(pa < 1.0, (1.0 - pa) * (np.log1p(-pa) - np.log1p(-pb)), 0.0)
    return float((pos + neg).sum())


def kl(model_a: EntryModel, model_b: EntryModel) -> float:
    """KL(model_a || model_b) in nats.

    Finite whenever model_b was fitted for a subset of model_a's tiles:
    any entry deterministic under b is then deterministic under a with
    the same value.
    """
    if model_a.dims != model_b.dims:
        raise DimMismatch(f"model dims differ: {model_a.dims} vs {model_b.dims}")
    return _entry_kl(model_a.p, model_b.p)


def kl_by_entropy(model_a: EntryModel, model_b: EntryModel) -> float:
    """KL(model_a || model_b) via the entropy difference H(b) - H(a).

    Valid under the same subset precondition as kl(); serves as an
    independent cross-check path.
    """
    if model_a.dims != model_b.dims:
        raise DimMismatch(f"model dims differ: {model_a.dims} vs {model_b.dims}")
    return entropy(model_b) - entropy(model_a)


def jaccard_distance(t: TileSet, u: TileSet, b: TileSet) -> float:
    """1 - |X n Y| / |X u Y| with X, Y the covered areas outside b's area.

    Only defined for all-exact tile sets; returns 1 when both areas are
    contained in the background area.
    """
    for ts in (t, u, b):
        if not ts.all_exact():
            raise NotExact("jaccard_distance requires all tiles to be exact")
    bg = area_union(b)
    x = area_union(t) - bg
    y = area_union(u) - bg
    union = len(x | y)
    if union == 0:
        return 1.0
    return 1.0 - len(x & y) / union


def _fit_or_fast(ts: TileSet, opts: FitOptions) -> EntryModel:
    if ts.all_exact():
        return exact_fastpath(ts)
    return fit(ts, opts)


def distance(
    t: TileSet,
    u: TileSet,
    b: TileSet | None = None,
    opts: FitOptions = FitOptions(),
    allow_jaccard: bool = True,
) -> DistanceReport:
    """Normalized distance between tile sets t and u given background b.

    Fits models for t+u+b, t+b, u+b, and b, and returns the KL ratio.
    Falls back to the Jaccard form when every tile is exact (identical
    value, no iteration).
    """
    if b is None:
        b = TileSet(t.dims)
    if not (t.dims == u.dims == b.dims):
        raise DimMismatch(f"dims differ: {t.dims}, {u.dims}, {b.dims}")

    joint = t.union(u, b)
    try:
        model_m = _fit_or_fast(joint, opts)
    except NoConvergence as exc:
        raise ConsistencyError(f"joint model did not converge: {exc}") from exc
    model_tb = _fit_or_fast(t.union(b), opts)
    model_ub = _fit_or_fast(u.union(b), opts)
    model_b = _fit_or_fast(b, opts)

    kl_m_t = kl(model_m, model_tb)
    kl_m_u = kl(model_m, model_ub)
    kl_m_b = kl(model_m, model_b)

    all_exact = t.all_exact() and u.all_exact() and b.all_exact()
    if allow_jaccard and all_exact:
        value = jaccard_distance(t, u, b)
        return DistanceReport(value, kl_m_t, kl_m_u, kl_m_b, used_jaccard_path=True)

    if kl_m_b <= _ZERO_KL:
        value = 1.0
    else:
        value = (kl_m_u + kl_m_t) / kl_m_b
    return DistanceReport(value, kl_m_t, kl_m_u, kl_m_b, used_jaccard_path=False)
