"""Volume of unions of wrapped cubes in the unit cube.

The covered volume of n wrapped l-infinity balls is a special case of
Klee's measure problem for axis-aligned boxes.  Each ball is split along
wrapped axes into at most 2^d boxes inside [0,1]^d; the union volume is
then computed by a plane sweep with a segment tree for d=2 and by a
recursive sweep for d>=3, optionally after partitioning the cube into
grid blocks for average-case speed.
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from numba import njit

__all__ = [
    "Box",
    "RankConfiguration",
    "wrap_split",
    "union_volume_2d",
    "union_volume",
    "covered_volume",
    "vacancy",
]


@dataclass(frozen=True)
class Box:
    """Axis-aligned box [lo, hi] inside the unit cube."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=np.float64))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=np.float64))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("box corners must be vectors of equal length")
        if np.any(lo > hi):
            raise ValueError("box must satisfy lo <= hi on every axis")
        if np.any(lo < 0.0) or np.any(hi > 1.0):
            raise ValueError("box must be contained in the unit cube")
        lo.flags.writeable = False
        hi.flags.writeable = False
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def d(self) -> int:
        return self.lo.shape[0]

    @property
    def volume(self) -> float:
        return float(np.prod(self.hi - self.lo))


@dataclass(frozen=True)
class RankConfiguration:
    """n cube centres in [0,1]^d together with the covering radius."""

    centers: np.ndarray
    gamma: float

    def __post_init__(self):
        c = np.asarray(self.centers, dtype=np.float64)
        if c.ndim != 2:
            raise ValueError("centers must be an n-by-d matrix")
        if np.any(c < 0.0) or np.any(c > 1.0):
            raise ValueError("centers must lie in [0,1]^d")
        if not (0.0 < self.gamma <= 0.5):
            raise ValueError(f"gamma must be in (0, 1/2], got {self.gamma}")
        c.flags.writeable = False
        object.__setattr__(self, "centers", c)

    @property
    def n(self) -> int:
        return self.centers.shape[0]

    @property
    def d(self) -> int:
        return self.centers.shape[1]


# ---------------------------------------------------------------------------
# wrap splitting

def _wrap_split_arrays(centers: np.ndarray, gamma: float):
    """Split wrapped cubes into boxes; returns (lo, hi) arrays of shape (k, d).

    For each axis the raw interval [c - gamma, c + gamma] either fits in
    [0,1] or wraps around one edge, producing two segments.  The boxes per
    centre are the Cartesian products of the per-axis segments.
    """
    n, d = centers.shape
    lo_raw = centers - gamma
    hi_raw = centers + gamma
    wrap_lo = lo_raw < 0.0
    wrap_hi = hi_raw > 1.0

    # primary segment per axis
    p_lo = np.where(wrap_lo, 0.0, lo_raw)
    p_hi = np.where(wrap_hi, 1.0, hi_raw)
    # secondary segment exists where the interval wraps
    s_lo = np.where(wrap_lo, lo_raw + 1.0, 0.0)
    s_hi = np.where(wrap_lo, 1.0, hi_raw - 1.0)
    has_sec = wrap_lo | wrap_hi

    boxes_lo = p_lo.copy()
    boxes_hi = p_hi.copy()
    src = np.arange(n)
    for k in range(d):
        mask = has_sec[src, k]
        if not mask.any():
            continue
        new_lo = boxes_lo[mask].copy()
        new_hi = boxes_hi[mask].copy()
        new_lo[:, k] = s_lo[src[mask], k]
        new_hi[:, k] = s_hi[src[mask], k]
        boxes_lo = np.vstack([boxes_lo, new_lo])
        boxes_hi = np.vstack([boxes_hi, new_hi])
        src = np.concatenate([src, src[mask]])
    keep = np.all(boxes_hi > boxes_lo, axis=1)
    return boxes_lo[keep], boxes_hi[keep]


def wrap_split(center, gamma: float) -> List[Box]:
    """Split one wrapped cube B(center, gamma) into boxes inside [0,1]^d."""
    center = np.atleast_1d(np.asarray(center, dtype=np.float64))
    if not (0.0 < gamma <= 0.5):
        raise ValueError(f"gamma must be in (0, 1/2], got {gamma}")
    lo, hi = _wrap_split_arrays(center[None, :], gamma)
    return [Box(lo=lo[i], hi=hi[i]) for i in range(lo.shape[0])]


# ---------------------------------------------------------------------------
# union volume

@njit(cache=True)
def _seg_update(ql, qr, delta, cnt, cov, ys, stack):
    # cover-count segment tree over elementary y-intervals; iterative
    # descend/pushup traversal (explicit stack) of the recursive scheme
    sp = 0
    stack[sp, 0] = 0  # node
    stack[sp, 1] = 0  # lo
    stack[sp, 2] = ys.shape[0] - 1  # hi
    stack[sp, 3] = 0  # phase: 0 descend, 1 pushup
    sp += 1
    while sp > 0:
        sp -= 1
        node = stack[sp, 0]
        lo = stack[sp, 1]
        hi = stack[sp, 2]
        phase = stack[sp, 3]
        if phase == 0:
            if qr <= ys[lo] or ys[hi] <= ql:
                continue
            stack[sp, 0] = node
            stack[sp, 1] = lo
            stack[sp, 2] = hi
            stack[sp, 3] = 1
            sp += 1
            if ql <= ys[lo] and ys[hi] <= qr:
                cnt[node] += delta
            else:
                mid = (lo + hi) // 2
                stack[sp, 0] = 2 * node + 1
                stack[sp, 1] = lo
                stack[sp, 2] = mid
                stack[sp, 3] = 0
                sp += 1
                stack[sp, 0] = 2 * node + 2
                stack[sp, 1] = mid
                stack[sp, 2] = hi
                stack[sp, 3] = 0
                sp += 1
        else:
            if cnt[node] > 0:
                cov[node] = ys[hi] - ys[lo]
            elif hi - lo == 1:
                cov[node] = 0.0
            else:
                cov[node] = cov[2 * node + 1] + cov[2 * node + 2]


@njit(cache=True)
def _union_area_2d(x0, x1, y0, y1):
    nb = x0.shape[0]
    if nb == 0:
        return 0.0
    ys = np.unique(np.concatenate((y0, y1)))
    m = ys.shape[0] - 1
    if m <= 0:
        return 0.0
    cnt = np.zeros(4 * m, dtype=np.int64)
    cov = np.zeros(4 * m, dtype=np.float64)
    # stack depth: 3 frames per level of a tree of height <= 64
    stack = np.empty((4 * 64, 4), dtype=np.int64)
    ex = np.concatenate((x0, x1))
    et = np.concatenate((np.ones(nb, dtype=np.int64), -np.ones(nb, dtype=np.int64)))
    elo = np.concatenate((y0, y0))
    ehi = np.concatenate((y1, y1))
    # closing events after opening events at equal x (zero-width strips either
    # way for closed boxes; the rule exists for determinism only)
    by_type = np.argsort(-et, kind="mergesort")
    ex = ex[by_type]
    et = et[by_type]
    elo = elo[by_type]
    ehi = ehi[by_type]
    order = np.argsort(ex, kind="mergesort")
    total = 0.0
    xprev = 0.0
    first = True
    for k in range(order.shape[0]):
        i = order[k]
        x = ex[i]
        if not first:
            total += (x - xprev) * cov[0]
        _seg_update(elo[i], ehi[i], et[i], cnt, cov, ys, stack)
        xprev = x
        first = False
    return total


def _union_interval_1d(lo: np.ndarray, hi: np.ndarray) -> float:
    order = np.argsort(lo, kind="stable")
    total = 0.0
    cur_lo = cur_hi = None
    for i in order:
        a, b = lo[i], hi[i]
        if cur_hi is None or a > cur_hi:
            if cur_hi is not None:
                total += cur_hi - cur_lo
            cur_lo, cur_hi = a, b
        elif b > cur_hi:
            cur_hi = b
    if cur_hi is not None:
        total += cur_hi - cur_lo
    return float(total)


def _union_volume_nd(lo: np.ndarray, hi: np.ndarray) -> float:
    """Union volume of boxes given as (k, d) corner arrays, any d >= 1."""
    if lo.shape[0] == 0:
        return 0.0
    d = lo.shape[1]
    if d == 1:
        return _union_interval_1d(lo[:, 0], hi[:, 0])
    if d == 2:
        return float(_union_area_2d(
            np.ascontiguousarray(lo[:, 0]), np.ascontiguousarray(hi[:, 0]),
            np.ascontiguousarray(lo[:, 1]), np.ascontiguousarray(hi[:, 1])))
    # sweep slabs along the first axis and recurse on projections
    xs = np.unique(np.concatenate([lo[:, 0], hi[:, 0]]))
    total = 0.0
    for i in range(xs.shape[0] - 1):
        a, b = xs[i], xs[i + 1]
        mask = (lo[:, 0] <= a) & (hi[:, 0] >= b)
        if mask.any():
            total += (b - a) * _union_volume_nd(lo[mask, 1:], hi[mask, 1:])
    return float(total)


def _boxes_to_arrays(boxes: Sequence[Box], d: Optional[int] = None):
    if len(boxes) == 0:
        if d is None:
            raise ValueError("cannot infer dimension from an empty box list")
        return np.empty((0, d)), np.empty((0, d))
    lo = np.stack([np.asarray(b.lo, dtype=np.float64) for b in boxes])
    hi = np.stack([np.asarray(b.hi, dtype=np.float64) for b in boxes])
    return lo, hi


def union_volume_2d(boxes: Sequence[Box]) -> float:
    """Exact area of a union of 2-D boxes via the x-sweep."""
    lo, hi = _boxes_to_arrays(boxes, d=2)
    if lo.shape[1] != 2:
        raise ValueError("union_volume_2d requires 2-dimensional boxes")
    return _union_volume_nd(lo, hi)


def union_volume(boxes: Sequence[Box], d: int) -> float:
    """Exact Lebesgue measure of a union of d-dimensional boxes, d >= 2."""
    if d < 2:
        raise ValueError(f"union_volume requires d >= 2, got {d}")
    lo, hi = _boxes_to_arrays(boxes, d=d)
    if lo.shape[0] and lo.shape[1] != d:
        raise ValueError(f"boxes have dimension {lo.shape[1]}, expected {d}")
    return _union_volume_nd(lo, hi)


def _blocked_union(lo: np.ndarray, hi: np.ndarray, d: int, m: int) -> float:
    """Union volume after clipping boxes to an m^d grid of blocks.

    Blocks partition the cube, so clipped per-block union volumes add
    exactly.  Blocks are visited in a fixed lexicographic order to keep
    the floating-point reduction deterministic.
    """
    edges = np.arange(m + 1, dtype=np.float64) / m
    # block index ranges touched by each box, per axis
    first = np.clip(np.floor(lo * m).astype(np.int64), 0, m - 1)
    last = np.clip(np.ceil(hi * m).astype(np.int64) - 1, 0, m - 1)
    per_block: dict = {}
    for b in range(lo.shape[0]):
        ranges = [range(first[b, k], last[b, k] + 1) for k in range(d)]
        idx = [()]
        for r in ranges:
            idx = [t + (j,) for t in idx for j in r]
        for t in idx:
            per_block.setdefault(t, []).append(b)
    total = 0.0
    for t in sorted(per_block):
        ids = per_block[t]
        blo = np.array([edges[j] for j in t])
        bhi = np.array([edges[j + 1] for j in t])
        clo = np.maximum(lo[ids], blo)
        chi = np.minimum(hi[ids], bhi)
        keep = np.all(chi > clo, axis=1)
        if keep.any():
            total += _union_volume_nd(clo[keep], chi[keep])
    return total


def covered_volume(config: RankConfiguration, blocked: Optional[bool] = None) -> float:
    """Measure of the union of wrapped cubes centred at the configuration.

    ``blocked`` controls the grid-block decomposition (default: on for
    d >= 3, off for d = 2, matching the sweep's strengths).
    """
    lo, hi = _wrap_split_arrays(config.centers, config.gamma)
    d = config.d
    if blocked is None:
        blocked = d >= 3
    if not blocked or d < 3:
        return _union_volume_nd(lo, hi)
    m = int(np.floor(config.n ** (1.0 / d)))
    if m < 2:
        return _union_volume_nd(lo, hi)
    return _blocked_union(lo, hi, d, m)


def vacancy(config: RankConfiguration, blocked: Optional[bool] = None) -> float:
    """Uncovered volume 1 - covered_volume(config), in [0, 1 - 1/n]."""
    return 1.0 - covered_volume(config, blocked=blocked)
