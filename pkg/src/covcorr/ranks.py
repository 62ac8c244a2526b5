"""Empirical transport ranks against reference point sets.

A sample of n points in R^d is ranked by matching it to n reference points
in [0,1]^d so as to minimise the mean squared Euclidean transport cost.
In one dimension the optimum is sorted-to-sorted matching; in higher
dimensions an exact linear assignment is solved.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.optimize import linear_sum_assignment
from scipy.spatial.distance import cdist

from .rng import make_rng

__all__ = [
    "Sample",
    "ReferenceSet",
    "RankAssignment",
    "as_sample",
    "sample_reference",
    "grid_reference",
    "rank_univariate",
    "rank_multivariate",
    "joint_ranks",
]


@dataclass(frozen=True)
class Sample:
    """An n-by-d matrix of finite observations for one variable block."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=np.float64)
        if arr.ndim == 1:
            arr = arr[:, None]
        if arr.ndim != 2:
            raise ValueError(f"sample must be 1- or 2-dimensional, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"sample must have n >= 1 and d >= 1, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("sample contains non-finite entries")
        arr.flags.writeable = False
        object.__setattr__(self, "data", arr)

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def d(self) -> int:
        return self.data.shape[1]


@dataclass(frozen=True)
class ReferenceSet:
    """n reference points in [0,1]^d, either seeded-uniform or the 1-D grid."""

    points: np.ndarray
    mode: str  # "random" or "grid"
    seed: Optional[int] = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2:
            raise ValueError("reference points must be an n-by-d matrix")
        if np.any(pts < 0.0) or np.any(pts > 1.0):
            raise ValueError("reference points must lie in [0,1]^d")
        if self.mode not in ("random", "grid"):
            raise ValueError(f"unknown reference mode {self.mode!r}")
        if self.mode == "grid" and pts.shape[1] != 1:
            raise ValueError("grid references are only defined for d = 1")
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def describe(self) -> str:
        if self.mode == "grid":
            return "grid"
        return f"random(seed={self.seed})"


@dataclass(frozen=True)
class RankAssignment:
    """Result of matching a sample to a reference set.

    ``permutation[i]`` is the reference index assigned to sample ``i``, so
    ``ranks[i] == reference.points[permutation[i]]``.  ``total_cost`` is the
    minimal mean squared Euclidean transport cost.
    """

    permutation: np.ndarray
    ranks: np.ndarray
    total_cost: float

    @property
    def n(self) -> int:
        return self.ranks.shape[0]

    @property
    def d(self) -> int:
        return self.ranks.shape[1]


def as_sample(x) -> Sample:
    """Coerce an array-like (or Sample) to a validated Sample."""
    if isinstance(x, Sample):
        return x
    return Sample(np.asarray(x))


def sample_reference(n: int, d: int, seed: int) -> ReferenceSet:
    """Draw n i.i.d. uniform reference points on [0,1]^d, reproducibly."""
    if n < 1 or d < 1:
        raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
    rng = make_rng(seed, "reference", n, d)
    return ReferenceSet(points=rng.random((n, d)), mode="random", seed=seed)


def grid_reference(n: int) -> ReferenceSet:
    """The deterministic 1-D reference grid (1/n, 2/n, ..., 1)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got n={n}")
    pts = np.arange(1, n + 1, dtype=np.float64) / n
    return ReferenceSet(points=pts[:, None], mode="grid")


def rank_univariate(x, ref: ReferenceSet, tie_seed: Optional[int] = None) -> RankAssignment:
    """Rank a univariate sample: i-th smallest value gets i-th smallest reference.

    Ties are broken in first-occurrence order (stable sort).  Pass
    ``tie_seed`` to randomise the order among tied values instead.
    """
    x = as_sample(x)
    if x.d != 1 or ref.d != 1:
        raise ValueError("rank_univariate requires d = 1 for sample and reference")
    if x.n != ref.n:
        raise ValueError(f"sample has n={x.n} but reference has n={ref.n}")
    vals = x.data[:, 0]
    if tie_seed is None:
        order = np.argsort(vals, kind="stable")
    else:
        shuffle = make_rng(tie_seed, "tie-break", x.n).permutation(x.n)
        order = shuffle[np.argsort(vals[shuffle], kind="stable")]
    ref_order = np.argsort(ref.points[:, 0], kind="stable")
    perm = np.empty(x.n, dtype=np.intp)
    perm[order] = ref_order
    ranks = ref.points[perm]
    cost = float(np.mean((ranks[:, 0] - vals) ** 2))
    return RankAssignment(permutation=perm, ranks=ranks, total_cost=cost)


def rank_multivariate(x, ref: ReferenceSet) -> RankAssignment:
    """Rank a multivariate sample by exact linear assignment.

    Solves argmin over permutations of the mean of ||ref[perm[i]] - x[i]||^2
    with a dense cost matrix.  Any cost-optimal permutation is acceptable.
    """
    x = as_sample(x)
    if x.d != ref.d:
        raise ValueError(f"sample has d={x.d} but reference has d={ref.d}")
    if x.n != ref.n:
        raise ValueError(f"sample has n={x.n} but reference has n={ref.n}")
    cost = cdist(x.data, ref.points, metric="sqeuclidean")
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty(x.n, dtype=np.intp)
    perm[rows] = cols
    ranks = ref.points[perm]
    total = float(cost[rows, cols].sum() / x.n)
    return RankAssignment(permutation=perm, ranks=ranks, total_cost=total)


def rank_sample(x, ref: ReferenceSet, tie_seed: Optional[int] = None) -> RankAssignment:
    """Dispatch to the sorted matching for d=1 and linear assignment otherwise."""
    x = as_sample(x)
    if x.d == 1:
        return rank_univariate(x, ref, tie_seed=tie_seed)
    return rank_multivariate(x, ref)


def joint_ranks(rx: RankAssignment, ry: RankAssignment):
    """Concatenate two rank assignments into a joint rank configuration.

    The covering radius is 1/(2 n^(1/d)) with d the joint dimension, so each
    wrapped cube has volume 1/n.
    """
    from .geometry import RankConfiguration

    if rx.n != ry.n:
        raise ValueError(f"rank assignments have mismatched lengths {rx.n} != {ry.n}")
    centers = np.hstack([rx.ranks, ry.ranks])
    d = centers.shape[1]
    gamma = 1.0 / (2.0 * rx.n ** (1.0 / d))
    return RankConfiguration(centers=centers, gamma=gamma)
