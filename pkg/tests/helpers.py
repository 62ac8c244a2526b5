"""Independent oracles shared by the test modules.

These deliberately avoid the library's sweep/assignment code paths:
Monte Carlo hit counting, inclusion-exclusion over subsets, and
brute-force enumeration over permutations.
"""

import itertools
import math

import numpy as np


def mc_union_volume(lo, hi, n_points, rng):
    """Monte Carlo union volume of boxes in [0,1]^d; returns (estimate, se)."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    d = lo.shape[1]
    hits = 0
    remaining = n_points
    while remaining > 0:
        m = min(remaining, 200_000)
        pts = rng.random((m, d))
        covered = np.zeros(m, dtype=bool)
        for k in range(lo.shape[0]):
            covered |= np.all((pts >= lo[k]) & (pts <= hi[k]), axis=1)
        hits += int(covered.sum())
        remaining -= m
    p = hits / n_points
    se = math.sqrt(max(p * (1.0 - p), 1e-12) / n_points)
    return p, se


def inclusion_exclusion_volume(lo, hi):
    """Exact union volume by inclusion-exclusion; only for few boxes."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    k = lo.shape[0]
    total = 0.0
    for r in range(1, k + 1):
        for subset in itertools.combinations(range(k), r):
            ilo = lo[list(subset)].max(axis=0)
            ihi = hi[list(subset)].min(axis=0)
            widths = ihi - ilo
            if np.all(widths > 0):
                total += (-1.0) ** (r + 1) * float(np.prod(widths))
    return total


def brute_force_assignment_cost(x, ref):
    """Minimal mean squared transport cost over all permutations."""
    x = np.asarray(x, dtype=float)
    ref = np.asarray(ref, dtype=float)
    n = x.shape[0]
    cost = ((x[:, None, :] - ref[None, :, :]) ** 2).sum(axis=2)
    best = math.inf
    for perm in itertools.permutations(range(n)):
        c = cost[np.arange(n), perm].sum()
        if c < best:
            best = c
    return best / n


def random_boxes(rng, k, d, max_side=0.4):
    """k random boxes in the unit cube."""
    lo = rng.random((k, d)) * (1.0 - 1e-9)
    side = rng.random((k, d)) * max_side
    hi = np.minimum(lo + side + 1e-6, 1.0)
    return lo, hi
