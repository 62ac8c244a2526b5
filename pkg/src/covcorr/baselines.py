"""Classical association baselines: Chatterjee's xi, Pearson, Spearman."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats as sps

from .ranks import as_sample
from .rng import make_rng

__all__ = ["BaselineResult", "chatterjee_xi", "pearson", "spearman"]


@dataclass(frozen=True)
class BaselineResult:
    method: str
    statistic: float
    p_value: float

    @property
    def degenerate(self) -> bool:
        return math.isnan(self.statistic)


def _univariate_pair(x, y):
    x = as_sample(x)
    y = as_sample(y)
    if x.d != 1 or y.d != 1:
        raise ValueError("baseline correlations require univariate samples")
    if x.n != y.n:
        raise ValueError(f"samples have different lengths: {x.n} vs {y.n}")
    return x.data[:, 0], y.data[:, 0]


def chatterjee_xi(x, y, tie_seed: Optional[int] = None) -> BaselineResult:
    """Chatterjee's rank correlation with its asymptotic one-sided p-value.

    Sort by x, take the right-continuous ranks r_i = #{j : Y_j <= Y_(i)} of
    the concomitant y values, and form 1 - sum|r_{i+1} - r_i| / ((n^2-1)/3).
    Ties in x are broken in first-occurrence order unless ``tie_seed`` is
    given, in which case tied x values are randomly shuffled.  The p-value
    uses the continuous-marginal null variance 2/5 and is unreliable under
    heavy ties in y.
    """
    xv, yv = _univariate_pair(x, y)
    n = xv.shape[0]
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    if tie_seed is None:
        order = np.argsort(xv, kind="stable")
    else:
        shuffle = make_rng(tie_seed, "xi-tie-break", n).permutation(n)
        order = shuffle[np.argsort(xv[shuffle], kind="stable")]
    y_sorted_all = np.sort(yv)
    r = np.searchsorted(y_sorted_all, yv[order], side="right")
    xi = 1.0 - 3.0 * np.abs(np.diff(r)).sum() / (n * n - 1.0)
    z = math.sqrt(n) * xi / math.sqrt(0.4)
    p = 0.5 * math.erfc(z / math.sqrt(2.0))
    return BaselineResult(method="chatterjee", statistic=float(xi), p_value=p)


def pearson(x, y) -> BaselineResult:
    """Pearson correlation with the usual two-sided t-approximation p-value."""
    xv, yv = _univariate_pair(x, y)
    if xv.shape[0] < 3:
        raise ValueError("need n >= 3")
    if np.var(xv) == 0.0 or np.var(yv) == 0.0:
        return BaselineResult(method="pearson", statistic=float("nan"),
                              p_value=float("nan"))
    res = sps.pearsonr(xv, yv)
    return BaselineResult(method="pearson", statistic=float(res.statistic),
                          p_value=float(res.pvalue))


def spearman(x, y) -> BaselineResult:
    """Spearman rank correlation (Pearson on ranks), two-sided p-value."""
    xv, yv = _univariate_pair(x, y)
    if xv.shape[0] < 3:
        raise ValueError("need n >= 3")
    if np.var(xv) == 0.0 or np.var(yv) == 0.0:
        return BaselineResult(method="spearman", statistic=float("nan"),
                              p_value=float("nan"))
    res = sps.spearmanr(xv, yv)
    return BaselineResult(method="spearman", statistic=float(res.statistic),
                          p_value=float(res.pvalue))
