"""Coverage correlation: a nonparametric, distribution-free association
measure based on the uncovered volume of wrapped cubes centred at
transport ranks, with exact null calibration and classical baselines.
"""

from .baselines import BaselineResult, chatterjee_xi, pearson, spearman
from .copula import (
    PiecewiseConstantCopula,
    diagonal_singular_copula,
    population_kappa_oracle,
    two_block_copula,
    uniform_copula,
)
from .geometry import (
    Box,
    RankConfiguration,
    covered_volume,
    union_volume,
    union_volume_2d,
    vacancy,
    wrap_split,
)
from .ranks import (
    RankAssignment,
    ReferenceSet,
    Sample,
    grid_reference,
    joint_ranks,
    rank_multivariate,
    rank_univariate,
    sample_reference,
)
from .simulate import (
    ExperimentReport,
    Scenario,
    convergence_study,
    generate,
    power_experiment,
    size_experiment,
)
from .stats import (
    NullDistribution,
    TestResult,
    asymptotic_var_kappa,
    coverage_correlation,
    coverage_correlation_grid,
    null_mean_vacancy,
    null_var_vacancy,
)

__version__ = "0.1.0"
