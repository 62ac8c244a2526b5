"""Piecewise-constant copulas with an analytic population limit.

Used as oracles: the population value of the coverage correlation for a
joint law with uniform marginals is the f-divergence between the joint
law and the product of marginals with generator
f(x) = (e^{-x} - e^{-1}) / (1 - e^{-1}).  Since f has asymptotic slope 0
at infinity, a mixture (1-s) * absolutely-continuous + s * singular has
population value  integral of f((1-s) h)  over the unit square, where h
is the density of the normalised absolutely continuous part.
"""

import math
from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

__all__ = ["PiecewiseConstantCopula", "population_kappa_oracle",
           "uniform_copula", "two_block_copula", "diagonal_singular_copula"]

E_INV = math.exp(-1.0)


def _f(x: float) -> float:
    return (math.exp(-x) - E_INV) / (1.0 - E_INV)


@dataclass(frozen=True)
class PiecewiseConstantCopula:
    """A copula on [0,1]^2: constant densities on a uniform cell grid,
    mixed with a fraction ``singular_mass`` of mass on the diagonal y=x.

    ``densities[i, j]`` is the density of the normalised absolutely
    continuous part on cell [i/r, (i+1)/r] x [j/c, (j+1)/c]; the cell
    masses must sum to 1.
    """

    densities: np.ndarray
    singular_mass: float = 0.0

    def __post_init__(self):
        h = np.asarray(self.densities, dtype=np.float64)
        if h.ndim != 2:
            raise ValueError("densities must be a 2-D cell grid")
        if np.any(h < 0.0):
            raise ValueError("densities must be nonnegative")
        if not (0.0 <= self.singular_mass <= 1.0):
            raise ValueError("singular_mass must be in [0, 1]")
        area = 1.0 / h.size
        total = float(h.sum() * area)
        if self.singular_mass < 1.0 and abs(total - 1.0) > 1e-9:
            raise ValueError(f"cell masses must sum to 1, got {total}")
        h.flags.writeable = False
        object.__setattr__(self, "densities", h)

    @property
    def shape(self) -> Tuple[int, int]:
        return self.densities.shape

    def population_kappa(self) -> float:
        """Analytic population coverage correlation of this copula."""
        s = self.singular_mass
        if s >= 1.0:
            return 1.0
        area = 1.0 / self.densities.size
        return float(sum(_f((1.0 - s) * h) * area for h in self.densities.flat))

    def sample(self, n: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
        """Draw n exact samples (x, y), each uniform-marginal by construction."""
        r, c = self.densities.shape
        area = 1.0 / self.densities.size
        probs = (self.densities * area).ravel()
        x = np.empty(n)
        y = np.empty(n)
        is_sing = rng.random(n) < self.singular_mass
        k_sing = int(is_sing.sum())
        if k_sing:
            u = rng.random(k_sing)
            x[is_sing] = u
            y[is_sing] = u
        k_ac = n - k_sing
        if k_ac:
            if probs.sum() <= 0:
                raise ValueError("absolutely continuous part has zero mass")
            cells = rng.choice(probs.size, size=k_ac, p=probs / probs.sum())
            ci, cj = np.divmod(cells, c)
            x[~is_sing] = (ci + rng.random(k_ac)) / r
            y[~is_sing] = (cj + rng.random(k_ac)) / c
        return x, y


def population_kappa_oracle(copula: PiecewiseConstantCopula) -> float:
    """Functional form of :meth:`PiecewiseConstantCopula.population_kappa`."""
    return copula.population_kappa()


def uniform_copula() -> PiecewiseConstantCopula:
    """Independence: density 1 everywhere."""
    return PiecewiseConstantCopula(densities=np.ones((1, 1)))


def two_block_copula() -> PiecewiseConstantCopula:
    """Density 2 on [0,1/2]^2 and [1/2,1]^2, zero elsewhere."""
    return PiecewiseConstantCopula(densities=np.array([[2.0, 0.0], [0.0, 2.0]]))


def diagonal_singular_copula() -> PiecewiseConstantCopula:
    """All mass on the diagonal y = x."""
    return PiecewiseConstantCopula(densities=np.zeros((1, 1)), singular_mass=1.0)
