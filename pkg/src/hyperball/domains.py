"""Integration domains: spheres and Gegenbauer-weighted balls."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

__all__ = [
    "BallWeight", "Sphere", "WeightedBall", "Domain", "sphere_area", "ball_mass", "total_measure",
]


@dataclass(frozen=True)
class BallWeight:
    """The unit ball ``B^d`` with weight ``(1 - |x|^2)**(mu - 1/2)``, ``mu = m/2``."""

    d: int
    m: int

    def __post_init__(self):
        if int(self.d) != self.d or self.d < 1:
            raise ValueError(f"ball dimension must be a positive integer, got {self.d}")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"weight index must be a positive integer, got {self.m}")

    @property
    def mu(self):
        return self.m / 2.0

    def __call__(self, x):
        """Evaluate the weight at points ``x`` (last axis is the coordinate)."""
        import numpy as np

        r2 = np.sum(np.asarray(x, dtype=float) ** 2, axis=-1)
        return np.maximum(1.0 - r2, 0.0) ** (self.mu - 0.5)


@dataclass(frozen=True)
class Sphere:
    dim: int

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise ValueError(f"sphere dimension must be a positive integer, got {self.dim}")

    @property
    def ambient(self):
        return self.dim + 1


@dataclass(frozen=True)
class WeightedBall:
    w: BallWeight

    @property
    def ambient(self):
        return self.w.d


Domain = Union[Sphere, WeightedBall]


def sphere_area(dim):
    """Surface measure of ``S^dim`` in ``R^(dim+1)``; ``S^0`` has counting measure 2."""
    return 2.0 * math.pi ** ((dim + 1) / 2.0) / math.gamma((dim + 1) / 2.0)


def ball_mass(w):
    """Total mass of the weighted ball, ``pi^(d/2) Gamma(mu+1/2) / Gamma(mu+(d+1)/2)``."""
    return math.exp(
        0.5 * w.d * math.log(math.pi) + math.lgamma(w.mu + 0.5) - math.lgamma(w.mu + (w.d + 1) / 2.0)
    )


def total_measure(domain):
    if isinstance(domain, Sphere):
        return sphere_area(domain.dim)
    return ball_mass(domain.w)
