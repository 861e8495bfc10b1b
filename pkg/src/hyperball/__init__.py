"""Hyperinterpolation on the unit ball with Gegenbauer weights."""
from ._core import BACKEND
from .cubature import (
    CubatureRule,
    ball_rule,
    circle_rule,
    exactness_report,
    integrate,
    lift_ball_rule_to_sphere,
    restrict_sphere_rule_to_ball,
    sphere_rule,
)
from .domains import BallWeight, Sphere, WeightedBall

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BallWeight",
    "CubatureRule",
    "Sphere",
    "WeightedBall",
    "ball_rule",
    "circle_rule",
    "exactness_report",
    "integrate",
    "lift_ball_rule_to_sphere",
    "restrict_sphere_rule_to_ball",
    "sphere_rule",
]
