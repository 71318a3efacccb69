"""Plants, reference trajectories and input-space normalization.

The plant abstraction is the Brunovsky chain x1' = x2, x2' = f(x) + g(x) u
with scalar input; the concrete instance is a single inverted
pendulum-cart whose half-length can switch abruptly mid-run.

Reference trajectories provide (x_d1, x_d2, x_d2') analytically, so the
velocity reference is the exact derivative of the position reference. Each
trajectory also carries the affine map that squeezes the reference into
the network/partition box [-1, 1]^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.interpolate import BSpline


@dataclass(frozen=True)
class PendulumParams:
    """Cart mass, pendulum mass, half-length and gravity, all positive."""

    cart_mass: float = 0.1
    pole_mass: float = 0.02
    half_length: float = 0.2
    gravity: float = 9.8

    def __post_init__(self):
        for name in ("cart_mass", "pole_mass", "half_length", "gravity"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


def _pendulum_denominator(x1: float, p: PendulumParams) -> float:
    mass_ratio = p.pole_mass / (p.cart_mass + p.pole_mass)
    return p.half_length * (4.0 / 3.0 - mass_ratio * math.cos(x1) ** 2)


def pendulum_f(x, params: PendulumParams) -> float:
    """Drift of the pendulum angle dynamics."""
    x1, x2 = float(x[0]), float(x[1])
    p = params
    num = (
        p.gravity * math.sin(x1)
        - p.pole_mass * p.half_length * (x2 * x2) * math.cos(x1) * math.sin(x1)
        / (p.cart_mass + p.pole_mass)
    )
    return num / _pendulum_denominator(x1, p)


def pendulum_g(x, params: PendulumParams) -> float:
    """Input gain of the pendulum angle dynamics; positive for |x1| < pi/2."""
    x1 = float(x[0])
    p = params
    num = math.cos(x1) / (p.cart_mass + p.pole_mass)
    return num / _pendulum_denominator(x1, p)


def perturbation_schedule(t: float) -> PendulumParams:
    """Half-length jumps from 0.2 m to 0.8 m at t = 50 s (boundary included)."""
    return PendulumParams(half_length=0.2 if t < 50.0 else 0.8)


@dataclass
class Plant:
    """Brunovsky-form plant: x1' = x2, x2' = f(x, t) + g(x, t) u."""

    order: int
    f: Callable[[np.ndarray, float], float]
    g: Callable[[np.ndarray, float], float]
    schedule: Callable[[float], PendulumParams] | None = None

    def __post_init__(self):
        if self.order < 2:
            raise ValueError("plant order must be at least 2")


def pendulum_plant(
    params: PendulumParams | None = None,
    schedule: Callable[[float], PendulumParams] | None = None,
) -> Plant:
    """Pendulum-cart plant; pass ``schedule`` for time-varying parameters."""
    if schedule is not None:
        return Plant(
            order=2,
            f=lambda x, t: pendulum_f(x, schedule(t)),
            g=lambda x, t: pendulum_g(x, schedule(t)),
            schedule=schedule,
        )
    p = params if params is not None else PendulumParams()
    return Plant(order=2, f=lambda x, t: pendulum_f(x, p), g=lambda x, t: pendulum_g(x, p))


def true_feedforward(plant: Plant, x_d1: float, x_d2: float, x_d2_dot: float, t: float = 0.0) -> float:
    """Feedforward that the network is supposed to learn:
    p(x_d) = (x_d2' - f(x_d)) / g(x_d). Metrics only; controllers never see it.
    """
    x_d = np.array([x_d1, x_d2])
    g = plant.g(x_d, t)
    if g <= 0:
        raise ValueError(f"input gain not positive at x_d={x_d}, t={t}")
    return (x_d2_dot - plant.f(x_d, t)) / g


class Trajectory:
    """Base reference generator.

    Subclasses implement ``_sample``; this class owns duration checking and
    the normalization map. ``scale`` holds per-dimension divisors: a value
    v maps to clip(v / scale, -1, 1). Scales are fixed at construction from
    the trajectory's own range (never adaptively), so the partition key is
    stationary. Dimensions already inside [-1, 1] keep the identity map, so
    knowledge stays in consistent coordinates across tasks.
    """

    duration: float | None
    scale: np.ndarray

    def sample(self, t: float) -> tuple[float, float, float]:
        """(x_d1, x_d2, x_d2') at time t; errors if t is outside the duration."""
        if t < -1e-9:
            raise ValueError("time must be nonnegative")
        if self.duration is not None and t > self.duration + 1e-9:
            raise ValueError(f"t={t} beyond trajectory duration {self.duration}")
        return self._sample(float(t))

    def _sample(self, t: float) -> tuple[float, float, float]:
        raise NotImplementedError

    def normalize(self, x_d) -> np.ndarray:
        """Map a raw reference point into [-1, 1]^2 (clamped)."""
        return np.clip(np.asarray(x_d, dtype=float) / self.scale, -1.0, 1.0)


def _auto_scale(traj: Trajectory, duration: float, samples: int = 4001) -> np.ndarray:
    """Per-dimension divisor max(1, sup |x_d|), estimated on a dense grid."""
    ts = np.linspace(0.0, duration, samples)
    vals = np.array([traj._sample(t)[:2] for t in ts])
    return np.maximum(1.0, np.abs(vals).max(axis=0))


@dataclass
class Sinusoid(Trajectory):
    """x_d1 = sin t, x_d2 = cos t; already inside the unit box."""

    duration: float | None = None
    scale: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.scale is None:
            self.scale = np.ones(2)
        self.scale = np.asarray(self.scale, dtype=float)

    def _sample(self, t: float) -> tuple[float, float, float]:
        return math.sin(t), math.cos(t), -math.sin(t)


@dataclass
class GrowingSinusoid(Trajectory):
    """x_d1 = (20 + t) sin(t) / 120 with analytic derivatives."""

    duration: float = 100.0
    scale: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if self.scale is None:
            self.scale = _auto_scale(self, self.duration)
        self.scale = np.asarray(self.scale, dtype=float)

    def _sample(self, t: float) -> tuple[float, float, float]:
        s, c = math.sin(t), math.cos(t)
        x_d1 = (20.0 + t) * s / 120.0
        x_d2 = ((20.0 + t) * c + s) / 120.0
        x_d2_dot = (2.0 * c - (20.0 + t) * s) / 120.0
        return x_d1, x_d2, x_d2_dot


@dataclass
class RandomSpline(Trajectory):
    """Uniform clamped cubic B-spline with random control points in [-1, 1].

    C^2 smooth with analytic derivatives. The curve lives inside the convex
    hull of its control points, so it never leaves [-1, 1]; the first two
    and last two control points coincide (first pair at zero), so the
    reference starts at rest at the origin, near the plant's initial state,
    and ends at rest. The same seed reproduces the same trajectory bit for
    bit.
    """

    seed: int
    knots: int = 20
    duration: float = 100.0
    scale: np.ndarray = field(default=None)  # type: ignore[assignment]

    _DEGREE = 3

    def __post_init__(self):
        if self.knots < 6:
            raise ValueError("need at least 6 control points")
        if self.duration <= 0:
            raise ValueError("duration must be positive")
        rng = np.random.default_rng(self.seed)
        ctrl = rng.uniform(-1.0, 1.0, self.knots)
        ctrl[0] = ctrl[1] = 0.0
        ctrl[-1] = ctrl[-2]
        deg = self._DEGREE
        interior = np.linspace(0.0, self.duration, self.knots - deg + 1)
        knot_vector = np.concatenate(
            [np.zeros(deg), interior, np.full(deg, self.duration)]
        )
        self._spline = BSpline(knot_vector, ctrl, deg)
        self._d1 = self._spline.derivative(1)
        self._d2 = self._spline.derivative(2)
        if self.scale is None:
            self.scale = _auto_scale(self, self.duration)
        self.scale = np.asarray(self.scale, dtype=float)

    def _sample(self, t: float) -> tuple[float, float, float]:
        return float(self._spline(t)), float(self._d1(t)), float(self._d2(t))
