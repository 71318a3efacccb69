"""Backstepping tracking errors, control output and weight-update laws.

Only second-order plants are supported: the error recursion for higher
orders needs derivatives of the virtual controls that we do not form.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from rtplab.rbf import RbfNetwork
from rtplab.smrls import SmrlsState


@dataclass(frozen=True)
class BacksteppingGains:
    """Control gains k_1 .. k_n, all positive."""

    k: tuple[float, ...]

    def __post_init__(self):
        if len(self.k) < 2:
            raise ValueError("need at least two gains")
        if any(ki <= 0 for ki in self.k):
            raise ValueError("all backstepping gains must be positive")

    @property
    def order(self) -> int:
        return len(self.k)


@dataclass(frozen=True)
class PdLearner:
    """Feedback only; the network term is dropped from the control law."""

    normalized_input = False


@dataclass(frozen=True)
class SgdLearner:
    """Tracking-error gradient descent with diagonal learning-rate matrix.

    ``gamma`` is either a scalar (uniform diagonal) or a vector of positive
    diagonal entries. The network input is the raw reference: this learner
    has no partition memory, so nothing forces its coordinates into the
    unit box, and its receptive fields simply starve when the reference
    leaves the lattice.
    """

    gamma: float | np.ndarray
    normalized_input = False

    def __post_init__(self):
        if np.any(np.asarray(self.gamma) <= 0):
            raise ValueError("learning-rate entries must be positive")


@dataclass
class RtplLearner:
    """Selective-memory least-squares learner with a saturation ramp gain.

    The network input is the normalized reference, the same coordinates the
    partition grid is keyed on; anything else would misalign memory cells
    and receptive fields.
    """

    eta0: float
    t0_ramp: float
    memory: SmrlsState
    normalized_input = True

    def __post_init__(self):
        if self.eta0 <= 0 or self.t0_ramp <= 0:
            raise ValueError("eta0 and t0_ramp must be positive")


@dataclass(frozen=True)
class FrozenLearner:
    """Constant feedforward weights, no adaptation.

    ``normalized_input`` must match the coordinates the weights were
    learned in (True for memory-learner knowledge, False otherwise).
    """

    weights: np.ndarray
    normalized_input: bool = True

    def __post_init__(self):
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))


Learner = PdLearner | SgdLearner | RtplLearner | FrozenLearner


@dataclass(frozen=True)
class KnowledgeSnapshot:
    """Learned feedforward weights plus how they were obtained.

    ``scale`` records the normalization divisors of the coordinates the
    weights were learned in; reuse on another trajectory must evaluate the
    network in that same frame or the weights mean the wrong thing.
    """

    weights: np.ndarray
    method: str
    duration: float
    scale: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "weights", np.array(self.weights, dtype=float))
        if self.scale is not None:
            object.__setattr__(self, "scale", np.array(self.scale, dtype=float))


def tracking_errors(x, x_d, gains: BacksteppingGains) -> np.ndarray:
    """Backstepping error coordinates for a second-order system.

    e1 = x_d1 - x1; the virtual control alpha1 = k1 e1 + x_d2 gives
    e2 = alpha1 - x2.
    """
    if gains.order != 2:
        raise ValueError("only second-order error recursion is implemented")
    x = np.asarray(x, dtype=float)
    x_d = np.asarray(x_d, dtype=float)
    if x.shape != (2,) or x_d.shape != (2,):
        raise ValueError("state and reference must be length-2 vectors")
    e1 = x_d[0] - x[0]
    alpha1 = gains.k[0] * e1 + x_d[1]
    e2 = alpha1 - x[1]
    return np.array([e1, e2])


def control_output(e, phi, weights, gains: BacksteppingGains) -> float:
    """u = k_n e_n + e_{n-1} + W.Phi; pass ``weights=None`` to drop the net."""
    e = np.asarray(e, dtype=float)
    u = gains.k[-1] * e[-1] + e[-2]
    if weights is not None:
        u += float(np.asarray(weights) @ np.asarray(phi))
    return float(u)


def sgd_update(weights, gamma, phi, e_n: float, dt: float) -> np.ndarray:
    """One explicit-Euler step of W' = Gamma Phi e_n."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    return np.asarray(weights, dtype=float) + np.asarray(gamma) * np.asarray(phi) * (e_n * dt)


def eta(t: float, eta0: float, t0_ramp: float) -> float:
    """Saturation ramp: grows linearly from 0 to eta0 over [0, t0_ramp].

    Keeps the initially huge gain matrix from slamming bad transient data
    into the memory.
    """
    if t <= t0_ramp:
        return eta0 * t / t0_ramp
    return eta0


def rtpl_update(
    learner: RtplLearner, net: RbfNetwork, x_d_normalized, e_n: float, t: float
) -> SmrlsState:
    """Feed one closed-loop sample into the selective memory.

    The target for the memorized sample is the current network output plus
    the gained tracking error, F = eta(t) e_n + W.Phi: the best available
    estimate of what the feedforward should have produced. Network weights
    are synchronized to the memory afterwards.
    """
    phi = net.regressor(x_d_normalized)
    target = eta(t, learner.eta0, learner.t0_ramp) * e_n + float(net.weights @ phi)
    learner.memory.step(phi, target, x_d_normalized)
    net.weights = learner.memory.weights.copy()
    return learner.memory


def extract_integral(
    times, weight_history, t0: float, window: float, scale=None
) -> KnowledgeSnapshot:
    """Time-averaged weights over [t0, t0 + window] (trapezoidal rule).

    The averaging window smooths out the oscillation that gradient-descent
    weights keep exhibiting along a repetitive reference.
    """
    times = np.asarray(times, dtype=float)
    weight_history = np.asarray(weight_history, dtype=float)
    t1 = t0 + window
    tol = 1e-9
    if window <= 0:
        raise ValueError("window must be positive")
    if t0 < times[0] - tol or t1 > times[-1] + tol:
        raise ValueError(
            f"window [{t0}, {t1}] outside recorded history [{times[0]}, {times[-1]}]"
        )
    mask = (times >= t0 - tol) & (times <= t1 + tol)
    t_sel = times[mask]
    w_sel = weight_history[mask]
    avg = np.trapezoid(w_sel, t_sel, axis=0) / (t_sel[-1] - t_sel[0])
    return KnowledgeSnapshot(
        weights=avg, method="sgdl", duration=float(times[-1]), scale=scale
    )


def extract_final(memory: SmrlsState, duration: float = 0.0, scale=None) -> KnowledgeSnapshot:
    """Current memory weights, value-copied."""
    return KnowledgeSnapshot(
        weights=memory.weights.copy(), method="rtpl", duration=float(duration),
        scale=scale,
    )


def equivalent_gain(
    memory: SmrlsState,
    net: RbfNetwork,
    x_d_normalized,
    t: float,
    eta0: float,
    t0_ramp: float,
) -> float:
    """Sensitivity of the network update to the tracking error.

    K_E = eta(t) Phi^T P Phi, using the full regressor and gain matrix:
    far-away neurons contribute negligibly, so restricting to the active
    subset would change almost nothing.
    """
    phi = net.regressor(x_d_normalized)
    return float(eta(t, eta0, t0_ramp) * (phi @ memory.gain @ phi))
