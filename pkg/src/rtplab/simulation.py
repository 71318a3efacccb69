"""Fixed-step closed-loop simulation, trace logging and metrics.

One control period: sample the reference, form the backstepping errors,
evaluate the network at the normalized reference, apply the control, then
integrate the plant over the period (RK4, input held) and finally let the
learner absorb the pre-integration error sample. The sample taken at step
k therefore shapes the weights used at step k+1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rtplab.control import (
    BacksteppingGains,
    FrozenLearner,
    Learner,
    PdLearner,
    RtplLearner,
    SgdLearner,
    control_output,
    eta,
    rtpl_update,
    sgd_update,
    tracking_errors,
)
from rtplab.dynamics import Plant, Trajectory, true_feedforward
from rtplab.rbf import RbfNetwork

# Tolerated relative float slack on the gain-matrix eigenvalue cap.
P_BOUND_SLACK = 1e-9


class SimulationDiverged(RuntimeError):
    """Closed loop produced a non-finite state or broke a gain-matrix bound."""


@dataclass(frozen=True)
class SimConfig:
    """Control period, integrator substeps, run duration and initial state."""

    dt: float = 0.005
    substeps: int = 1
    duration: float = 100.0
    x0: tuple[float, float] = (np.pi / 60.0, 0.0)

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        if self.duration <= 0:
            raise ValueError("duration must be positive")
        if self.substeps < 1:
            raise ValueError("substeps must be at least 1")

    @property
    def n_steps(self) -> int:
        return int(round(self.duration / self.dt))


@dataclass
class Trace:
    """Uniform-grid log of one closed-loop run (duration/dt + 1 rows)."""

    dt: float
    t: np.ndarray
    x: np.ndarray          # (K+1, 2)
    xd: np.ndarray         # (K+1, 2) raw reference
    xd_norm: np.ndarray    # (K+1, 2) normalized reference
    e: np.ndarray          # (K+1, 2)
    u: np.ndarray
    w_norm: np.ndarray
    p_true: np.ndarray
    p_hat: np.ndarray
    weights: np.ndarray    # (K+1, N) full weight history
    k_e: np.ndarray | None = None      # selective-memory runs only
    p_lmin: np.ndarray | None = None
    p_lmax: np.ndarray | None = None

    @property
    def p_err(self) -> np.ndarray:
        return self.p_true - self.p_hat


@dataclass(frozen=True)
class Metrics:
    """Run summary; integrated squares use the left-endpoint rule."""

    ise_e1: float
    ise_p_err: float
    max_abs_e1: float

    @classmethod
    def from_trace(cls, trace: Trace) -> "Metrics":
        return cls(
            ise_e1=ise(trace.e[:-1, 0], trace.dt),
            ise_p_err=ise(trace.p_err[:-1], trace.dt),
            max_abs_e1=float(np.abs(trace.e[:, 0]).max()),
        )


def ise(values, dt: float) -> float:
    """Integrated squared signal, left Riemann sum: sum(v^2) * dt."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("cannot integrate an empty series")
    return float(np.sum(values**2) * dt)


def window_ise(times, values, t0: float, t1: float, dt: float) -> float:
    """ISE over samples with t0 <= t < t1 (disjoint windows add exactly)."""
    times = np.asarray(times, dtype=float)
    mask = (times >= t0 - 1e-12) & (times < t1 - 1e-12)
    return ise(np.asarray(values, dtype=float)[mask], dt)


def pe_gramian(phis, dt: float, indices=None) -> tuple[np.ndarray, float]:
    """Excitation Gramian sum(Phi Phi^T) dt over a regressor history.

    Pass ``indices`` to restrict to a neuron subset when diagnosing partial
    excitation. Returns the Gramian and its minimum eigenvalue.
    """
    phis = np.atleast_2d(np.asarray(phis, dtype=float))
    if phis.size == 0:
        raise ValueError("empty regressor history")
    if indices is not None:
        phis = phis[:, np.asarray(indices, dtype=int)]
    gram = phis.T @ phis * dt
    lam_min = float(np.linalg.eigvalsh(gram)[0])
    return gram, lam_min


def integrate_step(
    plant: Plant, x, u: float, dt: float, t: float = 0.0, substeps: int = 1
) -> np.ndarray:
    """Classical RK4 over one control period with the input held constant.

    Raises :class:`SimulationDiverged` when the state stops being finite.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")

    def deriv(state, tau):
        return np.array(
            [state[1], plant.f(state, tau) + plant.g(state, tau) * u]
        )

    x = np.asarray(x, dtype=float)
    h = dt / substeps
    try:
        for i in range(substeps):
            tau = t + i * h
            k1 = deriv(x, tau)
            k2 = deriv(x + 0.5 * h * k1, tau + 0.5 * h)
            k3 = deriv(x + 0.5 * h * k2, tau + 0.5 * h)
            k4 = deriv(x + h * k3, tau + h)
            x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    except (OverflowError, ValueError) as exc:
        raise SimulationDiverged(f"state exploded during integration near t={t}: {exc}")
    if not np.all(np.isfinite(x)):
        raise SimulationDiverged(f"non-finite state after step from t={t}: {x}")
    return x


def run_closed_loop(
    plant: Plant,
    traj: Trajectory,
    net: RbfNetwork,
    learner: Learner,
    gains: BacksteppingGains,
    config: SimConfig,
) -> Trace:
    """Simulate one controller variant along one reference trajectory.

    ``net`` weights are mutated in place by the adapting learners; pass a
    fresh copy per run. Deterministic: identical inputs give identical
    traces.
    """
    if isinstance(learner, FrozenLearner):
        if learner.weights.shape != net.weights.shape:
            raise ValueError("frozen weights do not match the network size")
        net.weights = learner.weights.copy()
    if isinstance(learner, RtplLearner) and learner.memory.size != net.size:
        raise ValueError("memory and network sizes differ")

    n = config.n_steps
    uses_net = not isinstance(learner, PdLearner)
    is_rtpl = isinstance(learner, RtplLearner)

    t_arr = np.arange(n + 1) * config.dt
    x_arr = np.zeros((n + 1, 2))
    xd_arr = np.zeros((n + 1, 2))
    xdn_arr = np.zeros((n + 1, 2))
    e_arr = np.zeros((n + 1, 2))
    u_arr = np.zeros(n + 1)
    wn_arr = np.zeros(n + 1)
    ptrue_arr = np.zeros(n + 1)
    phat_arr = np.zeros(n + 1)
    w_hist = np.zeros((n + 1, net.size))
    ke_arr = np.zeros(n + 1) if is_rtpl else None
    plmin_arr = np.zeros(n + 1) if is_rtpl else None
    plmax_arr = np.zeros(n + 1) if is_rtpl else None

    x = np.array(config.x0, dtype=float)
    p0_cap = learner.memory.p0 * (1.0 + P_BOUND_SLACK) if is_rtpl else None

    for k in range(n + 1):
        t = t_arr[k]
        xd1, xd2, xd2_dot = traj.sample(t)
        xd = np.array([xd1, xd2])
        xd_norm = traj.normalize(xd)
        # memory-based learning lives in normalized coordinates; the other
        # learners evaluate the network at the raw reference
        chi = xd_norm if learner.normalized_input else xd
        e = tracking_errors(x, xd, gains)
        phi = net.regressor(chi)
        u = control_output(e, phi, net.weights if uses_net else None, gains)

        x_arr[k] = x
        xd_arr[k] = xd
        xdn_arr[k] = xd_norm
        e_arr[k] = e
        u_arr[k] = u
        w_hist[k] = net.weights
        wn_arr[k] = np.linalg.norm(net.weights)
        ptrue_arr[k] = true_feedforward(plant, xd1, xd2, xd2_dot, t)
        phat_arr[k] = float(net.weights @ phi) if uses_net else 0.0
        if is_rtpl:
            lam_min, lam_max = learner.memory.p_bounds()
            ke_arr[k] = eta(t, learner.eta0, learner.t0_ramp) * float(
                phi @ learner.memory.gain @ phi
            )
            plmin_arr[k] = lam_min
            plmax_arr[k] = lam_max
            if lam_max > p0_cap or lam_min <= 0.0:
                raise SimulationDiverged(
                    f"gain-matrix bound violated at t={t}: "
                    f"lambda in [{lam_min}, {lam_max}], cap {learner.memory.p0}"
                )

        if k == n:
            break

        x = integrate_step(plant, x, u, config.dt, t, config.substeps)

        if isinstance(learner, SgdLearner):
            net.weights = sgd_update(net.weights, learner.gamma, phi, e[-1], config.dt)
        elif is_rtpl:
            rtpl_update(learner, net, chi, e[-1], t)

    return Trace(
        dt=config.dt,
        t=t_arr,
        x=x_arr,
        xd=xd_arr,
        xd_norm=xdn_arr,
        e=e_arr,
        u=u_arr,
        w_norm=wn_arr,
        p_true=ptrue_arr,
        p_hat=phat_arr,
        weights=w_hist,
        k_e=ke_arr,
        p_lmin=plmin_arr,
        p_lmax=plmax_arr,
    )
