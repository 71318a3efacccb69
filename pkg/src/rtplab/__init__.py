"""Learning-control simulation lab.

Compares three ways of driving the feedforward part of a backstepping
tracking controller for Brunovsky-form plants:

* ``pd``     -- feedback only, no network,
* ``sgdl``   -- RBF network adapted by tracking-error gradient descent,
* ``rtpl``   -- RBF network trained online by selective-memory recursive
  least squares (one synthesized sample kept per input-space partition),
* ``frozen`` -- feedforward from previously learned weights.
"""

from rtplab.rbf import LatticeSpec, RbfNetwork, build_lattice
from rtplab.smrls import PartitionGrid, SmrlsState
from rtplab.control import (
    BacksteppingGains,
    FrozenLearner,
    KnowledgeSnapshot,
    PdLearner,
    RtplLearner,
    SgdLearner,
    control_output,
    equivalent_gain,
    eta,
    extract_final,
    extract_integral,
    rtpl_update,
    sgd_update,
    tracking_errors,
)
from rtplab.dynamics import (
    GrowingSinusoid,
    PendulumParams,
    Plant,
    RandomSpline,
    Sinusoid,
    pendulum_f,
    pendulum_g,
    pendulum_plant,
    perturbation_schedule,
    true_feedforward,
)
from rtplab.simulation import (
    Metrics,
    SimConfig,
    SimulationDiverged,
    Trace,
    integrate_step,
    ise,
    pe_gramian,
    run_closed_loop,
    window_ise,
)

__version__ = "0.1.0"

__all__ = [
    "LatticeSpec",
    "RbfNetwork",
    "build_lattice",
    "PartitionGrid",
    "SmrlsState",
    "BacksteppingGains",
    "PdLearner",
    "SgdLearner",
    "RtplLearner",
    "FrozenLearner",
    "KnowledgeSnapshot",
    "tracking_errors",
    "control_output",
    "sgd_update",
    "eta",
    "rtpl_update",
    "extract_integral",
    "extract_final",
    "equivalent_gain",
    "Plant",
    "PendulumParams",
    "Sinusoid",
    "GrowingSinusoid",
    "RandomSpline",
    "pendulum_f",
    "pendulum_g",
    "pendulum_plant",
    "perturbation_schedule",
    "true_feedforward",
    "SimConfig",
    "Trace",
    "Metrics",
    "SimulationDiverged",
    "integrate_step",
    "run_closed_loop",
    "ise",
    "window_ise",
    "pe_gramian",
    "__version__",
]
