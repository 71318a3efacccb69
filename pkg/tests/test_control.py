import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rtplab.control import (
    BacksteppingGains,
    FrozenLearner,
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
from rtplab.rbf import RbfNetwork
from rtplab.smrls import PartitionGrid, SmrlsState

GAINS = BacksteppingGains((2.0, 5.0))


def single_neuron_setup(p0=100.0):
    net = RbfNetwork(centers=[[0.0]], widths=1.0, weights=[0.0])
    memory = SmrlsState.initialize(p0, 1, PartitionGrid((-1.0,), (1.0,), (4,)))
    return net, memory


class TestGains:
    def test_positive_required(self):
        with pytest.raises(ValueError):
            BacksteppingGains((2.0, 0.0))
        with pytest.raises(ValueError):
            BacksteppingGains((-1.0, 5.0))

    def test_order(self):
        assert GAINS.order == 2


class TestTrackingErrors:
    def test_zero_when_on_reference(self):
        e = tracking_errors([0.4, 0.9], [0.4, 0.9], GAINS)
        # e2 = k1*e1 + xd2 - x2 = 0 only when e1 = 0 and x2 = xd2
        assert e == pytest.approx([0.0, 0.0])

    def test_worked_example(self):
        e = tracking_errors([0.5, 0.1], [0.6, 0.3], GAINS)
        assert e == pytest.approx([0.1, 0.4])

    def test_velocity_only_error(self):
        e = tracking_errors([0.0, 0.0], [0.0, 1.0], GAINS)
        assert e == pytest.approx([0.0, 1.0])

    def test_higher_order_rejected(self):
        with pytest.raises(ValueError):
            tracking_errors([0.0, 0.0], [0.0, 0.0], BacksteppingGains((1.0, 1.0, 1.0)))


class TestControlOutput:
    def test_zero_errors_zero_weights(self):
        assert control_output([0.0, 0.0], np.zeros(3), np.zeros(3), GAINS) == 0.0

    def test_feedback_only(self):
        assert control_output([0.1, 0.2], None, None, GAINS) == pytest.approx(1.1)

    def test_with_network_term(self):
        net = RbfNetwork(centers=[[0.0]], widths=1.0, weights=[0.5])
        phi = net.regressor([0.0])
        assert control_output([0.1, 0.2], phi, net.weights, GAINS) == pytest.approx(1.6)

    @settings(max_examples=50)
    @given(st.floats(-5, 5), st.floats(-5, 5))
    def test_affine_in_weights(self, w0, w1):
        phi = np.array([0.4, 0.7])
        weights = np.array([w0, w1])
        e = [0.13, -0.4]
        base = control_output(e, phi, np.zeros(2), GAINS)
        assert control_output(e, phi, weights, GAINS) - base == pytest.approx(
            float(weights @ phi), abs=1e-12
        )


class TestSgdUpdate:
    def test_zero_error_is_noop(self):
        w = np.array([1.0, -2.0])
        assert np.array_equal(sgd_update(w, 0.1, np.array([0.5, 0.5]), 0.0, 0.005), w)

    def test_scalar_product(self):
        w = sgd_update(np.zeros(1), 0.1, np.ones(1), 0.2, 0.005)
        assert w[0] == pytest.approx(1e-4)

    def test_reflection(self):
        w0 = np.array([0.3, -0.7])
        phi = np.array([0.9, 0.1])
        up = sgd_update(w0, 0.1, phi, 0.4, 0.005)
        down = sgd_update(w0, 0.1, phi, -0.4, 0.005)
        assert np.allclose(up - w0, -(down - w0))

    def test_requires_positive_dt(self):
        with pytest.raises(ValueError):
            sgd_update(np.zeros(1), 0.1, np.ones(1), 0.1, 0.0)

    def test_positive_rate_required(self):
        with pytest.raises(ValueError):
            SgdLearner(gamma=0.0)


class TestEta:
    def test_starts_at_zero(self):
        assert eta(0.0, 5.0, 2.0) == 0.0

    def test_mid_ramp(self):
        assert eta(1.0, 5.0, 2.0) == pytest.approx(2.5)

    def test_saturated(self):
        assert eta(10.0, 5.0, 2.0) == 5.0

    def test_continuous_at_knee(self):
        assert eta(2.0, 5.0, 2.0) == pytest.approx(5.0)
        assert eta(2.0 - 1e-12, 5.0, 2.0) == pytest.approx(5.0, abs=1e-9)

    @settings(max_examples=100)
    @given(st.floats(min_value=0.0, max_value=100.0), st.floats(min_value=0.0, max_value=100.0))
    def test_monotone_and_bounded(self, t1, t2):
        lo, hi = sorted((t1, t2))
        assert eta(lo, 5.0, 2.0) <= eta(hi, 5.0, 2.0) <= 5.0


class TestRtplUpdate:
    def test_reduces_to_scalar_memory_example(self):
        net, memory = single_neuron_setup()
        learner = RtplLearner(eta0=5.0, t0_ramp=2.0, memory=memory)
        # past the ramp: eta = 5, error 0.4 -> stored target 2.0
        rtpl_update(learner, net, [0.0], e_n=0.4, t=10.0)
        assert memory.weights[0] == pytest.approx(1.980198, abs=1e-6)
        assert net.weights[0] == pytest.approx(memory.weights[0])

    def test_initial_instant_is_inert(self):
        net, memory = single_neuron_setup()
        learner = RtplLearner(eta0=5.0, t0_ramp=2.0, memory=memory)
        rtpl_update(learner, net, [0.0], e_n=0.7, t=0.0)
        assert net.weights[0] == 0.0
        assert memory.n_occupied == 1

    def test_self_consistent_target_keeps_weights(self):
        net, memory = single_neuron_setup()
        learner = RtplLearner(eta0=5.0, t0_ramp=2.0, memory=memory)
        rtpl_update(learner, net, [0.0], e_n=0.0, t=50.0)
        assert net.weights[0] == 0.0

    def test_learner_validation(self):
        _, memory = single_neuron_setup()
        with pytest.raises(ValueError):
            RtplLearner(eta0=0.0, t0_ramp=2.0, memory=memory)
        with pytest.raises(ValueError):
            RtplLearner(eta0=5.0, t0_ramp=-1.0, memory=memory)


class TestKnowledgeExtraction:
    def test_constant_history(self):
        times = np.arange(0.0, 10.005, 0.005)
        hist = np.tile([1.0, -2.0], (times.shape[0], 1))
        snap = extract_integral(times, hist, 5.0, 5.0)
        assert snap.weights == pytest.approx([1.0, -2.0])

    def test_linear_ramp_averages_to_midpoint(self):
        times = np.arange(0.0, 10.005, 0.005)
        hist = np.outer(times / 10.0, [4.0])
        snap = extract_integral(times, hist, 0.0, 10.0)
        assert snap.weights[0] == pytest.approx(2.0, rel=1e-9)

    def test_window_outside_history(self):
        times = np.arange(0.0, 1.005, 0.005)
        hist = np.zeros((times.shape[0], 1))
        with pytest.raises(ValueError):
            extract_integral(times, hist, 0.5, 1.0)

    def test_final_extraction_is_value_copy(self):
        net, memory = single_neuron_setup()
        learner = RtplLearner(eta0=5.0, t0_ramp=2.0, memory=memory)
        rtpl_update(learner, net, [0.0], e_n=0.4, t=10.0)
        snap = extract_final(memory, duration=10.0)
        frozen_value = snap.weights[0]
        rtpl_update(learner, net, [0.1], e_n=-0.9, t=11.0)
        assert snap.weights[0] == frozen_value
        assert snap.method == "rtpl"

    def test_fresh_memory_extracts_zero(self):
        _, memory = single_neuron_setup()
        assert np.all(extract_final(memory).weights == 0.0)


class TestEquivalentGain:
    def test_fresh_scalar_memory(self):
        net, memory = single_neuron_setup(p0=100.0)
        k_e = equivalent_gain(memory, net, [0.0], t=10.0, eta0=5.0, t0_ramp=2.0)
        assert k_e == pytest.approx(500.0)

    def test_zero_before_ramp(self):
        net, memory = single_neuron_setup()
        assert equivalent_gain(memory, net, [0.0], 0.0, 5.0, 2.0) == 0.0

    def test_vanishes_far_from_centers(self):
        net, memory = single_neuron_setup()
        k_e = equivalent_gain(memory, net, [50.0], 10.0, 5.0, 2.0)
        assert k_e < 1e-100


class TestFrozen:
    def test_weights_copied_to_array(self):
        frozen = FrozenLearner(weights=[1.0, 2.0])
        assert isinstance(frozen.weights, np.ndarray)
