import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rtplab.rbf import LatticeSpec, RbfNetwork, build_lattice


def grid_5x5(width=0.3):
    return build_lattice(
        LatticeSpec(lows=(-1.0, -1.0), highs=(1.0, 1.0), counts=(5, 5)), width
    )


class TestLattice:
    def test_5x5_grid_coordinates(self):
        net = grid_5x5()
        assert net.size == 25
        expected_axis = {-1.0, -0.5, 0.0, 0.5, 1.0}
        assert set(net.centers[:, 0]) == expected_axis
        assert set(net.centers[:, 1]) == expected_axis
        # all 25 distinct grid points present
        pts = {tuple(c) for c in net.centers}
        assert len(pts) == 25
        spacing = np.diff(sorted(set(net.centers[:, 0])))
        assert np.allclose(spacing, 0.5)

    def test_2x2_grid_is_corners(self):
        net = build_lattice(
            LatticeSpec(lows=(0.0, 0.0), highs=(1.0, 1.0), counts=(2, 2)), 0.3
        )
        pts = {tuple(c) for c in net.centers}
        assert pts == {(0.0, 0.0), (0.0, 1.0), (1.0, 0.0), (1.0, 1.0)}

    def test_weights_start_zero_and_widths_uniform(self):
        net = grid_5x5(width=0.7)
        assert np.all(net.weights == 0.0)
        assert np.all(net.widths == 0.7)

    def test_zero_width_rejected(self):
        spec = LatticeSpec(lows=(0.0,), highs=(1.0,), counts=(3,))
        with pytest.raises(ValueError):
            build_lattice(spec, 0.0)
        with pytest.raises(ValueError):
            build_lattice(spec, -0.1)

    def test_single_neuron_dimension_rejected(self):
        with pytest.raises(ValueError):
            LatticeSpec(lows=(0.0,), highs=(1.0,), counts=(1,))

    def test_inverted_bounds_rejected(self):
        with pytest.raises(ValueError):
            LatticeSpec(lows=(1.0,), highs=(0.0,), counts=(3,))


class TestRegressor:
    def test_unit_activation_at_center(self):
        net = grid_5x5()
        phi = net.regressor(net.centers[7])
        assert phi[7] == 1.0

    def test_single_neuron_value(self):
        net = RbfNetwork(centers=[[0.0, 0.0]], widths=0.3)
        phi = net.regressor([0.3, 0.0])
        # exp(-0.09 / (2 * 0.09)) = exp(-1/2)
        assert phi[0] == pytest.approx(0.606531, abs=1e-6)

    def test_far_inputs_vanish(self):
        net = grid_5x5(width=0.3)
        phi = net.regressor([4.0, 4.0])  # > 10 widths from every center
        assert np.all(phi < 1e-21)
        assert np.all(phi > 0.0)

    def test_dimension_mismatch(self):
        net = grid_5x5()
        with pytest.raises(ValueError):
            net.regressor([0.0, 0.0, 0.0])

    def test_translation_invariance(self):
        net = grid_5x5()
        shift = np.array([0.37, -1.2])
        shifted = RbfNetwork(net.centers + shift, net.widths.copy())
        chi = np.array([0.21, -0.4])
        assert np.allclose(net.regressor(chi), shifted.regressor(chi + shift))


class TestEvaluate:
    def test_zero_weights(self):
        net = grid_5x5()
        assert net.evaluate([0.31, -0.7]) == 0.0

    def test_single_neuron_at_center(self):
        net = RbfNetwork(centers=[[0.5, 0.5]], widths=0.3, weights=[2.0])
        assert net.evaluate([0.5, 0.5]) == pytest.approx(2.0)

    def test_known_dot_product(self):
        # place the input so the two activations are exactly 0.5 and 0.25
        sigma = 0.3
        chi = sigma * np.sqrt(2.0 * np.log(2.0))
        c2 = chi + sigma * np.sqrt(2.0 * np.log(4.0))
        net = RbfNetwork(centers=[[0.0], [c2]], widths=sigma, weights=[1.0, 1.0])
        phi = net.regressor([chi])
        assert phi == pytest.approx([0.5, 0.25], abs=1e-12)
        assert net.evaluate([chi]) == pytest.approx(0.75, abs=1e-12)

    def test_linearity_in_weights(self):
        net = grid_5x5()
        rng = np.random.default_rng(3)
        w1, w2 = rng.normal(size=25), rng.normal(size=25)
        chi = [0.1, 0.9]
        net.weights = w1
        v1 = net.evaluate(chi)
        net.weights = w2
        v2 = net.evaluate(chi)
        net.weights = w1 + w2
        assert net.evaluate(chi) == pytest.approx(v1 + v2, rel=1e-12)


class TestActiveSubset:
    def test_isolated_center(self):
        net = grid_5x5(width=0.3)
        assert list(net.active_subset(net.centers[12], 0.99)) == [12]

    def test_tiny_threshold_selects_all(self):
        net = grid_5x5(width=0.3)
        assert len(net.active_subset([0.0, 0.0], 1e-300)) == 25

    def test_origin_with_midrange_threshold(self):
        # nearest off-center neuron sits 0.5 away: activation 0.249 < 0.5
        net = grid_5x5(width=0.3)
        assert list(net.active_subset([0.0, 0.0], 0.5)) == [12]

    @pytest.mark.parametrize("threshold", [0.0, 1.0, -0.5, 1.5])
    def test_threshold_out_of_range(self, threshold):
        net = grid_5x5()
        with pytest.raises(ValueError):
            net.active_subset([0.0, 0.0], threshold)


@settings(max_examples=50)
@given(st.integers(min_value=0, max_value=2**32 - 1))
def test_permuting_neurons_preserves_output(seed):
    rng = np.random.default_rng(seed)
    net = grid_5x5()
    net.weights = rng.normal(size=net.size)
    perm = rng.permutation(net.size)
    permuted = RbfNetwork(net.centers[perm], net.widths[perm], net.weights[perm])
    chi = rng.uniform(-1.5, 1.5, size=2)
    assert permuted.evaluate(chi) == pytest.approx(net.evaluate(chi), rel=1e-12, abs=1e-15)


@settings(max_examples=50)
@given(
    st.floats(min_value=-2.0, max_value=2.0),
    st.floats(min_value=-2.0, max_value=2.0),
)
def test_activations_bounded(x, y):
    net = grid_5x5()
    phi = net.regressor([x, y])
    assert np.all(phi > 0.0)
    assert np.all(phi <= 1.0)
    # saturation only happens (numerically) at the center itself
    dist = np.linalg.norm(net.centers - np.array([x, y]), axis=1)
    assert np.all(dist[phi == 1.0] < 1e-7)
