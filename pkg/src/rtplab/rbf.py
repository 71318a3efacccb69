"""Gaussian radial basis function networks on lattice-distributed centers.

The network is linear in its weights: output(chi) = W . Phi(chi), with
Phi_i(chi) = exp(-||chi - c_i||^2 / (2 sigma_i^2)). Centers are laid out
on a rectangular grid covering the operating region, endpoints included.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class LatticeSpec:
    """Per-dimension bounds and neuron counts for a center lattice."""

    lows: tuple[float, ...]
    highs: tuple[float, ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        if not (len(self.lows) == len(self.highs) == len(self.counts)):
            raise ValueError("lows, highs and counts must have equal length")
        for lo, hi in zip(self.lows, self.highs):
            if not lo < hi:
                raise ValueError(f"lattice bounds must satisfy low < high, got [{lo}, {hi}]")
        for c in self.counts:
            if c < 2:
                raise ValueError(f"need at least 2 neurons per dimension, got {c}")

    @property
    def dim(self) -> int:
        return len(self.counts)

    @property
    def total(self) -> int:
        return int(np.prod(self.counts))


@dataclass
class RbfNetwork:
    """Gaussian RBF network: centers (N, q), widths (N,), weights (N,).

    Everything except ``weights`` is fixed after construction; weights are
    mutated in place by the learners (single writer).
    """

    centers: np.ndarray
    widths: np.ndarray
    weights: np.ndarray = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        self.centers = np.atleast_2d(np.asarray(self.centers, dtype=float))
        self.widths = np.asarray(self.widths, dtype=float)
        if self.widths.ndim == 0:
            self.widths = np.full(self.size, float(self.widths))
        if self.weights is None:
            self.weights = np.zeros(self.size)
        self.weights = np.asarray(self.weights, dtype=float)
        if np.any(self.widths <= 0):
            raise ValueError("all receptive-field widths must be positive")
        if self.widths.shape != (self.size,):
            raise ValueError("widths must have one entry per neuron")
        if self.weights.shape != (self.size,):
            raise ValueError("weights must have one entry per neuron")

    @property
    def size(self) -> int:
        """Number of neurons N."""
        return self.centers.shape[0]

    @property
    def input_dim(self) -> int:
        """Input dimension q."""
        return self.centers.shape[1]

    def _check_input(self, chi: np.ndarray) -> np.ndarray:
        chi = np.asarray(chi, dtype=float)
        if chi.shape != (self.input_dim,):
            raise ValueError(
                f"input has shape {chi.shape}, network expects ({self.input_dim},)"
            )
        return chi

    def regressor(self, chi) -> np.ndarray:
        """Gaussian activation vector Phi(chi), each component in (0, 1]."""
        chi = self._check_input(chi)
        d = chi - self.centers
        sq = np.einsum("ij,ij->i", d, d)
        return np.exp(-sq / (2.0 * self.widths**2))

    def evaluate(self, chi) -> float:
        """Network output W . Phi(chi)."""
        return float(self.weights @ self.regressor(chi))

    def active_subset(self, chi, threshold: float) -> np.ndarray:
        """Indices of neurons with activation >= threshold (diagnostic).

        The full regressor is always used for evaluation; this only
        identifies the neurons that matter near ``chi``.
        """
        if not 0.0 < threshold < 1.0:
            raise ValueError("threshold must lie strictly inside (0, 1)")
        return np.flatnonzero(self.regressor(chi) >= threshold)

    def copy(self) -> "RbfNetwork":
        return RbfNetwork(self.centers.copy(), self.widths.copy(), self.weights.copy())


def build_lattice(spec: LatticeSpec, width: float) -> RbfNetwork:
    """Build a network with centers on the Cartesian grid given by ``spec``.

    Grid spacing per dimension is (high - low) / (count - 1), endpoints
    included. All neurons share ``width``; weights start at zero. Centers
    are ordered row-major (first dimension varies slowest).
    """
    if width <= 0:
        raise ValueError("width must be positive")
    axes = [
        np.linspace(lo, hi, c)
        for lo, hi, c in zip(spec.lows, spec.highs, spec.counts)
    ]
    mesh = np.meshgrid(*axes, indexing="ij")
    centers = np.stack([m.ravel() for m in mesh], axis=1)
    return RbfNetwork(centers, np.full(spec.total, float(width)))
