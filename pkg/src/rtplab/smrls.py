"""Selective-memory recursive least squares over a partitioned input space.

The input space is evenly divided into cells; each cell remembers the most
recent (regressor, target) pair observed inside it. A new sample replaces
its cell's stored pair in both the inverse gain matrix and the weights:

    P^-1  <-  P^-1 + Phi Phi^T - Phi_a Phi_a^T
    W     <-  W + P_new Phi (F - W.Phi) - P_new Phi_a (F_a - W.Phi_a)

where (Phi_a, F_a) is the displaced record (zeros while the cell is
empty). The weights therefore always equal the exact regularized
least-squares solution over the current memory content, which is what
``batch_ls_oracle`` recomputes from scratch for verification.

Because samples are replaced rather than accumulated, the spectrum of P
stays inside (0, p0]: the inverse gain is the initial I/p0 plus one outer
product per occupied cell, never more.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

# Below this, the rank-one downdate of P is numerically meaningless and P
# is rebuilt by dense inversion of the (always well-posed) inverse gain.
DOWNDATE_GUARD = 1e-12

# Dense rebuild cadence; bounds drift of the rank-one-maintained P in long runs.
REFRESH_EVERY = 1000


@dataclass(frozen=True)
class PartitionGrid:
    """Uniform cell grid over a box; out-of-range points clamp to edge cells."""

    lows: tuple[float, ...]
    highs: tuple[float, ...]
    counts: tuple[int, ...]

    def __post_init__(self):
        if not (len(self.lows) == len(self.highs) == len(self.counts)):
            raise ValueError("lows, highs and counts must have equal length")
        for lo, hi in zip(self.lows, self.highs):
            if not lo < hi:
                raise ValueError(f"grid bounds must satisfy low < high, got [{lo}, {hi}]")
        for c in self.counts:
            if c < 1:
                raise ValueError("need at least one cell per dimension")

    @property
    def n_cells(self) -> int:
        return int(np.prod(self.counts))

    def locate(self, chi) -> int:
        """Flat (row-major) index of the cell containing ``chi``."""
        chi = np.asarray(chi, dtype=float)
        lows = np.asarray(self.lows)
        highs = np.asarray(self.highs)
        counts = np.asarray(self.counts)
        # multiply before dividing so exact cell boundaries land exactly
        cells = np.floor((chi - lows) * counts / (highs - lows)).astype(int)
        cells = np.clip(cells, 0, counts - 1)
        return int(np.ravel_multi_index(tuple(cells), tuple(self.counts)))

    def cell_of(self, chi) -> tuple[int, ...]:
        """Per-dimension cell coordinates (diagnostic counterpart of locate)."""
        idx = self.locate(chi)
        return tuple(int(v) for v in np.unravel_index(idx, tuple(self.counts)))


@dataclass
class SmrlsState:
    """Weights, gain matrix pair and per-cell memory records.

    Mutated in place by :meth:`step`; single writer per instance. The
    inverse gain is accumulated with Neumaier compensation: thousands of
    add-then-subtract record swaps would otherwise leave enough rounding
    residue to push the reported lambda_max(P) past p0.
    """

    weights: np.ndarray          # (N,)
    gain: np.ndarray             # P, (N, N) symmetric positive definite
    gain_inv: np.ndarray         # P^-1, maintained additively
    p0: float
    grid: PartitionGrid
    rec_phi: np.ndarray          # (n_cells, N) stored regressors, zero if empty
    rec_target: np.ndarray       # (n_cells,) stored targets
    rec_occupied: np.ndarray     # (n_cells,) bool
    steps: int = 0
    refresh_every: int = field(default=REFRESH_EVERY, repr=False)
    _inv_comp: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        if self._inv_comp is None:
            self._inv_comp = np.zeros_like(self.gain_inv)

    @classmethod
    def initialize(cls, p0: float, n_weights: int, grid: PartitionGrid) -> "SmrlsState":
        """Fresh state: P = p0 I, zero weights, all cells empty."""
        if p0 <= 0:
            raise ValueError("p0 must be positive")
        n = int(n_weights)
        return cls(
            weights=np.zeros(n),
            gain=np.eye(n) * p0,
            gain_inv=np.eye(n) / p0,
            p0=float(p0),
            grid=grid,
            rec_phi=np.zeros((grid.n_cells, n)),
            rec_target=np.zeros(grid.n_cells),
            rec_occupied=np.zeros(grid.n_cells, dtype=bool),
        )

    def _accumulate_inv(self, delta: np.ndarray) -> None:
        total = self.gain_inv + delta
        big = np.abs(self.gain_inv) >= np.abs(delta)
        self._inv_comp += np.where(
            big, (self.gain_inv - total) + delta, (delta - total) + self.gain_inv
        )
        self.gain_inv = total

    @property
    def inv_exact(self) -> np.ndarray:
        """Inverse gain with the compensation folded back in."""
        return self.gain_inv + self._inv_comp

    @property
    def size(self) -> int:
        return self.weights.shape[0]

    @property
    def n_occupied(self) -> int:
        return int(np.count_nonzero(self.rec_occupied))

    def step(self, phi, target: float, chi) -> "SmrlsState":
        """Absorb one sample, replacing the record of the cell containing chi.

        Raises if the cell-replacement downdate leaves the gain matrix
        numerically indefinite even after the dense rebuild.
        """
        phi = np.asarray(phi, dtype=float)
        if phi.shape != (self.size,):
            raise ValueError(f"regressor has shape {phi.shape}, expected ({self.size},)")
        cell = self.grid.locate(chi)
        phi_old = self.rec_phi[cell].copy()
        target_old = float(self.rec_target[cell])

        self._accumulate_inv(np.outer(phi, phi) - np.outer(phi_old, phi_old))

        # rank-one update (new sample) then downdate (displaced record) on P
        p = self.gain
        p_phi = p @ phi
        p = p - np.outer(p_phi, p_phi) / (1.0 + phi @ p_phi)
        p_old = p @ phi_old
        denom = 1.0 - phi_old @ p_old
        self.steps += 1
        rebuild = denom <= DOWNDATE_GUARD or (
            self.refresh_every and self.steps % self.refresh_every == 0
        )
        if rebuild:
            p = np.linalg.inv(self.inv_exact)
        else:
            p = p + np.outer(p_old, p_old) / denom
        self.gain = 0.5 * (p + p.T)

        w = self.weights
        correction = self.gain @ phi_old * (target_old - w @ phi_old)
        self.weights = w + self.gain @ phi * (target - w @ phi) - correction

        self.rec_phi[cell] = phi
        self.rec_target[cell] = target
        self.rec_occupied[cell] = True
        return self

    def batch_ls_oracle(self) -> np.ndarray:
        """Regularized least squares recomputed densely from the records.

        Independent of the recursion: solves
        (I/p0 + sum Phi_j Phi_j^T) W = sum Phi_j F_j over occupied cells.
        """
        a = np.eye(self.size) / self.p0
        b = np.zeros(self.size)
        occupied = np.flatnonzero(self.rec_occupied)
        if occupied.size:
            phis = self.rec_phi[occupied]
            a = a + phis.T @ phis
            b = phis.T @ self.rec_target[occupied]
        return np.linalg.solve(a, b)

    def p_bounds(self) -> tuple[float, float]:
        """(lambda_min, lambda_max) of the gain matrix P.

        Computed as reciprocal eigenvalues of the inverse gain, which is
        accumulated additively and therefore carries no inversion drift;
        this keeps the p0 cap tight even when P is badly conditioned.
        """
        eigs_inv = np.linalg.eigvalsh(self.inv_exact)
        return float(1.0 / eigs_inv[-1]), float(1.0 / eigs_inv[0])

    def copy(self) -> "SmrlsState":
        return SmrlsState(
            weights=self.weights.copy(),
            gain=self.gain.copy(),
            gain_inv=self.gain_inv.copy(),
            p0=self.p0,
            grid=self.grid,
            rec_phi=self.rec_phi.copy(),
            rec_target=self.rec_target.copy(),
            rec_occupied=self.rec_occupied.copy(),
            steps=self.steps,
            refresh_every=self.refresh_every,
            _inv_comp=self._inv_comp.copy(),
        )
