"""Polar search grids over the closed complex unit disc.

The grid is the lattice ``rho = k*delta_rho`` crossed with
``phi = k*delta_phi``; halving either step keeps every existing point, so a
refined search can only improve on a coarse one.  Traversal order is fixed
(radius-major, then angle) and every consumer breaks ties by the lowest
traversal index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["GridSpec"]

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class GridSpec:
    """Step sizes and switches for the unit-disc generator search.

    delta_rho / delta_phi: lattice steps in radius and angle (radians).
    include_boundary: keep the ``rho = 1`` circle (on by default).
    restrict_real: search only ``z in [-1, 1]`` (angles 0 and pi).
    """

    delta_rho: float
    delta_phi: float
    include_boundary: bool = True
    restrict_real: bool = False

    def __post_init__(self):
        if not 0.0 < self.delta_rho <= 1.0:
            raise ValueError("delta_rho must lie in (0, 1]")
        if not 0.0 < self.delta_phi <= TWO_PI:
            raise ValueError("delta_phi must lie in (0, 2*pi]")

    @classmethod
    def default_l2(cls, restrict_real: bool = False) -> "GridSpec":
        return cls(1.0 / 512.0, TWO_PI / 2048.0, restrict_real=restrict_real)

    @classmethod
    def default_l1(cls, restrict_real: bool = False) -> "GridSpec":
        # coarser than the l2 default: each point costs an inner solve
        return cls(1.0 / 256.0, TWO_PI / 1024.0, restrict_real=restrict_real)

    def rho_values(self) -> np.ndarray:
        ks = np.arange(int(np.floor(1.0 / self.delta_rho + 1e-9)) + 1)
        rho = ks * self.delta_rho
        rho = rho[rho <= 1.0 + 1e-12]
        if self.include_boundary:
            if rho[-1] < 1.0 - 1e-12:
                rho = np.append(rho, 1.0)
        else:
            rho = rho[rho < 1.0 - 1e-12]
        return rho

    def phi_values(self) -> np.ndarray:
        if self.restrict_real:
            return np.array([0.0, np.pi])
        n = int(np.ceil(TWO_PI / self.delta_phi - 1e-9))
        return np.arange(n) * self.delta_phi

    def iter_rows(self, skip_origin: bool = False):
        """Yield ``(row_start_index, zs)`` per radius, in traversal order.

        The origin contributes the single point ``z = 0`` (all angles
        coincide there); ``skip_origin`` drops it entirely.
        """
        if self.restrict_real:
            ring = np.array([1.0 + 0.0j, -1.0 + 0.0j])  # exactly real points
        else:
            ring = np.exp(1j * self.phi_values())
        start = 0
        for rho in self.rho_values():
            if rho == 0.0:
                if not skip_origin:
                    yield start, np.zeros(1, dtype=np.complex128)
                    start += 1
                continue
            yield start, rho * ring
            start += ring.size

    def n_points(self, skip_origin: bool = False) -> int:
        rho = self.rho_values()
        n_phi = self.phi_values().size
        n = int(np.count_nonzero(rho)) * n_phi
        if 0.0 in rho and not skip_origin:
            n += 1
        return n
