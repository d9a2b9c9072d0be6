"""Aperture geometry and equivalent-degrees-of-freedom (EDoF) counting.

A linear fluid antenna places N candidate ports uniformly on an aperture of
W wavelengths; the number of effective independent branches it supports is
``edof_1d(W) = 2*ceil(W) + 1``, independent of N.  Planar apertures multiply
the per-axis counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: Apertures within this distance of an integer are snapped to it before the
#: ceiling is applied, so W=3 stored as 2.9999999999999996 still gives K*=7.
INTEGER_SNAP_TOL = 1e-9


def edof_1d(aperture: float) -> int:
    """Equivalent degrees of freedom of a linear aperture, 2*ceil(W)+1."""
    if not math.isfinite(aperture) or aperture <= 0.0:
        raise ValueError(f"aperture must be finite and > 0, got {aperture!r}")
    nearest = round(aperture)
    if nearest >= 1 and abs(aperture - nearest) <= INTEGER_SNAP_TOL:
        c = int(nearest)
    else:
        c = math.ceil(aperture)
    return 2 * c + 1


def edof_2d(aperture_x: float, aperture_y: float) -> int:
    """EDoF of a rectangular planar aperture: product of the per-axis counts."""
    return edof_1d(aperture_x) * edof_1d(aperture_y)


def min_aperture(diversity_order: int) -> float:
    """Smallest normalized aperture whose EDoF reaches ``diversity_order``."""
    if diversity_order < 1:
        raise ValueError(f"diversity order must be >= 1, got {diversity_order!r}")
    return (diversity_order - 1) / 2.0


@dataclass(frozen=True)
class FasGeometry:
    """Linear FAS: ``ports`` candidate positions uniform on [0, aperture]."""

    ports: int
    aperture: float

    def __post_init__(self) -> None:
        if self.ports < 2:
            raise ValueError(f"need at least 2 ports, got {self.ports!r}")
        if not math.isfinite(self.aperture) or self.aperture <= 0.0:
            raise ValueError(f"aperture must be finite and > 0, got {self.aperture!r}")

    @property
    def edof(self) -> int:
        return edof_1d(self.aperture)

    @property
    def port_spacing(self) -> float:
        """Adjacent-port spacing in wavelengths, W/(N-1)."""
        return self.aperture / (self.ports - 1)

    def port_positions(self) -> np.ndarray:
        """Position of port n (0-based) is n * W/(N-1), in wavelengths."""
        return np.arange(self.ports) * self.port_spacing


@dataclass(frozen=True)
class PlanarGeometry:
    """Rectangular planar FAS with a separable port grid."""

    ports_x: int
    ports_y: int
    aperture_x: float
    aperture_y: float

    def __post_init__(self) -> None:
        # reuse the 1D validation for each axis
        FasGeometry(self.ports_x, self.aperture_x)
        FasGeometry(self.ports_y, self.aperture_y)

    @property
    def edof_2d(self) -> int:
        return edof_2d(self.aperture_x, self.aperture_y)

    def axis_geometries(self) -> tuple[FasGeometry, FasGeometry]:
        return (
            FasGeometry(self.ports_x, self.aperture_x),
            FasGeometry(self.ports_y, self.aperture_y),
        )
