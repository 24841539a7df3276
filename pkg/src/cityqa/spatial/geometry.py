import math
import typing

import numpy as np

from cityqa.util.enum import StrEnum


class DistanceMode(StrEnum):

    three_d = '3d'
    horizontal = 'horizontal'


def pairwise_distance(a, b, mode=DistanceMode.three_d) -> float:
    """Euclidean distance between points `a` and `b`, either in 3D or
    over the horizontal (x, y) plane.

    """
    mode = DistanceMode.parse(mode)

    if mode is DistanceMode.horizontal:
        return math.hypot(a[0] - b[0], a[1] - b[1])

    return math.dist(a[:3], b[:3])


class RelOffset(typing.NamedTuple):
    """Δp: neighbor position minus target position (meters)."""

    dx: float
    dy: float
    dz: float

    def __neg__(self):
        return self.__class__(-self.dx, -self.dy, -self.dz)

    def as_array(self) -> np.ndarray:
        return np.array(self, dtype=np.float64)


def relative_position(target, neighbor) -> RelOffset:
    """Offset of `neighbor`'s centroid from `target`'s centroid."""
    (tx, ty, tz) = target.centroid
    (nx, ny, nz) = neighbor.centroid
    return RelOffset(nx - tx, ny - ty, nz - tz)
