import math
import typing
from dataclasses import dataclass, field

import numpy as np

from cityqa.scene import Point3
from cityqa.util.ident import digest_bytes

from .error import InvalidScale, OutsideRaster


class Window(typing.NamedTuple):
    """Horizontal world rectangle covered by a raster (meters)."""

    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def contains(self, x, y) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max

    def expand(self, margin) -> 'Window':
        return self.__class__(self.x_min - margin, self.y_min - margin,
                              self.x_max + margin, self.y_max + margin)

    def clamp(self, bounds: 'Window') -> 'Window':
        return self.__class__(max(self.x_min, bounds.x_min), max(self.y_min, bounds.y_min),
                              min(self.x_max, bounds.x_max), min(self.y_max, bounds.y_max))


def check_scale(meters_per_pixel):
    if not (isinstance(meters_per_pixel, (int, float)) and math.isfinite(meters_per_pixel)
            and meters_per_pixel > 0):
        raise InvalidScale(f'meters_per_pixel must be positive not {meters_per_pixel!r}')

    return float(meters_per_pixel)


def pixel_count(span, meters_per_pixel) -> int:
    """Pixels needed to cover `span` meters (at least one).

    The quotient is rounded to 9 places before taking its ceiling, such
    that spans which are whole multiples of the scale are not inflated
    by floating-point noise.

    """
    return max(1, math.ceil(round(span / meters_per_pixel, 9)))


@dataclass(frozen=True, eq=False)
class Raster:
    """An 8-bit RGB top-view image of a horizontal window of a scene.

    Row 0 is the northern edge; pixel (row height - 1, column 0) lies at
    the south-west corner, the `origin`.

    """
    pixels: np.ndarray
    meters_per_pixel: float
    window: Window
    base_z: float = 0.0
    scene_id: str = ''
    object_id: typing.Optional[int] = None
    centroid_pixels: typing.Mapping[int, typing.Tuple[int, int]] = field(default_factory=dict)

    def __post_init__(self):
        if self.pixels.ndim != 3 or self.pixels.shape[2] != 3 or self.pixels.dtype != np.uint8:
            raise ValueError('pixels must be an (h, w, 3) uint8 array')

        if self.pixels.shape[0] < 1 or self.pixels.shape[1] < 1:
            raise ValueError('raster must have at least one pixel')

        check_scale(self.meters_per_pixel)
        self.pixels.setflags(write=False)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def origin(self) -> Point3:
        return Point3(self.window.x_min, self.window.y_min, self.base_z)

    @property
    def digest(self) -> str:
        header = f'{self.height}x{self.width}:'.encode('ascii')
        return digest_bytes(header + self.pixels.tobytes())

    def world_to_pixel(self, x, y) -> typing.Tuple[int, int]:
        """(row, column) of the pixel covering world position (x, y)."""
        if not self.window.contains(x, y):
            raise OutsideRaster((x, y), self.window)

        return project(x, y, self.window, self.meters_per_pixel, self.height, self.width)

    def pixel_to_world(self, row, col) -> typing.Tuple[float, float]:
        """World position (x, y) of the center of pixel (row, column)."""
        if not (0 <= row < self.height and 0 <= col < self.width):
            raise IndexError(f'pixel ({row}, {col}) outside {self.height}x{self.width} raster')

        scale = self.meters_per_pixel
        return (self.window.x_min + (col + 0.5) * scale,
                self.window.y_max - (row + 0.5) * scale)

    def metadata(self) -> dict:
        """Sidecar record describing the raster."""
        return {
            'scene_id': self.scene_id,
            'object_id': self.object_id,
            'width': self.width,
            'height': self.height,
            'meters_per_pixel': self.meters_per_pixel,
            'origin': list(self.origin),
            'window': list(self.window),
            'centroid_pixels': {str(object_id): list(pixel)
                                for (object_id, pixel) in sorted(self.centroid_pixels.items())},
            'digest': self.digest,
        }


def project(x, y, window, meters_per_pixel, height, width):
    """Scalar or vectorized world-to-pixel projection.

    Positions on the far (east or south) window edge map into the last
    column or row.

    """
    col = np.floor((np.asarray(x) - window.x_min) / meters_per_pixel).astype(np.int64)
    row = np.floor((window.y_max - np.asarray(y)) / meters_per_pixel).astype(np.int64)

    col = np.clip(col, 0, width - 1)
    row = np.clip(row, 0, height - 1)

    if col.ndim == 0:
        return (int(row), int(col))

    return (row, col)
