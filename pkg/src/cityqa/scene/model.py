"""Domain model of instance-segmented city scenes.

Coordinates are meters in a local metric frame: x east, y north, z up.

"""
import collections
import math
import typing
from dataclasses import dataclass, field

import numpy as np

from .error import DuplicateObject, InvalidObject, UnknownObject


class Point3(typing.NamedTuple):

    x: float
    y: float
    z: float

    @classmethod
    def of(cls, x, y, z):
        point = cls(float(x), float(y), float(z))

        if not all(math.isfinite(value) for value in point):
            raise InvalidObject(f'non-finite coordinate: {point}')

        return point

    def __sub__(self, other):
        return (self.x - other.x, self.y - other.y, self.z - other.z)


class BBox(typing.NamedTuple):
    """Axis-aligned bounding box."""

    min: Point3
    max: Point3

    @classmethod
    def of_points(cls, points: np.ndarray):
        return cls(Point3(*(float(value) for value in points.min(axis=0))),
                   Point3(*(float(value) for value in points.max(axis=0))))

    @classmethod
    def union(cls, boxes: typing.Iterable['BBox']):
        boxes = list(boxes)
        return cls(
            Point3(*(min(box.min[axis] for box in boxes) for axis in range(3))),
            Point3(*(max(box.max[axis] for box in boxes) for axis in range(3))),
        )

    @property
    def footprint(self):
        """(x_min, y_min, x_max, y_max)"""
        return (self.min.x, self.min.y, self.max.x, self.max.y)

    @property
    def size(self):
        return (self.max.x - self.min.x, self.max.y - self.min.y, self.max.z - self.min.z)

    def encloses(self, other: 'BBox') -> bool:
        return (all(self.min[axis] <= other.min[axis] for axis in range(3)) and
                all(other.max[axis] <= self.max[axis] for axis in range(3)))

    def footprint_strictly_contains(self, other: 'BBox') -> bool:
        return (self.min.x < other.min.x and other.max.x < self.max.x and
                self.min.y < other.min.y and other.max.y < self.max.y)


def object_centroid(obj: 'ObjectInstance') -> Point3:
    """Componentwise mean of the object's points."""
    return Point3(*(float(value) for value in obj.points.mean(axis=0)))


@dataclass(frozen=True, eq=False)
class ObjectInstance:
    """One segmented urban object.

    `points` is an (n, 3) array of float64 (read-only); `colors`, when
    given, an (n, 3) array of uint8. Centroid (mean of points) and bbox
    are computed upon construction.

    """
    id: int
    category: str
    points: np.ndarray
    landmark: typing.Optional[str] = None
    colors: typing.Optional[np.ndarray] = None

    centroid: Point3 = field(init=False, repr=False)
    bbox: BBox = field(init=False, repr=False)

    def __post_init__(self):
        if isinstance(self.id, bool) or not isinstance(self.id, (int, np.integer)) or self.id < 0:
            raise InvalidObject(f'object id must be a non-negative integer not {self.id!r}')

        if not isinstance(self.category, str) or not self.category.strip():
            raise InvalidObject(f'object {self.id}: category must be non-empty text')

        if self.landmark is not None and (not isinstance(self.landmark, str) or
                                          not self.landmark.strip()):
            raise InvalidObject(f'object {self.id}: landmark must be non-empty text or None')

        points = np.array(self.points, dtype=np.float64)

        if points.ndim != 2 or points.shape[1] != 3:
            raise InvalidObject(f'object {self.id}: points must have shape (n, 3) '
                                f'not {points.shape}')

        if len(points) == 0:
            raise InvalidObject(f'object {self.id}: empty object (no points)')

        if not np.isfinite(points).all():
            raise InvalidObject(f'object {self.id}: non-finite coordinate')

        points.setflags(write=False)

        if self.colors is not None:
            colors = np.asarray(self.colors)

            if colors.shape != points.shape:
                raise InvalidObject(f'object {self.id}: colors must match points shape')

            if (colors < 0).any() or (colors > 255).any():
                raise InvalidObject(f'object {self.id}: colors must lie in [0, 255]')

            colors = colors.astype(np.uint8)
            colors.setflags(write=False)
            object.__setattr__(self, 'colors', colors)

        object.__setattr__(self, 'id', int(self.id))
        object.__setattr__(self, 'category', self.category.strip())
        object.__setattr__(self, 'landmark', self.landmark and self.landmark.strip())
        object.__setattr__(self, 'points', points)
        object.__setattr__(self, 'centroid', object_centroid(self))
        object.__setattr__(self, 'bbox', BBox.of_points(points))

    @property
    def has_colors(self) -> bool:
        return self.colors is not None

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class CityScene:
    """A city scene: objects (ordered by id) with unique ids."""

    scene_id: str
    objects: typing.Tuple[ObjectInstance, ...]

    extent: typing.Optional[BBox] = field(init=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.scene_id, str) or not self.scene_id.strip():
            raise InvalidObject('scene id must be non-empty text')

        objects = tuple(sorted(self.objects, key=lambda obj: obj.id))

        for (previous, current) in zip(objects, objects[1:]):
            if previous.id == current.id:
                raise DuplicateObject(current.id)

        object.__setattr__(self, 'objects', objects)
        object.__setattr__(self, '_index_', {obj.id: obj for obj in objects})
        object.__setattr__(self, 'extent',
                           BBox.union(obj.bbox for obj in objects) if objects else None)

    def get(self, object_id) -> ObjectInstance:
        try:
            return self._index_[object_id]
        except (KeyError, TypeError):
            raise UnknownObject(object_id, self.scene_id) from None

    def __contains__(self, object_id):
        return object_id in self._index_

    def __iter__(self):
        return iter(self.objects)

    def __len__(self):
        return len(self.objects)

    @property
    def ids(self) -> typing.Tuple[int, ...]:
        return tuple(self._index_)

    @property
    def landmarked(self) -> typing.Tuple[ObjectInstance, ...]:
        return tuple(obj for obj in self.objects if obj.landmark)


class SceneSummary(typing.NamedTuple):

    scene_id: str
    object_count: int
    categories: typing.Dict[str, int]
    landmark_count: int

    def to_dict(self):
        return self._asdict()


def scene_summary(scene: CityScene) -> SceneSummary:
    histogram = collections.Counter(obj.category for obj in scene)
    return SceneSummary(
        scene.scene_id,
        len(scene),
        dict(sorted(histogram.items())),
        len(scene.landmarked),
    )
