"""K-nearest-neighbor search over object centroids.

`knn_neighbors` is the brute-force reference; `CentroidIndex` answers
the same queries through a KD-tree, with identical results (including
the ascending-id tie rule).

"""
import math
import typing

import numpy as np
from scipy.spatial import cKDTree

from .error import InvalidCount


def _check_k(k):
    if isinstance(k, bool) or not isinstance(k, int) or k < 0:
        raise InvalidCount(f'k must be a non-negative integer not {k!r}')


def _ranked(target, candidates, k):
    ranked = sorted(
        ((math.dist(target.centroid, obj.centroid), obj.id) for obj in candidates
         if obj.id != target.id),
    )
    return [object_id for (_distance, object_id) in ranked[:k]]


def knn_neighbors(scene, target_id, k) -> typing.List[int]:
    """Ids of the `k` objects nearest `target_id` by 3D centroid
    distance, ascending (ties by ascending id).

    Fewer are returned when the scene holds fewer other objects.

    """
    _check_k(k)
    target = scene.get(target_id)

    if k == 0:
        return []

    return _ranked(target, scene, k)


class CentroidIndex:
    """KD-tree index of a scene's object centroids."""

    # relative slack on the candidate radius such that no tied
    # neighbor is lost to rounding in the tree's distance computation
    slack = 1e-9

    def __init__(self, scene):
        self.scene = scene
        self.objects = scene.objects
        self.centroids = np.array([obj.centroid for obj in self.objects], dtype=np.float64)
        self.tree = cKDTree(self.centroids) if len(self.objects) else None

    def knn(self, target_id, k) -> typing.List[int]:
        _check_k(k)
        target = self.scene.get(target_id)

        count = min(k, len(self.objects) - 1)

        if count <= 0:
            return []

        # the (count + 1) nearest include the target (or a co-located
        # object), so the count-th nearest other object lies within the
        # farthest of these
        (distances, _indices) = self.tree.query(target.centroid, k=count + 1)
        radius = float(np.max(distances))
        radius = radius * (1 + self.slack) + self.slack

        candidates = self.tree.query_ball_point(target.centroid, radius)

        return _ranked(target, (self.objects[index] for index in candidates), count)
