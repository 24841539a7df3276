import math
import random

import pytest

from cityqa.scene import CityScene, UnknownObject
from cityqa.spatial import CentroidIndex, InvalidCount, knn_neighbors

from test.fixture import point_object


def oracle(scene, target_id, k):
    target = scene.get(target_id).centroid
    ranked = sorted((math.dist(target, obj.centroid), obj.id)
                    for obj in scene if obj.id != target_id)
    return [object_id for (_distance, object_id) in ranked[:k]]


def random_scene(rng, index):
    count = rng.randint(1, 200)
    ids = rng.sample(range(1000), count)

    # integer lattice coordinates produce frequent distance ties
    objects = [
        point_object(object_id, 'thing', (rng.randint(-6, 6), rng.randint(-6, 6),
                                          rng.randint(0, 2)))
        for object_id in ids
    ]

    return CityScene(f'random-{index}', tuple(objects))


def test_oracle_equivalence():
    rng = random.Random(20240501)
    mismatches = []

    for index in range(100):
        scene = random_scene(rng, index)
        tree = CentroidIndex(scene)

        for target_id in rng.sample(scene.ids, min(5, len(scene))):
            k = rng.randint(0, 12)
            expected = oracle(scene, target_id, k)

            for found in (knn_neighbors(scene, target_id, k), tree.knn(target_id, k)):
                if found != expected:
                    mismatches.append((scene.scene_id, target_id, k, found, expected))

    assert mismatches == []


def test_ties():
    scene = CityScene('ties', (
        point_object(9, 'thing', (0, 0, 0)),
        point_object(4, 'thing', (1, 0, 0)),
        point_object(2, 'thing', (0, 1, 0)),
        point_object(7, 'thing', (-1, 0, 0)),
        point_object(1, 'thing', (5, 5, 0)),
    ))

    assert knn_neighbors(scene, 9, 2) == [2, 4]
    assert CentroidIndex(scene).knn(9, 3) == [2, 4, 7]


def test_fewer_than_k():
    scene = CityScene('pair', (
        point_object(0, 'thing', (0, 0, 0)),
        point_object(1, 'thing', (3, 4, 0)),
    ))

    assert knn_neighbors(scene, 0, 4) == [1]
    assert CentroidIndex(scene).knn(0, 4) == [1]
    assert CentroidIndex(scene).knn(0, 0) == []


def test_single():
    scene = CityScene('single', (point_object(0, 'thing', (0, 0, 0)),))

    assert knn_neighbors(scene, 0, 3) == []
    assert CentroidIndex(scene).knn(0, 3) == []


@pytest.mark.parametrize('k', [-1, 1.5, True])
def test_invalid_k(campus, k):
    with pytest.raises(InvalidCount):
        knn_neighbors(campus, 0, k)


def test_unknown_target(campus):
    with pytest.raises(UnknownObject):
        CentroidIndex(campus).knn(42, 1)
