import itertools

from cityqa.scene import CityScene, ObjectInstance, save_scene


def box_points(center, size=(2.0, 2.0, 2.0)):
    """Corners of the axis-aligned box of `size` about `center`."""
    return [
        [c + half * s for (c, half, s) in zip(center, corner, size)]
        for corner in itertools.product((-0.5, 0.5), repeat=3)
    ]


def box_object(object_id, category, center, size=(2.0, 2.0, 2.0), landmark=None):
    return ObjectInstance(object_id, category, box_points(center, size), landmark)


def point_object(object_id, category, point, landmark=None):
    return ObjectInstance(object_id, category, [point], landmark)


def campus_scene(scene_id='campus'):
    """Five objects about a news center and its parking lot, a car
    parked within the lot.

    """
    return CityScene(scene_id, (
        box_object(0, 'building', (21.2, 417.3, 18.0), (20.0, 16.0, 36.0), 'News Center'),
        box_object(1, 'parking lot', (54.1, 448.9, 0.5), (30.0, 20.0, 1.0), 'Parking Lot'),
        box_object(2, 'tree', (40.0, 430.0, 4.0), (3.0, 3.0, 8.0)),
        box_object(3, 'car', (54.0, 449.0, 1.0), (4.0, 2.0, 1.5)),
        box_object(4, 'road', (35.0, 400.0, 0.1), (60.0, 6.0, 0.2), 'Main Street'),
    ))


def harbor_scene(scene_id='harbor'):
    return CityScene(scene_id, (
        box_object(10, 'building', (0.0, 0.0, 10.0), (12.0, 12.0, 20.0), 'Harbor Office'),
        box_object(11, 'boat', (25.0, -5.0, 1.0), (8.0, 3.0, 2.0)),
        box_object(12, 'tree', (-8.0, 14.0, 3.0), (2.0, 2.0, 6.0)),
    ))


def write_scene(directory, scene):
    return save_scene(scene, directory / f'{scene.scene_id}.scene')
