"""Reading and writing of the line-oriented scene file format.

    # comments and blank lines are ignored
    scene <scene_id>
    object <id> <category>
    landmark <name>              (optional; before the object's points)
    p <x> <y> <z> [<r> <g> <b>]
    ...

"""
import math
import pathlib
import typing

import numpy as np

from .error import InvalidObject, SceneFileMissing, SchemaViolation
from .model import CityScene, ObjectInstance


class _ObjectRecord:

    def __init__(self, object_id, category, line):
        self.id = object_id
        self.category = category
        self.line = line
        self.landmark = None
        self.points = []
        self.colors = []

    def build(self, path):
        if not self.points:
            raise SchemaViolation(f'empty object {self.id} (no points)', self.line, path)

        if self.colors and len(self.colors) != len(self.points):
            raise SchemaViolation(f'object {self.id}: either every point or no point '
                                  'may specify color', self.line, path)

        try:
            return ObjectInstance(
                self.id,
                self.category,
                np.array(self.points, dtype=np.float64),
                landmark=self.landmark,
                colors=np.array(self.colors, dtype=np.uint8) if self.colors else None,
            )
        except InvalidObject as exc:
            raise SchemaViolation(str(exc), self.line, path) from exc


def _parse_float(token, lineno, path):
    try:
        value = float(token)
    except ValueError:
        raise SchemaViolation(f'invalid coordinate: {token!r}', lineno, path) from None

    if not math.isfinite(value):
        raise SchemaViolation(f'non-finite coordinate: {token!r}', lineno, path)

    return value


def _parse_color(token, lineno, path):
    try:
        value = int(token)
    except ValueError:
        raise SchemaViolation(f'invalid color component: {token!r}', lineno, path) from None

    if not 0 <= value <= 255:
        raise SchemaViolation(f'color component out of range [0, 255]: {value}', lineno, path)

    return value


def parse_scene(lines: typing.Iterable[str], path=None) -> CityScene:
    """Parse scene records from `lines` (see module documentation)."""
    scene_id = None
    objects = []
    seen_ids = {}
    current = None

    for (lineno, raw) in enumerate(lines, 1):
        line = raw.strip()

        if not line or line.startswith('#'):
            continue

        (keyword, _sep, rest) = line.partition(' ')
        rest = rest.strip()

        if scene_id is None:
            if keyword != 'scene' or not rest:
                raise SchemaViolation('expected header record: scene <scene_id>', lineno, path)

            scene_id = rest
            continue

        if keyword == 'object':
            (id_token, _sep, category) = rest.partition(' ')
            category = category.strip()

            try:
                object_id = int(id_token)
            except ValueError:
                raise SchemaViolation(f'invalid object id: {id_token!r}', lineno, path) from None

            if object_id < 0:
                raise SchemaViolation(f'object id must be non-negative: {object_id}', lineno, path)

            if not category:
                raise SchemaViolation(f'object {object_id}: missing category', lineno, path)

            if object_id in seen_ids:
                raise SchemaViolation(f'duplicate object id {object_id} '
                                      f'(first defined on line {seen_ids[object_id]})',
                                      lineno, path)

            if current is not None:
                objects.append(current.build(path))

            seen_ids[object_id] = lineno
            current = _ObjectRecord(object_id, category, lineno)

        elif keyword == 'landmark':
            if current is None:
                raise SchemaViolation('landmark record outside of object', lineno, path)

            if current.landmark is not None:
                raise SchemaViolation(f'object {current.id}: multiple landmark records',
                                      lineno, path)

            if current.points:
                raise SchemaViolation(f'object {current.id}: landmark must precede points',
                                      lineno, path)

            if not rest:
                raise SchemaViolation(f'object {current.id}: empty landmark name', lineno, path)

            current.landmark = rest

        elif keyword == 'p':
            if current is None:
                raise SchemaViolation('point record outside of object', lineno, path)

            tokens = rest.split()

            if len(tokens) not in (3, 6):
                raise SchemaViolation('point record expects 3 coordinates and optionally '
                                      f'3 color components, not {len(tokens)} values',
                                      lineno, path)

            point = [_parse_float(token, lineno, path) for token in tokens[:3]]

            has_color = len(tokens) == 6

            if current.points and has_color != bool(current.colors):
                raise SchemaViolation(f'object {current.id}: either every point or no point '
                                      'may specify color', lineno, path)

            current.points.append(point)

            if has_color:
                current.colors.append([_parse_color(token, lineno, path) for token in tokens[3:]])

        elif keyword == 'scene':
            raise SchemaViolation('multiple scene header records', lineno, path)

        else:
            raise SchemaViolation(f'unrecognized record: {keyword!r}', lineno, path)

    if scene_id is None:
        raise SchemaViolation('empty scene file: missing header record', None, path)

    if current is not None:
        objects.append(current.build(path))

    return CityScene(scene_id, tuple(objects))


def load_scene(path) -> CityScene:
    """Load and validate the scene file at `path`."""
    path = pathlib.Path(path)

    try:
        with open(path, encoding='utf-8') as fd:
            return parse_scene(fd, path)
    except FileNotFoundError:
        raise SceneFileMissing(path) from None
    except UnicodeDecodeError as exc:
        raise SchemaViolation(f'scene file is not valid UTF-8: {exc}', None, path) from None


def _format_coordinate(value):
    return f'{value:.6f}'


def dumps_scene(scene: CityScene) -> str:
    """Serialize `scene` in canonical form (6-decimal coordinates)."""
    lines = [f'scene {scene.scene_id}']

    for obj in scene:
        lines.append(f'object {obj.id} {obj.category}')

        if obj.landmark:
            lines.append(f'landmark {obj.landmark}')

        for (index, point) in enumerate(obj.points):
            record = 'p ' + ' '.join(_format_coordinate(value) for value in point)

            if obj.colors is not None:
                record += ' ' + ' '.join(str(int(value)) for value in obj.colors[index])

            lines.append(record)

    return '\n'.join(lines) + '\n'


def save_scene(scene: CityScene, path) -> pathlib.Path:
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_scene(scene), encoding='utf-8')
    return path
