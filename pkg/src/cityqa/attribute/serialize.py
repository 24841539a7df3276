"""Deterministic serialization of scene facts into attribute texts.

Sentences are taken from the versioned template table
(`include/templates.toml`).

"""
import collections
import functools
import itertools
import re
import typing

from cityqa import conf
from cityqa.scene import RelationKind
from cityqa.spatial import CoLocated, DistanceMode, compass_octant, pairwise_distance
from cityqa.taxonomy import TaskLevel

from .text import AttributeKind, AttributeText, format_meters


@functools.lru_cache(maxsize=None)
def sentence_templates():
    table = conf.load_table('templates')
    return dict(table['serialize'], version=table['version'])


def _object_fields(obj):
    (x, y, z) = obj.centroid
    return {
        'id': obj.id,
        'category': obj.category,
        'x': format_meters(x),
        'y': format_meters(y),
        'z': format_meters(z),
    }


def object_phrase(obj) -> str:
    templates = sentence_templates()
    fields = _object_fields(obj)

    if obj.landmark:
        return templates['object_landmark'].format(landmark=obj.landmark, **fields)

    return templates['object_anonymous'].format(**fields)


def short_phrase(obj) -> str:
    if obj.landmark:
        return obj.landmark

    return sentence_templates()['object_short_anonymous'].format(id=obj.id)


def serialize_object(obj) -> AttributeText:
    """Landmark (or anonymous id), category and centroid of `obj`."""
    return AttributeText(AttributeKind.object, object_phrase(obj), (obj.id,))


def serialize_relation(a, b) -> AttributeText:
    """Horizontal distance from `b` to `a` and the octant of `a` as seen
    from `b`.

    """
    if a.id == b.id:
        raise ValueError(f'relation requires distinct objects (both are {a.id})')

    templates = sentence_templates()

    try:
        octant = compass_octant(b.centroid, a.centroid)
    except CoLocated:
        text = templates['relation_colocated'].format(
            subject=object_phrase(a),
            reference=object_phrase(b),
        )
    else:
        distance = pairwise_distance(a.centroid, b.centroid, DistanceMode.horizontal)
        text = templates['relation'].format(
            subject=object_phrase(a),
            distance=format_meters(distance),
            reference=object_phrase(b),
            octant=octant.word,
            reference_short=short_phrase(b),
        )

    return AttributeText(AttributeKind.relation, text, (a.id, b.id))


def serialize_containment(outer, inner) -> AttributeText:
    text = sentence_templates()['containment'].format(
        inner=object_phrase(inner),
        outer=short_phrase(outer),
    )
    return AttributeText(AttributeKind.relation, text, (inner.id, outer.id))


def scene_header(scene) -> str:
    templates = sentence_templates()
    histogram = collections.Counter(obj.category for obj in scene)

    if histogram:
        histogram_text = ', '.join(
            templates['histogram_item'].format(count=count, category=category)
            for (category, count) in sorted(histogram.items())
        )
    else:
        histogram_text = templates['histogram_empty']

    return templates['scene_header'].format(scene_id=scene.scene_id,
                                            count=len(scene),
                                            histogram=histogram_text)


def nearest_pairs(graph, max_relations, nodes=None):
    """Adjacency pairs (source < target) by ascending distance, then ids.

    With `nodes`, only pairs touching one of these are considered.

    """
    edges = [
        edge for edge in graph.edges_of(RelationKind.adjacency)
        if edge.source < edge.target and (nodes is None or
                                          edge.source in nodes or edge.target in nodes)
    ]
    edges.sort(key=lambda edge: (edge.distance, edge.source, edge.target))
    return edges[:max_relations]


def serialize_scene(scene, graph, max_relations) -> AttributeText:
    """Scene header, landmark object lines (by id) and up to
    `max_relations` relation sentences (shortest adjacency first).

    """
    if max_relations < 0:
        raise ValueError(f'max_relations must be non-negative not {max_relations!r}')

    lines = [scene_header(scene)]
    ids = []

    for obj in scene.landmarked:
        lines.append(object_phrase(obj))
        ids.append(obj.id)

    for edge in nearest_pairs(graph, max_relations):
        relation = serialize_relation(scene.get(edge.source), scene.get(edge.target))
        lines.append(relation.text)
        ids.extend(relation.ids)

    return AttributeText(AttributeKind.scene, '\n'.join(lines), tuple(sorted(set(ids))))


def serialize_bundle(scene, graph, level, targets=(),
                     max_relations=20) -> typing.List[AttributeText]:
    """Attribute texts relevant to a task of `level` about `targets`.

    * object: each target's line, its nearest relation sentences and
      its containment sentences

    * relationship: each target's line and a relation sentence for
      every pair of targets

    * scene: the scene text

    """
    level = TaskLevel.parse(level)
    targets = tuple(targets)

    if level is TaskLevel.scene:
        return [serialize_scene(scene, graph, max_relations)]

    objects = [scene.get(object_id) for object_id in targets]
    bundle = [serialize_object(obj) for obj in objects]

    if level is TaskLevel.relationship:
        for (a, b) in itertools.combinations(objects, 2):
            bundle.append(serialize_relation(a, b))

        return bundle

    target_ids = set(targets)

    for edge in nearest_pairs(graph, max_relations, target_ids):
        bundle.append(serialize_relation(scene.get(edge.source), scene.get(edge.target)))

    for edge in graph.edges_of(RelationKind.containment):
        if edge.source in target_ids or edge.target in target_ids:
            bundle.append(serialize_containment(scene.get(edge.source), scene.get(edge.target)))

    return bundle


class ObjectDescription(typing.NamedTuple):

    landmark: typing.Optional[str]
    object_id: typing.Optional[int]
    category: str
    location: typing.Tuple[float, float, float]


_NUMBER = r'-?\d+\.\d'


def _template_pattern(template, fields):
    pattern = re.escape(template)

    for (name, group) in fields.items():
        pattern = pattern.replace(re.escape('{' + name + '}'), f'(?P<{name}>{group})', 1)

    return re.compile(f'^{pattern}$')


@functools.lru_cache(maxsize=None)
def _object_patterns():
    templates = sentence_templates()
    coordinates = {'x': _NUMBER, 'y': _NUMBER, 'z': _NUMBER}
    return (
        _template_pattern(templates['object_anonymous'],
                          {'id': r'\d+', 'category': r'.+', **coordinates}),
        _template_pattern(templates['object_landmark'],
                          {'landmark': r'.+?', 'category': r'.+', **coordinates}),
    )


def parse_object_text(text) -> ObjectDescription:
    """Recover landmark (or id), category and location from the text of
    `serialize_object`.

    """
    text = str(text)

    for pattern in _object_patterns():
        if match := pattern.match(text):
            groups = match.groupdict()
            return ObjectDescription(
                groups.get('landmark'),
                int(groups['id']) if groups.get('id') else None,
                groups['category'],
                (float(groups['x']), float(groups['y']), float(groups['z'])),
            )

    raise ValueError(f'not an object attribute text: {text!r}')
