"""City scene graph: objects as nodes; adjacency and containment edges.

Orientation is carried by adjacency edges as the compass octant of the
edge target seen from its source.

"""
import graphlib
import typing
from dataclasses import dataclass

from cityqa.spatial import CoLocated, DistanceMode, Octant, compass_octant, pairwise_distance
from cityqa.util.enum import StrEnum

from .error import ContainmentCycle, UnknownObject
from .model import CityScene


class RelationKind(StrEnum):

    adjacency = 'adjacency'
    containment = 'containment'


@dataclass(frozen=True)
class Edge:

    source: int
    target: int
    kind: RelationKind
    distance: float
    octant: typing.Optional[Octant] = None

    @property
    def sort_key(self):
        return (self.source, self.target, self.kind.value)

    def to_dict(self):
        return {
            'source': self.source,
            'target': self.target,
            'kind': self.kind.value,
            'distance': self.distance,
            'octant': self.octant and self.octant.value,
        }

    @classmethod
    def from_dict(cls, data):
        octant = data.get('octant')
        return cls(
            int(data['source']),
            int(data['target']),
            RelationKind(data['kind']),
            float(data['distance']),
            Octant(octant) if octant else None,
        )


@dataclass(frozen=True)
class SceneGraph:

    scene_id: str
    nodes: typing.Tuple[int, ...]
    edges: typing.Tuple[Edge, ...]

    def edges_of(self, kind) -> typing.Tuple[Edge, ...]:
        kind = RelationKind.parse(kind)
        return tuple(edge for edge in self.edges if edge.kind is kind)

    def neighbors(self, node, kind=RelationKind.adjacency) -> typing.Tuple[int, ...]:
        """Targets of the edges of `kind` leaving `node`."""
        if node not in self.nodes:
            raise UnknownObject(node, self.scene_id)

        return tuple(edge.target for edge in self.edges_of(kind) if edge.source == node)

    def containment_order(self) -> typing.List[int]:
        """Nodes in topological order of containment (outer before inner)."""
        sorter = graphlib.TopologicalSorter({node: () for node in self.nodes})

        for edge in self.edges_of(RelationKind.containment):
            sorter.add(edge.target, edge.source)

        try:
            return list(sorter.static_order())
        except graphlib.CycleError as exc:
            raise ContainmentCycle(f'containment cycle: {exc.args[1]}') from exc

    def to_dict(self):
        return {
            'scene_id': self.scene_id,
            'nodes': list(self.nodes),
            'edges': [edge.to_dict() for edge in self.edges],
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            data['scene_id'],
            tuple(int(node) for node in data['nodes']),
            tuple(sorted((Edge.from_dict(edge) for edge in data['edges']),
                         key=lambda edge: edge.sort_key)),
        )


def build_scene_graph(scene: CityScene, adjacency_radius: float) -> SceneGraph:
    """Construct the scene graph of `scene`.

    * adjacency (both directions): horizontal centroid distance at most
      `adjacency_radius`, with the octant of target from source (`None`
      when horizontally co-located)

    * containment (outer to inner): the inner bbox footprint lies
      strictly inside the outer's

    """
    if not adjacency_radius > 0:
        raise ValueError(f'adjacency_radius must be positive not {adjacency_radius!r}')

    edges = []

    for source in scene:
        for target in scene:
            if source.id == target.id:
                continue

            distance = pairwise_distance(source.centroid, target.centroid,
                                         DistanceMode.horizontal)

            if distance <= adjacency_radius:
                try:
                    octant = compass_octant(source.centroid, target.centroid)
                except CoLocated:
                    octant = None

                edges.append(Edge(source.id, target.id, RelationKind.adjacency, distance, octant))

            if source.bbox.footprint_strictly_contains(target.bbox):
                edges.append(Edge(source.id, target.id, RelationKind.containment, distance))

    edges.sort(key=lambda edge: edge.sort_key)

    return SceneGraph(scene.scene_id, scene.ids, tuple(edges))
