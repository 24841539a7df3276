from .error import (  # noqa: F401
    ContainmentCycle,
    DuplicateObject,
    EmptyScene,
    InvalidObject,
    SceneError,
    SceneFileMissing,
    SchemaViolation,
    UnknownObject,
)
from .model import (  # noqa: F401
    BBox,
    CityScene,
    ObjectInstance,
    Point3,
    SceneSummary,
    object_centroid,
    scene_summary,
)
from .io import dumps_scene, load_scene, parse_scene, save_scene  # noqa: F401
from .graph import Edge, RelationKind, SceneGraph, build_scene_graph  # noqa: F401
