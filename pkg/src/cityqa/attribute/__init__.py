from .text import AttributeKind, AttributeText, format_meters  # noqa: F401
from .serialize import (  # noqa: F401
    ObjectDescription,
    nearest_pairs,
    object_phrase,
    parse_object_text,
    scene_header,
    sentence_templates,
    serialize_bundle,
    serialize_containment,
    serialize_object,
    serialize_relation,
    serialize_scene,
    short_phrase,
)
