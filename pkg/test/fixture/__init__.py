from .conf import ConfFixture  # noqa: F401
from .image import write_image  # noqa: F401
from .log import LogCapture  # noqa: F401
from .model import ScriptedModel  # noqa: F401
from .scene import (  # noqa: F401
    box_object,
    box_points,
    campus_scene,
    harbor_scene,
    point_object,
    write_scene,
)
