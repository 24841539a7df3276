from .error import BevError, InvalidScale, OutsideRaster  # noqa: F401
from .io import read_png, sidecar_path, write_png  # noqa: F401
from .raster import Raster, Window  # noqa: F401
from .render import (  # noqa: F401
    DEFAULT_CROP_SCALE,
    DEFAULT_GLOBAL_SCALE,
    crop_window,
    rasterize,
    render_global_bev,
    render_object_crop,
)
