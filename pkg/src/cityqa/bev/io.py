import pathlib

import numpy as np
from PIL import Image

from cityqa.util.format import write_json


def sidecar_path(path) -> pathlib.Path:
    return pathlib.Path(path).with_suffix('.json')


def write_png(raster, path) -> pathlib.Path:
    """Write `raster` as a non-interlaced 8-bit RGB PNG plus its JSON
    sidecar (same stem, `.json` suffix).

    """
    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    image = Image.fromarray(raster.pixels.copy())
    image.save(path, format='PNG')

    write_json(sidecar_path(path), raster.metadata())

    return path


def read_png(path) -> np.ndarray:
    with Image.open(path) as image:
        return np.asarray(image.convert('RGB'), dtype=np.uint8)
