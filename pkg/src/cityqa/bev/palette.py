"""Fixed colors: a 64-color overlay palette and category colors."""
import hashlib

import numpy as np


BACKGROUND = np.array((0, 0, 0), dtype=np.uint8)

LABEL_INK = np.array((255, 255, 255), dtype=np.uint8)

#: distinct from the background and from every overlay blend
LABEL_BACKGROUND = np.array((20, 20, 20), dtype=np.uint8)

_LEVELS = (40, 105, 170, 235)

#: 4 x 4 x 4 cube of distinct colors (none equal to the background)
PALETTE64 = np.array(
    [(_LEVELS[index // 16], _LEVELS[(index // 4) % 4], _LEVELS[index % 4]) for index in range(64)],
    dtype=np.uint8,
)


def id_color(object_id) -> np.ndarray:
    """Overlay color of an object id, or of an array of ids.

    Colors are distinct for ids distinct modulo 64.

    """
    return PALETTE64[(np.asarray(object_id) * 37) % 64]


def category_color(category: str) -> np.ndarray:
    digest = hashlib.sha256(category.encode('utf-8')).digest()
    return PALETTE64[int.from_bytes(digest[:4], 'big') % 64]
