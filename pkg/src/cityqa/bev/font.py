"""3x5 bitmap digits for numeric object labels."""
import numpy as np


GLYPHS = {
    '0': ('###', '#.#', '#.#', '#.#', '###'),
    '1': ('.#.', '##.', '.#.', '.#.', '###'),
    '2': ('###', '..#', '###', '#..', '###'),
    '3': ('###', '..#', '###', '..#', '###'),
    '4': ('#.#', '#.#', '###', '..#', '..#'),
    '5': ('###', '#..', '###', '..#', '###'),
    '6': ('###', '#..', '###', '#.#', '###'),
    '7': ('###', '..#', '.#.', '.#.', '.#.'),
    '8': ('###', '#.#', '###', '#.#', '###'),
    '9': ('###', '#.#', '###', '..#', '###'),
}

GLYPH_HEIGHT = 5

GLYPH_WIDTH = 3


def render_text(text: str) -> np.ndarray:
    """Boolean mask of `text` (digits only), glyphs one column apart."""
    if not text:
        return np.zeros((GLYPH_HEIGHT, 0), dtype=bool)

    width = len(text) * (GLYPH_WIDTH + 1) - 1
    mask = np.zeros((GLYPH_HEIGHT, width), dtype=bool)

    for (position, char) in enumerate(text):
        glyph = GLYPHS[char]
        offset = position * (GLYPH_WIDTH + 1)

        for (row, line) in enumerate(glyph):
            for (col, cell) in enumerate(line):
                mask[row, offset + col] = cell == '#'

    return mask
