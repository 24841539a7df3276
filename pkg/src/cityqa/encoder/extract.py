"""Deterministic stand-in feature extractors.

These take the place of pretrained view, shape, landmark and text
encoders. Each maps its input to seeded hash embeddings of unit
expected norm, such that every feature is reproducible bit-for-bit
from the encoder seed.

"""
import re

import numpy as np

from cityqa.util.ident import derive_seed

from .error import EmptyQuery


def hash_embedding(text, dim, seed=0, namespace='token') -> np.ndarray:
    """Seeded Gaussian embedding of `text` (scaled by 1/√dim)."""
    rng = np.random.default_rng(derive_seed(namespace, seed, text))
    return rng.standard_normal(dim) / np.sqrt(dim)


def seeded_matrix(rows, cols, seed, *names) -> np.ndarray:
    rng = np.random.default_rng(derive_seed('matrix', seed, *names))
    return rng.standard_normal((rows, cols)) / np.sqrt(cols)


_TOKEN = re.compile(r'\w+', re.UNICODE)


def tokens(text):
    return [token.lower() for token in _TOKEN.findall(text)]


def encode_text(query, config) -> np.ndarray:
    """E_T: one hash embedding per whitespace token of `query`,
    zero-padded or truncated to exactly `l` rows.

    """
    if not isinstance(query, str) or not query.strip():
        raise EmptyQuery('query must be non-empty text')

    words = query.split()[:config.l]
    features = np.zeros((config.l, config.d))

    for (row, word) in enumerate(words):
        features[row] = hash_embedding(word, config.d, config.seed, 'text')

    return features


class Extractor:
    """Stand-in feature extractor bound to an encoder configuration."""

    # per-patch statistics: channel means and standard deviations
    _view_stats = 6

    def __init__(self, config):
        self.config = config
        self._view_map = seeded_matrix(config.d, self._view_stats, config.seed, 'view')

    def view(self, pixels) -> np.ndarray:
        """C×d: one feature per vertical strip of the image.

        Strips beyond the image's width are zero.

        """
        pixels = np.asarray(pixels, dtype=np.float64) / 255.0

        if pixels.ndim != 3 or pixels.shape[2] != 3:
            raise ValueError(f'expected an (h, w, 3) image not {pixels.shape}')

        features = np.zeros((self.config.C, self.config.d))

        for (row, strip) in enumerate(np.array_split(pixels, self.config.C, axis=1)):
            if strip.size == 0:
                continue

            flat = strip.reshape(-1, 3)
            stats = np.concatenate([flat.mean(axis=0), flat.std(axis=0)])
            features[row] = np.tanh(self._view_map @ stats)

        return features

    def shape(self, obj) -> np.ndarray:
        """1×d: embedding of the object's category, point count and
        bounding-box dimensions (to the millimeter).

        """
        (dx, dy, dz) = obj.bbox.size
        descriptor = f'{obj.category}|{len(obj)}|{dx:.3f}|{dy:.3f}|{dz:.3f}'
        return hash_embedding(descriptor, self.config.d, self.config.seed, 'shape')[np.newaxis]

    def landmark(self, obj) -> np.ndarray:
        """1×d: mean token embedding of the landmark name; zero when the
        object has none.

        """
        if not obj.landmark:
            return np.zeros((1, self.config.d))

        words = tokens(obj.landmark) or [obj.landmark]

        rows = [hash_embedding(word, self.config.d, self.config.seed, 'landmark')
                for word in words]
        return np.mean(rows, axis=0)[np.newaxis]
