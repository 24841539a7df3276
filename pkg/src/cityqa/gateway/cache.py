"""Response caches keyed by request_key."""
import json
import pathlib
import threading

from lmdb_dict import CachedLmdbDict

from cityqa.util.format import dump_canonical

from .request import CompletionResponse


class MemoryCache:

    def __init__(self):
        self._data = {}
        self._lock = threading.Lock()

    def get(self, key):
        with self._lock:
            return self._data.get(key)

    def put(self, key, response):
        with self._lock:
            self._data[key] = response

    def __len__(self):
        return len(self._data)

    def close(self):
        pass


class LmdbCache:
    """Persistent cache in an LMDB environment at `path`."""

    def __init__(self, path):
        path = pathlib.Path(path)
        path.mkdir(parents=True, exist_ok=True)
        self.path = path
        self.db = CachedLmdbDict(str(path))
        self._lock = threading.Lock()

    def get(self, key):
        with self._lock:
            try:
                encoded = self.db[key]
            except KeyError:
                return None

        return CompletionResponse.from_dict(json.loads(encoded))

    def put(self, key, response):
        encoded = dump_canonical(response.to_dict())

        with self._lock:
            self.db[key] = encoded

    def __len__(self):
        with self._lock:
            return len(self.db)

    def close(self):
        pass


def open_cache(path=None):
    return LmdbCache(path) if path else MemoryCache()
