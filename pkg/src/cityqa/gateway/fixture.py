"""Record/replay of completions.

A fixture is JSONL, one entry per line: `request_key`, `request`
(canonical form) and `response`, sorted by `request_key`.

"""
import pathlib
import threading

from cityqa.util.format import dumps_jsonl, read_jsonl
from cityqa.util.ident import digest_bytes

from .error import FixtureCorrupt, FixtureMiss
from .request import CompletionRequest, CompletionResponse
from .transport import Transport


def fixture_entry(request, response):
    return {
        'request_key': request.request_key,
        'request': request.canonical(),
        'response': response.to_dict(),
    }


def load_fixture(path):
    """Map of request_key to (request, response) from fixture `path`.

    Keys are verified against the recorded requests.

    """
    entries = {}

    for entry in read_jsonl(pathlib.Path(path)):
        try:
            request = CompletionRequest.from_canonical(entry['request'])
            response = CompletionResponse.from_dict(entry['response'])
            key = entry['request_key']
        except (KeyError, TypeError, ValueError) as exc:
            raise FixtureCorrupt(f'{path}: invalid fixture entry: {exc}') from exc

        if request.request_key != key:
            raise FixtureCorrupt(f'{path}: request_key {key} does not match its request')

        entries[key] = (request, response)

    return entries


def dumps_fixture(entries) -> str:
    rows = (fixture_entry(request, response) for (request, response) in entries)
    return dumps_jsonl(sorted(rows, key=lambda row: row['request_key']))


def fixture_digest(path) -> str:
    return digest_bytes(pathlib.Path(path).read_bytes())


class ReplayTransport(Transport):
    """Serve recorded responses; no network activity."""

    live = False

    def __init__(self, entries):
        self.entries = dict(entries)
        self.calls = 0
        self._lock = threading.Lock()

    @classmethod
    def from_path(cls, path):
        return cls(load_fixture(path))

    def send(self, request):
        with self._lock:
            self.calls += 1

        try:
            (_request, response) = self.entries[request.request_key]
        except KeyError:
            raise FixtureMiss(request.request_key, request.model_id) from None

        return response


class RecordingTransport(Transport):
    """Wrap `transport`, recording every successful exchange."""

    def __init__(self, transport):
        self.transport = transport
        self.live = transport.live
        self._entries = {}
        self._lock = threading.Lock()

    def send(self, request):
        response = self.transport.send(request)

        with self._lock:
            self._entries[request.request_key] = (request, response)

        return response

    @property
    def entries(self):
        with self._lock:
            return dict(self._entries)

    def __len__(self):
        return len(self._entries)

    def close(self):
        self.transport.close()


def record_fixture(session, path) -> pathlib.Path:
    """Write the exchanges recorded by `session` (one or more
    `RecordingTransport`) to the fixture file `path`.

    """
    sessions = session if isinstance(session, (list, tuple)) else [session]

    entries = {}
    for recorder in sessions:
        entries.update(recorder.entries)

    path = pathlib.Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_fixture(entries.values()), encoding='utf-8')
    return path
