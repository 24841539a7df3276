import json

import pytest

from cityqa.gateway import (
    CallableTransport,
    CompletionRequest,
    CompletionResponse,
    FixtureCorrupt,
    FixtureMiss,
    Gateway,
    LmdbCache,
    RecordingTransport,
    ReplayTransport,
    TextPart,
    Usage,
    fixture_digest,
    load_fixture,
    record_fixture,
)


def make_request(text):
    return CompletionRequest('model-a', 'system', (TextPart(text),))


def answer(request):
    return CompletionResponse(request.text.upper(), usage=Usage(4, 2))


@pytest.fixture
def recorded(tmp_path):
    recorder = RecordingTransport(CallableTransport(answer))
    gateway = Gateway(recorder)

    for text in ('b question', 'a question', 'b question'):
        gateway.complete(make_request(text))

    return record_fixture(recorder, tmp_path / 'fixture.jsonl')


def test_record(recorded):
    rows = [json.loads(line) for line in recorded.read_text().splitlines()]

    assert len(rows) == 2
    assert [row['request_key'] for row in rows] == sorted(row['request_key'] for row in rows)
    assert {row['response']['text'] for row in rows} == {'A QUESTION', 'B QUESTION'}


def test_replay(recorded):
    transport = ReplayTransport.from_path(recorded)
    gateway = Gateway(transport)

    assert not gateway.live
    assert gateway.complete(make_request('a question')).text == 'A QUESTION'
    assert gateway.complete(make_request('b question')).usage == Usage(4, 2)

    with pytest.raises(FixtureMiss) as info:
        gateway.complete(make_request('c question'))

    assert info.value.request_key == make_request('c question').request_key


def test_record_deterministic(recorded, tmp_path):
    recorder = RecordingTransport(CallableTransport(answer))
    for text in ('a question', 'b question'):
        recorder.send(make_request(text))

    again = record_fixture([recorder], tmp_path / 'again.jsonl')

    assert fixture_digest(again) == fixture_digest(recorded)


def test_corrupt_key(recorded):
    rows = [json.loads(line) for line in recorded.read_text().splitlines()]
    rows[0]['request']['system_text'] = 'tampered'
    recorded.write_text(''.join(json.dumps(row) + '\n' for row in rows))

    with pytest.raises(FixtureCorrupt):
        load_fixture(recorded)


def test_corrupt_entry(tmp_path):
    path = tmp_path / 'fixture.jsonl'
    path.write_text('{"request_key": "abc"}\n')

    with pytest.raises(FixtureCorrupt):
        load_fixture(path)


def test_lmdb_cache(tmp_path):
    request = make_request('persisted')

    cache = LmdbCache(tmp_path / 'cache')
    Gateway(CallableTransport(answer), cache=cache).complete(request)
    assert len(cache) == 1

    transport = CallableTransport(answer)
    gateway = Gateway(transport, cache=cache)

    assert gateway.complete(request) == CompletionResponse('PERSISTED', usage=Usage(4, 2))
    assert transport.calls == 0
