import concurrent.futures
import threading
import time

import pytest

from cityqa.gateway import (
    Budget,
    BudgetExceeded,
    CallableTransport,
    CompletionRequest,
    CompletionResponse,
    FinishReason,
    Gateway,
    MemoryCache,
    TextPart,
    TransientError,
    TransportError,
    TransportExhausted,
    Usage,
)


def make_request(text='question', model_id='model-a'):
    return CompletionRequest(model_id, 'system', (TextPart(text),))


def echo(request):
    return CompletionResponse(f'echo: {request.text}', usage=Usage(10, 5))


class Flaky:
    """Fail transiently `failures` times, then echo."""

    def __init__(self, failures, error=TransientError):
        self.failures = failures
        self.error = error
        self.attempts = 0

    def __call__(self, request):
        self.attempts += 1

        if self.attempts <= self.failures:
            raise self.error('upstream unavailable', 503)

        return echo(request)


@pytest.fixture
def sleeps():
    return []


def test_complete():
    gateway = Gateway(CallableTransport(echo), model_id='model-a')

    response = gateway.complete(make_request())

    assert response.text == 'echo: question'
    assert gateway.upstream_calls == 1
    assert gateway.budget.snapshot() == {'calls': 1, 'tokens': 15}
    assert not gateway.live


def test_cache_hit():
    transport = CallableTransport(echo)
    gateway = Gateway(transport)

    first = gateway.complete(make_request())
    second = gateway.complete(make_request())

    assert first == second
    assert transport.calls == 1
    assert gateway.cache_hits == 1

    gateway.complete(make_request('another'))
    assert transport.calls == 2


def test_cache_shared():
    cache = MemoryCache()
    Gateway(CallableTransport(echo), cache=cache).complete(make_request())

    transport = CallableTransport(echo)
    Gateway(transport, cache=cache).complete(make_request())

    assert transport.calls == 0
    assert len(cache) == 1


def test_error_not_cached():
    transport = CallableTransport(lambda request: CompletionResponse('', FinishReason.error))
    gateway = Gateway(transport)

    assert not gateway.complete(make_request()).ok
    assert not gateway.complete(make_request()).ok
    assert transport.calls == 2


def test_retry(sleeps):
    flaky = Flaky(2)
    gateway = Gateway(CallableTransport(flaky), sleep=sleeps.append)

    assert gateway.complete(make_request()).text == 'echo: question'
    assert flaky.attempts == 3
    assert sleeps == [1.0, 2.0]
    assert gateway.budget.calls == 3


def test_retry_exhausted(sleeps):
    gateway = Gateway(CallableTransport(Flaky(10)), sleep=sleeps.append)

    with pytest.raises(TransportExhausted) as info:
        gateway.complete(make_request())

    assert info.value.attempts == Gateway.max_attempts
    assert isinstance(info.value.cause, TransientError)
    assert sleeps == [1.0, 2.0, 4.0, 8.0]


def test_permanent_error(sleeps):
    flaky = Flaky(1, TransportError)
    gateway = Gateway(CallableTransport(flaky), sleep=sleeps.append)

    with pytest.raises(TransportError):
        gateway.complete(make_request())

    assert flaky.attempts == 1
    assert sleeps == []


def test_budget_calls():
    gateway = Gateway(CallableTransport(echo), budget=Budget(max_calls=2))

    gateway.complete(make_request('one'))
    gateway.complete(make_request('two'))

    # cached responses remain available
    gateway.complete(make_request('one'))

    with pytest.raises(BudgetExceeded) as info:
        gateway.complete(make_request('three'))

    assert info.value.resource == 'calls'
    assert info.value.limit == 2


def test_budget_tokens():
    gateway = Gateway(CallableTransport(echo), model_id='model-a',
                      budget=Budget(max_tokens=20))

    gateway.complete(make_request('one'))
    gateway.complete(make_request('two'))

    with pytest.raises(BudgetExceeded) as info:
        gateway.complete(make_request('three'))

    assert info.value.resource == 'tokens'
    assert 'model-a' in str(info.value)


def test_budget_shared_by_retries(sleeps):
    gateway = Gateway(CallableTransport(Flaky(5)), budget=Budget(max_calls=3),
                      sleep=sleeps.append)

    with pytest.raises(BudgetExceeded):
        gateway.complete(make_request())

    assert gateway.upstream_calls == 3


def test_in_flight_limit():
    lock = threading.Lock()
    active = [0]
    peak = [0]

    def slow(request):
        with lock:
            active[0] += 1
            peak[0] = max(peak[0], active[0])

        time.sleep(0.02)

        with lock:
            active[0] -= 1

        return echo(request)

    gateway = Gateway(CallableTransport(slow), in_flight=2)
    requests = [make_request(f'question {index}') for index in range(12)]

    with concurrent.futures.ThreadPoolExecutor(max_workers=8) as executor:
        responses = list(executor.map(gateway.complete, requests))

    assert [response.text for response in responses] == [
        f'echo: question {index}' for index in range(12)
    ]
    assert peak[0] <= 2
    assert gateway.peak_in_flight <= 2
    assert gateway.upstream_calls == 12


def test_in_flight_invalid():
    with pytest.raises(ValueError):
        Gateway(CallableTransport(echo), in_flight=0)


def test_log(caplog_struct):
    gateway = Gateway(CallableTransport(Flaky(1)), model_id='model-a',
                      sleep=lambda _delay: None, logger=caplog_struct.logger)

    gateway.complete(make_request())

    assert caplog_struct.field_equals(1, msg='transient failure: retrying', attempt=1)
    assert caplog_struct.field_equals(1, msg='completed', model='model-a')
