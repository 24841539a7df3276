import threading
import time

from cityqa.util.log import null_logger

from .cache import MemoryCache
from .error import BudgetExceeded, TransientError, TransportExhausted


class Budget:
    """Ceilings on upstream calls and on total tokens, atomically counted.

    A ceiling of `None` is unlimited.

    """
    def __init__(self, max_calls=None, max_tokens=None):
        self.max_calls = max_calls
        self.max_tokens = max_tokens
        self.calls = 0
        self.tokens = 0
        self._lock = threading.Lock()

    def reserve_call(self, model_id=None):
        with self._lock:
            if self.max_calls is not None and self.calls >= self.max_calls:
                raise BudgetExceeded('calls', self.max_calls, model_id)

            if self.max_tokens is not None and self.tokens >= self.max_tokens:
                raise BudgetExceeded('tokens', self.max_tokens, model_id)

            self.calls += 1

    def charge(self, usage):
        with self._lock:
            self.tokens += usage.total

    def snapshot(self):
        with self._lock:
            return {'calls': self.calls, 'tokens': self.tokens}


class Gateway:
    """Client contract for one completion provider.

    `complete` is safe to invoke concurrently: upstream calls are limited
    to `in_flight` at once; responses are cached by request_key; failed
    attempts raising `TransientError` are retried with exponential
    backoff (`backoff_base` seconds, doubling) up to `max_attempts`.

    """
    max_attempts = 5
    backoff_base = 1.0
    backoff_factor = 2.0

    def __init__(self, transport, *, model_id=None, cache=None, budget=None, in_flight=4,
                 sleep=time.sleep, logger=null_logger):
        if in_flight < 1:
            raise ValueError('in_flight must be at least 1')

        self.transport = transport
        self.model_id = model_id
        self.cache = MemoryCache() if cache is None else cache
        self.budget = Budget() if budget is None else budget
        self.in_flight = in_flight
        self.sleep = sleep
        self.logger = logger.set(model=model_id) if model_id else logger

        self._slots = threading.BoundedSemaphore(in_flight)
        self._active = 0
        self._lock = threading.Lock()

        self.upstream_calls = 0
        self.cache_hits = 0
        self.peak_in_flight = 0

    @property
    def live(self):
        return self.transport.live

    def complete(self, request):
        key = request.request_key

        if (cached := self.cache.get(key)) is not None:
            with self._lock:
                self.cache_hits += 1

            self.logger.debug('cache hit', request=key[:12])
            return cached

        with self._slots:
            # another caller may have completed the same request meanwhile
            if (cached := self.cache.get(key)) is not None:
                with self._lock:
                    self.cache_hits += 1

                return cached

            with self._lock:
                self._active += 1
                self.peak_in_flight = max(self.peak_in_flight, self._active)

            try:
                response = self._call(request)
            finally:
                with self._lock:
                    self._active -= 1

        if response.ok:
            self.cache.put(key, response)
        else:
            self.logger.warning('upstream completion failed', request=key[:12],
                                model=request.model_id)

        return response

    def _call(self, request):
        delay = self.backoff_base

        for attempt in range(1, self.max_attempts + 1):
            self.budget.reserve_call(request.model_id)

            with self._lock:
                self.upstream_calls += 1

            try:
                response = self.transport.send(request)
            except TransientError as exc:
                if attempt == self.max_attempts:
                    self.logger.error('retries exhausted', request=request.request_key[:12],
                                      attempts=attempt, error=str(exc))
                    raise TransportExhausted(attempt, exc) from exc

                self.logger.warning('transient failure: retrying', attempt=attempt,
                                    delay=delay, error=str(exc))
                self.sleep(delay)
                delay *= self.backoff_factor
            else:
                self.budget.charge(response.usage)
                self.logger.debug('completed', request=request.request_key[:12],
                                  tokens=response.usage.total, **self.budget.snapshot())
                return response

    def close(self):
        self.transport.close()
        self.cache.close()
