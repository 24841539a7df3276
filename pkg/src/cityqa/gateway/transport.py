"""Transport adapters: provider wire formats behind a single `send`."""
import base64
import os
import threading

import httpx

from .error import MissingCredential, TransientError, TransportError
from .request import CompletionResponse, FinishReason, ImagePart, TextPart, Usage


class Transport:
    """Interface of transports: `send(request) -> CompletionResponse`.

    `send` raises `TransientError` for failures worth retrying and
    `TransportError` otherwise. `live` transports reach the network.

    """
    live = True

    def send(self, request):
        raise NotImplementedError

    def close(self):
        pass


class CallableTransport(Transport):
    """Transport delegating to a function of the request.

    The function may return a `CompletionResponse`, or text (taken as a
    stopped completion with zero usage).

    """
    live = False

    def __init__(self, func):
        self.func = func
        self.calls = 0
        self._lock = threading.Lock()

    def send(self, request):
        with self._lock:
            self.calls += 1

        result = self.func(request)

        if isinstance(result, CompletionResponse):
            return result

        return CompletionResponse(str(result))


class OpenAIChatTransport(Transport):
    """OpenAI-compatible `/chat/completions` over httpx.

    The API key is read from the environment variable named by
    `api_key_env` upon construction; it is never persisted.

    """
    transient_statuses = frozenset((408, 409, 425, 429, 500, 502, 503, 504))

    finish_reasons = {
        'stop': FinishReason.stop,
        'length': FinishReason.length,
    }

    def __init__(self, endpoint, api_key_env, timeout=60.0, client=None):
        api_key = os.getenv(api_key_env)

        if not api_key:
            raise MissingCredential(api_key_env)

        self.endpoint = endpoint.rstrip('/')
        self.client = client or httpx.Client(timeout=timeout)
        self._headers = {'Authorization': f'Bearer {api_key}'}

    @staticmethod
    def _encode_part(part):
        if isinstance(part, TextPart):
            return {'type': 'text', 'text': part.text}

        if isinstance(part, ImagePart):
            if part.path is None:
                raise TransportError(f'image {part.digest} has no local path to send')

            encoded = base64.b64encode(part.path.read_bytes()).decode('ascii')
            return {'type': 'image_url', 'image_url': {'url': f'data:image/png;base64,{encoded}'}}

        raise TransportError(f'unsupported request part: {part!r}')

    def payload(self, request):
        messages = []

        if request.system_text:
            messages.append({'role': 'system', 'content': request.system_text})

        messages.append({
            'role': 'user',
            'content': [self._encode_part(part) for part in request.user_parts],
        })

        return {
            'model': request.model_id,
            'messages': messages,
            'temperature': request.temperature,
            'max_tokens': request.max_output_tokens,
        }

    def send(self, request):
        try:
            response = self.client.post(f'{self.endpoint}/chat/completions',
                                        json=self.payload(request),
                                        headers=self._headers)
        except (httpx.TimeoutException, httpx.NetworkError, httpx.RemoteProtocolError) as exc:
            raise TransientError(f'{exc.__class__.__name__}: {exc}') from exc

        if response.status_code in self.transient_statuses:
            raise TransientError(f'upstream returned {response.reason_phrase}',
                                 response.status_code)

        if response.is_error:
            raise TransportError(f'upstream rejected request: {response.text[:200]}',
                                 response.status_code)

        try:
            body = response.json()
            choice = body['choices'][0]
            text = choice['message'].get('content') or ''
        except (ValueError, KeyError, IndexError, TypeError) as exc:
            raise TransportError(f'malformed upstream response: {exc}') from exc

        usage = body.get('usage') or {}
        finish_reason = self.finish_reasons.get(choice.get('finish_reason'), FinishReason.stop)

        if not text:
            finish_reason = FinishReason.error

        return CompletionResponse(
            text,
            finish_reason,
            Usage(int(usage.get('prompt_tokens', 0)), int(usage.get('completion_tokens', 0))),
        )

    def close(self):
        self.client.close()
