from .cache import LmdbCache, MemoryCache, open_cache  # noqa: F401
from .client import Budget, Gateway  # noqa: F401
from .error import (  # noqa: F401
    BudgetExceeded,
    FixtureCorrupt,
    FixtureMiss,
    GatewayError,
    InvalidRequest,
    MissingCredential,
    TransientError,
    TransportError,
    TransportExhausted,
)
from .fixture import (  # noqa: F401
    RecordingTransport,
    ReplayTransport,
    dumps_fixture,
    fixture_digest,
    fixture_entry,
    load_fixture,
    record_fixture,
)
from .request import (  # noqa: F401
    CompletionRequest,
    CompletionResponse,
    FinishReason,
    ImagePart,
    TextPart,
    Usage,
    image_digest,
)
from .transport import CallableTransport, OpenAIChatTransport, Transport  # noqa: F401
