import math
import pathlib
import typing
from dataclasses import dataclass

from PIL import Image

from cityqa.util.enum import StrEnum
from cityqa.util.format import dump_canonical
from cityqa.util.ident import digest_bytes, digest_text

from .error import InvalidRequest


@dataclass(frozen=True)
class TextPart:

    text: str

    def canonical(self):
        return {'text': self.text}


@dataclass(frozen=True)
class ImagePart:
    """Reference to a PNG image, identified by the digest of its pixels.

    The path locates the bytes for transports which send them; it is
    not part of the request's identity.

    """
    digest: str
    path: typing.Optional[pathlib.Path] = None

    @classmethod
    def from_path(cls, path):
        path = pathlib.Path(path)
        return cls(image_digest(path), path)

    def canonical(self):
        return {'image': self.digest}


def image_digest(path) -> str:
    """Digest of an image's dimensions and decoded RGB pixels.

    Independent of the encoder which wrote the file, and equal to the
    digest of the raster it was written from.

    """
    with Image.open(path) as image:
        pixels = image.convert('RGB')
        header = f'{pixels.height}x{pixels.width}:'.encode('ascii')
        return digest_bytes(header + pixels.tobytes())


def part_from_canonical(data):
    if 'text' in data:
        return TextPart(data['text'])

    if 'image' in data:
        return ImagePart(data['image'])

    raise InvalidRequest(f'unrecognized request part: {data!r}')


@dataclass(frozen=True)
class CompletionRequest:
    """A content-addressed completion request.

    `request_key` is the SHA-256 digest of the canonical serialization of
    all other fields (images by digest).

    """
    model_id: str
    system_text: str
    user_parts: typing.Tuple[typing.Union[TextPart, ImagePart], ...]
    temperature: float = 0.0
    max_output_tokens: int = 1024

    def __post_init__(self):
        parts = tuple(self.user_parts)

        if not parts:
            raise InvalidRequest('request requires at least one user part')

        if not all(isinstance(part, (TextPart, ImagePart)) for part in parts):
            raise InvalidRequest('user parts must be TextPart or ImagePart')

        temperature = float(self.temperature)

        if not (math.isfinite(temperature) and 0 <= temperature <= 2):
            raise InvalidRequest(f'temperature must lie in [0, 2] not {self.temperature!r}')

        if self.max_output_tokens < 1:
            raise InvalidRequest('max_output_tokens must be positive')

        if not self.model_id:
            raise InvalidRequest('model_id is required')

        object.__setattr__(self, 'user_parts', parts)
        object.__setattr__(self, 'temperature', temperature)
        object.__setattr__(self, 'max_output_tokens', int(self.max_output_tokens))
        object.__setattr__(self, 'request_key', digest_text(dump_canonical(self.canonical())))

    def canonical(self):
        return {
            'model_id': self.model_id,
            'system_text': self.system_text,
            'user_parts': [part.canonical() for part in self.user_parts],
            'temperature': self.temperature,
            'max_output_tokens': self.max_output_tokens,
        }

    @classmethod
    def from_canonical(cls, data):
        return cls(
            data['model_id'],
            data['system_text'],
            tuple(part_from_canonical(part) for part in data['user_parts']),
            data['temperature'],
            data['max_output_tokens'],
        )

    @property
    def text(self):
        """The text parts, joined."""
        return '\n'.join(part.text for part in self.user_parts if isinstance(part, TextPart))

    @property
    def images(self):
        return tuple(part for part in self.user_parts if isinstance(part, ImagePart))


class FinishReason(StrEnum):

    stop = 'stop'
    length = 'length'
    error = 'error'


class Usage(typing.NamedTuple):

    input_tokens: int = 0
    output_tokens: int = 0

    @property
    def total(self):
        return self.input_tokens + self.output_tokens


@dataclass(frozen=True)
class CompletionResponse:

    text: str
    finish_reason: FinishReason = FinishReason.stop
    usage: Usage = Usage()

    def __post_init__(self):
        finish_reason = FinishReason.parse(self.finish_reason)

        if not self.text and finish_reason is not FinishReason.error:
            raise InvalidRequest('response text may be empty only when finish_reason is error')

        object.__setattr__(self, 'finish_reason', finish_reason)
        object.__setattr__(self, 'usage', Usage(*self.usage))

    @property
    def ok(self):
        return self.finish_reason is not FinishReason.error

    def to_dict(self):
        return {
            'text': self.text,
            'finish_reason': self.finish_reason.value,
            'usage': {'input_tokens': self.usage.input_tokens,
                      'output_tokens': self.usage.output_tokens},
        }

    @classmethod
    def from_dict(cls, data):
        usage = data.get('usage', {})
        return cls(
            data['text'],
            data.get('finish_reason', 'stop'),
            Usage(int(usage.get('input_tokens', 0)), int(usage.get('output_tokens', 0))),
        )
