import typing
from dataclasses import dataclass, field

from cityqa.util.enum import StrEnum

from .error import InvalidEncoderConfig


class Role(StrEnum):

    object = 'object'
    relationship = 'relationship'
    scene = 'scene'


class Stream(StrEnum):
    """Feature streams which may be disabled (zeroed) for ablation."""

    object_view = 'object.view'
    object_shape = 'object.shape'
    object_landmark = 'object.landmark'
    relationship_geometry = 'relationship.geometry'
    relationship_landmark = 'relationship.landmark'
    scene_view = 'scene.view'
    scene_landmark = 'scene.landmark'


@dataclass(frozen=True)
class EncoderConfig:
    """Encoder dimensions.

    * d: feature dimension
    * D_llm: language-model embedding dimension
    * l: text length in tokens
    * C: view patch count
    * K: neighbor count

    """
    d: int = 32
    D_llm: int = 64
    l: int = 16  # noqa: E741
    C: int = 4
    K: int = 4
    seed: int = 0
    disabled_streams: typing.FrozenSet[Stream] = field(default=frozenset())

    def __post_init__(self):
        for name in ('d', 'D_llm', 'l', 'C', 'K'):
            value = getattr(self, name)

            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise InvalidEncoderConfig(f'{name} must be a positive integer not {value!r}')

        if isinstance(self.seed, bool) or not isinstance(self.seed, int) or self.seed < 0:
            raise InvalidEncoderConfig(f'seed must be a non-negative integer not {self.seed!r}')

        try:
            streams = frozenset(Stream.parse(stream) for stream in self.disabled_streams)
        except ValueError as exc:
            raise InvalidEncoderConfig(str(exc)) from None

        object.__setattr__(self, 'disabled_streams', streams)

    @classmethod
    def from_conf(cls, section):
        return cls(
            section['d'],
            section['D_llm'],
            section['l'],
            section['C'],
            section['K'],
            section['seed'],
            frozenset(section.get('disabled_streams', ())),
        )

    def enabled(self, stream) -> bool:
        return Stream.parse(stream) not in self.disabled_streams
