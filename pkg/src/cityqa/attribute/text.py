import decimal
import typing
from dataclasses import dataclass

from cityqa.util.enum import StrEnum


class AttributeKind(StrEnum):

    object = 'object'
    relation = 'relation'
    scene = 'scene'


@dataclass(frozen=True)
class AttributeText:
    """A serialized scene fact, and the ids of the objects it references."""

    kind: AttributeKind
    text: str
    ids: typing.Tuple[int, ...] = ()

    def __post_init__(self):
        if not isinstance(self.text, str) or not self.text.strip():
            raise ValueError('attribute text must be non-empty')

        object.__setattr__(self, 'kind', AttributeKind.parse(self.kind))
        object.__setattr__(self, 'ids', tuple(int(object_id) for object_id in self.ids))

    def __str__(self):
        return self.text

    def to_dict(self):
        return {'kind': self.kind.value, 'text': self.text, 'ids': list(self.ids)}

    @classmethod
    def from_dict(cls, data):
        return cls(data['kind'], data['text'], tuple(data.get('ids', ())))


_TENTH = decimal.Decimal('0.1')


def format_meters(value: float) -> str:
    """`value` to one decimal place, rounding half up (away from zero),
    as written in its shortest repr (so 0.05 rounds to 0.1).

    Negative zero is written as 0.0.

    """
    rounded = decimal.Decimal(repr(float(value))).quantize(_TENTH, rounding=decimal.ROUND_HALF_UP)

    if rounded == 0:
        rounded = abs(rounded)

    return str(rounded)
