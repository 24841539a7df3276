import math

from cityqa.util.enum import StrEnum

from .error import CoLocated


class Octant(StrEnum):
    """Eight 45° compass sectors, each centered on its direction."""

    N = 'N'
    NE = 'NE'
    E = 'E'
    SE = 'SE'
    S = 'S'
    SW = 'SW'
    W = 'W'
    NW = 'NW'

    @property
    def position(self) -> int:
        return _ORDER.index(self)

    @property
    def word(self) -> str:
        return _WORDS[self]

    @property
    def opposite(self) -> 'Octant':
        return _ORDER[(self.position + 4) % 8]

    @property
    def center_bearing(self) -> float:
        """Compass bearing of the sector center (degrees)."""
        return 45.0 * self.position

    @classmethod
    def for_bearing(cls, bearing: float) -> 'Octant':
        """Octant containing compass `bearing` (degrees clockwise from north).

        Sector boundaries belong to the clockwise-next octant.

        """
        normalized = bearing % 360.0
        return _ORDER[math.floor((normalized + 22.5) / 45.0) % 8]


_ORDER = tuple(Octant)

_WORDS = {
    Octant.N: 'north',
    Octant.NE: 'northeast',
    Octant.E: 'east',
    Octant.SE: 'southeast',
    Octant.S: 'south',
    Octant.SW: 'southwest',
    Octant.W: 'west',
    Octant.NW: 'northwest',
}


def bearing(reference, subject) -> float:
    """Compass bearing (degrees, 0 at north, clockwise) from `reference`
    to `subject`.

    """
    dx = subject[0] - reference[0]
    dy = subject[1] - reference[1]

    if dx == 0 and dy == 0:
        raise CoLocated(reference, subject)

    return math.degrees(math.atan2(dx, dy)) % 360.0


def compass_octant(reference, subject) -> Octant:
    """Octant in which `subject` lies as seen from `reference`."""
    return Octant.for_bearing(bearing(reference, subject))
