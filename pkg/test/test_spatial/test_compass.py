import pytest

from cityqa.spatial import CoLocated, Octant, bearing, compass_octant


NEWS_CENTER = (21.2, 417.3, 36.9)
PARKING_LOT = (54.1, 448.9, 5.23)


def test_news_center():
    assert compass_octant(PARKING_LOT, NEWS_CENTER) is Octant.SW
    assert compass_octant(PARKING_LOT, NEWS_CENTER).word == 'southwest'
    assert compass_octant(NEWS_CENTER, PARKING_LOT) is Octant.NE


@pytest.mark.parametrize('subject, expected', [
    ((0, 1), Octant.N),
    ((1, 1), Octant.NE),
    ((1, 0), Octant.E),
    ((1, -1), Octant.SE),
    ((0, -1), Octant.S),
    ((-1, -1), Octant.SW),
    ((-1, 0), Octant.W),
    ((-1, 1), Octant.NW),
])
def test_cardinal(subject, expected):
    assert compass_octant((0, 0), subject) is expected


def test_bearing():
    assert bearing((0, 0), (0, 5)) == 0
    assert bearing((0, 0), (5, 0)) == pytest.approx(90)
    assert bearing((0, 0), (0, -5)) == pytest.approx(180)
    assert bearing((0, 0), (-5, 0)) == pytest.approx(270)


@pytest.mark.parametrize('degrees, expected', [
    (0.0, Octant.N),
    (22.4999, Octant.N),
    (22.5, Octant.NE),
    (67.5, Octant.E),
    (337.5, Octant.N),
    (337.4999, Octant.NW),
    (360.0, Octant.N),
    (-45.0, Octant.NW),
])
def test_boundaries(degrees, expected):
    assert Octant.for_bearing(degrees) is expected


def test_opposite():
    for octant in Octant:
        assert octant.opposite.opposite is octant
        assert octant.opposite.center_bearing == (octant.center_bearing + 180) % 360


def test_colocated():
    with pytest.raises(CoLocated):
        compass_octant((3, 4, 0), (3, 4, 9))
