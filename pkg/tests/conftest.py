import math

import pytest

from convexiso.constructions import regular_polygon
from convexiso.geom import ConvexPolygon

SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


@pytest.fixture
def square():
    return ConvexPolygon(SQUARE)


@pytest.fixture
def hexagon():
    return regular_polygon(6)


@pytest.fixture
def pentagon():
    return regular_polygon(5)


def unit_perimeter(poly):
    return poly.scaled(1.0 / poly.perimeter())


PHI = (1 + math.sqrt(5)) / 2
