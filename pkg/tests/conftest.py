import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from klmedian.geometry import PolygonalCurve

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

coord = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False, width=64)


@st.composite
def curves(draw, min_vertices=1, max_vertices=8, d=2):
    m = draw(st.integers(min_vertices, max_vertices))
    pts = draw(st.lists(st.lists(coord, min_size=d, max_size=d), min_size=m, max_size=m))
    return PolygonalCurve(pts)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
