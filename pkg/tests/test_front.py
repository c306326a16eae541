import numpy as np
import pytest

from hstumor.core import Field, build_grid
from hstumor.front import count_components, extract_front, front_error, numerical_trace
from hstumor.heleshaw import FrontTrace


def test_linear_interpolated_crossing():
    g = build_grid("radial2d", (0, 1), 10)
    # centres 0.05, 0.15, ...; n = 1 at 0.45 and 0.25 at 0.55
    n = np.where(g.centers() < 0.5, 1.0, 0.0)
    n[5] = 0.25
    fs = extract_front(Field(g, n))
    assert len(fs) == 1
    assert fs.outer == pytest.approx(0.45 + 0.1 * (0.5 / 0.75))


def test_annulus_has_rising_and_falling_crossings():
    g = build_grid("radial2d", (0, 3), 60)
    r = g.centers()
    fs = extract_front(Field(g, np.where((r > 0.6) & (r < 1.0), 0.99, 0.0)))
    assert [c.rising for c in fs.crossings] == [True, False]
    lo, hi = fs.positions
    assert lo == pytest.approx(0.6, abs=0.05) and hi == pytest.approx(1.0, abs=0.05)


def test_no_front_in_empty_field():
    g = build_grid("interval1d", (0, 1), 8)
    assert extract_front(Field.zeros(g)).outer is None


def test_threshold_validation_and_2d_guard():
    g = build_grid("interval1d", (0, 1), 8)
    with pytest.raises(ValueError):
        extract_front(Field.zeros(g), threshold=1.5)
    with pytest.raises(ValueError):
        extract_front(Field.zeros(build_grid("cartesian2d", (0, 1), 8)))


def test_component_count():
    g = build_grid("cartesian2d", (0, 1), 10)
    n = np.zeros(g.shape)
    n[1:3, 1:3] = 1.0
    n[6:9, 6:9] = 1.0
    assert count_components(Field(g, n)) == 2
    n[3:6, 2] = 1.0
    n[5, 2:7] = 1.0
    assert count_components(Field(g, n)) == 1
    # diagonal contact is not a connection
    m = np.zeros(g.shape)
    m[2, 2] = m[3, 3] = 1.0
    assert count_components(Field(g, m)) == 2


def test_front_error_against_trace():
    t = np.linspace(0, 1, 11)
    ana = FrontTrace(t, 1.0 + t)
    num = numerical_trace(t[::2], 1.0 + t[::2] + 0.01 * t[::2])
    err = front_error(num, ana)
    assert err.final_abs[0] == pytest.approx(0.01)
    assert err.max_abs[0] == pytest.approx(0.01)


def test_front_error_shape_mismatch():
    t = np.linspace(0, 1, 3)
    with pytest.raises(ValueError):
        front_error(numerical_trace(t, np.ones((3, 2))), FrontTrace(t, np.ones(3)))
