import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hstumor.core import Field, ModelParams, build_grid
from hstumor.heleshaw import nutrient_profile
from hstumor.nutrient import EPS_D, classify_support, solve_nutrient


def _params(kind, c_b=1.0):
    return ModelParams(gamma=80, growth_kind="linear", nutrient_kind=kind, c_b=c_b)


def _frozen_error(model, shape, h, radius=1.0):
    # tumour edge on a cell face at every refinement level
    if shape == "1d":
        half = 4.0 if model == "vitro" else 20.0
        grid = build_grid("interval1d", (-half, half), int(round(2 * half / h)))
    else:
        outer = 4.0 if model == "vitro" else 20.0
        grid = build_grid("radial2d", (0, outer), int(round(outer / h)), ("noflux", "dirichlet_zero"))
    x = grid.centers()
    n = Field(grid, np.where(np.abs(x) < radius, 1.0, 0.0))
    c = solve_nutrient(n, _params("in" + model), tol=1e-14)
    return np.abs(c.values - nutrient_profile(x, radius, model, shape)).max()


@pytest.mark.parametrize("model", ["vitro", "vivo"])
@pytest.mark.parametrize("shape", ["1d", "radial2d"])
def test_frozen_density_second_order(model, shape):
    errs = [_frozen_error(model, shape, h) for h in (0.1, 0.05, 0.025)]
    for coarse, fine in zip(errs, errs[1:]):
        assert coarse / fine == pytest.approx(4.0, abs=0.5)
    assert errs[-1] < 1e-4


def test_constant_nutrient_is_uniform():
    g = build_grid("interval1d", (-1, 1), 10)
    c = solve_nutrient(Field.full(g, 0.5), ModelParams(c_b=2.0))
    assert np.all(c.values == 2.0)


def test_empty_tumour_gives_far_field():
    g = build_grid("interval1d", (-1, 1), 10)
    for kind in ("invitro", "invivo"):
        c = solve_nutrient(Field.zeros(g), _params(kind))
        assert np.all(c.values == 1.0)


def test_support_threshold():
    g = build_grid("interval1d", (0, 1), 4)
    mask = classify_support(Field(g, [0.0, EPS_D, 2 * EPS_D, 1.0]))
    assert mask.tolist() == [False, False, True, True]


def test_invitro_exterior_sits_at_far_field():
    g = build_grid("interval1d", (-5, 5), 100)
    x = g.centers()
    c = solve_nutrient(Field(g, np.where(np.abs(x) < 1, 0.9, 0.0)), _params("invitro"))
    assert np.all(c.values[np.abs(x) > 1] == 1.0)
    assert c.values[np.abs(x) < 1].max() < 1.0


@given(st.integers(0, 2**32 - 1), st.sampled_from(["invitro", "invivo"]), st.floats(0.1, 5.0))
@settings(max_examples=30, deadline=None)
def test_bounds_for_random_densities(seed, kind, c_b):
    rng = np.random.default_rng(seed)
    g = build_grid("interval1d", (-3, 3), 48)
    n = rng.random(g.shape) * (rng.random(g.shape) < 0.6) * 1.2
    c = solve_nutrient(Field(g, n), _params(kind, c_b))
    assert c.values.min() >= 0.0
    assert c.values.max() <= c_b


def test_bounds_on_cartesian_grid():
    g = build_grid("cartesian2d", (-2, 2), 24)
    x, y = g.mesh()
    n = np.where(np.hypot(x, y) < 1.0, 1.0, 0.0)
    for kind in ("invitro", "invivo"):
        c = solve_nutrient(Field(g, n), _params(kind))
        assert 0.0 <= c.values.min() and c.values.max() <= 1.0
        # symmetric data, symmetric answer
        assert np.allclose(c.values, c.values.T, atol=1e-9)
