import numpy as np
import pytest

from hstumor.core import (
    BC,
    BCKind,
    ConfigurationError,
    Field,
    Geometry,
    ModelParams,
    build_grid,
    total_mass,
)


def test_interval_spacing_and_centres():
    g = build_grid("interval1d", (-5, 5), 200)
    assert g.spacing == pytest.approx((0.05,))
    x = g.centers()
    assert x[0] == pytest.approx(-4.975)
    assert x[-1] == pytest.approx(4.975)
    assert g.faces().size == 201


def test_radial_grid_axis_is_no_flux():
    g = build_grid("radial2d", (0, 3), 60, "dirichlet_zero")
    assert g.bc[0][0].kind is BCKind.NO_FLUX
    assert g.bc[0][1].kind is BCKind.DIRICHLET_ZERO
    assert g.centers()[0] == pytest.approx(0.025)


def test_cartesian_mesh_is_ij_indexed():
    g = build_grid("cartesian2d", ((-2, 2), (0, 1)), (8, 4))
    x, y = g.mesh()
    assert x.shape == (8, 4)
    assert np.all(x[:, 0] == g.centers(0))
    assert np.all(y[0, :] == g.centers(1))


@pytest.mark.parametrize(
    "args",
    [
        ("interval1d", (1, 1), 10),
        ("interval1d", (0, 1), 3),
        ("interval1d", (0, np.inf), 10),
        ("radial2d", (0.5, 3), 10),
        ("cartesian2d", (0, 1), (10,)),
    ],
)
def test_bad_grids_rejected(args):
    with pytest.raises(ConfigurationError):
        build_grid(*args)


def test_bc_parsing():
    assert BC.parse("noflux").kind is BCKind.NO_FLUX
    b = BC.parse("dirichlet(0.5)")
    assert b.kind is BCKind.DIRICHLET_VALUE and b.value == 0.5
    with pytest.raises(ConfigurationError):
        BC.parse("robin")


@pytest.mark.parametrize("geometry,expected", [
    ("interval1d", 2.0),
    ("radial2d", np.pi * 4.0),
    ("cartesian2d", 4.0),
])
def test_mass_of_unit_field_is_domain_measure(geometry, expected):
    g = build_grid(geometry, (0, 2), 16)
    assert total_mass(Field.full(g, 1.0)) == pytest.approx(expected, rel=1e-14)


def test_field_validation():
    g = build_grid("interval1d", (0, 1), 8)
    with pytest.raises(ValueError):
        Field(g, np.zeros(7))
    with pytest.raises(ValueError):
        Field(g, np.full(8, np.nan))


def test_model_params_validation_and_gmax():
    assert ModelParams().g_max == 1.0
    assert ModelParams(g0=2.0, c_b=3.0, growth_kind="linear").g_max == 6.0
    for bad in ({"gamma": 0.5}, {"g0": 0.0}, {"c_b": -1.0}):
        with pytest.raises(ConfigurationError):
            ModelParams(**bad)
    with pytest.raises(ValueError):
        ModelParams(growth_kind="quadratic")


def test_geometry_dimension():
    assert Geometry.INTERVAL_1D.ndim == 1
    assert Geometry.RADIAL_2D.ndim == 1
    assert Geometry.CARTESIAN_2D.ndim == 2
