"""
Nutrient around a frozen tumour
===============================

With the tumour held fixed the nutrient solve is a linear elliptic problem.
In vitro the nutrient is only consumed inside the tumour and is pinned to
``c_B`` outside; in vivo it also diffuses through the healthy tissue.
"""
# %%
import numpy as np

from hstumor.core import Field, ModelParams, build_grid
from hstumor.heleshaw import nutrient_profile
from hstumor.nutrient import solve_nutrient

for model in ("vitro", "vivo"):
    print(model)
    for h in (0.1, 0.05, 0.025):
        grid = build_grid("interval1d", (-20, 20), int(round(40 / h)))
        x = grid.centers()
        tumour = Field(grid, np.where(np.abs(x) < 1.0, 1.0, 0.0))
        c = solve_nutrient(tumour, ModelParams(growth_kind="linear", nutrient_kind="in" + model), tol=1e-14)
        err = np.abs(c.values - nutrient_profile(x, 1.0, model, "1d")).max()
        print(f"  h={h:<6} max error {err:.2e}")

# %%
# Halving the mesh divides the error by four: the scheme is second order,
# including across the tumour edge.
