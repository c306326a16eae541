"""
Why in vitro tumours outrun in vivo ones
========================================

The front speed is the pressure slope at the edge.  For large tumours it
tends to ``c_B G0`` in vitro but only half of that in vivo, where the
nutrient is drawn down in the surrounding tissue as well.
"""
# %%
from hstumor.heleshaw import front_speed_1d, front_speed_radial2d

print(f"{'R':>4} {'1D vitro':>9} {'1D vivo':>9} {'2D vitro':>9} {'2D vivo':>9}")
for radius in (0.5, 1.0, 2.0, 4.0, 6.0):
    print(f"{radius:4.1f} {front_speed_1d(radius, 'vitro'):9.4f} {front_speed_1d(radius, 'vivo'):9.4f}"
          f" {front_speed_radial2d(radius, 'vitro'):9.4f} {front_speed_radial2d(radius, 'vivo'):9.4f}")

# %%
# The density model reproduces the split.  The shipped 1D pair runs to
# t = 0.5 and samples the right edge every 0.01.
import numpy as np

from hstumor.experiment import oracle_trace, paper_spec
from hstumor.simulation import run_simulation

for name in ("fig6_invitro", "fig6_invivo"):
    spec = paper_spec(name)
    res = run_simulation(spec)
    ode = oracle_trace(spec)
    r = np.asarray(res.fronts.fronts)[:, 0]
    print(name, "front at t=0.5:", r[-1].round(4), "ODE:", ode.radii[-1, 0].round(4))
