"""
Annuli and their front ODEs
===========================

An annulus keeps growing outward while its inner edge first closes in.
The two edges follow a small ODE; two nested annuli follow two independent
copies of it until they touch.
"""
# %%
import numpy as np

from hstumor.experiment import oracle_trace, paper_spec
from hstumor.front import extract_front
from hstumor.heleshaw import FrontOde, integrate_front_ode
from hstumor.simulation import run_simulation

spec = paper_spec("fig2_gamma80")
res = run_simulation(spec)
ode = oracle_trace(spec)
print("single annulus at t =", res.state.time)
print("  density fronts", extract_front(res.state.n).positions.round(4))
print("  ODE            ", ode.radii[-1].round(4))

# %%
# The enclosed area grows like exp(t), exactly as the total mass does.
area = np.pi * (ode.radii[:, 1] ** 2 - ode.radii[:, 0] ** 2)
print("  area / (0.64 pi e^t) deviates by", np.abs(area / (0.64 * np.pi * np.exp(ode.times)) - 1).max())

# %%
# Two nested annuli: left long enough, the gap between them closes and the
# integration stops with an event message.
long = integrate_front_ode(FrontOde("double_annulus"), [0.6, 0.9, 1.5, 1.8], 3.0, 1e-3)
print("double annulus stopped at t =", long.times[-1].round(3), "-", long.event)
