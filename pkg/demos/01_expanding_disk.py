"""
Expanding disk with constant growth
===================================

A disk of density 0.99 grows with rate one.  For large gamma the density
model behaves like a free-boundary problem whose radius is ``0.8 exp(t/2)``.
"""
# %%
# Load the shipped configuration and run it.  Twenty thousand semi-implicit
# steps on sixty radial cells take a few seconds.
import numpy as np

from hstumor.experiment import paper_spec
from hstumor.front import extract_front
from hstumor.heleshaw import ball_radius
from hstumor.simulation import run_simulation

spec = paper_spec("fig1_gamma80")
result = run_simulation(spec)

# %%
# Compare the half-level crossing with the analytic radius at each snapshot.
print(f"{'t':>7} {'numerical':>10} {'analytic':>10}")
for snap in result.snapshots:
    front = extract_front(snap.n).outer
    print(f"{snap.time:7.4f} {front:10.4f} {ball_radius(snap.time, 0.8, 1.0, 2):10.4f}")

# %%
# The plateau sits a little below one: the pressure 0.99**80 is already 0.45,
# so the density cannot pile up further.
last = result.snapshots[-1]
print("plateau", last.n.values[:5].round(4))
print("mass", np.round(result.fronts.masses[0], 4), "->", np.round(result.fronts.masses[-1], 4))
