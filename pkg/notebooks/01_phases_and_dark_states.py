# %% [markdown]
# # Phases of a spin in a rotating field
#
# A spin-1/2 in the field h = (w0 cos wt, w0 sin wt, w1) has a pair of cyclic
# states at polar angle chi = arctan(w0 / (w1 - w)).  Here we integrate one
# cycle numerically, split the total phase into dynamic and geometric parts,
# and compare with the closed forms.

# %%
import math

import numpy as np

from cyclic_gates import RotatingFieldSegment, cyclic_state, extract_phase_triple, single_qubit_phases
from cyclic_gates.dynamics import instantaneous_energy
from cyclic_gates.formulas import dark_state_frequency_single

# %% [markdown]
# ## One cycle, three phases

# %%
seg = RotatingFieldSegment(omega0=3.0, omega1=4.0, omega=6.25)
num = extract_phase_triple(seg, cyclic_state(seg))
ref = single_qubit_phases(3.0, 4.0, 6.25)
for name, a, b in zip(("total", "dynamic", "geometric"), num, ref):
    print(f"{name:9s}  integrated {a / math.pi:+.8f} pi   closed form {b / math.pi:+.8f} pi")

# %% [markdown]
# At w = (w0^2 + w1^2) / w1 the cyclic state has zero energy at every instant,
# so the phase is purely geometric.

# %%
w = dark_state_frequency_single(1.0, 1.0)
dark = RotatingFieldSegment(1.0, 1.0, w)
_, energy = instantaneous_energy(dark, cyclic_state(dark))
print("dark frequency", w, " max |<H>|", np.max(np.abs(energy)))
print("gamma_g / pi", extract_phase_triple(dark, cyclic_state(dark)).geometric / math.pi)

# %% [markdown]
# ## Convergence with step count
#
# The error of the fourth-order integrator drops by about 16x per doubling
# until it reaches round-off.

# %%
seg = RotatingFieldSegment(0.7, 2.2, 0.4)
ref = np.array(single_qubit_phases(0.7, 2.2, 0.4))
for steps in (256, 512, 1024, 2048, 4096):
    got = np.array(extract_phase_triple(seg, cyclic_state(seg), steps))
    print(steps, np.max(np.abs(got - ref)))
