# %% [markdown]
# # Gates from cyclic evolutions
#
# A cyclic evolution with phase gamma on |psi+> and -gamma on |psi-> is the
# gate U(chi, gamma) = cos(gamma) I + i sin(gamma)(cos(chi) sz + sin(chi) sx).

# %%
import math

import numpy as np

from cyclic_gates import (RotatingFieldSegment, build_single_qubit_gate, compose_cnot,
                          cyclic_state, evolution_matrix, extract_phase_triple, noncommutable,
                          rotate_field_axis)
from cyclic_gates.gates import CNOT_REFERENCE

# %% [markdown]
# The propagator of one cycle matches the gate built from (chi, gamma).

# %%
seg = rotate_field_axis(RotatingFieldSegment(1.0, 1.0, 2.0), math.pi / 2)
gamma = extract_phase_triple(seg, cyclic_state(seg)).total
u = evolution_matrix(seg)
print(np.round(u, 6))
print("deviation", np.max(np.abs(u - build_single_qubit_gate(seg.cyclic_chi, gamma))))

# %% [markdown]
# Two gates generate a universal set when sin g1 sin g2 sin(c2 - c1) != 0.

# %%
print(noncommutable(0.0, math.pi / 2, math.pi / 2, math.pi / 2))
print(noncommutable(0.3, math.pi, 1.0, 0.5))

# %% [markdown]
# Composing conditional phases gives CNOT up to a local phase.

# %%
print(np.round(compose_cnot(), 12))
print("max deviation", np.max(np.abs(compose_cnot() - CNOT_REFERENCE)))
