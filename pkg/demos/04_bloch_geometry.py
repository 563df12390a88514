"""
Qubit channels on the Bloch ball
================================

Commuting qubit states have collinear Bloch vectors, and channels in the
qubit family act as affine maps that keep lines through the centre.
"""

# %%
import numpy as np

from qdchannels import channel_bloch_map, commute_iff_collinear, from_bloch, make_qubit_cpu, samplers
from qdchannels.bloch import emit_csv, param_bloch_map

rng = np.random.default_rng(4)
r = np.array([0.1, -0.2, 0.3])
print(commute_iff_collinear(from_bloch(r), from_bloch(-0.5 * r)))
print(commute_iff_collinear(from_bloch(r), from_bloch([0.3, 0.0, 0.0])))

# %% Parameter formula against the map read off the channel
p = samplers.sample_qubit_cpu_params(rng)
m = channel_bloch_map(make_qubit_cpu(p))
print(np.round(m.linear, 4))
print("formula deviation:", np.abs(m.linear - param_bloch_map(p).linear).max())

# %% Sphere points and their images, for plotting elsewhere
print(emit_csv(m, "bloch_map.csv", count=200), "rows -> bloch_map.csv")
