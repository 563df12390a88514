"""
Which local channels keep zero discord?
=======================================

Classify channels from each family and a few that fall outside all of them.
"""

# %%
import numpy as np

from qdchannels import classify, samplers
from qdchannels.campaigns import sample_unital_non_isotropic
from qdchannels.channel import amplitude_damping

rng = np.random.default_rng(1)

channels = {
    "isotropic n=3": samplers.sample_isotropic(3, rng),
    "decohering n=3": samplers.sample_decohering(3, rng),
    "qubit form": samplers.sample_qubit_cpu(rng),
    "amplitude damping": amplitude_damping(0.4),
    "random unital n=3": sample_unital_non_isotropic(3, rng),
}

# %%
for name, ch in channels.items():
    c = classify(ch)
    line = f"{name:18s} -> {c.verdict.value:20s} residual {c.residual:.1e}"
    if c.witness is not None:
        line += f"   witness after {c.witness.tries} tries: {c.witness.label}"
    print(line)

# %% Recovered parameters of the isotropic channel
p = classify(channels["isotropic n=3"]).params
print("t =", round(p.t, 6), "branch =", p.branch.value)
