"""
Channels, Choi matrices and complete positivity
===============================================

Build a few channels, look at their Choi matrices, and watch the transpose
map fail the positivity test.
"""

# %%
import numpy as np

from qdchannels import Branch, IsotropicParams, is_cptp, make_isotropic
from qdchannels.channel import amplitude_damping, isotropic_bounds, transpose_choi

np.set_printoptions(precision=4, suppress=True)

# %% The transpose is positive but its Choi matrix is the swap operator.
j = transpose_choi(2)
print(j.matrix.real)
print("spectrum:", np.linalg.eigvalsh(j.matrix))
print(is_cptp(j))

# %% Isotropic channels: t * Gamma + (1 - t) * depolarizing.
for branch in Branch:
    for n in (2, 3, 4):
        lo, hi = isotropic_bounds(n, branch)
        print(f"{branch.value:9s} n={n}: t in [{lo:+.4f}, {hi:+.4f}]")

ch = make_isotropic(IsotropicParams(np.eye(3), -0.4, Branch.TRANSPOSE))
print("Kraus rank:", len(ch.kraus), "|", is_cptp(ch))

# %% Amplitude damping is a channel, but not a unital one.
print(is_cptp(amplitude_damping(0.5)))
