"""
Zero discord and numerical discord
==================================

The block test is exact; the optimiser is the slow, independent check.
"""

# %%
import numpy as np

from qdchannels import BipartiteState, discord_b, is_zero_discord_b, samplers
from qdchannels.matcore import kron, matrix_unit

psi = np.zeros(4, dtype=complex)
psi[[0, 3]] = 1 / np.sqrt(2)
bell = BipartiteState((2, 2), np.outer(psi, psi.conj()))
print(is_zero_discord_b(bell), "D_B =", discord_b(bell).value)

# %% Mixture of two non-orthogonal pure states on B
zero = np.diag([1.0, 0.0])
plus = np.full((2, 2), 0.5)
rho = 0.5 * (kron(matrix_unit(0, 0, 2), zero) + kron(matrix_unit(1, 1, 2), plus))
s = BipartiteState((2, 2), rho)
print(is_zero_discord_b(s))
print("D_B =", discord_b(s).value, " D_A =", discord_b(s.swapped()).value)

# %% A decohering channel on B removes discord from any state.
rng = np.random.default_rng(3)
state = samplers.sample_random_state(2, 3, rng)
image = state.apply_local(samplers.sample_decohering(3, rng))
print("before:", discord_b(state).value)
print("after: ", discord_b(image).value, is_zero_discord_b(image))
