"""Random states, channels and family parameters for property campaigns.

All samplers take either an integer seed or a ``numpy.random.Generator``.
"""
from typing import Optional

import numpy as np
from scipy.stats import unitary_group

from .channel import (
    Branch,
    DecoheringParams,
    IsotropicParams,
    QuantumChannel,
    QubitCPUParams,
    isotropic_bounds,
    make_decohering,
    make_isotropic,
    make_qubit_cpu,
)
from .discord import BipartiteState
from .matcore import dagger, inv_psd_sqrt, operator_norm

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def trial_seed(seed: int, index: int) -> int:
    """Per-trial seed derived from a run seed and the trial index."""
    return splitmix64((splitmix64(seed & MASK64) + index) & MASK64)


def rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def ginibre(rng, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_unitary(n: int, seed=None) -> np.ndarray:
    rng = rng_from(seed)
    return unitary_group.rvs(n, random_state=rng) if n > 1 else np.exp(2j * np.pi * rng.random((1, 1)))


def random_density_matrix(n: int, seed=None, rank: Optional[int] = None) -> np.ndarray:
    rng = rng_from(seed)
    g = ginibre(rng, n, rank or n)
    rho = g @ dagger(g)
    return rho / np.trace(rho).real


def random_hermitian(n: int, seed=None) -> np.ndarray:
    g = ginibre(rng_from(seed), n, n)
    return (g + dagger(g)) / 2


def sample_random_state(m: int, n: int, seed=None) -> BipartiteState:
    """Hilbert-Schmidt random state ``G G^dag / Tr(G G^dag)``."""
    return BipartiteState((m, n), random_density_matrix(m * n, seed))


def sample_zero_discord_state(m: int, n: int, k: Optional[int] = None, seed=None) -> BipartiteState:
    """Classical-quantum state ``sum_k p_k rho_k^A (x) |b_k><b_k|``."""
    rng = rng_from(seed)
    k = n if k is None else k
    if not 1 <= k <= n:
        raise ValueError(f"k={k} must lie in [1, {n}]")
    b = random_unitary(n, rng)
    p = rng.dirichlet(np.ones(k))
    rho = np.zeros((m * n, m * n), dtype=complex)
    for i in range(k):
        proj = np.outer(b[:, i], b[:, i].conj())
        rho += p[i] * np.kron(random_density_matrix(m, rng), proj)
    return BipartiteState((m, n), rho)


def sample_random_channel(n: int, kraus_rank: int = 2, seed=None) -> QuantumChannel:
    """Channel from a random isometry ``C^n -> C^(n*rank)`` cut into blocks."""
    rng = rng_from(seed)
    q, r = np.linalg.qr(ginibre(rng, n * kraus_rank, n))
    q = q * (np.diag(r) / np.abs(np.diag(r)))
    return QuantumChannel(tuple(q[i * n:(i + 1) * n] for i in range(kraus_rank)))


def sample_mixed_unitary_channel(n: int, terms: int = 2, seed=None) -> QuantumChannel:
    """Unital channel ``sum_k p_k U_k . U_k^dag``."""
    rng = rng_from(seed)
    p = rng.dirichlet(np.ones(terms))
    return QuantumChannel(tuple(np.sqrt(pk) * random_unitary(n, rng) for pk in p))


def sample_isotropic_params(n: int, seed=None, branch: Optional[Branch] = None,
                            min_abs_t: float = 0.05) -> IsotropicParams:
    rng = rng_from(seed)
    if branch is None:
        branch = Branch.UNITARY if rng.random() < 0.5 else Branch.TRANSPOSE
    lo, hi = isotropic_bounds(n, branch)
    while True:
        t = rng.uniform(lo, hi)
        if abs(t) >= min(min_abs_t, 0.5 * abs(lo)):
            break
    return IsotropicParams(random_unitary(n, rng), float(t), branch)


def sample_povm(n: int, seed=None, outcomes: Optional[int] = None) -> list:
    rng = rng_from(seed)
    gs = [ginibre(rng, n, int(rng.integers(1, n + 1))) for _ in range(outcomes or n)]
    parts = [g @ dagger(g) for g in gs]
    s_inv = inv_psd_sqrt(sum(parts))
    return [s_inv @ w @ s_inv for w in parts]


def sample_decohering_params(n: int, seed=None) -> DecoheringParams:
    rng = rng_from(seed)
    return DecoheringParams(tuple(sample_povm(n, rng)), random_unitary(n, rng))


def sample_qubit_cpu_params(seed=None, lam: Optional[float] = None) -> QubitCPUParams:
    """Random contraction ``[[a, b], [c, -a]]`` scaled into the unit ball."""
    rng = rng_from(seed)
    lam = float(rng.uniform(0, 1)) if lam is None else lam
    a, b, c = (complex(z) for z in ginibre(rng, 1, 3)[0])
    s = np.array([[a, b], [c, -a]])
    s = s * rng.uniform(0.05, 1.0) / operator_norm(s)
    return QubitCPUParams(random_unitary(2, rng), lam, complex(s[0, 0]), complex(s[0, 1]), complex(s[1, 0]))


def sample_isotropic(n: int, seed=None, **kw) -> QuantumChannel:
    return make_isotropic(sample_isotropic_params(n, seed, **kw))


def sample_decohering(n: int, seed=None) -> QuantumChannel:
    return make_decohering(sample_decohering_params(n, seed))


def sample_qubit_cpu(seed=None, **kw) -> QuantumChannel:
    return make_qubit_cpu(sample_qubit_cpu_params(seed, **kw))


def sample_commuting_hermitian_pair(n: int, seed=None):
    """Two hermitian matrices sharing a random eigenbasis."""
    rng = rng_from(seed)
    v = random_unitary(n, rng)
    a = (v * rng.standard_normal(n)) @ dagger(v)
    b = (v * rng.standard_normal(n)) @ dagger(v)
    return a, b
