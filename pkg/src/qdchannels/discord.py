"""Zero-discord detection via the block criterion, and numerical discord
``D_B`` by minimisation over rank-one projective measurements on B.

A state on ``C^m (x) C^n`` is split into blocks ``rho = sum_ij E_ij (x) B_ij``.
It has zero discord (up to B) iff all ``B_ij`` are mutually commuting normal
operators. Entropies are in bits.
"""
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import minimize

from .errors import DimensionMismatch, NotDensityMatrix, UnsupportedDimension
from .matcore import (
    as_matrix,
    commutator,
    dagger,
    eig_hermitian,
    frob,
    hermitian_residual,
    partial_trace,
    traceless_hermitian_basis,
)

EIG_CLAMP = 1e-12
PROB_CUTOFF = 1e-14


@dataclass(frozen=True, eq=False)
class BipartiteState:
    dims: Tuple[int, int]
    rho: np.ndarray

    def __post_init__(self):
        m, n = (int(d) for d in self.dims)
        rho = as_matrix(self.rho)
        if rho.shape[0] != m * n:
            raise DimensionMismatch(f"rho of size {rho.shape[0]} is not {m}x{n}")
        object.__setattr__(self, "dims", (m, n))
        object.__setattr__(self, "rho", rho)

    @property
    def dim_a(self) -> int:
        return self.dims[0]

    @property
    def dim_b(self) -> int:
        return self.dims[1]

    def validate(self, psd_tol: float = 1e-9, trace_tol: float = 1e-10) -> "BipartiteState":
        check_density_matrix(self.rho, psd_tol, trace_tol)
        return self

    def reduced(self, keep: str) -> np.ndarray:
        return partial_trace(self.rho, self.dims, keep)

    def swapped(self) -> "BipartiteState":
        m, n = self.dims
        t = self.rho.reshape(m, n, m, n).transpose(1, 0, 3, 2)
        return BipartiteState((n, m), t.reshape(m * n, m * n))

    def apply_local(self, channel) -> "BipartiteState":
        """Image under ``id_A (x) channel``."""
        m, n = self.dims
        b = blocks(self)
        out = np.empty_like(b)
        for i in range(m):
            for j in range(m):
                out[i, j] = channel(b[i, j])
        return from_blocks(out)


@dataclass(frozen=True, eq=False)
class MeasurementBasis:
    """Rank-one projectors ``|u_k><u_k|`` from the columns of a unitary."""

    vectors: np.ndarray

    @property
    def projectors(self) -> List[np.ndarray]:
        v = self.vectors
        return [np.outer(v[:, k], v[:, k].conj()) for k in range(v.shape[1])]


@dataclass(frozen=True)
class DiscordConfig:
    seed: int = 0
    grid: Tuple[int, int] = (64, 128)
    multistarts: int = 32
    xatol: float = 1e-7
    fatol: float = 1e-12
    maxiter: int = 4000


@dataclass(frozen=True, eq=False)
class DiscordResult:
    value: float
    argmin_basis: MeasurementBasis
    iterations: int
    converged: bool


@dataclass(frozen=True)
class ZeroDiscordVerdict:
    zero: bool
    residual: float
    witness: Optional[str] = None

    def __bool__(self):
        return self.zero


def check_density_matrix(rho, psd_tol: float = 1e-9, trace_tol: float = 1e-10) -> np.ndarray:
    rho = as_matrix(rho)
    if hermitian_residual(rho) > 1e-10:
        raise NotDensityMatrix("matrix is not hermitian")
    if abs(np.trace(rho) - 1) > trace_tol:
        raise NotDensityMatrix(f"trace {np.trace(rho).real:.12g} != 1")
    w = eig_hermitian(rho).eigenvalues
    if w[0] < -psd_tol:
        raise NotDensityMatrix(f"eigenvalue {w[0]:.3g} < 0")
    return rho


def blocks(s: BipartiteState) -> np.ndarray:
    """Array ``b`` with ``b[i, j] = B_ij`` (shape ``(m, m, n, n)``)."""
    m, n = s.dims
    return s.rho.reshape(m, n, m, n).transpose(0, 2, 1, 3).copy()


def from_blocks(b: np.ndarray) -> BipartiteState:
    m, _, n, _ = b.shape
    return BipartiteState((m, n), b.transpose(0, 2, 1, 3).reshape(m * n, m * n))


def block_residual(s: BipartiteState) -> Tuple[float, Optional[str]]:
    """Largest normality/commutator defect among the blocks, with its label."""
    b = blocks(s)
    m = s.dim_a
    worst, label = 0.0, None
    for i in range(m):
        for j in range(m):
            bij = b[i, j]
            r = frob(bij @ dagger(bij) - dagger(bij) @ bij)
            if r > worst:
                worst, label = r, f"B_{i + 1}{j + 1} not normal"
    flat = [(i, j) for i in range(m) for j in range(m)]
    for p, (i, j) in enumerate(flat):
        for k, l in flat[p + 1:]:
            r = frob(commutator(b[i, j], b[k, l]))
            if r > worst:
                worst, label = r, f"[B_{i + 1}{j + 1}, B_{k + 1}{l + 1}] != 0"
    return worst, label


def is_zero_discord_b(s: BipartiteState, tol: float = 1e-9) -> ZeroDiscordVerdict:
    """Block criterion: zero discord iff every ``B_ij`` is normal and all
    blocks (adjoints included, since ``B_ji = B_ij^dag``) commute."""
    b = blocks(s)
    m = s.dim_a
    for i in range(m):
        for j in range(m):
            bij = b[i, j]
            r = frob(bij @ dagger(bij) - dagger(bij) @ bij)
            if r > tol:
                return ZeroDiscordVerdict(False, r, f"B_{i + 1}{j + 1} not normal")
    flat = [(i, j) for i in range(m) for j in range(m)]
    worst = 0.0
    for p, (i, j) in enumerate(flat):
        for k, l in flat[p + 1:]:
            r = frob(commutator(b[i, j], b[k, l]))
            if r > tol:
                return ZeroDiscordVerdict(False, r, f"[B_{i + 1}{j + 1}, B_{k + 1}{l + 1}] != 0")
            worst = max(worst, r)
    return ZeroDiscordVerdict(True, worst)


def _entropy_of_spectrum(w: np.ndarray) -> float:
    if w.min() < -EIG_CLAMP:
        raise NotDensityMatrix(f"eigenvalue {w.min():.3g} < 0")
    w = w[w > 0]
    return float(-np.sum(w * np.log2(w)))


def von_neumann_entropy(rho) -> float:
    rho = as_matrix(rho)
    return _entropy_of_spectrum(eig_hermitian(rho).eigenvalues)


def mutual_information(s: BipartiteState) -> float:
    return (
        von_neumann_entropy(s.reduced("A"))
        + von_neumann_entropy(s.reduced("B"))
        - von_neumann_entropy(s.rho)
    )


def post_measurement(s: BipartiteState, basis: MeasurementBasis) -> List[Tuple[float, np.ndarray]]:
    """Outcome probabilities and normalised post-measurement states."""
    m, n = s.dims
    if basis.vectors.shape[0] != n:
        raise DimensionMismatch(f"basis of dim {basis.vectors.shape[0]} for B of dim {n}")
    out = []
    eye = np.eye(m)
    for proj in basis.projectors:
        p_op = np.kron(eye, proj)
        unnorm = p_op @ s.rho @ p_op
        p = float(np.trace(unnorm).real)
        out.append((p, unnorm / p if p > PROB_CUTOFF else unnorm))
    return out


def conditional_entropy_of_measurement(s: BipartiteState, basis: MeasurementBasis) -> float:
    """``S(rho | Pi) = sum_k p_k S(rho_k)`` over outcomes with ``p_k`` above cutoff."""
    return sum(
        p * von_neumann_entropy(rk) for p, rk in post_measurement(s, basis) if p > PROB_CUTOFF
    )


# ---------------------------------------------------------------------------
# Discord optimisation
# ---------------------------------------------------------------------------


def _conditional_entropies(b: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Batched ``sum_k p_k S(rho_A|k)`` for measurement bases ``u`` of shape
    ``(batch, n, n)`` (columns are basis vectors)."""
    # rho_A|k unnormalised: (ij) entry <u_k|B_ij|u_k>
    cond = np.einsum("zak,ijab,zbk->zkij", u.conj(), b, u)
    cond = 0.5 * (cond + np.conj(np.swapaxes(cond, -1, -2)))
    w = np.linalg.eigvalsh(cond)
    w = np.where(w > 0, w, 0.0)
    probs = w.sum(axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.where(w > 0, np.log2(np.where(w > 0, w, 1.0)), 0.0)
        plogp = np.where(probs > 0, np.log2(np.where(probs > 0, probs, 1.0)), 0.0)
    # sum_k p_k S(w/p_k) = -sum w log w + sum_k p_k log p_k
    return -(w * logs).sum(axis=(-1, -2)) + (probs[..., 0] * plogp[..., 0]).sum(axis=-1)


def qubit_basis(theta, phi) -> np.ndarray:
    """Columns ``|u_+>, |u_->`` for the projectors ``(I +- u.sigma)/2``."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    e = np.exp(1j * phi)
    u = np.empty(theta.shape + (2, 2), dtype=complex)
    u[..., 0, 0] = c
    u[..., 1, 0] = e * s
    u[..., 0, 1] = -s
    u[..., 1, 1] = e * c
    return u


_GELL_MANN_3 = np.array(traceless_hermitian_basis(3))


def qutrit_basis(params) -> np.ndarray:
    """Unitary ``exp(i sum_a p_a G_a)`` over the eight traceless generators."""
    h = np.tensordot(np.asarray(params, dtype=float), _GELL_MANN_3, axes=1)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def discord_b(s: BipartiteState, cfg: DiscordConfig = DiscordConfig()) -> DiscordResult:
    """Quantum discord up to part B, minimised over von Neumann measurements.

    ``n = 2``: coarse ``(theta, phi)`` grid then Nelder-Mead from the best grid
    point. ``n = 3``: seeded Nelder-Mead multistarts over exponential
    coordinates of SU(3).
    """
    s.validate()
    m, n = s.dims
    if n not in (2, 3):
        raise UnsupportedDimension(f"discord optimisation supports n in {{2, 3}}, got {n}")
    b = blocks(s)
    base = von_neumann_entropy(s.reduced("B")) - von_neumann_entropy(s.rho)
    opts = dict(xatol=cfg.xatol, fatol=cfg.fatol, maxiter=cfg.maxiter, maxfev=4 * cfg.maxiter)

    if n == 2:
        nt, nphi = cfg.grid
        theta = np.linspace(0, np.pi, nt)
        phi = np.linspace(0, 2 * np.pi, nphi, endpoint=False)
        tt, pp = np.meshgrid(theta, phi, indexing="ij")
        vals = _conditional_entropies(b, qubit_basis(tt.ravel(), pp.ravel()))
        k = int(np.argmin(vals))
        x0 = np.array([tt.ravel()[k], pp.ravel()[k]])

        def objective(x):
            return float(_conditional_entropies(b, qubit_basis(x[0], x[1])[None])[0])

        res = minimize(objective, x0, method="Nelder-Mead", options=opts)
        best_x = res.x if res.fun <= vals[k] else x0
        best = min(res.fun, vals[k])
        u = qubit_basis(best_x[0], best_x[1])
        return DiscordResult(base + best, MeasurementBasis(u), int(res.nit), bool(res.success))

    rng = np.random.default_rng(cfg.seed)
    starts = [np.zeros(8)] + [rng.uniform(-np.pi, np.pi, 8) for _ in range(cfg.multistarts - 1)]

    def objective(x):
        return float(_conditional_entropies(b, qutrit_basis(x)[None])[0])

    best = None
    iterations = 0
    for x0 in starts:
        res = minimize(objective, x0, method="Nelder-Mead", options=opts)
        iterations += int(res.nit)
        if best is None or res.fun < best.fun:
            best = res
    u = qutrit_basis(best.x)
    return DiscordResult(base + best.fun, MeasurementBasis(u), iterations, bool(best.success))
