"""Quantum channels: Kraus/Choi representations, CPTP checks and the three
channel families that cannot create discord (isotropic, completely
decohering, and the qubit commutativity-preserving unital form).

Choi convention: the ``n^2 x n^2`` matrix whose ``(i, j)`` block of size
``n x n`` is ``Lambda(E_ij)``, i.e. ``J = sum_ij E_ij (x) Lambda(E_ij)``.
Superoperators act on row-major vectorised matrices.
"""
import enum
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    DegenerateForm,
    DimensionMismatch,
    InvalidPOVM,
    NotContractive,
    NotCPTP,
    TRangeViolation,
)
from .matcore import (
    DEFAULT_TOL,
    as_matrix,
    dagger,
    eig_hermitian,
    frob,
    is_unitary,
    matrix_unit,
    max_norm,
    operator_norm,
)

KRAUS_CUTOFF = 1e-12


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """A channel ``A -> sum_i X_i A X_i^dag`` on ``n x n`` matrices."""

    kraus: Tuple[np.ndarray, ...]

    def __post_init__(self):
        ops = tuple(as_matrix(k) for k in self.kraus)
        if not ops:
            raise ValueError("a channel needs at least one Kraus operator")
        n = ops[0].shape[0]
        if any(k.shape != (n, n) for k in ops):
            raise DimensionMismatch("Kraus operators must share one square shape")
        object.__setattr__(self, "kraus", ops)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    def __call__(self, a) -> np.ndarray:
        return apply(self, a)

    @cached_property
    def choi(self) -> "ChoiMatrix":
        return choi_from_kraus(self)

    @cached_property
    def superoperator(self) -> np.ndarray:
        return sum(np.kron(k, k.conj()) for k in self.kraus)

    def validate(self, tol: float = DEFAULT_TOL) -> "QuantumChannel":
        report = is_cptp(self, tol)
        if not (report.cp and report.tp):
            raise NotCPTP(f"not a channel: {report}")
        return self


@dataclass(frozen=True, eq=False)
class ChoiMatrix:
    n: int
    matrix: np.ndarray

    def block(self, i: int, j: int) -> np.ndarray:
        n = self.n
        return self.matrix[i * n:(i + 1) * n, j * n:(j + 1) * n]


@dataclass(frozen=True)
class CPTPReport:
    cp: bool
    tp: bool
    unital: bool
    min_choi_eig: float


class Branch(enum.Enum):
    UNITARY = "Unitary"
    TRANSPOSE = "Transpose"


@dataclass(frozen=True, eq=False)
class IsotropicParams:
    """``A -> t Gamma(A) + (1 - t) Tr(A) I / n`` with ``Gamma`` either
    ``U A U^dag`` or ``U A^T U^dag``."""

    u: np.ndarray
    t: float
    branch: Branch = Branch.UNITARY

    @property
    def n(self) -> int:
        return np.asarray(self.u).shape[0]


@dataclass(frozen=True, eq=False)
class DecoheringParams:
    """``A -> sum_i Tr(W_i A) |e_i><e_i|``; ``basis[:, i]`` is ``|e_i>``."""

    povm: Tuple[np.ndarray, ...]
    basis: np.ndarray

    @property
    def n(self) -> int:
        return np.asarray(self.basis).shape[0]


@dataclass(frozen=True, eq=False)
class QubitCPUParams:
    u: np.ndarray
    lam: float
    alpha: complex = 0j
    beta: complex = 0j
    gamma: complex = 0j

    @property
    def contraction(self) -> np.ndarray:
        return np.array([[self.alpha, self.beta], [self.gamma, -self.alpha]], dtype=complex)

    @property
    def x(self) -> np.ndarray:
        lam = self.lam
        s = np.sqrt(lam * (1 - lam))
        return np.array(
            [[s * self.alpha, lam * self.beta], [(1 - lam) * self.gamma, -s * self.alpha]],
            dtype=complex,
        )


# ---------------------------------------------------------------------------
# Representations
# ---------------------------------------------------------------------------


def apply(ch: QuantumChannel, a) -> np.ndarray:
    a = as_matrix(a)
    if a.shape[0] != ch.dim:
        raise DimensionMismatch(f"channel on dim {ch.dim} applied to {a.shape}")
    return sum(k @ a @ dagger(k) for k in ch.kraus)


def choi_from_kraus(ch: QuantumChannel) -> ChoiMatrix:
    n = ch.dim
    # row i*n + a of vec_k holds X_k[a, i]
    vecs = np.array([k.T.reshape(-1) for k in ch.kraus])
    return ChoiMatrix(n, vecs.T @ vecs.conj())


def choi_of_map(fn: Callable[[np.ndarray], np.ndarray], n: int) -> ChoiMatrix:
    """Choi matrix of an arbitrary linear map given by its action."""
    j = np.zeros((n * n, n * n), dtype=complex)
    for i in range(n):
        for k in range(n):
            j[i * n:(i + 1) * n, k * n:(k + 1) * n] = fn(matrix_unit(i, k, n))
    return ChoiMatrix(n, j)


def _choi_tp_residual(choi: ChoiMatrix) -> float:
    n = choi.n
    t = choi.matrix.reshape(n, n, n, n)
    return max_norm(np.einsum("iaja->ij", t) - np.eye(n))


def _choi_unital_residual(choi: ChoiMatrix) -> float:
    n = choi.n
    t = choi.matrix.reshape(n, n, n, n)
    return max_norm(np.einsum("iaib->ab", t) - np.eye(n))


def kraus_from_choi(choi: ChoiMatrix, tol: float = DEFAULT_TOL) -> QuantumChannel:
    """Kraus operators from the eigendecomposition of a PSD Choi matrix.

    Eigenvalues below ``KRAUS_CUTOFF`` are dropped.

    Raises:
        NotCPTP: if the Choi matrix is not PSD or its output partial trace is
            not the identity.
    """
    n = choi.n
    w, v = eig_hermitian(choi.matrix, tol=1e-10)
    if w[0] < -tol * max(1.0, w[-1]):
        raise NotCPTP(f"Choi matrix has eigenvalue {w[0]:.6g} < 0")
    if _choi_tp_residual(choi) > tol:
        raise NotCPTP("Choi matrix fails the trace-preservation test")
    kraus = [
        np.sqrt(wk) * v[:, k].reshape(n, n).T for k, wk in enumerate(w) if wk > KRAUS_CUTOFF
    ]
    return QuantumChannel(tuple(kraus))


def is_cptp(obj, tol: float = DEFAULT_TOL) -> CPTPReport:
    """CP/TP/unital findings for a ``QuantumChannel`` or a bare ``ChoiMatrix``.

    A ``ChoiMatrix`` may come from any hermitian-preserving map (for example
    the transpose), which is how non-CP maps are inspected.
    """
    if isinstance(obj, QuantumChannel):
        choi = obj.choi
        n = obj.dim
        tp_res = max_norm(sum(dagger(k) @ k for k in obj.kraus) - np.eye(n))
        un_res = max_norm(sum(k @ dagger(k) for k in obj.kraus) - np.eye(n))
    else:
        choi = obj
        tp_res = _choi_tp_residual(choi)
        un_res = _choi_unital_residual(choi)
    w = eig_hermitian(choi.matrix, tol=1e-10).eigenvalues
    return CPTPReport(
        cp=bool(w[0] >= -tol * max(1.0, w[-1])),
        tp=bool(tp_res <= tol),
        unital=bool(un_res <= tol),
        min_choi_eig=float(w[0]),
    )


def action_on_basis(fn: Callable[[np.ndarray], np.ndarray], n: int) -> np.ndarray:
    """Stack of ``fn(E_ij)`` over all matrix units, shape ``(n*n, n, n)``."""
    return np.array([fn(matrix_unit(i, j, n)) for i in range(n) for j in range(n)])


def action_residual(f, g, n: int) -> float:
    """Largest Frobenius distance between two maps over all matrix units."""
    diff = action_on_basis(f, n) - action_on_basis(g, n)
    return float(max(frob(d) for d in diff))


def compose(outer: QuantumChannel, inner: QuantumChannel) -> QuantumChannel:
    """``outer o inner``."""
    if outer.dim != inner.dim:
        raise DimensionMismatch("cannot compose channels of different dimension")
    return QuantumChannel(tuple(a @ b for a in outer.kraus for b in inner.kraus))


# ---------------------------------------------------------------------------
# Simple named channels
# ---------------------------------------------------------------------------


def identity_channel(n: int) -> QuantumChannel:
    return QuantumChannel((np.eye(n, dtype=complex),))


def unitary_channel(u) -> QuantumChannel:
    return QuantumChannel((as_matrix(u),))


def amplitude_damping(g: float) -> QuantumChannel:
    k0 = np.array([[1, 0], [0, np.sqrt(1 - g)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(g)], [0, 0]], dtype=complex)
    return QuantumChannel((k0, k1))


def transpose_choi(n: int) -> ChoiMatrix:
    """Choi matrix of the (non-CP) transpose map; equals SWAP."""
    return choi_of_map(lambda a: a.T, n)


# ---------------------------------------------------------------------------
# Isotropic channels
# ---------------------------------------------------------------------------


def isotropic_bounds(n: int, branch: Branch) -> Tuple[float, float]:
    """Range of ``t`` for which the isotropic map is completely positive.

    The transpose branch is ``[-1/(n-1), 1/(n+1)]``. The unitary branch is
    ``[-1/(n^2-1), 1]``: below ``-1/(n^2-1)`` the map stays positive but its
    Choi matrix acquires a negative eigenvalue.
    """
    if branch is Branch.UNITARY:
        return -1.0 / (n * n - 1), 1.0
    return -1.0 / (n - 1), 1.0 / (n + 1)


def isotropic_action(p: IsotropicParams, a: np.ndarray) -> np.ndarray:
    u = np.asarray(p.u, dtype=complex)
    n = u.shape[0]
    inner = a if p.branch is Branch.UNITARY else a.T
    return p.t * (u @ inner @ dagger(u)) + (1 - p.t) * np.trace(a) * np.eye(n) / n


def make_isotropic(p: IsotropicParams, tol: float = 1e-12) -> QuantumChannel:
    """Isotropic channel realised through its analytic Choi matrix."""
    u = as_matrix(p.u)
    if not is_unitary(u):
        raise ValueError("isotropic parameter u is not unitary")
    n = u.shape[0]
    lo, hi = isotropic_bounds(n, p.branch)
    if not lo - tol <= p.t <= hi + tol:
        raise TRangeViolation(p.t, lo, hi, p.branch.value)
    choi = choi_of_map(lambda a: isotropic_action(p, a), n)
    return kraus_from_choi(choi)


def depolarizing(n: int) -> QuantumChannel:
    return make_isotropic(IsotropicParams(np.eye(n), 0.0))


# ---------------------------------------------------------------------------
# Completely decohering channels
# ---------------------------------------------------------------------------


def validate_povm(povm: Sequence[np.ndarray], basis, tol: float = DEFAULT_TOL):
    basis = as_matrix(basis)
    n = basis.shape[0]
    if len(povm) != n:
        raise InvalidPOVM(f"need {n} POVM elements, got {len(povm)}")
    if not is_unitary(basis, tol=1e-9):
        raise InvalidPOVM("basis vectors are not orthonormal")
    total = np.zeros((n, n), dtype=complex)
    for i, w in enumerate(povm):
        w = as_matrix(w)
        if w.shape != (n, n):
            raise InvalidPOVM(f"POVM element {i} has shape {w.shape}")
        vals = eig_hermitian(w, tol=max(tol, 1e-10)).eigenvalues
        if vals[0] < -tol:
            raise InvalidPOVM(f"POVM element {i} has eigenvalue {vals[0]:.3g}")
        total = total + w
    if max_norm(total - np.eye(n)) > tol:
        raise InvalidPOVM("POVM elements do not sum to the identity")


def decohering_action(p: DecoheringParams, a: np.ndarray) -> np.ndarray:
    e = np.asarray(p.basis, dtype=complex)
    coeffs = np.array([np.trace(w @ a) for w in p.povm])
    return (e * coeffs) @ dagger(e)


def make_decohering(p: DecoheringParams, tol: float = DEFAULT_TOL) -> QuantumChannel:
    """Completely decohering channel from a POVM and an output basis."""
    validate_povm(p.povm, p.basis, tol)
    e = as_matrix(p.basis)
    kraus = []
    for i, w in enumerate(p.povm):
        vals, vecs = eig_hermitian(w)
        for r, val in enumerate(vals):
            if val > KRAUS_CUTOFF:
                kraus.append(np.sqrt(val) * np.outer(e[:, i], vecs[:, r].conj()))
    return QuantumChannel(tuple(kraus))


# ---------------------------------------------------------------------------
# Qubit commutativity-preserving unital channels
# ---------------------------------------------------------------------------


def qubit_cpu_action(p: QubitCPUParams, a: np.ndarray) -> np.ndarray:
    u = np.asarray(p.u, dtype=complex)
    lam = p.lam
    x = p.x
    inner = np.diag([lam * a[0, 0] + (1 - lam) * a[1, 1], (1 - lam) * a[0, 0] + lam * a[1, 1]])
    inner = inner + a[0, 1] * x + a[1, 0] * dagger(x)
    return u @ inner @ dagger(u)


def degenerate_reason(p: QubitCPUParams, tol: float = 1e-12) -> Optional[str]:
    """Why the parameters collapse to a decohering channel, or ``None``."""
    if abs(p.beta) + abs(p.gamma) <= tol:
        return "|beta| + |gamma| = 0"
    if abs(p.lam - 1) <= tol and abs(p.beta) <= tol:
        return "beta = 0 with lambda = 1"
    if abs(p.lam) <= tol and abs(p.gamma) <= tol:
        return "gamma = 0 with lambda = 0"
    return None


def make_qubit_cpu(p: QubitCPUParams) -> QuantumChannel:
    """Unital qubit channel that preserves commutativity.

    Raises:
        NotContractive: if ``[[alpha, beta], [gamma, -alpha]]`` has operator
            norm above one.
        DegenerateForm: if the parameters describe a decohering channel.
    """
    u = as_matrix(p.u)
    if u.shape != (2, 2) or not is_unitary(u):
        raise ValueError("u must be a 2x2 unitary")
    if not 0.0 <= p.lam <= 1.0:
        raise ValueError(f"lambda={p.lam} outside [0, 1]")
    norm = operator_norm(p.contraction)
    if norm > 1 + 1e-12:
        raise NotContractive(f"contraction has operator norm {norm:.6g} > 1")
    reason = degenerate_reason(p)
    if reason:
        raise DegenerateForm(reason)
    return kraus_from_choi(choi_of_map(lambda a: qubit_cpu_action(p, a), 2))
