"""Decide which family a channel belongs to and recover its parameters.

Families that cannot create discord in zero-discord states:

* completely decohering channels (commutative range), any ``n``;
* nontrivial isotropic channels;
* unital qubit channels in the ``(U, lambda, alpha, beta, gamma)`` form, ``n = 2``.

Qubit isotropic channels belong to both of the last two and are reported as
isotropic. For ``n = 2`` a unitary-branch channel with ``t < 0`` coincides
with a transpose-branch channel with ``|t|``, so the recovered branch may
differ from the one used to build it; only the action is unique.

Anything else is reported as ``CreatesDiscord`` together with a witness state
when one is found.
"""
import enum
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .channel import (
    Branch,
    DecoheringParams,
    IsotropicParams,
    QuantumChannel,
    QubitCPUParams,
    action_residual,
    decohering_action,
    degenerate_reason,
    is_cptp,
    isotropic_action,
    qubit_cpu_action,
)
from .discord import BipartiteState, block_residual
from .errors import NotCPTP, NotDecohering
from .matcore import (
    commutator,
    dagger,
    eig_hermitian,
    frob,
    hermitian_basis,
    matrix_unit,
    max_norm,
    operator_norm,
    traceless_hermitian_basis,
)
from . import samplers

FIT_TOL = 1e-8
PROBE_REL_TOL = 1e-7
WITNESS_THRESHOLD = 1e-6


class Verdict(enum.Enum):
    COMPLETELY_DECOHERING = "CompletelyDecohering"
    NONTRIVIAL_ISOTROPIC = "NontrivialIsotropic"
    QUBIT_CPU = "QubitCPU"
    CREATES_DISCORD = "CreatesDiscord"


@dataclass(frozen=True)
class NoFit:
    reason: str

    def __bool__(self):
        return False


@dataclass(frozen=True, eq=False)
class Witness:
    """Zero-discord input whose image under ``id (x) channel`` has discord."""

    state: BipartiteState
    image: BipartiteState
    residual: float
    label: str
    tries: int


@dataclass(frozen=True, eq=False)
class ChannelClass:
    verdict: Verdict
    params: Union[DecoheringParams, IsotropicParams, QubitCPUParams, None] = None
    residual: float = 0.0
    witness: Optional[Witness] = None
    note: str = ""

    @property
    def preserves_zero_discord(self) -> bool:
        return self.verdict is not Verdict.CREATES_DISCORD


@dataclass(frozen=True, eq=False)
class ProbeResult:
    passed: bool
    trials: int
    a: Optional[np.ndarray] = None
    b: Optional[np.ndarray] = None
    residual: float = 0.0

    def __bool__(self):
        return self.passed


# ---------------------------------------------------------------------------
# Completely decohering channels
# ---------------------------------------------------------------------------


def range_commutative(ch: QuantumChannel, tol: float = 1e-9) -> bool:
    """Pairwise commutation of the images of a hermitian basis."""
    images = [ch(g) for g in hermitian_basis(ch.dim)]
    for i, a in enumerate(images):
        for b in images[i + 1:]:
            if frob(a @ b - b @ a) > tol:
                return False
    return True


def extract_decohering(ch: QuantumChannel, tol: float = 1e-9) -> DecoheringParams:
    """POVM and output basis of a completely decohering channel.

    The output basis is the eigenbasis of a generic real combination of the
    range; ``(W_i)_lk = <e_i| Lambda(E_kl) |e_i>``.
    """
    if not range_commutative(ch, tol):
        raise NotDecohering("channel range is not commutative")
    n = ch.dim
    images = np.array([ch(g) for g in hermitian_basis(n)])
    units = [[ch(matrix_unit(k, l, n)) for l in range(n)] for k in range(n)]
    best = None
    for attempt in range(5):
        coeffs = np.random.default_rng(7919 + attempt).standard_normal(len(images))
        _, e = eig_hermitian(np.tensordot(coeffs, images, axes=1))
        povm = []
        for i in range(n):
            ei = e[:, i]
            w = np.array([[ei.conj() @ units[k][l] @ ei for k in range(n)] for l in range(n)])
            povm.append(0.5 * (w + dagger(w)))
        params = DecoheringParams(tuple(povm), e)
        res = action_residual(ch, lambda a: decohering_action(params, a), n)
        if best is None or res < best[0]:
            best = (res, params)
        if res <= tol:
            break
    return best[1]


# ---------------------------------------------------------------------------
# Isotropic channels
# ---------------------------------------------------------------------------


def _phase_normalise(u: np.ndarray) -> np.ndarray:
    col = u[:, 0]
    z = col[np.argmax(np.abs(col))]
    return u * (abs(z) / z)


def traceless_matrix(ch: QuantumChannel) -> np.ndarray:
    """Real matrix of the channel restricted to traceless hermitian operators."""
    basis = traceless_hermitian_basis(ch.dim)
    images = [ch(g) for g in basis]
    return np.array([[np.vdot(ga, img).real for img in images] for ga in basis])


def _recover_unitary(gamma, n: int, branch: Branch, rng) -> Optional[np.ndarray]:
    target = np.arange(1, n + 1) - (n + 1) / 2
    v = np.eye(n, dtype=complex)
    for _ in range(4):
        probe = (v * target) @ dagger(v)
        img = gamma(probe)
        w, vecs = np.linalg.eigh(0.5 * (img + dagger(img)))
        if np.min(np.diff(w)) > 1e-8:
            break
        v = samplers.random_unitary(n, rng)
    else:
        return None
    if max_norm(w - target) > 1e-6:
        return None
    phases = np.ones(n, dtype=complex)
    for k in range(1, n):
        sym = np.outer(v[:, 0], v[:, k].conj()) + np.outer(v[:, k], v[:, 0].conj())
        z = vecs[:, 0].conj() @ gamma(sym) @ vecs[:, k]
        if abs(z) < 0.5:
            return None
        phases[k] = np.conj(z) / abs(z)
    wp = vecs * phases
    return wp @ (dagger(v) if branch is Branch.UNITARY else v.T)


def fit_isotropic(ch: QuantumChannel, tol: float = FIT_TOL) -> Union[IsotropicParams, NoFit]:
    """Recover ``(U, t, branch)`` of an isotropic channel, or ``NoFit``."""
    n = ch.dim
    report = is_cptp(ch, tol)
    if not (report.tp and report.unital):
        return NoFit("not unital and trace preserving")
    m = traceless_matrix(ch)
    t = float(np.sqrt(np.trace(m.T @ m) / (n * n - 1)))
    if max_norm(m.T @ m - t * t * np.eye(n * n - 1)) > tol:
        return NoFit("traceless block is not a scaled orthogonal matrix")
    if t <= tol:
        p = IsotropicParams(np.eye(n, dtype=complex), 0.0, Branch.UNITARY)
        res = action_residual(ch, lambda a: isotropic_action(p, a), n)
        return p if res <= tol else NoFit(f"depolarizing reconstruction residual {res:.3g}")
    rng = np.random.default_rng(0)
    best = None
    for sign in (1.0, -1.0):
        ts = sign * t
        for branch in (Branch.UNITARY, Branch.TRANSPOSE):
            def gamma(a, ts=ts):
                return (ch(a) - (1 - ts) * np.trace(a) * np.eye(n) / n) / ts

            u = _recover_unitary(gamma, n, branch, rng)
            if u is None:
                continue
            p = IsotropicParams(_phase_normalise(u), ts, branch)
            res = action_residual(ch, lambda a: isotropic_action(p, a), n)
            if res <= tol:
                return p
            best = res if best is None else min(best, res)
    return NoFit(f"no isotropic candidate reproduces the channel (best residual {best})")


# ---------------------------------------------------------------------------
# Qubit commutativity-preserving unital channels
# ---------------------------------------------------------------------------


def _column_gauge(u: np.ndarray) -> np.ndarray:
    u = u.copy()
    for k in range(u.shape[1]):
        z = u[np.argmax(np.abs(u[:, k])), k]
        u[:, k] *= abs(z) / z
    return u


def fit_qubit_cpu(ch: QuantumChannel, tol: float = FIT_TOL) -> Union[QubitCPUParams, NoFit]:
    """Recover ``(U, lambda, alpha, beta, gamma)`` of a unital qubit channel.

    Gauge: ``lambda >= 1/2`` and every column of ``U`` has its
    largest-magnitude entry real positive.
    """
    if ch.dim != 2:
        return NoFit("not a qubit channel")
    report = is_cptp(ch, tol)
    if not report.tp:
        return NoFit("not trace preserving")
    if not report.unital:
        return NoFit("not unital")
    l11 = ch(matrix_unit(0, 0, 2))
    w, v = eig_hermitian(l11)
    lam = float(w[1])
    u = _column_gauge(v[:, ::-1])
    d22 = dagger(u) @ ch(matrix_unit(1, 1, 2)) @ u
    if max_norm(d22 - np.diag([1 - lam, lam])) > tol:
        return NoFit("images of E_11 and E_22 are not co-diagonal with matched spectra")
    x = dagger(u) @ ch(matrix_unit(0, 1, 2)) @ u
    if abs(x[1, 1] + x[0, 0]) > tol:
        return NoFit("X_22 != -X_11")
    s = np.sqrt(max(lam * (1 - lam), 0.0))
    edge = 1e-10
    alpha = x[0, 0] / s if s > edge else 0j
    beta = x[0, 1] / lam if lam > edge else 0j
    gamma = x[1, 0] / (1 - lam) if 1 - lam > edge else 0j
    p = QubitCPUParams(u, lam, complex(alpha), complex(beta), complex(gamma))
    reason = degenerate_reason(p, tol=1e-9)
    if reason:
        return NoFit(f"degenerate form ({reason}): completely decohering")
    norm = operator_norm(p.contraction)
    if norm > 1 + 1e-6:
        return NoFit(f"contraction norm {norm:.6g} > 1")
    res = action_residual(ch, lambda a: qubit_cpu_action(p, a), 2)
    if res > tol:
        return NoFit(f"reconstruction residual {res:.3g}")
    return p


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def find_zero_discord_witness(ch: QuantumChannel, tries: int = 500, seed: int = 0,
                              m: int = 2, threshold: float = WITNESS_THRESHOLD) -> Optional[Witness]:
    """Search zero-discord states whose image fails the block criterion."""
    n = ch.dim
    for k in range(tries):
        rng = np.random.default_rng(samplers.trial_seed(seed, k))
        s = samplers.sample_zero_discord_state(m, n, seed=rng)
        image = s.apply_local(ch)
        res, label = block_residual(image)
        if res > threshold:
            return Witness(s, image, res, label, k + 1)
    return None


def classify(ch: QuantumChannel, tol: float = FIT_TOL, seed: int = 0,
             witness_tries: int = 500) -> ChannelClass:
    """Family verdict with recovered parameters.

    Raises:
        NotCPTP: if ``ch`` is not trace preserving.
    """
    report = is_cptp(ch, 1e-9)
    if not (report.cp and report.tp):
        raise NotCPTP(f"not a channel: {report}")
    n = ch.dim
    if range_commutative(ch, 1e-9):
        p = extract_decohering(ch)
        res = action_residual(ch, lambda a: decohering_action(p, a), n)
        return ChannelClass(Verdict.COMPLETELY_DECOHERING, p, res)
    # qubit isotropic channels also fit the qubit form; the narrower family wins
    fit = fit_isotropic(ch, tol)
    if fit:
        res = action_residual(ch, lambda a: isotropic_action(fit, a), n)
        return ChannelClass(Verdict.NONTRIVIAL_ISOTROPIC, fit, res)
    if n == 2:
        fit = fit_qubit_cpu(ch, tol)
        if fit:
            res = action_residual(ch, lambda a: qubit_cpu_action(fit, a), n)
            return ChannelClass(Verdict.QUBIT_CPU, fit, res)
    witness = find_zero_discord_witness(ch, witness_tries, seed)
    note = fit.reason if witness else f"{fit.reason}; no witness in {witness_tries} tries"
    return ChannelClass(Verdict.CREATES_DISCORD, None, 0.0, witness, note)


# ---------------------------------------------------------------------------
# Stochastic commutativity probes
# ---------------------------------------------------------------------------


def preserves_commutativity_probe(ch: QuantumChannel, trials: int = 1000, seed: int = 0) -> ProbeResult:
    """Sample commuting hermitian pairs and look for non-commuting images."""
    rng = np.random.default_rng(seed)
    for k in range(trials):
        a, b = samplers.sample_commuting_hermitian_pair(ch.dim, rng)
        la, lb = ch(a), ch(b)
        r = frob(commutator(la, lb))
        if r > PROBE_REL_TOL * frob(la) * frob(lb):
            return ProbeResult(False, k + 1, a, b, r)
    return ProbeResult(True, trials)


def reflects_commutativity_probe(ch: QuantumChannel, trials: int = 500, seed: int = 0) -> ProbeResult:
    """Sample pairs with commuting images and look for non-commuting preimages.

    For a random hermitian ``A`` the hermitian ``B`` with
    ``[Lambda(A), Lambda(B)] = 0`` form a linear subspace; ``B`` is drawn from
    it, so every sampled pair has commuting images by construction.
    """
    n = ch.dim
    basis = hermitian_basis(n)
    images = np.array([ch(g) for g in basis])
    rng = np.random.default_rng(seed)
    for k in range(trials):
        coeffs = rng.standard_normal(len(basis))
        a = np.tensordot(coeffs, np.array(basis), axes=1)
        la = np.tensordot(coeffs, images, axes=1)
        cols = []
        for img in images:
            c = la @ img - img @ la
            cols.append(np.concatenate([c.real.ravel(), c.imag.ravel()]))
        lin = np.array(cols).T
        _, sv, vt = np.linalg.svd(lin)
        # scale from the operands, not sv[0]: a commutative range gives lin = 0
        scale = frob(la) * max(frob(img) for img in images)
        null = vt[np.sum(sv > 1e-9 * max(scale, 1e-300)):]
        if len(null) == 0:
            continue
        bc = rng.standard_normal(len(null)) @ null
        b = np.tensordot(bc, np.array(basis), axes=1)
        r = frob(commutator(a, b))
        if r > PROBE_REL_TOL * frob(a) * frob(b):
            return ProbeResult(False, k + 1, a, b, r)
    return ProbeResult(True, trials)


# ---------------------------------------------------------------------------
# Preservation in both directions
# ---------------------------------------------------------------------------


def superoperator_full_rank(ch: QuantumChannel, tol: float = 1e-9) -> bool:
    sv = np.linalg.svd(ch.superoperator, compute_uv=False)
    return bool(sv[-1] > tol * sv[0])


def qubit_injective_condition(p: QubitCPUParams, tol: float = 1e-9) -> bool:
    """Closed-form injectivity of the qubit form: ``lambda != 1/2`` and
    ``lambda |beta| != (1 - lambda) |gamma|`` (alpha plays no role)."""
    return abs(p.lam - 0.5) > tol and abs(p.lam * abs(p.beta) - (1 - p.lam) * abs(p.gamma)) > tol


def literal_clause_conditions(p: QubitCPUParams, tol: float = 1e-9) -> bool:
    """Parameter conditions for preservation in both directions, read
    literally clause by clause. Kept as a diagnostic next to the rank test."""
    lam, a, b, g = p.lam, p.alpha, p.beta, p.gamma

    def nz(z):
        return abs(z) > tol

    interior = nz(lam * (1 - lam))
    if not nz(lam - 0.5) or not (nz(b) or nz(g)):
        return False
    if not nz(lam) and not nz(g):
        return False
    if not nz(lam - 1) and not nz(b):
        return False
    magnitudes_differ = nz(lam * abs(b) - (1 - lam) * abs(g))
    if not nz(a) and nz(b * g) and interior and not magnitudes_differ:
        return False
    if nz(a * b * g) and interior:
        phases_differ = nz(lam * np.conj(b) * a - (1 - lam) * g * np.conj(a))
        if not (magnitudes_differ or phases_differ):
            return False
    return True


@dataclass(frozen=True, eq=False)
class BothDirectionsReport:
    value: bool
    verdict: Verdict
    full_rank: Optional[bool] = None
    literal_conditions: Optional[bool] = None
    diagnostic: str = ""


def both_directions_report(ch: QuantumChannel, cls: Optional[ChannelClass] = None) -> BothDirectionsReport:
    if cls is None:
        cls = classify(ch, witness_tries=0)
    if ch.dim >= 3:
        return BothDirectionsReport(cls.verdict is Verdict.NONTRIVIAL_ISOTROPIC, cls.verdict)
    if cls.verdict is Verdict.NONTRIVIAL_ISOTROPIC:
        params = fit_qubit_cpu(ch)
    elif cls.verdict is Verdict.QUBIT_CPU:
        params = cls.params
    else:
        return BothDirectionsReport(False, cls.verdict)
    rank = superoperator_full_rank(ch)
    literal = literal_clause_conditions(params) if params else None
    diag = ""
    if literal is not None and literal != rank:
        diag = (f"literal parameter conditions say {literal} but the superoperator "
                f"{'is' if rank else 'is not'} injective")
    return BothDirectionsReport(rank, cls.verdict, rank, literal, diag)


def both_directions(ch: QuantumChannel) -> bool:
    """Whether ``id (x) ch`` maps zero-discord states to zero-discord states
    and nothing else onto them."""
    return both_directions_report(ch).value
