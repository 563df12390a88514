"""Monte-Carlo verification campaigns, one per campaign id.

Each trial draws its own generator from ``trial_seed(cfg.seed, index)`` so any
failing trial can be rerun in isolation. Failures are dumped as JSON payloads
into ``<out_dir>/seed-<seed>/``.
"""
import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from . import io, samplers
from .bloch import channel_bloch_map, commute_iff_collinear, from_bloch, param_bloch_map, to_bloch
from .channel import (
    QubitCPUParams,
    action_residual,
    decohering_action,
    make_qubit_cpu,
)
from .classify import (
    NoFit,
    PROBE_REL_TOL,
    both_directions,
    extract_decohering,
    find_zero_discord_witness,
    fit_isotropic,
    preserves_commutativity_probe,
    reflects_commutativity_probe,
    superoperator_full_rank,
)
from .discord import block_residual
from .errors import UnsupportedDimension
from .matcore import commutator, dagger, frob

DESK_MAX_DIM = 4
WITNESS_TRIES = 2000


class TheoremId(enum.Enum):
    T1_FWD = "T1_FWD"
    T1_CONV = "T1_CONV"
    T2_FWD = "T2_FWD"
    T3 = "T3"
    T4_RT = "T4_RT"
    T5_FWD = "T5_FWD"
    P1 = "P1"
    P2 = "P2"
    OBS1 = "OBS1"
    OBS3 = "OBS3"


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    trials: int = 100
    dims: Tuple[int, int] = (2, 3)
    tol: float = 1e-9
    out_format: str = "json"
    out_dir: Optional[str] = "qd-runs"

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        m, n = self.dims
        if m < 2 or n < 2:
            raise ValueError("dims must both be >= 2")


@dataclass
class Failure:
    seed: int
    residual: float
    payload: Optional[str]


@dataclass
class TrialReport:
    theorem_id: TheoremId
    trials: int
    passes: int = 0
    failures: List[Failure] = field(default_factory=list)
    max_residual: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem_id.value,
            "trials": self.trials,
            "passes": self.passes,
            "max_residual": self.max_residual,
            "failures": [
                {"seed": f.seed, "residual": f.residual, "payload": f.payload} for f in self.failures
            ],
        }


@dataclass
class Outcome:
    passed: bool
    residual: float
    payload: Optional[dict] = None


def _payload(channel=None, state=None) -> dict:
    out = {}
    if channel is not None:
        out.update(io.channel_to_dict(channel))
    if state is not None:
        out.update(io.state_to_dict(state))
    return out


# ---------------------------------------------------------------------------
# Trials
# ---------------------------------------------------------------------------


def _trial_t1_fwd(rng, cfg):
    m, n = cfg.dims
    if rng.random() < 0.5:
        ch = samplers.sample_isotropic(n, rng)
    else:
        ch = samplers.sample_decohering(n, rng)
    image = samplers.sample_zero_discord_state(m, n, seed=rng).apply_local(ch)
    res, _ = block_residual(image)
    return Outcome(res < cfg.tol, res, _payload(ch, image))


def sample_unital_non_isotropic(n: int, rng):
    """Mixed-unitary channel that is not isotropic."""
    while True:
        ch = samplers.sample_mixed_unitary_channel(n, int(rng.integers(2, 4)), rng)
        if isinstance(fit_isotropic(ch), NoFit):
            return ch


def _trial_t1_conv(rng, cfg):
    m, n = cfg.dims
    ch = sample_unital_non_isotropic(n, rng)
    w = find_zero_discord_witness(ch, WITNESS_TRIES, int(rng.integers(2**63)), m=m)
    if w is None:
        return Outcome(False, 0.0, _payload(ch))
    return Outcome(True, w.residual, _payload(ch, w.state))


def _trial_t2_fwd(rng, cfg):
    m, _ = cfg.dims
    ch = samplers.sample_qubit_cpu(rng)
    image = samplers.sample_zero_discord_state(m, 2, seed=rng).apply_local(ch)
    res, _ = block_residual(image)
    return Outcome(res < cfg.tol, res, _payload(ch, image))


def _trial_t3(rng, cfg):
    m, n = cfg.dims
    ch = samplers.sample_decohering(n, rng)
    image = samplers.sample_random_state(m, n, rng).apply_local(ch)
    res, _ = block_residual(image)
    return Outcome(res < cfg.tol, res, _payload(ch, image))


def _trial_t4_rt(rng, cfg):
    _, n = cfg.dims
    ch = samplers.sample_decohering(n, rng)
    p = extract_decohering(ch)
    res = action_residual(ch, lambda a: decohering_action(p, a), n)
    return Outcome(res < max(cfg.tol, 1e-9), res, _payload(ch))


def sample_commutation_preserving_map(rng) -> Callable[[np.ndarray], np.ndarray]:
    """Random hermitian-preserving commutativity-preserving map on 2x2 matrices.

    Half the draws use the rank-two diagonal form with hermitian ``W_1, W_2``;
    the rest use the ``(U, lambda_i, mu_i, X)`` form with
    ``lambda_1 + mu_1 = lambda_2 + mu_2`` and arbitrary complex ``X``.
    """
    u = samplers.random_unitary(2, rng)
    if rng.random() < 0.5:
        w1, w2 = samplers.random_hermitian(2, rng), samplers.random_hermitian(2, rng)

        def phi(a):
            return u @ np.diag([np.trace(w1 @ a), np.trace(w2 @ a)]) @ dagger(u)

        return phi
    l1, l2, mu1 = rng.standard_normal(3)
    mu2 = l1 + mu1 - l2
    x = samplers.ginibre(rng, 2, 2)

    def phi(a):
        inner = np.diag([l1 * a[0, 0] + mu1 * a[1, 1], l2 * a[0, 0] + mu2 * a[1, 1]])
        return u @ (inner + a[0, 1] * x + a[1, 0] * dagger(x)) @ dagger(u)

    return phi


def _trial_t5_fwd(rng, cfg):
    phi = sample_commutation_preserving_map(rng)
    worst = 0.0
    for _ in range(20):
        a, b = samplers.sample_commuting_hermitian_pair(2, rng)
        fa, fb = phi(a), phi(b)
        scale = max(frob(fa) * frob(fb), 1e-300)
        worst = max(worst, frob(commutator(fa, fb)) / scale)
    return Outcome(worst < max(cfg.tol, PROBE_REL_TOL), worst)


def _trial_p1(rng, cfg):
    _, n = cfg.dims
    kind = int(rng.integers(3))
    if kind == 0:
        ch, expected = samplers.sample_isotropic(n, rng), True
    elif kind == 1:
        ch, expected = samplers.sample_decohering(n, rng), False
    else:
        ch, expected = sample_unital_non_isotropic(n, rng), False
    got = both_directions(ch)
    return Outcome(got == expected, float(got != expected), _payload(ch))


def sample_p2_params(rng) -> QubitCPUParams:
    """Qubit-form parameters mixing generic, ``lambda = 1/2`` and
    ``lambda |beta| = (1 - lambda) |gamma|`` (non-injective) draws."""
    kind = rng.random()
    if kind < 0.6:
        return samplers.sample_qubit_cpu_params(rng)
    if kind < 0.8:
        return samplers.sample_qubit_cpu_params(rng, lam=0.5)
    lam = float(rng.uniform(0.1, 0.9))
    p = samplers.sample_qubit_cpu_params(rng, lam=lam)
    # rescale gamma so that lambda |beta| = (1 - lambda) |gamma|, keeping its phase
    gamma = p.gamma / abs(p.gamma) * lam * abs(p.beta) / (1 - lam)
    s = np.array([[p.alpha, p.beta], [gamma, -p.alpha]])
    norm = np.linalg.norm(s, 2)
    scale = min(1.0, 1.0 / norm)
    return QubitCPUParams(p.u, lam, p.alpha * scale, p.beta * scale, gamma * scale)


def _trial_p2(rng, cfg):
    p = sample_p2_params(rng)
    ch = make_qubit_cpu(p)
    rank = superoperator_full_rank(ch)
    fwd = preserves_commutativity_probe(ch, 500, int(rng.integers(2**63)))
    rev = reflects_commutativity_probe(ch, 500, int(rng.integers(2**63)))
    agree = rank == (fwd.passed and rev.passed)
    return Outcome(agree, float(not agree), _payload(ch))


def _trial_obs1(rng, cfg):
    r1 = from_bloch(_random_ball_point(rng))
    if rng.random() < 0.5:
        r2v = to_bloch(r1) * rng.uniform(-1, 1)
    else:
        r2v = _random_ball_point(rng)
    check = commute_iff_collinear(r1, from_bloch(r2v))
    return Outcome(check.agree, float(not check.agree))


def _trial_obs3(rng, cfg):
    p = samplers.sample_qubit_cpu_params(rng)
    ch = make_qubit_cpu(p)
    r = _random_ball_point(rng)
    direct = to_bloch(ch(from_bloch(r)))
    res = float(np.linalg.norm(direct - param_bloch_map(p)(r)))
    res = max(res, float(np.linalg.norm(direct - channel_bloch_map(ch)(r))))
    return Outcome(res < max(cfg.tol, 1e-10), res, _payload(ch))


def _random_ball_point(rng) -> np.ndarray:
    v = rng.standard_normal(3)
    return 0.5 * rng.random() ** (1 / 3) * v / np.linalg.norm(v)


_TRIALS: Dict[TheoremId, Callable] = {
    TheoremId.T1_FWD: _trial_t1_fwd,
    TheoremId.T1_CONV: _trial_t1_conv,
    TheoremId.T2_FWD: _trial_t2_fwd,
    TheoremId.T3: _trial_t3,
    TheoremId.T4_RT: _trial_t4_rt,
    TheoremId.T5_FWD: _trial_t5_fwd,
    TheoremId.P1: _trial_p1,
    TheoremId.P2: _trial_p2,
    TheoremId.OBS1: _trial_obs1,
    TheoremId.OBS3: _trial_obs3,
}

# qubit campaigns (T2_FWD, T5_FWD, P2, OBS1, OBS3) always use n = 2 and ignore dims[1]
_QUDIT_ONLY = {TheoremId.T1_FWD, TheoremId.T1_CONV, TheoremId.P1}


def _check_dims(tid: TheoremId, cfg: RunConfig):
    m, n = cfg.dims
    if m > DESK_MAX_DIM or n > DESK_MAX_DIM:
        raise UnsupportedDimension(f"dims {cfg.dims} exceed desk scale ({DESK_MAX_DIM})")
    if tid in _QUDIT_ONLY and n < 3:
        raise UnsupportedDimension(f"{tid.value} needs n >= 3")


def verify(theorem_id, cfg: RunConfig) -> TrialReport:
    """Run one campaign; failing trials are written out as JSON payloads."""
    tid = TheoremId(theorem_id) if not isinstance(theorem_id, TheoremId) else theorem_id
    _check_dims(tid, cfg)
    trial = _TRIALS[tid]
    report = TrialReport(tid, cfg.trials)
    for k in range(cfg.trials):
        seed = samplers.trial_seed(cfg.seed, k)
        out = trial(np.random.default_rng(seed), cfg)
        report.max_residual = max(report.max_residual, out.residual)
        if out.passed:
            report.passes += 1
            continue
        path = None
        if cfg.out_dir is not None and out.payload is not None:
            run_dir = Path(cfg.out_dir) / f"seed-{cfg.seed}"
            run_dir.mkdir(parents=True, exist_ok=True)
            path = str(run_dir / f"{tid.value}-trial{k}.json")
            io.write_json(path, out.payload)
        report.failures.append(Failure(seed, out.residual, path))
    report.failures.sort(key=lambda f: f.seed)
    return report
