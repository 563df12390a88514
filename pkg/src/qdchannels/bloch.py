"""Qubit Bloch-ball geometry.

Convention: ``rho = I/2 + r . sigma``, so

    rho = [[1/2 + z, x - i y],
           [x + i y, 1/2 - z]]

and states fill the ball of radius 1/2. ``to_unit_ball``/``from_unit_ball``
convert to the radius-1 convention and are never used internally.

With this convention the qubit channel ``(U, lambda, alpha, beta, gamma)``
with ``alpha = a + ib``, ``beta = c + id``, ``gamma = e + if`` sends
``(x, y, z)`` to ``R_U (x', y', z')`` where

    x' = lambda (c x + d y) + (1 - lambda) (e x + f y)
    y' = lambda (c y - d x) + (1 - lambda) (f x - e y)
    z' = (2 lambda - 1) z + 2 sqrt(lambda (1 - lambda)) (a x + b y)

Placing ``x + iy`` at ``rho_12`` instead flips the sign of ``y`` and gives
``x' = lambda (xc - yd) + ...``, ``y' = lambda (cy + dx) - ...``,
``z' = ... (xa - yb)`` (see ``param_bloch_mirrored``). That form is wrong for
vectors in the convention above.
"""
import csv
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .channel import QuantumChannel, QubitCPUParams
from .errors import BallViolation, DimensionMismatch, NotUnitary
from .matcore import PAULIS, as_matrix, commutator, dagger, frob, is_unitary
from .discord import check_density_matrix

BALL_RADIUS = 0.5


class CollinearityCheck(NamedTuple):
    collinear: bool
    commuting: bool
    cross_norm: float
    commutator_norm: float

    @property
    def agree(self) -> bool:
        return self.collinear == self.commuting


@dataclass(frozen=True, eq=False)
class BlochAffineMap:
    """``r -> linear @ r + offset`` on Bloch vectors."""

    linear: np.ndarray
    offset: np.ndarray

    def __call__(self, r) -> np.ndarray:
        return self.linear @ np.asarray(r, dtype=float) + self.offset

    def max_radius(self, samples: int = 10_000, seed: int = 0) -> float:
        """Largest image radius over random points of the radius-1/2 ball
        (surface points included since the map is affine)."""
        pts = sample_ball(samples, seed)
        return float(np.max(np.linalg.norm(pts @ self.linear.T + self.offset, axis=1)))

    def maps_ball_into_ball(self, samples: int = 10_000, seed: int = 0, tol: float = 1e-10) -> bool:
        return self.max_radius(samples, seed) <= BALL_RADIUS + tol


def bloch_coords(h) -> np.ndarray:
    """``(x, y, z)`` with ``h = Tr(h) I/2 + r . sigma`` for any hermitian ``h``."""
    h = as_matrix(h)
    if h.shape != (2, 2):
        raise DimensionMismatch(f"expected a 2x2 matrix, got {h.shape}")
    return np.array([np.trace(s @ h).real / 2 for s in PAULIS])


def to_bloch(rho) -> np.ndarray:
    rho = as_matrix(rho)
    if rho.shape != (2, 2):
        raise DimensionMismatch(f"expected a qubit state, got {rho.shape}")
    check_density_matrix(rho)
    return bloch_coords(rho)


def from_bloch(r, tol: float = 1e-12) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.linalg.norm(r) > BALL_RADIUS + tol:
        raise BallViolation(f"|r| = {np.linalg.norm(r):.6g} exceeds 1/2")
    x, y, z = r
    return np.array([[0.5 + z, x - 1j * y], [x + 1j * y, 0.5 - z]])


def to_unit_ball(r) -> np.ndarray:
    return 2 * np.asarray(r, dtype=float)


def from_unit_ball(r) -> np.ndarray:
    return 0.5 * np.asarray(r, dtype=float)


def commute_iff_collinear(rho1, rho2, tol: float = 1e-9) -> CollinearityCheck:
    """Collinearity of Bloch vectors versus vanishing commutator.

    ``[rho1, rho2] = 2i (r1 x r2) . sigma`` so the commutator's Frobenius norm
    is ``2 sqrt(2) |r1 x r2|``; the commutator threshold is scaled to match.
    """
    r1, r2 = bloch_coords(rho1), bloch_coords(rho2)
    cross = float(np.linalg.norm(np.cross(r1, r2)))
    comm = frob(commutator(rho1, rho2))
    return CollinearityCheck(cross <= tol, bool(comm <= 2 * np.sqrt(2) * tol), cross, comm)


def rotation_from_unitary(u) -> np.ndarray:
    """Rotation ``R`` with ``bloch(U rho U^dag) = R bloch(rho)``."""
    u = as_matrix(u)
    if u.shape != (2, 2) or not is_unitary(u, 1e-10):
        raise NotUnitary("expected a 2x2 unitary")
    return np.array([[np.trace(sj @ u @ sk @ dagger(u)).real / 2 for sk in PAULIS] for sj in PAULIS])


def channel_bloch_map(ch: QuantumChannel) -> BlochAffineMap:
    if ch.dim != 2:
        raise DimensionMismatch(f"Bloch map needs a qubit channel, got dim {ch.dim}")
    linear = np.column_stack([bloch_coords(ch(s)) for s in PAULIS])
    offset = bloch_coords(ch(np.eye(2) / 2))
    return BlochAffineMap(linear, offset)


def param_bloch_linear(p: QubitCPUParams) -> np.ndarray:
    """``(x, y, z) -> (x', y', z')`` before the rotation ``R_U``."""
    lam = p.lam
    a, b = p.alpha.real, p.alpha.imag
    c, d = p.beta.real, p.beta.imag
    e, f = p.gamma.real, p.gamma.imag
    s = 2 * np.sqrt(lam * (1 - lam))
    return np.array([
        [lam * c + (1 - lam) * e, lam * d + (1 - lam) * f, 0.0],
        [-lam * d + (1 - lam) * f, lam * c - (1 - lam) * e, 0.0],
        [s * a, s * b, 2 * lam - 1],
    ])


def param_bloch_map(p: QubitCPUParams) -> BlochAffineMap:
    """Bloch map of the qubit form: ``R_U`` applied after the parameter map."""
    return BlochAffineMap(rotation_from_unitary(p.u) @ param_bloch_linear(p), np.zeros(3))


def param_bloch_mirrored(p: QubitCPUParams, r) -> np.ndarray:
    """The parameter map written for the mirrored convention ``rho_12 = x + iy``."""
    lam = p.lam
    a, b = p.alpha.real, p.alpha.imag
    c, d = p.beta.real, p.beta.imag
    e, f = p.gamma.real, p.gamma.imag
    x, y, z = r
    return np.array([
        lam * (x * c - y * d) + (1 - lam) * (x * e - y * f),
        lam * (c * y + d * x) - (1 - lam) * (e * y + f * x),
        (2 * lam - 1) * z + 2 * np.sqrt(lam * (1 - lam)) * (x * a - y * b),
    ])


def sample_ball(samples: int, seed: int = 0) -> np.ndarray:
    """Uniform points in the radius-1/2 ball; the first quarter lies on the sphere."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((samples, 3))
    v /= np.linalg.norm(v, axis=1, keepdims=True)
    radii = BALL_RADIUS * rng.random(samples) ** (1 / 3)
    radii[: samples // 4] = BALL_RADIUS
    return v * radii[:, None]


def sphere_points(count: int) -> np.ndarray:
    """Fibonacci lattice on the Bloch sphere (radius 1/2)."""
    k = np.arange(count) + 0.5
    polar = np.arccos(1 - 2 * k / count)
    azim = np.pi * (1 + 5 ** 0.5) * k
    pts = np.column_stack([np.sin(polar) * np.cos(azim), np.sin(polar) * np.sin(azim), np.cos(polar)])
    return BALL_RADIUS * pts


def emit_csv(m: BlochAffineMap, path, count: int = 400) -> int:
    """Write ``x,y,z,xp,yp,zp`` rows for sphere points and their images."""
    pts = sphere_points(count)
    imgs = pts @ m.linear.T + m.offset
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "y", "z", "xp", "yp", "zp"])
        for p, q in zip(pts, imgs):
            w.writerow([repr(float(v)) for v in (*p, *q)])
    return count
