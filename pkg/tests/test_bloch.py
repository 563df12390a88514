import csv

import numpy as np
import pytest

from qdchannels import samplers
from qdchannels.bloch import (
    BlochAffineMap,
    channel_bloch_map,
    commute_iff_collinear,
    emit_csv,
    from_bloch,
    from_unit_ball,
    param_bloch_linear,
    param_bloch_map,
    param_bloch_mirrored,
    rotation_from_unitary,
    sphere_points,
    to_bloch,
    to_unit_ball,
)
from qdchannels.channel import (
    IsotropicParams,
    QubitCPUParams,
    amplitude_damping,
    make_isotropic,
    make_qubit_cpu,
)
from qdchannels.classify import both_directions
from qdchannels.errors import BallViolation, DimensionMismatch, NotDensityMatrix, NotUnitary
from qdchannels.matcore import max_norm


def ball_point(rng, radius=0.5):
    v = rng.standard_normal(3)
    return radius * rng.random() ** (1 / 3) * v / np.linalg.norm(v)


def test_bloch_examples():
    assert np.allclose(to_bloch(np.eye(2) / 2), 0)
    assert np.allclose(to_bloch(np.diag([1.0, 0.0])), [0, 0, 0.5])
    plus = np.full((2, 2), 0.5)
    assert np.allclose(to_bloch(plus), [0.5, 0, 0])


def test_bloch_round_trip(rng):
    for _ in range(100):
        r = ball_point(rng)
        assert np.max(np.abs(to_bloch(from_bloch(r)) - r)) < 1e-14


def test_bloch_errors():
    with pytest.raises(BallViolation):
        from_bloch([0.4, 0.4, 0])
    with pytest.raises(NotDensityMatrix):
        to_bloch(np.diag([1.5, -0.5]))
    with pytest.raises(DimensionMismatch):
        to_bloch(np.eye(3) / 3)


def test_unit_ball_helpers():
    r = np.array([0.1, -0.2, 0.3])
    assert np.allclose(from_unit_ball(to_unit_ball(r)), r)
    assert np.allclose(to_unit_ball([0, 0, 0.5]), [0, 0, 1])


def test_collinearity_examples():
    a, b = np.diag([0.3, 0.7]), np.diag([0.9, 0.1])
    c = commute_iff_collinear(a, b)
    assert c.collinear and c.commuting and c.agree
    d = commute_iff_collinear(np.diag([1.0, 0]), np.full((2, 2), 0.5))
    assert not d.collinear and not d.commuting and d.agree


def test_collinearity_dual_test_random_pairs():
    rng = np.random.default_rng(1)
    for k in range(2000):
        r1 = ball_point(rng)
        r2 = r1 * rng.uniform(-1, 1) if k % 2 else ball_point(rng)
        c = commute_iff_collinear(from_bloch(r1), from_bloch(r2))
        assert c.agree
        assert c.collinear == bool(k % 2)


def test_rotation_identity_and_phase(rng):
    assert max_norm(rotation_from_unitary(np.eye(2)) - np.eye(3)) < 1e-15
    u = samplers.random_unitary(2, rng)
    assert max_norm(rotation_from_unitary(np.exp(0.8j) * u) - rotation_from_unitary(u)) < 1e-14


def test_rotation_is_proper_and_matches_conjugation(rng):
    for _ in range(50):
        u = samplers.random_unitary(2, rng)
        r = rotation_from_unitary(u)
        assert max_norm(r.T @ r - np.eye(3)) < 1e-10
        assert np.linalg.det(r) == pytest.approx(1, abs=1e-10)
        rho = samplers.random_density_matrix(2, rng)
        assert np.allclose(to_bloch(u @ rho @ u.conj().T), r @ to_bloch(rho), atol=1e-14)


def test_phase_gate_rotation_sign():
    # diag(1, e^{i theta}) sends rho_21 -> e^{i theta} rho_21; with
    # rho_21 = x + iy that is a rotation by +theta about z
    theta = 0.7
    r = rotation_from_unitary(np.diag([1, np.exp(1j * theta)]))
    c, s = np.cos(theta), np.sin(theta)
    assert max_norm(r - np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])) < 1e-14
    # direct conjugation oracle
    rho = from_bloch([0.3, 0, 0])
    u = np.diag([1, np.exp(1j * theta)])
    out = to_bloch(u @ rho @ u.conj().T)
    assert np.allclose(out, [0.3 * c, 0.3 * s, 0], atol=1e-15)


def test_rotation_rejects_non_unitary():
    with pytest.raises(NotUnitary):
        rotation_from_unitary(np.diag([1, 2]))


def test_unitary_channel_bloch_map(rng):
    u = samplers.random_unitary(2, rng)
    m = channel_bloch_map(make_isotropic(IsotropicParams(u, 1.0)))
    assert max_norm(m.linear.T @ m.linear - np.eye(3)) < 1e-12
    assert np.linalg.det(m.linear) == pytest.approx(1, abs=1e-12)
    assert np.allclose(m.offset, 0, atol=1e-14)


def test_isotropic_bloch_map_is_scalar():
    for t in (-0.3, 0.2, 0.9):
        m = channel_bloch_map(make_isotropic(IsotropicParams(np.eye(2), t)))
        assert max_norm(m.linear - t * np.eye(3)) < 1e-12
    # the same map from the parameter formula with beta=(2 lam - 1)/lam
    lam = 0.8
    p = QubitCPUParams(np.eye(2), lam, 0, (2 * lam - 1) / lam, 0)
    assert max_norm(param_bloch_linear(p) - (2 * lam - 1) * np.eye(3)) < 1e-12


def test_decohering_bloch_map_rank_one(rng):
    for _ in range(20):
        m = channel_bloch_map(samplers.sample_decohering(2, rng))
        assert np.linalg.matrix_rank(m.linear, tol=1e-10) <= 1
        pts = np.array([m(ball_point(rng)) for _ in range(10)])
        # every image lies on one line through the centre
        assert np.linalg.matrix_rank(pts, tol=1e-10) <= 1


def test_bloch_map_rejects_qutrit():
    with pytest.raises(DimensionMismatch):
        channel_bloch_map(make_isotropic(IsotropicParams(np.eye(3), 0.2)))


def test_non_unital_offset():
    m = channel_bloch_map(amplitude_damping(0.4))
    assert np.allclose(m.offset, [0, 0, 0.2])


def test_param_map_matches_direct_application():
    rng = np.random.default_rng(2)
    worst = 0.0
    for _ in range(1000):
        p = samplers.sample_qubit_cpu_params(rng)
        ch = make_qubit_cpu(p)
        r = ball_point(rng)
        direct = to_bloch(ch(from_bloch(r)))
        worst = max(worst, np.linalg.norm(direct - param_bloch_map(p)(r)),
                    np.linalg.norm(direct - channel_bloch_map(ch)(r)))
    assert worst < 1e-10


def test_param_map_z_component():
    rng = np.random.default_rng(3)
    for _ in range(100):
        p = samplers.sample_qubit_cpu_params(rng)
        p = QubitCPUParams(np.eye(2), p.lam, p.alpha, p.beta, p.gamma)
        x, y, z = r = ball_point(rng)
        a, b = p.alpha.real, p.alpha.imag
        zp = (2 * p.lam - 1) * z + 2 * np.sqrt(p.lam * (1 - p.lam)) * (a * x + b * y)
        assert to_bloch(make_qubit_cpu(p)(from_bloch(r)))[2] == pytest.approx(zp, abs=1e-13)


def test_mirrored_variant_needs_mirrored_convention():
    # exact once x+iy is placed at rho_12 instead of rho_21, wrong otherwise
    rng = np.random.default_rng(4)
    mirrored_err = plain_err = 0.0
    for _ in range(200):
        p = samplers.sample_qubit_cpu_params(rng)
        p = QubitCPUParams(np.eye(2), p.lam, p.alpha, p.beta, p.gamma)
        ch = make_qubit_cpu(p)
        x, y, z = r = ball_point(rng)
        rho_m = np.array([[0.5 + z, x + 1j * y], [x - 1j * y, 0.5 - z]])
        out = ch(rho_m)
        got = np.array([out[0, 1].real, out[0, 1].imag, (out[0, 0] - out[1, 1]).real / 2])
        mirrored_err = max(mirrored_err, np.linalg.norm(got - param_bloch_mirrored(p, r)))
        plain_err = max(plain_err, np.linalg.norm(to_bloch(ch(from_bloch(r))) - param_bloch_mirrored(p, r)))
    assert mirrored_err < 1e-12
    assert plain_err > 1e-2


def test_qubit_maps_keep_ball():
    rng = np.random.default_rng(5)
    for _ in range(20):
        m = channel_bloch_map(samplers.sample_qubit_cpu(rng))
        assert m.maps_ball_into_ball(samples=10_000, tol=1e-10)
    blow_up = BlochAffineMap(1.5 * np.eye(3), np.zeros(3))
    assert not blow_up.maps_ball_into_ball()


def test_both_directions_maps_are_injective_and_keep_collinearity():
    rng = np.random.default_rng(6)
    checked = 0
    while checked < 20:
        ch = samplers.sample_qubit_cpu(rng)
        if not both_directions(ch):
            continue
        checked += 1
        m = channel_bloch_map(ch)
        assert abs(np.linalg.det(m.linear)) > 1e-9
        r = ball_point(rng, 0.2)
        pts = [m(s * r) for s in (-1.0, 0.3, 1.0)]
        assert np.linalg.norm(np.cross(pts[0], pts[2])) < 1e-12
        assert np.linalg.norm(np.cross(pts[1], pts[2])) < 1e-12


def test_emit_csv(tmp_path):
    m = channel_bloch_map(make_qubit_cpu(QubitCPUParams(np.eye(2), 0.7, 0.2, 0.5, 0.1)))
    path = tmp_path / "map.csv"
    assert emit_csv(m, path, count=50) == 50
    rows = list(csv.reader(open(path)))
    assert rows[0] == ["x", "y", "z", "xp", "yp", "zp"]
    assert len(rows) == 51
    vals = np.array(rows[1:], dtype=float)
    assert np.allclose(np.linalg.norm(vals[:, :3], axis=1), 0.5)
    assert np.allclose(vals[:, 3:], vals[:, :3] @ m.linear.T + m.offset)


def test_sphere_points_on_sphere():
    assert np.allclose(np.linalg.norm(sphere_points(100), axis=1), 0.5)
