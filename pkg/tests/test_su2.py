import cmath
import math

import numpy as np
import pytest

from sunmesh import (
    DegenerateInputError,
    EulerAngles,
    ValidationError,
    euler_from_su2,
    project_to_su,
    push_phase_through_coupler,
    random_unitary_qr,
    su2_from_euler,
    zeroing_angles,
)

SQ2 = math.sqrt(0.5)


def random_su2(seed):
    _, u = project_to_su(random_unitary_qr(2, seed=seed))
    return u


def test_identity_angles_give_identity():
    assert np.allclose(su2_from_euler(EulerAngles(0.0, 0.0, 0.0)), np.eye(2))


def test_pure_z_rotation_is_diagonal():
    u = su2_from_euler(EulerAngles(0.8, 0.0, 0.0))
    want = np.diag([cmath.exp(0.4j), cmath.exp(-0.4j)])
    assert np.allclose(u, want, atol=1e-15)


def test_pure_y_rotation_is_real():
    u = su2_from_euler(EulerAngles(0.0, math.pi / 2, 0.0))
    want = np.array([[SQ2, -SQ2], [SQ2, SQ2]])
    assert np.allclose(u, want, atol=1e-15)


def test_su2_from_euler_unit_determinant():
    u = su2_from_euler(EulerAngles(1.1, 0.6, -2.0))
    assert abs(u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0] - 1.0) < 1e-14
    assert np.allclose(u.conj().T @ u, np.eye(2), atol=1e-14)


def test_angles_are_four_pi_periodic_and_two_pi_flips_sign():
    base = EulerAngles(0.5, 1.2, -0.7)
    u = su2_from_euler(base)
    shifted = su2_from_euler(EulerAngles(base.alpha + 4 * math.pi, base.beta, base.gamma))
    flipped = su2_from_euler(EulerAngles(base.alpha + 2 * math.pi, base.beta, base.gamma))
    assert np.allclose(shifted, u, atol=1e-12)
    assert np.allclose(flipped, -u, atol=1e-12)


@pytest.mark.parametrize("seed", range(25))
def test_euler_roundtrip_random(seed):
    u = random_su2(seed)
    ang = euler_from_su2(u)
    assert np.allclose(su2_from_euler(ang), u, atol=1e-12)
    assert 0.0 <= ang.beta <= math.pi
    assert -2 * math.pi < ang.alpha <= 2 * math.pi
    assert -2 * math.pi < ang.gamma <= 2 * math.pi


def test_euler_gimbal_degenerate_cases_put_phase_in_alpha():
    diag = np.diag([cmath.exp(0.9j), cmath.exp(-0.9j)])
    ang = euler_from_su2(diag)
    assert ang.beta < 1e-12
    assert ang.gamma == 0.0
    assert np.allclose(su2_from_euler(ang), diag, atol=1e-12)

    anti = np.array([[0.0, -cmath.exp(0.3j)], [cmath.exp(-0.3j), 0.0]])
    ang = euler_from_su2(anti)
    assert abs(ang.beta - math.pi) < 1e-12
    assert ang.gamma == 0.0
    assert np.allclose(su2_from_euler(ang), anti, atol=1e-12)


def test_euler_rejects_bad_inputs():
    with pytest.raises(ValidationError):
        euler_from_su2(np.eye(3))
    with pytest.raises(ValidationError):
        euler_from_su2(np.diag([1.0, 2.0]))
    with pytest.raises(ValidationError):
        # unitary but determinant -1
        euler_from_su2(np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_zeroing_angles_real_pair():
    ang = zeroing_angles(3.0, 4.0)
    rotated = su2_from_euler(ang).conj().T @ np.array([3.0, 4.0])
    assert abs(rotated[0] - 5.0) < 1e-14
    assert abs(rotated[1]) < 1e-14


@pytest.mark.parametrize("seed", range(20))
def test_zeroing_angles_complex_pairs(seed):
    rng = np.random.default_rng(seed)
    a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
    ang = zeroing_angles(a, b)
    rho = math.hypot(abs(a), abs(b))
    rotated = su2_from_euler(ang).conj().T @ np.array([a, b])
    assert abs(rotated[0] - rho) < 1e-13
    assert abs(rotated[1]) < 1e-13


def test_zeroing_angles_zero_entry_uses_zero_phase():
    ang = zeroing_angles(2.0j, 0.0)
    assert ang.beta == 0.0
    assert abs(ang.alpha - math.pi / 2) < 1e-15
    assert abs(ang.gamma - math.pi / 2) < 1e-15


def test_zeroing_angles_degenerate_pair():
    with pytest.raises(DegenerateInputError):
        zeroing_angles(0.0, 0.0)


@pytest.mark.parametrize("side", ["left", "right"])
@pytest.mark.parametrize("seed", range(30))
def test_push_phase_commutes_diagonal_exactly(side, seed):
    rng = np.random.default_rng(seed)
    ti, tj = rng.uniform(-3.0, 3.0, size=2)
    ang = EulerAngles(*rng.uniform(-2.0, 2.0, size=3))
    new, mu = push_phase_through_coupler(ti, tj, ang, side=side)
    d = np.diag([cmath.exp(1j * ti), cmath.exp(1j * tj)])
    if side == "left":
        lhs = d @ su2_from_euler(ang)
    else:
        lhs = su2_from_euler(ang) @ d
    rhs = cmath.exp(1j * mu) * su2_from_euler(new)
    assert np.abs(lhs - rhs).max() < 1e-13
    assert abs(mu - 0.5 * (ti + tj)) < 1e-15


def test_push_phase_rejects_unknown_side():
    with pytest.raises(ValidationError):
        push_phase_through_coupler(0.1, 0.2, EulerAngles(0, 0, 0), side="middle")
