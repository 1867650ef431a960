"""Tangent frames, the flat connection, and its curvature/torsion signature."""

import numpy as np
import pytest

from spinsphere import algebra, frames, geometry
from spinsphere.errors import ChartDegeneracy, NonUnitRotor, StepOutOfRange

RNG = np.random.Generator(np.random.Philox(key=3))

POINT = (1.0, 1.2, 0.8)

EPS = np.zeros((3, 3, 3))
for i, j, k in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]:
    EPS[i, j, k] = 1.0
    EPS[i, k, j] = -1.0


def random_rotor_coeffs():
    w = RNG.standard_normal(4)
    return w / np.linalg.norm(w)


def random_admissible_point():
    lo, hi = frames.COLLAR + 1e-6, np.pi - frames.COLLAR - 1e-6
    return (RNG.uniform(lo, hi), RNG.uniform(lo, hi), RNG.uniform(0, 2 * np.pi))


def test_frame_at_identity():
    fr = frames.tangent_frame([1.0, 0.0, 0.0, 0.0])
    assert np.array_equal(fr.rows, np.eye(4)[1:])


def test_frame_row_formulas():
    q0, q1, q2, q3 = random_rotor_coeffs()
    fr = frames.tangent_frame([q0, q1, q2, q3])
    assert np.allclose(fr.rows[0], [-q1, q0, q3, -q2], atol=1e-15)
    assert np.allclose(fr.rows[1], [-q2, -q3, q0, q1], atol=1e-15)
    assert np.allclose(fr.rows[2], [-q3, q2, -q1, q0], atol=1e-15)


def test_frame_first_row_example():
    fr = frames.tangent_frame([0.0, 1.0, 0.0, 0.0])
    assert np.array_equal(fr.rows[0], [-1.0, 0.0, 0.0, 0.0])


def test_frame_rows_tangent_and_orthonormal_bulk():
    for _ in range(1000):
        w = random_rotor_coeffs()
        fr = frames.tangent_frame(w)
        assert np.abs(fr.rows @ w).max() < 1e-12
        assert np.abs(frames.flat_metric(fr) - np.eye(3)).max() < 1e-12


def test_frame_rejects_non_unit():
    with pytest.raises(NonUnitRotor):
        frames.tangent_frame([2.0, 0.0, 0.0, 0.0])


def test_flat_metric_negative_control():
    fr = frames.tangent_frame(random_rotor_coeffs())
    fr.rows[1] *= 1.5
    gram = frames.flat_metric(fr)
    assert abs(gram[1, 1] - 1.0) > 0.1


def test_transport_by_identity_is_noop():
    fr = frames.tangent_frame(random_rotor_coeffs())
    moved = frames.frame_transport(fr, [1.0, 0.0, 0.0, 0.0])
    assert np.abs(moved.rows - fr.rows).max() < 1e-15
    assert np.abs(moved.base - fr.base).max() < 1e-15


def test_transport_identity_frame_reproduces_frame():
    p = random_rotor_coeffs()
    fr0 = frames.tangent_frame([1.0, 0.0, 0.0, 0.0])
    moved = frames.frame_transport(fr0, p)
    want = frames.tangent_frame(p)
    assert np.abs(moved.rows - want.rows).max() < 1e-14
    assert np.abs(moved.base - want.base).max() < 1e-14


def test_transport_preserves_orthonormality():
    fr = frames.tangent_frame(random_rotor_coeffs())
    moved = frames.frame_transport(fr, random_rotor_coeffs())
    assert np.abs(frames.flat_metric(moved) - np.eye(3)).max() < 1e-12


def test_transport_path_independence():
    # two different two-leg factorizations of the same total displacement
    fr = frames.tangent_frame(random_rotor_coeffs())
    g = algebra.even_embed(random_rotor_coeffs())
    for _ in range(5):
        p1 = algebra.even_embed(random_rotor_coeffs())
        p2 = algebra.geometric_product(algebra.reverse(p1), g)
        q1 = algebra.even_embed(random_rotor_coeffs())
        q2 = algebra.geometric_product(algebra.reverse(q1), g)
        via_p = frames.frame_transport(frames.frame_transport(fr, p1), p2)
        via_q = frames.frame_transport(frames.frame_transport(fr, q1), q2)
        assert np.abs(via_p.rows - via_q.rows).max() < 1e-10
        assert np.abs(via_p.base - via_q.base).max() < 1e-10


def test_connection_covariant_constancy_at_pinned_point():
    assert frames.covariant_constancy_residual(POINT, 1e-4) < 5e-8


def test_connection_has_antisymmetric_part_and_moves():
    omega_a = frames.weitzenbock_connection(POINT).omega
    antisym = omega_a - np.transpose(omega_a, (0, 2, 1))
    assert np.abs(antisym).max() > 0.1
    omega_b = frames.weitzenbock_connection((0.7, 1.9, 2.5)).omega
    assert np.abs(omega_a - omega_b).max() > 0.01


def test_connection_rejects_collar_and_bad_step():
    with pytest.raises(ChartDegeneracy):
        frames.weitzenbock_connection((0.05, 1.2, 0.8))
    with pytest.raises(ChartDegeneracy):
        frames.weitzenbock_connection((1.0, np.pi - 0.05, 0.8))
    with pytest.raises(StepOutOfRange):
        frames.weitzenbock_connection(POINT, h=1e-7)
    with pytest.raises(StepOutOfRange):
        frames.weitzenbock_connection(POINT, h=1e-2)


def test_curvature_vanishes_at_pinned_point():
    assert np.abs(frames.curvature_tensor(POINT, 1e-4)).max() < 1e-5


def test_torsion_nonzero_and_antisymmetric():
    T = frames.torsion_tensor(POINT).components
    assert np.abs(T).max() > 0.1
    assert np.array_equal(T, -np.transpose(T, (0, 2, 1)))


def test_torsion_in_frame_indices_is_constant():
    for point in [POINT, (0.7, 1.9, 2.5), (2.3, 0.9, 4.0)]:
        Tf = frames.torsion_frame_components(point)
        assert np.abs(Tf + 2.0 * EPS).max() < 1e-6


def test_round_metric_control_is_curved():
    # the Levi-Civita curvature of the round metric is NOT zero: the
    # negative control that the flat-connection result is not an artifact
    R = frames.round_metric_curvature(POINT)
    assert np.abs(R).max() > 0.1
    for K in frames.round_metric_sectional(POINT):
        assert abs(K - 1.0) < 1e-6


def test_torsion_bivector_su2_examples():
    zero = frames.torsion_bivector_su2([1, 0, 0], [1, 0, 0])
    assert np.array_equal(zero, np.zeros(8))
    full = frames.torsion_bivector_su2([1, 0, 0], [0, 1, 0])
    assert np.abs(full - algebra.bivector_embed([0, 0, 1])).max() < 1e-15
    half = frames.torsion_bivector_su2(
        [1, 0, 0], [np.cos(np.pi / 6), np.sin(np.pi / 6), 0]
    )
    assert np.allclose(algebra.bivector_axis(half), [0, 0, 0.5], atol=1e-15)


def test_torsion_bivector_so3_examples():
    def pair(eta):
        return [1, 0, 0], [np.cos(eta), np.sin(eta), 0]

    full = frames.torsion_bivector_so3(*pair(np.pi / 2))
    assert np.allclose(algebra.bivector_axis(full), [0, 0, 1.0], atol=1e-12)
    half = frames.torsion_bivector_so3(*pair(np.pi / 4))
    assert np.allclose(algebra.bivector_axis(half), [0, 0, 0.5], atol=1e-12)
    anti = frames.torsion_bivector_so3(*pair(np.pi))
    assert np.abs(algebra.bivector_axis(anti)).max() < 1e-12


def test_torsion_magnitudes_agree_then_diverge():
    def mags(eta):
        a = [1, 0, 0]
        b = [np.cos(eta), np.sin(eta), 0]
        return (
            np.linalg.norm(algebra.bivector_axis(frames.torsion_bivector_su2(a, b))),
            np.linalg.norm(algebra.bivector_axis(frames.torsion_bivector_so3(a, b))),
        )

    for eta in (1e-15, np.pi / 2):
        su2, so3 = mags(eta)
        assert abs(su2 - so3) < 1e-12
    su2, so3 = mags(np.pi / 4)
    assert np.isclose(abs(su2 - so3), np.sin(np.pi / 4) - 0.5, atol=1e-12)


def test_curvature_random_points_small_sample():
    for _ in range(5):
        point = random_admissible_point()
        assert np.abs(frames.curvature_tensor(point)).max() < 1e-5
        assert np.abs(frames.torsion_tensor(point).components).max() > 1e-3
