"""Quadrature oracle for the sign-model correlation."""

import numpy as np
import pytest

from spinsphere import oracle
from spinsphere.errors import DomainError


def test_aligned_detectors():
    assert abs(oracle.sign_model_correlation(0.0) + 1.0) < 1e-12


def test_anti_aligned_detectors():
    assert abs(oracle.sign_model_correlation(np.pi) - 1.0) < 1e-12


def test_orthogonal_detectors():
    assert abs(oracle.sign_model_correlation(np.pi / 2)) < 1e-12


def test_odd_symmetry_about_quarter_turn():
    # E(pi - theta) = -E(theta): flipping b negates the second sign
    for theta in (0.2, 0.7, 1.1, 1.5):
        lhs = oracle.sign_model_correlation(np.pi - theta)
        rhs = -oracle.sign_model_correlation(theta)
        assert abs(lhs - rhs) < 1e-11


def test_monotone_on_half_range():
    thetas = np.linspace(0.0, np.pi, 61)
    values = oracle.sign_model_curve(thetas)
    assert np.all(np.diff(values) > 0)
    assert np.all(values >= -1.0 - 1e-12)
    assert np.all(values <= 1.0 + 1e-12)


def test_against_brute_force_grid():
    # crude midpoint double integral as a fully independent check
    theta = np.pi / 3
    n_alpha, n_phi = 2000, 2000
    alphas = (np.arange(n_alpha) + 0.5) * np.pi / n_alpha
    phis = (np.arange(n_phi) + 0.5) * 2 * np.pi / n_phi
    a = np.array([0.0, 0.0, 1.0])
    b = np.array([np.sin(theta), 0.0, np.cos(theta)])
    sa = np.sin(alphas)[:, None]
    s = np.stack(
        [
            np.broadcast_to(sa * np.cos(phis)[None, :], (n_alpha, n_phi)),
            np.broadcast_to(sa * np.sin(phis)[None, :], (n_alpha, n_phi)),
            np.broadcast_to(np.cos(alphas)[:, None], (n_alpha, n_phi)),
        ],
        axis=-1,
    )
    integrand = np.sign(s @ a) * np.sign(-(s @ b)) * np.sin(alphas)[:, None]
    brute = integrand.sum() * (np.pi / n_alpha) * (2 * np.pi / n_phi) / (4 * np.pi)
    assert abs(oracle.sign_model_correlation(theta) - brute) < 2e-3


def test_domain_checked():
    with pytest.raises(DomainError):
        oracle.sign_model_correlation(-0.1)
    with pytest.raises(DomainError):
        oracle.sign_model_correlation(np.pi + 0.1)
