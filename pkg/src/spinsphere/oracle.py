"""Independent quadrature for the sign-model correlation.

For a spin axis s uniform on the unit sphere and detector directions
a, b separated by theta, this integrates

    E(theta) = (1/4pi) * integral of sign(s . a) sign(-s . b) dOmega

directly.  The inner azimuthal integral is done in closed form (the
integrand is piecewise constant in phi), leaving a 1-d adaptive
quadrature with known breakpoints.  Nothing here touches the Monte
Carlo code paths; the whole point is an estimate the simulation cannot
contaminate.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import quad

from .errors import DomainError

__all__ = ["sign_model_correlation", "sign_model_curve"]


def _azimuthal_mean(alpha: float, theta: float) -> float:
    """(1/2pi) * integral over phi of sign(-(A cos phi + B)).

    A = sin(alpha) sin(theta) is nonnegative on the domain, so the sign
    flips at phi = arccos(-B/A) when |A| > |B| and never otherwise.
    """
    A = np.sin(alpha) * np.sin(theta)
    B = np.cos(alpha) * np.cos(theta)
    if A <= abs(B):
        return -float(np.sign(B))
    phi_star = np.arccos(np.clip(-B / A, -1.0, 1.0))
    return 1.0 - 2.0 * phi_star / np.pi


def _integrand(alpha: float, theta: float) -> float:
    return np.sign(np.cos(alpha)) * _azimuthal_mean(alpha, theta) * np.sin(alpha) / 2.0


def sign_model_correlation(theta: float) -> float:
    """E(theta) for theta in [0, pi], accurate to well below 1e-6."""
    theta = float(theta)
    if not 0.0 <= theta <= np.pi:
        raise DomainError("separation angle must lie in [0, pi]")
    # kinks: the polar sign flip and the |A| = |B| cone crossings
    breaks = {np.pi / 2}
    tt = np.tan(theta)
    if tt != 0.0 and np.isfinite(tt):
        a1 = float(np.arctan(1.0 / abs(tt)))
        breaks.update((a1, np.pi - a1))
    points = sorted(p for p in breaks if 0.0 < p < np.pi)
    value, _ = quad(
        _integrand,
        0.0,
        np.pi,
        args=(theta,),
        points=points,
        limit=200,
        epsabs=1e-12,
        epsrel=1e-12,
    )
    return float(value)


def sign_model_curve(thetas) -> np.ndarray:
    return np.array([sign_model_correlation(t) for t in np.asarray(thetas, float)])
