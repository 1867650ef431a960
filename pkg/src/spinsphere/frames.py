"""Global tangent frames on the 3-sphere and the flat-connection checks.

The sphere of unit rotors carries three everywhere-nonzero tangent
fields, obtained by left-multiplying the base point by the three unit
bivectors.  Expressed in a coordinate chart this frame defines a
connection under which it is covariantly constant; the associated
curvature vanishes to finite-difference accuracy while the torsion does
not.  A Levi-Civita control for the round metric (which has constant
sectional curvature +1) guards against a trivially-zero test setup.

All derivative estimates use five-point central stencils, O(h^4), so
the default step 1e-4 keeps curvature residuals near 1e-7 even close
to the admissible-region collars.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import algebra
from .errors import ChartDegeneracy, NonUnitRotor, StepOutOfRange
from .geometry import embed_round, so3_sin_alpha

__all__ = [
    "TangentFrame",
    "ConnectionCoefficients",
    "TorsionTensor",
    "tangent_frame",
    "frame_transport",
    "flat_metric",
    "weitzenbock_connection",
    "covariant_constancy_residual",
    "curvature_tensor",
    "torsion_tensor",
    "torsion_frame_components",
    "torsion_bivector_su2",
    "torsion_bivector_so3",
    "round_metric_curvature",
    "round_metric_sectional",
    "COLLAR",
    "STEP_RANGE",
]

# left multiplication by e23, e31, e12 acting on rotor components
# (q0, q1, q2, q3) = (scalar, e23, e31, e12)
_LEFT_BIVECTOR = np.array(
    [
        [[0, -1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, -1, 0]],
        [[0, 0, -1, 0], [0, 0, 0, -1], [1, 0, 0, 0], [0, 1, 0, 0]],
        [[0, 0, 0, -1], [0, 0, 1, 0], [0, -1, 0, 0], [1, 0, 0, 0]],
    ],
    dtype=float,
)

COLLAR = 0.1
STEP_RANGE = (1e-6, 1e-3)


@dataclass
class TangentFrame:
    """Orthonormal frame rows (3x4) attached to a unit rotor base point."""

    rows: np.ndarray
    base: np.ndarray


@dataclass
class ConnectionCoefficients:
    """omega[mu, nu, alpha] at a chart point; nu is the derivative index."""

    omega: np.ndarray
    point: tuple
    h: float


@dataclass
class TorsionTensor:
    """components[sigma, mu, nu], antisymmetric in (mu, nu) by construction."""

    components: np.ndarray


def _even_coeffs(q) -> np.ndarray:
    """Accept a rotor as 8 multivector slots or 4 even coefficients."""
    q = np.asarray(q, float)
    if q.shape == (8,):
        if not algebra.is_unit_rotor(q):
            raise NonUnitRotor("rotor is not unit / not even")
        return algebra.even_part(q)
    if q.shape == (4,):
        if abs(np.linalg.norm(q) - 1.0) > algebra.UNIT_TOL:
            raise NonUnitRotor("rotor coefficients are not unit norm")
        return q
    raise NonUnitRotor(f"expected 4 or 8 components, got shape {q.shape}")


def tangent_frame(q) -> TangentFrame:
    """Frame rows beta_a(q) = (bivector_a) q as 4-component tangent vectors.

    Rows are mutually orthonormal and each is orthogonal to q itself.
    """
    w = _even_coeffs(q)
    return TangentFrame(rows=_LEFT_BIVECTOR @ w, base=w)


def frame_transport(frame: TangentFrame, p) -> TangentFrame:
    """Right-translate a frame by the unit rotor p.

    Each row, read as an even element, is multiplied by p on the right;
    the base moves from q to q p.  Transporting the identity frame to p
    reproduces tangent_frame(p), and consecutive transports compose, so
    transport between two fixed points is path independent.
    """
    p8 = algebra.even_embed(_even_coeffs(p))
    moved = np.stack(
        [
            algebra.even_part(
                algebra.geometric_product(algebra.even_embed(row), p8)
            )
            for row in frame.rows
        ]
    )
    base = algebra.even_part(
        algebra.geometric_product(algebra.even_embed(frame.base), p8)
    )
    return TangentFrame(rows=moved, base=base)


def flat_metric(frame: TangentFrame) -> np.ndarray:
    """Gram matrix of the frame rows; identity for a valid frame."""
    return frame.rows @ frame.rows.T


def _central4(f, x, mu: int, h: float):
    """Five-point central derivative along coordinate mu."""
    e = np.zeros(3)
    e[mu] = h
    return (-f(x + 2 * e) + 8 * f(x + e) - 8 * f(x - e) + f(x - 2 * e)) / (12 * h)


def _check_point_step(chart_point, h: float) -> np.ndarray:
    x = np.asarray(chart_point, float)
    if x.shape != (3,):
        raise ChartDegeneracy("chart point must be (chi, theta, phi)")
    chi, theta = x[0], x[1]
    chi_clear = min(abs(chi), abs(chi - np.pi), abs(chi - 2 * np.pi))
    theta_clear = min(abs(theta), abs(theta - np.pi))
    if chi_clear < COLLAR or theta_clear < COLLAR:
        raise ChartDegeneracy(
            f"point {tuple(x)} is inside the {COLLAR}-rad degeneracy collar"
        )
    if not STEP_RANGE[0] <= h <= STEP_RANGE[1]:
        raise StepOutOfRange(f"step {h} outside {STEP_RANGE}")
    return x


def _embed(x: np.ndarray) -> np.ndarray:
    return embed_round(x[0], x[1], x[2])


def _coframe(x: np.ndarray, h: float) -> np.ndarray:
    """C[a, mu] = beta_a(q(x)) . d_mu q(x), chart Jacobian by stencil.

    Differencing the embedding keeps the construction agnostic about
    the chart; nothing here assumes hyperspherical coordinates.
    """
    jac = np.stack([_central4(_embed, x, mu, h) for mu in range(3)], axis=1)
    rows = _LEFT_BIVECTOR @ _embed(x)
    return rows @ jac


def weitzenbock_connection(chart_point, h: float = 1e-4) -> ConnectionCoefficients:
    """Connection making the frame covariantly constant, by finite differences.

    omega[mu, nu, alpha] solves d_nu C[a, alpha] = C[a, mu] omega[mu, nu, alpha]
    for the chart coframe C; the contraction uses the inverse coframe
    (for the orthonormal frame rows the pseudo-inverse is the transpose,
    and the square coframe matrix is inverted directly).
    """
    x = _check_point_step(chart_point, h)
    C = _coframe(x, h)
    Ci = np.linalg.inv(C)
    dC = np.stack([_central4(lambda y: _coframe(y, h), x, nu, h) for nu in range(3)])
    omega = np.einsum("ma,nab->mnb", Ci, dC)
    return ConnectionCoefficients(omega=omega, point=tuple(x), h=h)


def covariant_constancy_residual(chart_point, h: float = 1e-4) -> float:
    """max |d_nu C - C omega| with an independent derivative at step 2h.

    The doubled step keeps the check independent of the stencil used
    inside weitzenbock_connection without amplifying rounding noise.
    """
    x = _check_point_step(chart_point, h)
    conn = weitzenbock_connection(x, h)
    C = _coframe(x, h)
    dC = np.stack(
        [_central4(lambda y: _coframe(y, h), x, nu, 2 * h) for nu in range(3)]
    )
    resid = dC - np.einsum("am,mnb->nab", C, conn.omega)
    return float(np.abs(resid).max())


def curvature_tensor(chart_point, h: float = 1e-4) -> np.ndarray:
    """R[sigma, alpha, mu, nu] of the frame connection; zero up to stencil noise."""
    x = _check_point_step(chart_point, h)
    omega = weitzenbock_connection(x, h).omega

    def conn_at(y):
        return weitzenbock_connection(y, h).omega

    d_omega = np.stack([_central4(conn_at, x, mu, h) for mu in range(3)])
    return (
        np.einsum("msna->samn", d_omega)
        - np.einsum("nsma->samn", d_omega)
        + np.einsum("lna,sml->samn", omega, omega)
        - np.einsum("lma,snl->samn", omega, omega)
    )


def torsion_tensor(chart_point, h: float = 1e-4) -> TorsionTensor:
    """Antisymmetrization of the connection's lower indices; O(1) generically."""
    omega = weitzenbock_connection(chart_point, h).omega
    return TorsionTensor(components=omega - np.transpose(omega, (0, 2, 1)))


def torsion_frame_components(chart_point, h: float = 1e-4) -> np.ndarray:
    """Torsion with all indices converted to frame legs.

    Tf[c, a, b] = C[c, sigma] T[sigma, mu, nu] Cinv[mu, a] Cinv[nu, b];
    for this frame field the result is the constant -2 eps_abc.
    """
    x = _check_point_step(chart_point, h)
    T = torsion_tensor(x, h).components
    C = _coframe(x, h)
    Ci = np.linalg.inv(C)
    return np.einsum("cs,smn,ma,nb->cab", C, T, Ci, Ci)


def torsion_bivector_su2(a, b) -> np.ndarray:
    """Torsion bivector of two unit axes on the sphere: biv(a x b).

    Magnitude sin(eta_ab); parallel axes give the zero bivector.
    """
    cross = np.cross(np.asarray(a, float), np.asarray(b, float))
    if np.linalg.norm(cross) < 1e-12:
        return np.zeros(8)
    return algebra.bivector_embed(cross)


def torsion_bivector_so3(a, b) -> np.ndarray:
    """Quotient-geometry torsion bivector: piecewise-linear magnitude.

    Same axis as the spherical version but scaled by the saw-tooth
    stand-in for sin(eta); zero for parallel axes and at eta = pi.
    """
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    cross = np.cross(a, b)
    n = float(np.linalg.norm(cross))
    if n < 1e-12:
        return np.zeros(8)
    eta = float(np.arccos(np.clip(np.dot(a, b), -1.0, 1.0)))
    return algebra.bivector_embed(so3_sin_alpha(eta) * cross / n)


# ---------------------------------------------------------------------------
# Round-metric Levi-Civita control.  The FRW 3-sphere has sectional
# curvature +1 everywhere; a connection pipeline that reported zero here
# would be differentiating nothing.

def _round_metric(x: np.ndarray) -> np.ndarray:
    chi, theta = x[0], x[1]
    return np.diag([1.0, np.sin(chi) ** 2, (np.sin(chi) * np.sin(theta)) ** 2])


def _christoffel(x: np.ndarray, h: float) -> np.ndarray:
    g_inv = np.linalg.inv(_round_metric(x))
    dg = np.stack([_central4(_round_metric, x, mu, h) for mu in range(3)])
    return 0.5 * (
        np.einsum("sl,mln->smn", g_inv, dg)
        + np.einsum("sl,nlm->smn", g_inv, dg)
        - np.einsum("sl,lmn->smn", g_inv, dg)
    )


def round_metric_curvature(chart_point, h: float = 1e-4) -> np.ndarray:
    """Riemann tensor R[sigma, alpha, mu, nu] of the round metric (nonzero)."""
    x = _check_point_step(chart_point, h)
    gamma = _christoffel(x, h)
    d_gamma = np.stack(
        [_central4(lambda y: _christoffel(y, h), x, mu, h) for mu in range(3)]
    )
    return (
        np.einsum("msna->samn", d_gamma)
        - np.einsum("nsma->samn", d_gamma)
        + np.einsum("lna,sml->samn", gamma, gamma)
        - np.einsum("lma,snl->samn", gamma, gamma)
    )


def round_metric_sectional(chart_point, h: float = 1e-4) -> np.ndarray:
    """Sectional curvatures of the three coordinate planes; all +1."""
    x = _check_point_step(chart_point, h)
    R = round_metric_curvature(x, h)
    g = _round_metric(x)
    R_low = np.einsum("ts,samn->tamn", g, R)
    out = []
    for m, n in ((0, 1), (0, 2), (1, 2)):
        denom = g[m, m] * g[n, n] - g[m, n] ** 2
        out.append(R_low[m, n, m, n] / denom)
    return np.array(out)
