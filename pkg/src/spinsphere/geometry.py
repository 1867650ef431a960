"""Round 3-sphere charts and the SU(2) / SO(3) geodesic distance laws.

The central objects are the unit 4-vector chart point Y(chi, theta, phi),
its relabeling as an even rotor, and the two distance functions of the
half-rotation angle eta: the smooth cosine law on SU(2) = S3 and the
piecewise-linear saw obtained after identifying antipodal rotors
(SO(3) = RP3).  The two laws agree only at eta in {0, pi/2, pi, 3pi/2,
2pi} and differ by about 0.207 near eta = pi/4.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import even_embed, even_part
from .errors import DomainError, SingularMatrix

__all__ = [
    "embed_round",
    "frw_line_element",
    "frw_line_element_radial",
    "round_to_flat",
    "flat_to_round",
    "rotor_angle",
    "su2_distance",
    "so3_distance",
    "so3_distance_rotors",
    "quotient_project",
    "so3_exp_parameter",
    "so3_sin_alpha",
    "basis_orientation",
    "SO3Metric",
    "DistanceSample",
]


def embed_round(chi: float, theta: float, phi: float) -> np.ndarray:
    """Hyperspherical chart point on the unit 3-sphere.

    Y = (cos chi, sin chi sin theta cos phi, sin chi sin theta sin phi,
    sin chi cos theta).  The rotation angle of the matching rotor is
    psi = 2 chi.
    """
    sc, cc = np.sin(chi), np.cos(chi)
    st, ct = np.sin(theta), np.cos(theta)
    return np.array([cc, sc * st * np.cos(phi), sc * st * np.sin(phi), sc * ct])


def frw_line_element(chi, theta, phi, dchi, dtheta, dphi) -> float:
    """Closed FRW spatial quadratic form in the hyperspherical chart."""
    return float(
        dchi**2 + np.sin(chi) ** 2 * (dtheta**2 + np.sin(theta) ** 2 * dphi**2)
    )


def frw_line_element_radial(r, theta, phi, dr, dtheta, dphi) -> float:
    """Same form in the r = sin(chi) chart; singular as r -> 1."""
    if abs(r) >= 1.0:
        raise DomainError("radial chart needs |r| < 1")
    return float(
        dr**2 / (1.0 - r**2) + r**2 * (dtheta**2 + np.sin(theta) ** 2 * dphi**2)
    )


def round_to_flat(Y) -> np.ndarray:
    """Relabel a unit 4-vector as the even rotor Y0 + Y1 e23 + Y2 e31 + Y3 e12."""
    return even_embed(np.asarray(Y, float))


def flat_to_round(q) -> np.ndarray:
    """Inverse relabeling: even rotor components back to the 4-vector."""
    return even_part(q)


def rotor_angle(qa, qb) -> float:
    """Angle eta_ab in [0, pi/2] between two unit rotors.

    cos eta_ab = |<qa, qb>| with the 4-component inner product, so the
    value is blind to the sign of either rotor.
    """
    dot = abs(float(np.dot(even_part(qa), even_part(qb))))
    return float(np.arccos(np.clip(dot, 0.0, 1.0)))


def _check_eta(eta: float, hi: float) -> float:
    eta = float(eta)
    if not 0.0 <= eta <= hi:
        raise DomainError(f"angle {eta} outside [0, {hi}]")
    return eta


def su2_distance(eta: float) -> float:
    """Geodesic correlation law on S3: -cos(eta), eta in [0, 2pi]."""
    return -float(np.cos(_check_eta(eta, 2.0 * np.pi)))


def so3_distance(eta: float) -> float:
    """Piecewise-linear saw on the rotation group: -1 + 2 eta/pi, then 3 - 2 eta/pi.

    Domain eta in [0, 2pi]; equals su2_distance exactly at eta in
    {0, pi/2, pi, 3pi/2, 2pi} and nowhere else.
    """
    eta = _check_eta(eta, 2.0 * np.pi)
    if eta <= np.pi:
        return -1.0 + 2.0 * eta / np.pi
    return 3.0 - 2.0 * eta / np.pi


def quotient_project(eta: float) -> float:
    """Distance after antipodal identification; identical to so3_distance."""
    return so3_distance(eta)


def so3_exp_parameter(psi: float) -> float:
    """Exponential-map parameter t(psi) on [0, 4pi]: -1 + psi/pi, then 3 - psi/pi."""
    psi = _check_eta(psi, 4.0 * np.pi)
    if psi <= 2.0 * np.pi:
        return -1.0 + psi / np.pi
    return 3.0 - psi / np.pi


def so3_distance_rotors(qa, qb) -> float:
    """Saw distance from the relative rotor qa * reverse(qb).

    The relative rotation angle psi = 2 atan2(|bivector|, scalar) lands
    in [0, 2pi]; since the saw satisfies D(psi) = D(4pi - psi) this
    branch covers the full 4pi range.  Equals so3_distance(psi/2).
    """
    wa, wb = even_part(qa), even_part(qb)
    # qa * reverse(qb) in (scalar, axis) components; biv(u) biv(v) = -u.v - biv(u x v)
    scalar = float(np.dot(wa, wb))
    biv = -wa[0] * wb[1:] + wb[0] * wa[1:] + np.cross(wa[1:], wb[1:])
    psi = 2.0 * float(np.arctan2(np.linalg.norm(biv), scalar))
    return -1.0 + psi / np.pi


def so3_sin_alpha(eta: float) -> float:
    """Piecewise-linear torsion magnitude: 2 eta/pi on [-pi/2, pi/2], else 2 - 2 eta/pi.

    Domain eta in [-pi/2, 3pi/2].  This is the quotient geometry's
    stand-in for sin(eta); it agrees with it at eta in {0, pi/2, pi}.
    """
    eta = float(eta)
    if not -np.pi / 2 <= eta <= 3 * np.pi / 2:
        raise DomainError(f"angle {eta} outside [-pi/2, 3pi/2]")
    if eta <= np.pi / 2:
        return 2.0 * eta / np.pi
    return 2.0 - 2.0 * eta / np.pi


def basis_orientation(omega) -> int:
    """Orientation class of an ordered 4x4 basis matrix: sign of det."""
    det = float(np.linalg.det(np.asarray(omega, float)))
    if abs(det) < 1e-12:
        raise SingularMatrix("basis matrix is singular")
    return 1 if det > 0 else -1


class SO3Metric:
    """Inner product induced on the rotation group by the quotient map.

    A pure function object: it carries no state.  Between two unit
    rotors at half-rotation angle eta it returns the saw law (the
    non-Euclidean -cos alpha), which coincides with the smooth SU(2)
    value -cos eta exactly at eta in {0, pi/2, pi, 3pi/2, 2pi}.
    """

    def from_angle(self, eta: float) -> float:
        return so3_distance(eta)

    def __call__(self, qa, qb) -> float:
        return so3_distance_rotors(qa, qb)

    def induced_product(self, a, b) -> np.ndarray:
        """Product of two quotient-frame elements with unit axes a, b.

        Returns the multivector -cos(alpha) - sin(alpha) * biv(c) with
        both trig factors replaced by their piecewise quotient laws and
        c the unit normal of (a, b).  The scalar (symmetric) part is the
        induced inner product; the bivector part carries the torsion.
        """
        a = np.asarray(a, float)
        b = np.asarray(b, float)
        eta = float(np.arccos(np.clip(np.dot(a, b), -1.0, 1.0)))
        out = np.zeros(8)
        out[0] = so3_distance(eta)
        cross = np.cross(a, b)
        n = np.linalg.norm(cross)
        if n > 1e-12:
            out[4:7] = -so3_sin_alpha(eta) * cross / n
        return out


@dataclass
class DistanceSample:
    """One row of the distance-comparison curve."""

    eta: float
    su2: float
    so3: float

    @classmethod
    def at(cls, eta: float) -> "DistanceSample":
        return cls(eta=eta, su2=su2_distance(eta), so3=so3_distance(eta))

    def csv_row(self) -> str:
        return f"{self.eta:.17g},{self.su2:.17g},{self.so3:.17g}"
