"""Restricted Lorentz group, standard boosts and the spin-1/2 Wigner rotation.

Conventions: metric signature (+,-,-,-), natural units, four-vectors
ordered (t, x, y, z).  The standard boost L(p) is the pure (canonical)
boost taking the rest momentum (m, 0, 0, 0) to p, so that

    W(Lambda, p) = L(Lambda p)^-1  Lambda  L(p)

fixes the rest momentum and is a spatial rotation.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidArgumentError,
    LittleGroupViolationError,
    NumericalDegradationError,
)

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

AXES = {
    "x": (1.0, 0.0, 0.0),
    "y": (0.0, 1.0, 0.0),
    "z": (0.0, 0.0, 1.0),
}

UNIT_TOL = 1e-12
GROUP_TOL = 1e-10
LITTLE_GROUP_TOL = 1e-8
IDENTITY_ANGLE = 1e-9
RAPIDITY_WARN = 20.0


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def unit_axis(axis) -> np.ndarray:
    """Return ``axis`` as a float 3-vector, checking it has unit length.

    The names ``"x"``, ``"y"`` and ``"z"`` are accepted as shorthands.
    """
    if isinstance(axis, str):
        try:
            axis = AXES[axis.lower()]
        except KeyError:
            raise InvalidArgumentError(f"unknown axis name {axis!r}") from None
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,) or not np.all(np.isfinite(n)):
        raise InvalidArgumentError(f"axis must be a finite 3-vector, got {axis!r}")
    if abs(np.linalg.norm(n) - 1.0) > UNIT_TOL:
        raise InvalidArgumentError(f"axis must have unit length, |axis| = {np.linalg.norm(n)!r}")
    return n


def _check_rapidity(rapidity: float) -> None:
    if not math.isfinite(rapidity):
        raise InvalidArgumentError(f"rapidity must be finite, got {rapidity!r}")
    if abs(rapidity) > RAPIDITY_WARN:
        warnings.warn(
            f"rapidity {rapidity:g} exceeds {RAPIDITY_WARN:g}; expect loss of precision",
            RuntimeWarning,
            stacklevel=3,
        )


@dataclass(frozen=True)
class FourVector:
    t: float
    x: float
    y: float
    z: float

    @classmethod
    def from_array(cls, a) -> FourVector:
        t, x, y, z = (float(c) for c in np.asarray(a, dtype=float).reshape(4))
        return cls(t, x, y, z)

    def as_array(self) -> np.ndarray:
        return np.array([self.t, self.x, self.y, self.z])

    @property
    def spatial(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def minkowski_square(self) -> float:
        return self.t**2 - self.x**2 - self.y**2 - self.z**2


@dataclass(frozen=True)
class MomentumLabel:
    """On-shell, positive-energy momentum of a particle of mass ``mass``.

    The energy is not stored; it is always rebuilt from the mass shell.
    """

    mass: float
    px: float
    py: float
    pz: float

    def __post_init__(self):
        vals = (self.mass, self.px, self.py, self.pz)
        if not all(math.isfinite(v) for v in vals):
            raise InvalidArgumentError(f"momentum components must be finite: {vals!r}")
        if self.mass <= 0:
            raise InvalidArgumentError(f"mass must be positive, got {self.mass!r}")

    @classmethod
    def from_three_momentum(cls, mass: float, p) -> MomentumLabel:
        px, py, pz = (float(c) for c in np.asarray(p, dtype=float).reshape(3))
        return cls(float(mass), px, py, pz)

    @classmethod
    def along(cls, axis, rapidity: float, mass: float = 1.0) -> MomentumLabel:
        """Momentum of a particle moving along ``axis`` with the given rapidity."""
        return cls.from_three_momentum(mass, mass * math.sinh(rapidity) * unit_axis(axis))

    @property
    def momentum(self) -> np.ndarray:
        return np.array([self.px, self.py, self.pz])

    @property
    def energy(self) -> float:
        return math.sqrt(self.mass**2 + self.px**2 + self.py**2 + self.pz**2)

    def four_vector(self) -> FourVector:
        return FourVector(self.energy, self.px, self.py, self.pz)

    def matches(self, other: MomentumLabel) -> bool:
        """Equality up to the label merge tolerance."""
        if abs(self.mass - other.mass) > 1e-12:
            return False
        a, b = self.momentum, other.momentum
        scale = max(1.0, float(np.linalg.norm(a)), float(np.linalg.norm(b)))
        return float(np.linalg.norm(a - b)) <= 1e-9 * scale

    def transformed(self, lam: LorentzTransform) -> MomentumLabel:
        q = lam.matrix @ self.four_vector().as_array()
        return MomentumLabel.from_three_momentum(self.mass, q[1:])


@dataclass(frozen=True, eq=False)
class LorentzTransform:
    """Proper orthochronous Lorentz matrix acting on column four-vectors."""

    matrix: np.ndarray

    def __post_init__(self):
        m = _frozen(self.matrix)
        if m.shape != (4, 4) or not np.all(np.isfinite(m)):
            raise InvalidArgumentError("a Lorentz transform is a finite 4x4 matrix")
        object.__setattr__(self, "matrix", m)
        # Errors grow with the square of the largest entry.
        scale = max(1.0, float(np.max(np.abs(m)))) ** 2
        metric_err = float(np.max(np.abs(m.T @ METRIC @ m - METRIC)))
        if metric_err > GROUP_TOL * scale:
            raise NumericalDegradationError(f"metric not preserved (error {metric_err:.3e})")
        if m[0, 0] < 1.0 - GROUP_TOL * scale:
            raise NumericalDegradationError("transform is not orthochronous")
        det = float(np.linalg.det(m))
        if abs(det - 1.0) > GROUP_TOL * scale**2:
            raise NumericalDegradationError(f"transform is not proper (det {det!r})")

    @classmethod
    def identity(cls) -> LorentzTransform:
        return cls(np.eye(4))

    def is_identity(self) -> bool:
        return bool(np.array_equal(self.matrix, np.eye(4)))

    def __matmul__(self, other: LorentzTransform) -> LorentzTransform:
        return compose(self, other)

    def __repr__(self):
        return f"LorentzTransform({np.array2string(self.matrix, precision=6)})"


@dataclass(frozen=True, eq=False)
class WignerRotation:
    """Spatial rotation in the massive little group."""

    matrix: np.ndarray

    def __post_init__(self):
        r = _frozen(self.matrix)
        if r.shape != (3, 3):
            raise InvalidArgumentError("a rotation is a 3x3 matrix")
        if np.max(np.abs(r.T @ r - np.eye(3))) > UNIT_TOL or abs(np.linalg.det(r) - 1.0) > UNIT_TOL:
            raise InvalidArgumentError("matrix is not a proper rotation")
        object.__setattr__(self, "matrix", r)

    @classmethod
    def about(cls, axis, angle: float) -> WignerRotation:
        return cls(_rodrigues(unit_axis(axis), angle))

    def __matmul__(self, other: WignerRotation) -> WignerRotation:
        return WignerRotation(_project_to_so3(self.matrix @ other.matrix))

    def quaternion(self) -> np.ndarray:
        return _quaternion(self.matrix)

    def axis_angle(self) -> tuple[np.ndarray | None, float]:
        """Axis and angle with the angle in [0, pi].

        Below an angle of 1e-9 the axis is undefined and ``None`` is returned.
        """
        q = self.quaternion()
        s = float(np.linalg.norm(q[1:]))
        angle = 2.0 * math.atan2(s, q[0])
        if angle < IDENTITY_ANGLE:
            return None, 0.0
        return q[1:] / s, angle


@dataclass(frozen=True, eq=False)
class SpinHalfOperator:
    """SU(2) matrix acting on the (up, down) spin basis."""

    matrix: np.ndarray

    def __post_init__(self):
        u = np.array(self.matrix, dtype=complex)
        if u.shape != (2, 2):
            raise InvalidArgumentError("a spin-1/2 operator is 2x2")
        if np.max(np.abs(u.conj().T @ u - np.eye(2))) > UNIT_TOL or abs(np.linalg.det(u) - 1.0) > UNIT_TOL:
            raise InvalidArgumentError("matrix is not in SU(2)")
        u.setflags(write=False)
        object.__setattr__(self, "matrix", u)

    def rotation_matrix(self) -> np.ndarray:
        """The SO(3) image: r[j, k] = Tr(sigma_j U sigma_k U^dag) / 2."""
        u = self.matrix
        return np.array(
            [[0.5 * np.trace(sj @ u @ sk @ u.conj().T).real for sk in PAULI] for sj in PAULI]
        )


def _rodrigues(n: np.ndarray, angle: float) -> np.ndarray:
    k = np.array([[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]])
    return np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)


def _project_to_so3(r: np.ndarray) -> np.ndarray:
    u, _, vt = np.linalg.svd(r)
    if np.linalg.det(u @ vt) < 0:
        u[:, -1] = -u[:, -1]
    return u @ vt


def _quaternion(r: np.ndarray) -> np.ndarray:
    """Unit quaternion (w, x, y, z) of a rotation with w >= 0.

    Pivots on the largest of the trace and the diagonal entries, so the
    half-angle pi branch takes its axis from the symmetric part.
    """
    tr = r[0, 0] + r[1, 1] + r[2, 2]
    k = int(np.argmax([tr, r[0, 0], r[1, 1], r[2, 2]]))
    if k == 0:
        w = 0.5 * math.sqrt(max(0.0, 1.0 + tr))
        q = [w, (r[2, 1] - r[1, 2]) / (4 * w), (r[0, 2] - r[2, 0]) / (4 * w), (r[1, 0] - r[0, 1]) / (4 * w)]
    elif k == 1:
        x = 0.5 * math.sqrt(max(0.0, 1.0 + r[0, 0] - r[1, 1] - r[2, 2]))
        q = [(r[2, 1] - r[1, 2]) / (4 * x), x, (r[0, 1] + r[1, 0]) / (4 * x), (r[0, 2] + r[2, 0]) / (4 * x)]
    elif k == 2:
        y = 0.5 * math.sqrt(max(0.0, 1.0 - r[0, 0] + r[1, 1] - r[2, 2]))
        q = [(r[0, 2] - r[2, 0]) / (4 * y), (r[0, 1] + r[1, 0]) / (4 * y), y, (r[1, 2] + r[2, 1]) / (4 * y)]
    else:
        z = 0.5 * math.sqrt(max(0.0, 1.0 - r[0, 0] - r[1, 1] + r[2, 2]))
        q = [(r[1, 0] - r[0, 1]) / (4 * z), (r[0, 2] + r[2, 0]) / (4 * z), (r[1, 2] + r[2, 1]) / (4 * z), z]
    q = np.array(q)
    q /= np.linalg.norm(q)
    if q[0] < 0:
        q = -q
    return q


def boost_along_axis(axis, rapidity: float) -> LorentzTransform:
    """Pure boost taking (m, 0, 0, 0) to (m cosh r, m sinh r * axis)."""
    n = unit_axis(axis)
    _check_rapidity(rapidity)
    ch, sh = math.cosh(rapidity), math.sinh(rapidity)
    m = np.eye(4)
    m[0, 0] = ch
    m[0, 1:] = m[1:, 0] = sh * n
    m[1:, 1:] += (ch - 1.0) * np.outer(n, n)
    return LorentzTransform(m)


def rotation_about_axis(axis, angle: float) -> LorentzTransform:
    m = np.eye(4)
    m[1:, 1:] = _rodrigues(unit_axis(axis), angle)
    return LorentzTransform(m)


def rotation_transform(r: WignerRotation) -> LorentzTransform:
    m = np.eye(4)
    m[1:, 1:] = r.matrix
    return LorentzTransform(m)


def compose(a: LorentzTransform, b: LorentzTransform) -> LorentzTransform:
    """``a`` after ``b``."""
    return LorentzTransform(a.matrix @ b.matrix)


def inverse(a: LorentzTransform) -> LorentzTransform:
    # eta L^T eta is the exact group inverse and avoids a linear solve.
    return LorentzTransform(METRIC @ a.matrix.T @ METRIC)


def apply(a: LorentzTransform, v: FourVector) -> FourVector:
    return FourVector.from_array(a.matrix @ v.as_array())


def _standard_boost_matrix(p: MomentumLabel, sign: float = 1.0) -> np.ndarray:
    m, e, k = p.mass, p.energy, p.momentum
    out = np.eye(4)
    out[0, 0] = e / m
    out[0, 1:] = out[1:, 0] = sign * k / m
    out[1:, 1:] += np.outer(k, k) / (m * (e + m))
    return out


def standard_boost(p: MomentumLabel) -> LorentzTransform:
    """Canonical boost L(p) with L(p) (m, 0, 0, 0) = p and no rotation part."""
    if p.mass <= 0:
        raise InvalidArgumentError("standard boost needs a positive mass")
    return LorentzTransform(_standard_boost_matrix(p))


def wigner_matrix(lam: LorentzTransform, p: MomentumLabel) -> np.ndarray:
    """The raw 4x4 product L(Lambda p)^-1 Lambda L(p)."""
    lp = p.transformed(lam)
    return _standard_boost_matrix(lp, sign=-1.0) @ lam.matrix @ _standard_boost_matrix(p)


def wigner_rotation(lam: LorentzTransform, p: MomentumLabel) -> WignerRotation:
    w = wigner_matrix(lam, p)
    residual = max(abs(w[0, 0] - 1.0), float(np.max(np.abs(w[0, 1:]))), float(np.max(np.abs(w[1:, 0]))))
    if residual > LITTLE_GROUP_TOL:
        raise LittleGroupViolationError(
            f"Wigner product mixes time and space by {residual:.3e} (momentum {p})"
        )
    # The spatial block is orthogonal only to rounding; snap it back onto SO(3).
    return WignerRotation(_project_to_so3(w[1:, 1:]))


def su2_lift(r: WignerRotation) -> SpinHalfOperator:
    """U = cos(t/2) I - i sin(t/2) n.sigma, with the rotation angle t in [0, pi]."""
    w, x, y, z = r.quaternion()
    return SpinHalfOperator(np.array([[w - 1j * z, -y - 1j * x], [y - 1j * x, w + 1j * z]]))


def spin_matrix(lam: LorentzTransform, p: MomentumLabel) -> np.ndarray:
    """D[W(Lambda, p)] as a plain 2x2 array."""
    return su2_lift(wigner_rotation(lam, p)).matrix


def _standard_boost_stack(mass: np.ndarray, k: np.ndarray, sign: float = 1.0) -> np.ndarray:
    e = np.sqrt(mass**2 + np.einsum("ni,ni->n", k, k))
    out = np.tile(np.eye(4), (len(mass), 1, 1))
    out[:, 0, 0] = e / mass
    out[:, 0, 1:] = out[:, 1:, 0] = sign * k / mass[:, None]
    out[:, 1:, 1:] += np.einsum("ni,nj->nij", k, k) / (mass * (e + mass))[:, None, None]
    return out


def _quaternion_stack(r: np.ndarray) -> np.ndarray:
    """Row-wise version of the pivoting quaternion extraction."""
    d0, d1, d2 = r[:, 0, 0], r[:, 1, 1], r[:, 2, 2]
    tr = d0 + d1 + d2
    a21, a02, a10 = r[:, 2, 1] - r[:, 1, 2], r[:, 0, 2] - r[:, 2, 0], r[:, 1, 0] - r[:, 0, 1]
    s01, s02, s12 = r[:, 0, 1] + r[:, 1, 0], r[:, 0, 2] + r[:, 2, 0], r[:, 1, 2] + r[:, 2, 1]
    piv = 0.5 * np.sqrt(np.maximum(0.0, 1.0 + np.stack([tr, d0 - d1 - d2, d1 - d0 - d2, d2 - d0 - d1], axis=1)))
    k = np.argmax(np.stack([tr, d0, d1, d2], axis=1), axis=1)
    h = 4.0 * piv[np.arange(len(r)), k]
    cand = np.stack([
        np.stack([h / 4, a21 / h, a02 / h, a10 / h], axis=1),
        np.stack([a21 / h, h / 4, s01 / h, s02 / h], axis=1),
        np.stack([a02 / h, s01 / h, h / 4, s12 / h], axis=1),
        np.stack([a10 / h, s02 / h, s12 / h, h / 4], axis=1),
    ])
    q = cand[k, np.arange(len(r))]
    q /= np.linalg.norm(q, axis=1, keepdims=True)
    q[q[:, 0] < 0] *= -1
    return q


def spin_matrices(lam: LorentzTransform, momenta) -> tuple[np.ndarray, list[MomentumLabel]]:
    """Stacked D[W(Lambda, p)] for several momenta, plus the boosted labels.

    Same conventions and checks as :func:`spin_matrix`, done in one pass.
    """
    if not len(momenta):
        return np.zeros((0, 2, 2), dtype=complex), []
    mass = np.array([p.mass for p in momenta])
    k = np.array([p.momentum for p in momenta])
    e = np.sqrt(mass**2 + np.einsum("ni,ni->n", k, k))
    q = np.column_stack([e, k]) @ lam.matrix.T
    moved = [MomentumLabel.from_three_momentum(m, v) for m, v in zip(mass, q[:, 1:])]
    k2 = np.array([p.momentum for p in moved])
    w = _standard_boost_stack(mass, k2, -1.0) @ lam.matrix @ _standard_boost_stack(mass, k)
    residual = np.maximum.reduce([
        np.abs(w[:, 0, 0] - 1.0), np.max(np.abs(w[:, 0, 1:]), axis=1), np.max(np.abs(w[:, 1:, 0]), axis=1)
    ])
    bad = int(np.argmax(residual))
    if residual[bad] > LITTLE_GROUP_TOL:
        raise LittleGroupViolationError(
            f"Wigner product mixes time and space by {residual[bad]:.3e} (momentum {momenta[bad]})"
        )
    u, _, vt = np.linalg.svd(w[:, 1:, 1:])
    flip = np.linalg.det(u @ vt) < 0
    u[flip, :, -1] *= -1
    qw, qx, qy, qz = _quaternion_stack(u @ vt).T
    d = np.empty((len(momenta), 2, 2), dtype=complex)
    d[:, 0, 0], d[:, 0, 1] = qw - 1j * qz, -qy - 1j * qx
    d[:, 1, 0], d[:, 1, 1] = qy - 1j * qx, qw + 1j * qz
    return d, moved
