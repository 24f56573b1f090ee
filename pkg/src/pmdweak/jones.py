"""Jones/Pauli algebra for a single polarization qubit.

States are complex numpy vectors ``[a, b]`` in the ``{|H>, |V>}`` basis and
operators are 2x2 complex arrays. Axes on the Poincare sphere are
:class:`Axis` instances; most functions also accept a plain 3-vector.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AnnihilationError, ValidationError

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = np.stack([SIGMA_X, SIGMA_Y, SIGMA_Z])

H = np.array([1, 0], dtype=complex)
V = np.array([0, 1], dtype=complex)

AXIS_TOL = 1e-9


@dataclass(frozen=True)
class Axis:
    """Unit vector on the Poincare sphere."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        norm = math.sqrt(self.x**2 + self.y**2 + self.z**2)
        if not math.isfinite(norm) or abs(norm - 1.0) > AXIS_TOL:
            raise ValidationError(f"axis must be unit-norm, got |n| = {norm!r}")

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "Axis":
        st = math.sin(theta)
        return cls(st * math.cos(phi), st * math.sin(phi), math.cos(theta))

    @classmethod
    def from_vector(cls, vec, tol: float = AXIS_TOL) -> "Axis":
        """Build an axis from a 3-vector, renormalizing if within ``tol`` of unit length."""
        v = np.asarray(vec, dtype=float)
        if v.shape != (3,) or not np.all(np.isfinite(v)):
            raise ValidationError(f"axis vector must be 3 finite numbers, got {vec!r}")
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > tol:
            raise ValidationError(f"axis must be unit-norm, got |n| = {norm!r}")
        if abs(norm - 1.0) > 1e-14:
            v = v / norm
        return cls(float(v[0]), float(v[1]), float(v[2]))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def theta(self) -> float:
        return math.acos(max(-1.0, min(1.0, self.z)))

    @property
    def phi(self) -> float:
        if self.x == 0.0 and self.y == 0.0:
            return 0.0
        return math.atan2(self.y, self.x)

    @property
    def n_plus(self) -> complex:
        return complex(self.x, self.y)

    def __neg__(self) -> "Axis":
        return Axis(-self.x, -self.y, -self.z)


X_AXIS = Axis(1.0, 0.0, 0.0)
Y_AXIS = Axis(0.0, 1.0, 0.0)
Z_AXIS = Axis(0.0, 0.0, 1.0)


def as_axis(axis) -> Axis:
    if isinstance(axis, Axis):
        return axis
    return Axis.from_vector(axis)


def normalized(state) -> np.ndarray:
    """Return ``state`` as a unit-norm complex 2-vector."""
    psi = np.asarray(state, dtype=complex).reshape(2)
    norm = np.linalg.norm(psi)
    if not np.isfinite(norm) or norm < 1e-300:
        raise ValidationError("cannot normalize a zero or non-finite state")
    return psi / norm


def pauli(axis) -> np.ndarray:
    """``n . sigma`` for the unit vector ``axis``."""
    n = as_axis(axis).vector
    return np.tensordot(n, PAULI, axes=1)


def plus_state(axis) -> np.ndarray:
    """+1 eigenvector of ``pauli(axis)``: ``cos(theta/2)|H> + sin(theta/2) e^{i phi}|V>``."""
    ax = as_axis(axis)
    n_plus = ax.n_plus
    # half-angle forms built from the vector; acos(z) is inaccurate near the poles
    if ax.z >= 0:
        c = math.sqrt((1 + ax.z) / 2)
        return np.array([c, n_plus / (2 * c)])
    s = math.sqrt((1 - ax.z) / 2)
    r = abs(n_plus)
    phase = n_plus / r if r > 0 else 1.0
    return np.array([r / (2 * s), s * phase], dtype=complex)


def bloch_vector(state) -> np.ndarray:
    """Stokes direction ``<sigma>`` of a (normalized copy of a) pure state."""
    psi = normalized(state)
    return np.real(np.einsum("i,kij,j->k", psi.conj(), PAULI, psi))


def pmd_operator(b: float, axis, omega) -> np.ndarray:
    """PMD rotation ``exp(i b omega sigma_n / 2)``.

    ``omega`` may be an array, in which case a stack of shape
    ``omega.shape + (2, 2)`` is returned.
    """
    if not (b >= 0 and math.isfinite(b)):
        raise ValidationError(f"group delay must be finite and >= 0, got {b!r}")
    half = 0.5 * b * np.asarray(omega, dtype=float)
    sig = pauli(axis)
    c = np.cos(half)[..., None, None]
    s = np.sin(half)[..., None, None]
    return c * IDENTITY + 1j * s * sig


def pdl_operator(mu: float, axis) -> np.ndarray:
    """PDL filter ``cosh(mu/2) 1 + sinh(mu/2) sigma_n`` (det = 1).

    ``mu = inf`` is the ideal polarizer; it is returned as the projector
    onto ``|+n>``, i.e. the filter rescaled by its largest eigenvalue.
    """
    if mu == math.inf:
        psi = plus_state(axis)
        return np.outer(psi, psi.conj())
    if not (mu >= 0 and math.isfinite(mu)):
        if mu < 0:
            raise ValidationError(
                f"PDL strength must be >= 0, got {mu!r}; flip the axis instead"
            )
        raise ValidationError(f"PDL strength must be finite or inf, got {mu!r}")
    return math.cosh(mu / 2) * IDENTITY + math.sinh(mu / 2) * pauli(axis)


def expectation(state, op) -> complex:
    """``<psi|M|psi>``."""
    psi = np.asarray(state, dtype=complex)
    return complex(psi.conj() @ np.asarray(op) @ psi)


def polar_decompose(t) -> tuple[np.ndarray, np.ndarray]:
    """Split ``t`` into ``f_eff @ u_eff``: Hermitian positive filter times unitary.

    This is the "effective PMD followed by effective PDL" form of a network
    at one frequency. Closed form for 2x2, with singular values s1, s2:
    ``f = (t t^dag + |det t| 1) / (s1 + s2)`` and
    ``u = (t + e^{i arg det t} adj(t)^dag) / (s1 + s2)``.
    """
    t = np.asarray(t, dtype=complex)
    d = t[0, 0] * t[1, 1] - t[0, 1] * t[1, 0]
    if abs(d) <= 1e-12:
        raise ValidationError("polar decomposition needs an invertible matrix (infinite PDL?)")
    m = t @ t.conj().T
    s_sum = math.sqrt(float(np.real(np.trace(m))) + 2 * abs(d))
    f = (m + abs(d) * IDENTITY) / s_sum
    f = 0.5 * (f + f.conj().T)
    adj = np.array([[t[1, 1], -t[0, 1]], [-t[1, 0], t[0, 0]]])
    u = (t + (d / abs(d)) * adj.conj().T) / s_sum
    return f, u


def unitary_axis(u) -> Axis:
    """Rotation axis of a 2x2 unitary (z for a pure phase)."""
    u = np.asarray(u, dtype=complex)
    su = u / np.sqrt(np.linalg.det(u))
    # su = cos(a) 1 + i sin(a) n.sigma
    n = np.array([np.imag(np.trace(su @ p)) / 2 for p in PAULI])
    norm = np.linalg.norm(n)
    if norm < 1e-12:
        return Z_AXIS
    return Axis.from_vector(n / norm)


def principal_states(t) -> tuple[np.ndarray, np.ndarray]:
    """Principal states of polarization ``f_eff|+m>`` and ``f_eff|-m>``, normalized.

    ``m`` is the rotation axis of the unitary factor of ``t``.
    """
    f, u = polar_decompose(t)
    m = unitary_axis(u)
    return normalized(f @ plus_state(m)), normalized(f @ plus_state(-m))


def _fix_phase(psi: np.ndarray) -> np.ndarray:
    k = 0 if abs(psi[0]) > 1e-15 else 1
    return psi * (abs(psi[k]) / psi[k])


def filtered_state(f, psi0) -> tuple[np.ndarray, np.ndarray]:
    """``psi_F = f|psi0> / ||f|psi0>||`` and its orthogonal complement.

    The complement has its first nonzero component made real positive.
    """
    phi = np.asarray(f, dtype=complex) @ np.asarray(psi0, dtype=complex)
    norm = np.linalg.norm(phi)
    if norm < 1e-12:
        raise AnnihilationError("filter annihilates the input state")
    psi_f = phi / norm
    perp = _fix_phase(np.array([-np.conj(psi_f[1]), np.conj(psi_f[0])]))
    return psi_f, perp
