"""Closed-form pointer shifts and weak values for PMD/PDL trunks.

Sign convention: behind a PMD element along ``z`` the ``|H>`` component
arrives at ``+dgd/2`` and ``|V>`` at ``-dgd/2``, so ``<t> = (dgd/2) <sigma_z>``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import AnnihilationError, DivergentWeakValueError, TopologyError, ValidationError
from .jones import (
    IDENTITY,
    SIGMA_Z,
    Z_AXIS,
    as_axis,
    bloch_vector,
    normalized,
    pauli,
    pdl_operator,
    pmd_operator,
)
from .netspec import Network, Pmd

OVERLAP_FLOOR = 1e-12
DENOM_FLOOR = 1e-15


@dataclass(frozen=True)
class WeakValue:
    """A real weak value and the strength ``dgd / (2 t_c)`` it refers to."""

    value: float
    regime_strength: float = 0.0

    def __float__(self):
        return self.value


class AbCoefficients(NamedTuple):
    a_coef: complex
    b_coef: complex


def _overlap_decay(ratio: float) -> float:
    return math.exp(-0.5 * ratio * ratio)


def rotated_state(psi0, b: float, omega0: float, axis=Z_AXIS) -> np.ndarray:
    """Polarization after the carrier-frequency rotation ``U(b omega0, axis)``."""
    return pmd_operator(b, axis, omega0) @ np.asarray(psi0, dtype=complex)


def ab_coefficients(psi0, psi1, b: float, omega0: float) -> AbCoefficients:
    """``A = alpha~ conj(mu)``, ``B = beta~ conj(nu)`` for a z-PMD then polarizer ``psi1``."""
    psi = rotated_state(psi0, b, omega0)
    psi1 = np.asarray(psi1, dtype=complex)
    return AbCoefficients(complex(psi[0] * np.conj(psi1[0])), complex(psi[1] * np.conj(psi1[1])))


def abl_probability(psi0, psi1, outcome: str = "H") -> float:
    """ABL probability of finding ``outcome`` ('H' or 'V') between pre- and post-selection."""
    if outcome not in ("H", "V"):
        raise ValidationError(f"outcome must be 'H' or 'V', got {outcome!r}")
    p0 = np.abs(normalized(psi0)) ** 2
    p1 = np.abs(normalized(psi1)) ** 2
    joint = p1 * p0
    denom = joint[0] + joint[1]
    if not denom > DENOM_FLOOR:
        raise AnnihilationError("post-selection is incompatible with the preparation")
    p_h = float(joint[0] / denom)
    return p_h if outcome == "H" else 1.0 - p_h


def sigma_z_exact_pure(psi0, psi1, b: float, omega0: float, ratio: float) -> float:
    """Pointer ``<sigma_z>`` for z-PMD + pure polarizer at strength ``ratio = dgd / (2 t_c)``."""
    a, bb = ab_coefficients(psi0, psi1, b, omega0)
    na, nb = abs(a) ** 2, abs(bb) ** 2
    denom = na + nb + 2 * (a.conjugate() * bb).real * _overlap_decay(ratio)
    if not abs(denom) > DENOM_FLOOR:
        raise DivergentWeakValueError(f"pointer denominator {denom:.3g} vanishes")
    return (na - nb) / denom


def weak_value_pure(psi, psi1, observable=SIGMA_Z) -> WeakValue:
    """``Re(<psi1|O|psi> / <psi1|psi>)``."""
    psi = np.asarray(psi, dtype=complex)
    psi1 = np.asarray(psi1, dtype=complex)
    overlap = np.vdot(psi1, psi)
    if abs(overlap) <= OVERLAP_FLOOR * np.linalg.norm(psi) * np.linalg.norm(psi1):
        raise DivergentWeakValueError("pre- and post-selected states are orthogonal")
    return WeakValue(float((np.vdot(psi1, np.asarray(observable) @ psi) / overlap).real))


def weak_value_filtered(psi, post_op, observable=SIGMA_Z) -> float:
    """``Re(<post_op O>_psi / <post_op>_psi)`` for a positive post-selection operator."""
    psi = normalized(psi)
    post_op = np.asarray(post_op, dtype=complex)
    denom = np.vdot(psi, post_op @ psi).real
    if not denom > DENOM_FLOOR * max(1.0, float(np.abs(post_op).max())):
        raise DivergentWeakValueError(f"post-selection weight {denom:.3g} vanishes")
    return float((np.vdot(psi, post_op @ np.asarray(observable) @ psi) / denom).real)


def weak_value_mixed(psi, mu: float, axis, observable_axis=Z_AXIS) -> WeakValue:
    """Weak value with post-selection on the mixed state ``F^dag F / Tr(F^dag F)``.

    Uses the ``gamma = tanh(mu)`` form and checks it against the
    ``Re(<F^dag F sigma>/<F^dag F>)`` form.
    """
    n = as_axis(axis).vector
    m = as_axis(observable_axis).vector
    s = bloch_vector(psi)
    gamma = 1.0 if mu == math.inf else math.tanh(mu)
    denom = 1.0 + gamma * float(n @ s)
    if not abs(denom) > DENOM_FLOOR:
        raise DivergentWeakValueError(f"mixed weak value denominator {denom:.3g} vanishes")
    value = (float(m @ s) + gamma * float(n @ m)) / denom

    if mu != math.inf:
        f = pdl_operator(mu, axis)
        check = weak_value_filtered(psi, f.conj().T @ f, pauli(observable_axis))
        if not abs(check - value) <= 1e-9 * max(1.0, abs(value)):
            raise ArithmeticError(f"weak value forms disagree: {value!r} vs {check!r}")
    return WeakValue(value)


def mean_toa_pmd_pdl(psi0, b: float, omega0: float, mu: float, axis, t_c: float) -> float:
    """Mean time of arrival behind PMD(b, z) followed by PDL(mu, axis)."""
    psi0 = normalized(psi0)
    n = as_axis(axis)
    alpha, beta = psi0
    pz = abs(alpha) ** 2 - abs(beta) ** 2
    gamma = 1.0 if mu == math.inf else math.tanh(mu)
    r = (alpha * np.conj(beta) * n.n_plus * np.exp(1j * b * omega0)).real
    denom = 1.0 + gamma * (n.z * pz + 2 * r * _overlap_decay(b / (2 * t_c)))
    if not abs(denom) > DENOM_FLOOR:
        raise DivergentWeakValueError(f"denominator {denom:.3g} vanishes")
    return 0.5 * b * (pz + gamma * n.z) / denom


def _element_at(trunk, omega0):
    if isinstance(trunk, Pmd):
        return pmd_operator(trunk.dgd, trunk.axis, omega0)
    return pdl_operator(trunk.mu, trunk.axis)


@dataclass(frozen=True)
class TrunkWeakValue:
    """Contribution ``(dgd / 2) * w`` of one PMD trunk to the first-order ``<t>``."""

    index: int
    dgd: float
    w: float

    @property
    def contribution(self) -> float:
        return 0.5 * self.dgd * self.w


def multi_trunk_weak_values(network: Network, psi0, omega0: float,
                            require_alternating: bool = True) -> list[TrunkWeakValue]:
    """Per-PMD-trunk weak values ``w_k`` of a PMD/PDL/.../PMD chain.

    For PMD trunk ``k`` the pre-selected state is ``psi0`` evolved through
    trunks ``1..k`` and the post-selection operator is ``G^dag G`` with ``G``
    the product of the trunks after ``k``; all are taken at ``omega0``.
    The construction itself works for any chain; pass
    ``require_alternating=False`` to skip the structure check.
    """
    if require_alternating and not network.is_alternating:
        raise TopologyError("network must alternate PMD, PDL, ..., PMD (2N+1 trunks)")
    mats = [_element_at(t, omega0) for t in network]
    upto = []
    acc = IDENTITY
    for m in mats:
        acc = m @ acc
        upto.append(acc)
    after = [IDENTITY] * len(mats)
    acc = IDENTITY
    for k in range(len(mats) - 1, -1, -1):
        after[k] = acc
        acc = acc @ mats[k]

    psi0 = normalized(psi0)
    out_norm = np.linalg.norm(upto[-1] @ psi0)
    if out_norm < 1e-12:
        raise AnnihilationError("network annihilates the input state at the carrier")

    terms = []
    for k, trunk in enumerate(network):
        if not isinstance(trunk, Pmd):
            continue
        pre = upto[k] @ psi0
        post = after[k].conj().T @ after[k]
        w = weak_value_filtered(pre, post, pauli(trunk.axis))
        terms.append(TrunkWeakValue(k, trunk.dgd, w))
    return terms


def multi_trunk_weak_toa(network: Network, psi0, omega0: float) -> float:
    """First-order mean time of arrival ``sum_k (dgd_k / 2) w_k``."""
    return sum(t.contribution for t in multi_trunk_weak_values(network, psi0, omega0))
