"""Passive linear optics acting on coherent labels.

A two-mode passive unitary maps ``|b_k>|b_l>`` to ``|b_k'>|b_l'>`` with
``(b_k', b_l') = u @ (b_k, b_l)``, so on a :class:`CatState` it is a linear map
of the label columns and leaves coefficients untouched.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cat_algebra import CatState, _check_mode_index
from .errors import ModeError, NonUnitaryError

UNITARY_TOL = 1e-12

SQRT_HALF = np.sqrt(0.5)


@dataclass(frozen=True)
class LabelUnitary:
    u00: complex
    u01: complex
    u10: complex
    u11: complex

    @classmethod
    def from_matrix(cls, m) -> "LabelUnitary":
        m = np.asarray(m, dtype=complex)
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.u00, self.u01], [self.u10, self.u11]], dtype=complex)

    def is_unitary(self, tol: float = UNITARY_TOL) -> bool:
        m = self.matrix
        return bool(np.max(np.abs(m.conj().T @ m - np.eye(2))) <= tol)


IDENTITY = LabelUnitary(1, 0, 0, 1)
BALANCED = LabelUnitary(SQRT_HALF, SQRT_HALF, SQRT_HALF, -SQRT_HALF)


def modified_bs_matrix(theta: float) -> LabelUnitary:
    """``[[cos t, i sin t], [sin t, -i cos t]]``."""
    c, s = np.cos(theta), np.sin(theta)
    return LabelUnitary(c, 1j * s, s, -1j * c)


def apply_pair_unitary(state: CatState, k: int, l: int, u: LabelUnitary) -> CatState:
    k = _check_mode_index(state, k)
    l = _check_mode_index(state, l)
    if k == l:
        raise ModeError("a pair unitary needs two distinct modes")
    if not u.is_unitary():
        raise NonUnitaryError(f"label matrix is not unitary: {u.matrix}")
    labels = state.labels.copy()
    bk, bl = state.labels[:, k], state.labels[:, l]
    labels[:, k] = u.u00 * bk + u.u01 * bl
    labels[:, l] = u.u10 * bk + u.u11 * bl
    return CatState(state.coeffs, labels, state.mode_count)


def phase_shift(state: CatState, j: int, phi: float) -> CatState:
    """``exp(-i phi n_j)``: label at ``j`` becomes ``exp(-i phi) * b``."""
    j = _check_mode_index(state, j)
    labels = state.labels.copy()
    # keep pi shifts exact so |b> -> |-b> without rounding noise
    if np.isclose(np.remainder(phi, 2 * np.pi), np.pi, rtol=0, atol=1e-15):
        labels[:, j] = -labels[:, j]
    else:
        labels[:, j] = labels[:, j] * np.exp(-1j * phi)
    return CatState(state.coeffs, labels, state.mode_count)


def modified_bs_B(state: CatState, k: int, l: int, theta: float) -> CatState:
    return apply_pair_unitary(state, k, l, modified_bs_matrix(theta))


def balanced_bs(state: CatState, k: int, l: int) -> CatState:
    """50:50 splitter ``(b_k, b_l) -> ((b_k + b_l)/sqrt2, (b_k - b_l)/sqrt2)``."""
    return apply_pair_unitary(state, k, l, BALANCED)
