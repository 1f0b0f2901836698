"""Closed-form diagnostics of the channel states.

With ``x = |alpha|^2`` and ``Z = exp(-2x)`` every quantity below depends on
``alpha`` only through ``Z``. Splitting the ``M`` modes into blocks of ``K``
and ``M - K`` modes, each block lives in the two-dimensional span of
``|alpha>^K`` and ``|-alpha>^K``, which makes the bipartite entanglement a
two-qubit problem.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cat_algebra import CatState, Sign, apply_annihilation, fidelity, sign_value
from .errors import ModeError


def _check_split(M: int, K: int) -> None:
    if not 1 <= K < M:
        raise ModeError(f"need 1 <= K < M, got K={K}, M={M}")


def _one_minus_z(n: int, x: float) -> float:
    # 1 - exp(-2 n x)
    return -math.expm1(-2.0 * n * x)


def _one_plus_sz(s: int, n: int, x: float) -> float:
    return _one_minus_z(n, x) if s < 0 else 1.0 + math.exp(-2.0 * n * x)


def concurrence_analytic(M: int, K: int, sign: Sign, alpha: complex) -> float:
    """Entanglement between the first ``K`` and the last ``M - K`` modes."""
    _check_split(M, K)
    s = sign_value(sign)
    x = abs(alpha) ** 2
    if x == 0.0:
        return 2.0 * math.sqrt(K * (M - K)) / M if s < 0 else 0.0
    num = math.sqrt(_one_minus_z(2 * K, x) * _one_minus_z(2 * (M - K), x))
    return num / _one_plus_sz(s, M, x)


@dataclass(frozen=True)
class ConcurrenceDecomposition:
    """Real amplitudes of the channel state in orthonormal block bases.

    Basis vector 0 of a block of ``n`` modes is ``|alpha>^n``; vector 1 is the
    normalized part of ``|-alpha>^n`` orthogonal to it.
    """

    Z: float
    a00: float
    a01: float
    a10: float
    a11: float
    K: int
    M: int
    sign: Sign

    @classmethod
    def build(cls, M: int, K: int, sign: Sign, alpha: complex) -> "ConcurrenceDecomposition":
        _check_split(M, K)
        s = sign_value(sign)
        x = abs(alpha) ** 2
        if x == 0.0:
            raise ValueError("the block bases degenerate at alpha = 0")
        Z = math.exp(-2.0 * x)
        # overlap <alpha|-alpha>^n = Z^n; orthogonal weight sqrt(1 - Z^(2n))
        zk, zr = Z**K, Z ** (M - K)
        wk, wr = math.sqrt(_one_minus_z(2 * K, x)), math.sqrt(_one_minus_z(2 * (M - K), x))
        A = 1.0 / math.sqrt(2.0 * _one_plus_sz(s, M, x))
        return cls(
            Z=Z,
            a00=A * _one_plus_sz(s, M, x),
            a01=s * A * zk * wr,
            a10=s * A * zr * wk,
            a11=s * A * wk * wr,
            K=K,
            M=M,
            sign=sign,
        )

    @property
    def norm_sq(self) -> float:
        return self.a00**2 + self.a01**2 + self.a10**2 + self.a11**2

    @property
    def concurrence(self) -> float:
        return 2.0 * abs(self.a00 * self.a11 - self.a01 * self.a10)


def concurrence_from_decomposition(M: int, K: int, sign: Sign, alpha: complex) -> float:
    return ConcurrenceDecomposition.build(M, K, sign, alpha).concurrence


def mean_photon_per_mode(M: int, sign: Sign, alpha: complex) -> float:
    """``x tanh(Mx)`` for the plus state, ``x coth(Mx)`` for the minus state."""
    s = sign_value(sign)
    x = abs(alpha) ** 2
    if x == 0.0:
        return 1.0 / M if s < 0 else 0.0
    t = math.tanh(M * x)
    return x / t if s < 0 else x * t


def total_mean_photon(M: int, sign: Sign, alpha: complex) -> float:
    return M * mean_photon_per_mode(M, sign, alpha)


def reference_limit_state(kind: str, M: int, alpha: complex | None = None, sign: Sign = "minus"):
    """Limiting forms of the channel state.

    ``ghz``: ``(|alpha>^M +/- |-alpha>^M)/sqrt(2)`` as a CatState, i.e. the logical
    two-term state with weights ``1/sqrt 2`` (not normalized for finite overlap).
    ``w``: the single-excitation Fock vector ``(|10..0> + ... + |0..01>)/sqrt(M)``.
    """
    if M < 2:
        raise ModeError("reference states need M >= 2")
    if kind == "ghz":
        if alpha is None:
            raise ValueError("the ghz reference needs alpha")
        labels = np.array([[alpha] * M, [-alpha] * M], dtype=complex)
        w = 1.0 / math.sqrt(2.0)
        return CatState([w, sign_value(sign) * w], labels, M)
    if kind == "w":
        from .fock_oracle import w_state

        return w_state(M)
    raise ValueError(f"unknown reference kind {kind!r}")


def ghz_fidelity(M: int, sign: Sign, alpha: complex) -> float:
    """``|<GHZ|Psi_M>|^2`` with the reference read as a logical state.

    The reference keeps its weights ``1/sqrt 2`` instead of being renormalized
    against the nonzero overlap ``<alpha|-alpha>^M``; renormalizing would make it
    equal to the channel state itself. The result is ``1 -/+ exp(-2 M |alpha|^2)``
    (minus/plus), which approaches 1 as the two branches become orthogonal.
    """
    from .cat_algebra import channel_state, inner_product

    ref = reference_limit_state("ghz", M, alpha, sign)
    return abs(inner_product(ref, channel_state(M, sign, alpha))) ** 2


def w_fidelity(M: int, alpha: complex, sign: Sign = "minus") -> float:
    """``|<W|Psi_M>|^2`` with the channel state expanded in the Fock basis."""
    from .cat_algebra import channel_state
    from .fock_oracle import fock_inner, to_fock

    v = to_fock(channel_state(M, sign, alpha))
    w = reference_limit_state("w", M)
    return abs(fock_inner(w, v)) ** 2 / (v.norm_sq * w.norm_sq)


def eigen_relation_check(state: CatState, mode_subset, alpha: complex) -> float:
    """``1 - fidelity(prod_j a_j^2 |state>, alpha^(2K) |state>)`` over ``K`` modes.

    Channel states are eigenvectors of the squared annihilators of any subset,
    so the residual vanishes for them. Fidelity is phase- and scale-insensitive,
    so the eigenvalue factor only matters through the zero-vector check.
    """
    modes = list(mode_subset)
    if not modes:
        raise ModeError("mode subset must be non-empty")
    out = state
    for j in modes:
        out = apply_annihilation(apply_annihilation(out, j), j)
    target = state.scaled(alpha ** (2 * len(modes)))
    return 1.0 - fidelity(out, target)


def symmetric_success_hyperbolic(N: int, L: int, alpha2: float, sign: Sign = "minus") -> float:
    """Symmetric-network success probability written with hyperbolic functions."""
    a, b = L * N * alpha2, L * (N - 2) * alpha2
    if sign_value(sign) < 0:
        return float(0.5 * (1.0 - np.sinh(b) / np.sinh(a)))
    return float(0.5 * (1.0 - np.cosh(b) / np.cosh(a)))


def asymmetric_pair_success_hyperbolic(N: int, alpha2: float) -> float:
    """Two-mode cat over the asymmetric network, minus channel, hyperbolic form."""
    return float(0.5 * (1.0 - np.sinh((2 * N - 3) * alpha2) / np.sinh((2 * N - 1) * alpha2)))
