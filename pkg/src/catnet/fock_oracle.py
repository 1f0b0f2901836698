"""Dense truncated Fock-space twin of the sparse coherent representation.

Everything here is deliberately brute force: states are full amplitude arrays
of shape ``(c_1+1, ..., c_M+1)`` and two-mode optics are applied by
exponentiating the quadratic generator inside each fixed-photon-number block.
It exists to check :mod:`catnet.cat_algebra`, :mod:`catnet.linear_optics` and
:mod:`catnet.measurement` through an independent code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .cat_algebra import CatState, norm_sq
from .errors import MemoryBudgetExceeded, ModeError, NonUnitaryError, TailMassExceeded
from .linear_optics import (
    BALANCED,
    LabelUnitary,
    apply_pair_unitary,
    modified_bs_matrix,
    phase_shift,
)
from .measurement import (
    TAIL_TOL,
    cutoff_for,
    fock_amplitude,
    number_distribution,
    project_number,
    project_total_parity,
)

DEFAULT_BUDGET = 2**27


@dataclass(frozen=True)
class FockVector:
    amplitudes: np.ndarray
    reference_norm_sq: float = 1.0

    @property
    def mode_count(self) -> int:
        return self.amplitudes.ndim

    @property
    def cutoff(self) -> tuple[int, ...]:
        return tuple(d - 1 for d in self.amplitudes.shape)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    @property
    def truncation_loss(self) -> float:
        return 1.0 - self.norm_sq / self.reference_norm_sq


def _check_budget(shape: Sequence[int], budget: int) -> None:
    size = math.prod(shape)
    if size > budget:
        raise MemoryBudgetExceeded(f"dense vector with {size} entries exceeds budget {budget}")


def default_cutoffs(state: CatState) -> tuple[int, ...]:
    if state.num_terms == 0:
        return (0,) * state.mode_count
    return tuple(cutoff_for(float(np.max(np.abs(state.labels[:, j]) ** 2))) for j in range(state.mode_count))


def _single_mode_column(beta: complex, cutoff: int) -> np.ndarray:
    mag = np.array([abs(fock_amplitude(n, abs(beta))) for n in range(cutoff + 1)])
    if beta == 0:
        return mag.astype(complex)
    # phase by repeated multiplication so that labels -b and b give exactly
    # opposite odd amplitudes
    unit = beta / abs(beta)
    phase = np.cumprod(np.concatenate([[1.0 + 0j], np.full(cutoff, unit)]))
    return mag * phase


def to_fock(
    state: CatState,
    cutoff: int | Sequence[int] | None = None,
    tail_tol: float = TAIL_TOL,
    budget: int = DEFAULT_BUDGET,
) -> FockVector:
    """Expand every coherent product in the number basis and sum the terms."""
    M = state.mode_count
    if cutoff is None:
        cuts = default_cutoffs(state)
    elif isinstance(cutoff, int):
        cuts = (cutoff,) * M
    else:
        cuts = tuple(cutoff)
    if len(cuts) != M:
        raise ModeError("one cutoff per mode required")
    shape = tuple(c + 1 for c in cuts)
    _check_budget(shape, budget)
    amps = np.zeros(shape, dtype=complex)
    for coeff, labels in zip(state.coeffs, state.labels):
        term = np.array(coeff, dtype=complex)
        for beta, c in zip(labels, cuts):
            term = np.multiply.outer(term, _single_mode_column(beta, c))
        amps += term
    vec = FockVector(amps, norm_sq(state))
    if vec.truncation_loss > tail_tol:
        raise TailMassExceeded(f"truncation loss {vec.truncation_loss:.3e} exceeds {tail_tol:g}")
    return vec


def _generator(u: np.ndarray) -> np.ndarray:
    # Hermitian h with u = exp(-i h)
    h = 1j * scipy.linalg.logm(u)
    return 0.5 * (h + h.conj().T)


def block_unitary(u: LabelUnitary, total: int) -> np.ndarray:
    """Action of the two-mode unitary on ``|p, total-p>``, ``p = 0..total``."""
    h = _generator(u.matrix)
    p = np.arange(total + 1)
    H = np.diag(h[0, 0] * p + h[1, 1] * (total - p)).astype(complex)
    # a_k^dag a_l : |p, s-p> -> sqrt((p+1)(s-p)) |p+1, s-p-1>
    up = np.sqrt((p[:-1] + 1) * (total - p[:-1]))
    H[p[1:], p[:-1]] += h[0, 1] * up
    H[p[:-1], p[1:]] += h[1, 0] * up
    w, V = np.linalg.eigh(H)
    return (V * np.exp(-1j * w)) @ V.conj().T


def fock_apply_label_unitary(v: FockVector, k: int, l: int, u: LabelUnitary) -> FockVector:
    """Apply the passive two-mode unitary whose label action is ``u``.

    Passive unitaries conserve the photon number of the pair, so each block of
    fixed ``n_k + n_l`` transforms on its own; components pushed past the
    cutoff are dropped and show up in :attr:`FockVector.truncation_loss`.
    """
    M = v.mode_count
    if not (0 <= k < M and 0 <= l < M) or k == l:
        raise ModeError(f"invalid mode pair ({k}, {l}) for {M} modes")
    if not u.is_unitary():
        raise NonUnitaryError("label matrix is not unitary")
    arr = np.moveaxis(v.amplitudes, (k, l), (-2, -1))
    ck, cl = arr.shape[-2] - 1, arr.shape[-1] - 1
    out = np.zeros_like(arr)
    for s in range(ck + cl + 1):
        p = np.arange(max(0, s - cl), min(ck, s) + 1)
        Us = block_unitary(u, s)[np.ix_(p, p)]
        block = arr[..., p, s - p]
        out[..., p, s - p] = block @ Us.T
    return FockVector(np.moveaxis(out, (-2, -1), (k, l)), v.reference_norm_sq)


def fock_phase_shift(v: FockVector, j: int, phi: float) -> FockVector:
    n = np.arange(v.amplitudes.shape[j])
    shape = [1] * v.mode_count
    shape[j] = -1
    return FockVector(v.amplitudes * np.exp(-1j * phi * n).reshape(shape), v.reference_norm_sq)


def fock_number_distribution(v: FockVector, mode: int) -> np.ndarray:
    """Marginal photon counts of ``mode``; sums to ``1 - truncation_loss``."""
    axes = tuple(a for a in range(v.mode_count) if a != mode)
    return np.sum(np.abs(v.amplitudes) ** 2, axis=axes) / v.reference_norm_sq


def _total_parity_mask(shape, modes) -> np.ndarray:
    total = np.zeros([shape[m] if m in modes else 1 for m in range(len(shape))], dtype=int)
    for m in modes:
        idx = [1] * len(shape)
        idx[m] = -1
        total = total + np.arange(shape[m]).reshape(idx)
    return total % 2


def fock_parity_project(v: FockVector, modes: Iterable[int], parity: str) -> tuple[FockVector, float]:
    modes = sorted(set(modes))
    if not modes:
        raise ModeError("parity projection needs at least one mode")
    want = 0 if parity == "even" else 1
    mask = _total_parity_mask(v.amplitudes.shape, modes) == want
    amps = np.where(mask, v.amplitudes, 0)
    nsq = float(np.vdot(amps, amps).real)
    prob = nsq / v.reference_norm_sq
    if nsq == 0.0:
        return FockVector(amps, 1.0), 0.0
    return FockVector(amps / math.sqrt(nsq), 1.0), prob


def fock_project_number(v: FockVector, mode: int, n: int) -> tuple[FockVector, float]:
    amps = np.take(v.amplitudes, n, axis=mode)
    nsq = float(np.vdot(amps, amps).real)
    return FockVector(amps / math.sqrt(nsq), 1.0), nsq / v.reference_norm_sq


def fock_inner(lhs: FockVector, rhs: FockVector) -> complex:
    """``<lhs|rhs>`` over the common truncation."""
    if lhs.mode_count != rhs.mode_count:
        raise ModeError("mode counts differ")
    common = tuple(slice(0, min(a, b)) for a, b in zip(lhs.amplitudes.shape, rhs.amplitudes.shape))
    return complex(np.vdot(lhs.amplitudes[common], rhs.amplitudes[common]))


def w_state(M: int) -> FockVector:
    """``(|10..0> + |01..0> + ... + |0..01>)/sqrt(M)`` with cutoff 1 per mode."""
    amps = np.zeros((2,) * M, dtype=complex)
    for j in range(M):
        idx = [0] * M
        idx[j] = 1
        amps[tuple(idx)] = 1.0 / math.sqrt(M)
    return FockVector(amps, 1.0)


# ---------------------------------------------------------------------------
# dual-representation pipelines


@dataclass
class StepReport:
    op: str
    amplitude_error: float
    probability_error: float = 0.0


@dataclass
class CrosscheckReport:
    tolerance: float
    cutoff: int
    steps: list[StepReport] = field(default_factory=list)

    @property
    def max_amplitude_error(self) -> float:
        return max((s.amplitude_error for s in self.steps), default=0.0)

    @property
    def max_probability_error(self) -> float:
        return max((s.probability_error for s in self.steps), default=0.0)

    @property
    def max_discrepancy(self) -> float:
        return max(self.max_amplitude_error, self.max_probability_error)

    @property
    def passed(self) -> bool:
        return self.max_discrepancy <= self.tolerance


def _sparse_step(state: CatState, step):
    op, *args = step
    if op == "pair_unitary":
        return apply_pair_unitary(state, *args), None
    if op == "balanced_bs":
        return apply_pair_unitary(state, args[0], args[1], BALANCED), None
    if op == "modified_bs":
        return apply_pair_unitary(state, args[0], args[1], modified_bs_matrix(args[2])), None
    if op == "phase_shift":
        return phase_shift(state, *args), None
    if op == "parity":
        projected, prob = project_total_parity(state, *args)
        return projected, np.array([prob])
    if op == "number":
        projected, prob = project_number(state, *args)
        return projected, np.array([prob])
    if op == "distribution":
        return state, number_distribution(state, args[0])
    raise ValueError(f"unknown op {op!r}")


def _fock_step(v: FockVector, step, n_probs: int | None):
    op, *args = step
    if op == "pair_unitary":
        return fock_apply_label_unitary(v, *args), None
    if op == "balanced_bs":
        return fock_apply_label_unitary(v, args[0], args[1], BALANCED), None
    if op == "modified_bs":
        return fock_apply_label_unitary(v, args[0], args[1], modified_bs_matrix(args[2])), None
    if op == "phase_shift":
        return fock_phase_shift(v, *args), None
    if op == "parity":
        projected, prob = fock_parity_project(v, *args)
        return projected, np.array([prob])
    if op == "number":
        projected, prob = fock_project_number(v, *args)
        return projected, np.array([prob])
    if op == "distribution":
        dist = fock_number_distribution(v, args[0])
        out = np.zeros(n_probs)
        m = min(n_probs, dist.size)
        out[:m] = dist[:m]
        return v, out
    raise ValueError(f"unknown op {op!r}")


def crosscheck_pipeline(
    initial: CatState,
    script: Sequence[tuple],
    tolerance: float = 1e-8,
    cutoff: int | None = None,
    budget: int = DEFAULT_BUDGET,
) -> CrosscheckReport:
    """Run ``script`` on ``initial`` in both representations and compare.

    Steps are tuples ``(op, *args)`` with ``op`` one of ``pair_unitary``,
    ``balanced_bs``, ``modified_bs``, ``phase_shift``, ``parity``
    (modes, parity), ``number`` (mode, n) and ``distribution`` (mode). After
    every step the sparse state is expanded with :func:`to_fock` and compared
    amplitude by amplitude with the Fock-evolved vector; probabilities returned
    by measurement steps are compared as well.

    The cutoff is shared by all modes and defaults to the largest per-mode
    cutoff of any intermediate sparse state.
    """
    sparse_states = [initial]
    sparse_probs = []
    state = initial
    for step in script:
        state, probs = _sparse_step(state, step)
        sparse_states.append(state)
        sparse_probs.append(probs)
    if cutoff is None:
        cutoff = max(max(default_cutoffs(s), default=0) for s in sparse_states)

    report = CrosscheckReport(tolerance, cutoff)
    v = to_fock(initial, cutoff, budget=budget)
    ref = v.amplitudes
    for step, expected, probs in zip(script, sparse_states[1:], sparse_probs):
        v, fock_probs = _fock_step(v, step, None if probs is None else probs.size)
        ref = to_fock(expected, cutoff, tail_tol=1.0, budget=budget).amplitudes
        amp_err = float(np.max(np.abs(v.amplitudes - ref))) if ref.size else 0.0
        prob_err = 0.0 if probs is None else float(np.max(np.abs(fock_probs - probs)))
        report.steps.append(StepReport(step[0], amp_err, prob_err))
    return report
