"""Photon counting and parity projection on sparse coherent superpositions.

Measured modes are removed from the returned state; indices above the
measured one shift down by one. :class:`MeasurementRecord` keeps the index the
mode had in the state it was measured on.

Random draws come from :class:`numpy.random.Generator` (PCG64). Independent
trials derive their generator from ``base_seed ^ trial_index``, see
:func:`trial_rng`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Union

import numpy as np
from scipy.special import gammaln

from .cat_algebra import (
    ZERO_NORM_SQ,
    CatState,
    _check_mode_index,
    _log_overlaps,
    norm_sq,
)
from .errors import ModeError, TailMassExceeded, ZeroNormError

Parity = Literal["even", "odd"]

TAIL_TOL = 1e-9


@dataclass(frozen=True)
class MeasurementRecord:
    mode: Union[int, tuple[int, ...]]
    kind: Literal["number", "parity"]
    outcome: Union[int, str]
    probability: float


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed & 0xFFFFFFFFFFFFFFFF))


def trial_rng(base_seed: int, trial: int) -> np.random.Generator:
    """Generator for one independent trial: seeded with ``base_seed XOR trial``."""
    return make_rng((base_seed ^ trial) & 0xFFFFFFFFFFFFFFFF)


def fock_amplitude(n: int, beta: complex) -> complex:
    """``<n|beta> = exp(-|beta|^2/2) beta^n / sqrt(n!)``, evaluated in log space."""
    if n < 0:
        raise ValueError("photon number must be non-negative")
    if beta == 0:
        return 1.0 + 0j if n == 0 else 0j
    logmag = -0.5 * abs(beta) ** 2 + n * math.log(abs(beta)) - 0.5 * math.lgamma(n + 1)
    return complex(math.exp(logmag) * np.exp(1j * n * np.angle(beta)))


def fock_amplitudes(n_max: int, betas) -> np.ndarray:
    """Table of ``<n|beta>`` with shape ``(n_max + 1, len(betas))``."""
    betas = np.asarray(betas, dtype=complex).reshape(-1)
    n = np.arange(n_max + 1)[:, None]
    mag = np.abs(betas)[None, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        logmag = -0.5 * mag**2 + n * np.log(mag) - 0.5 * gammaln(n + 1)
        out = np.exp(logmag + 1j * n * np.angle(betas)[None, :])
    zero = mag[0] == 0
    if zero.any():
        out[:, zero] = 0.0
        out[0, zero] = 1.0
    return out


def cutoff_for(mean_photons: float) -> int:
    """Largest photon number kept for a mode with mean photon count ``mean_photons``."""
    m = float(mean_photons)
    return int(math.ceil(m + 10.0 * math.sqrt(m) + 10.0))


def mode_cutoff(state: CatState, mode: int) -> int:
    col = state.labels[:, mode]
    return cutoff_for(float(np.max(np.abs(col) ** 2)) if col.size else 0.0)


def _rest_gram(state: CatState, mode: int) -> np.ndarray:
    rest = np.delete(state.labels, mode, axis=1)
    return np.exp(_log_overlaps(rest, rest))


def _weighted_amplitudes(state: CatState, mode: int, n_max: int) -> np.ndarray:
    return fock_amplitudes(n_max, state.labels[:, mode]) * state.coeffs[None, :]


def number_distribution(state: CatState, mode: int, n_max: int | None = None) -> np.ndarray:
    """Photon-count probabilities ``p[n]`` of ``mode`` for ``n = 0..n_max``.

    Raises TailMassExceeded if more than ``TAIL_TOL`` of the probability lies
    above ``n_max`` (default: :func:`mode_cutoff`).
    """
    mode = _check_mode_index(state, mode)
    if n_max is None:
        n_max = mode_cutoff(state, mode)
    total = norm_sq(state)
    if not total >= ZERO_NORM_SQ:
        raise ZeroNormError("cannot measure a zero-norm state")
    amps = _weighted_amplitudes(state, mode, n_max)
    gram = _rest_gram(state, mode)
    p = np.einsum("ni,ik,nk->n", amps.conj(), gram, amps).real / total
    p = np.clip(p, 0.0, None)
    leaked = 1.0 - p.sum()
    if leaked > TAIL_TOL:
        raise TailMassExceeded(f"mode {mode}: {leaked:.3e} probability above n={n_max}")
    return p


def project_number(state: CatState, mode: int, n: int) -> tuple[CatState, float]:
    """Collapse onto ``n`` photons in ``mode``; the mode is removed.

    Returns the normalized remainder and the outcome probability. Zero-probability
    outcomes raise ZeroNormError.
    """
    mode = _check_mode_index(state, mode)
    total = norm_sq(state)
    weights = np.array([fock_amplitude(n, b) for b in state.labels[:, mode]])
    rest = CatState(state.coeffs * weights, np.delete(state.labels, mode, axis=1), state.mode_count - 1)
    nsq = norm_sq(rest)
    prob = nsq / total
    if not nsq >= ZERO_NORM_SQ * total:
        raise ZeroNormError(f"outcome n={n} on mode {mode} has probability {prob:.3e}")
    return CatState(rest.coeffs / math.sqrt(nsq), rest.labels, rest.mode_count), prob


def sample_number_measurement(
    state: CatState, mode: int, rng: np.random.Generator
) -> tuple[MeasurementRecord, CatState]:
    p = number_distribution(state, mode)
    cdf = np.cumsum(p)
    u = rng.random() * cdf[-1]
    n = int(min(np.searchsorted(cdf, u, side="right"), p.size - 1))
    collapsed, prob = project_number(state, mode, n)
    return MeasurementRecord(mode, "number", n, float(p[n])), collapsed


def _parity_sign(parity: Parity) -> int:
    if parity == "even":
        return 1
    if parity == "odd":
        return -1
    raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")


def _checked_modes(state: CatState, modes: Iterable[int]) -> list[int]:
    modes = sorted({_check_mode_index(state, m) for m in modes})
    if not modes:
        raise ModeError("parity projection needs at least one mode")
    return modes


def parity_component(state: CatState, modes: Iterable[int], parity: Parity) -> CatState:
    """Unnormalized projection onto a total parity of ``modes``.

    The photon-parity operator acts as ``|b> -> |-b>``, so each term ``T``
    becomes ``(T +/- T')/2`` with ``T'`` its labels negated on ``modes``.
    """
    modes = _checked_modes(state, modes)
    s = _parity_sign(parity)
    flipped = state.labels.copy()
    flipped[:, modes] *= -1
    return CatState(
        np.concatenate([state.coeffs, s * state.coeffs]) / 2,
        np.concatenate([state.labels, flipped]),
        state.mode_count,
    )


def project_total_parity(
    state: CatState, modes: Iterable[int], parity: Parity
) -> tuple[CatState, float]:
    """Project onto total parity of ``modes``.

    Returns ``(normalized projected state, probability)``. When the probability
    is zero the returned state is the (term-free) zero vector.
    """
    total = norm_sq(state)
    if not total >= ZERO_NORM_SQ:
        raise ZeroNormError("cannot project a zero-norm state")
    proj = parity_component(state, modes, parity)
    nsq = norm_sq(proj)
    prob = min(max(nsq / total, 0.0), 1.0)
    if nsq < ZERO_NORM_SQ * total:
        return CatState(np.zeros(0), np.zeros((0, state.mode_count)), state.mode_count), prob
    return CatState(proj.coeffs / math.sqrt(nsq), proj.labels, proj.mode_count), prob


def sample_total_parity(
    state: CatState, modes: Iterable[int], rng: np.random.Generator
) -> tuple[MeasurementRecord, CatState]:
    """Draw a total-parity outcome; the measured modes stay in the state."""
    modes = _checked_modes(state, modes)
    even_state, p_even = project_total_parity(state, modes, "even")
    if rng.random() < p_even:
        return MeasurementRecord(tuple(modes), "parity", "even", p_even), even_state
    odd_state, p_odd = project_total_parity(state, modes, "odd")
    return MeasurementRecord(tuple(modes), "parity", "odd", p_odd), odd_state


def discard_factor(state: CatState, modes: Iterable[int]) -> CatState:
    """Remove ``modes`` from a state that factorizes as ``rest (x) factor``.

    The modes are contracted with the coherent product carried by the first
    term; for a genuine product state this leaves ``rest`` up to a scalar, and
    the result is renormalized. The factorization itself is not verified.
    """
    modes = sorted({_check_mode_index(state, m) for m in modes})
    if state.num_terms == 0:
        raise ZeroNormError("cannot discard modes of the zero vector")
    ref = state.labels[:1, modes]
    weights = np.exp(_log_overlaps(ref, state.labels[:, modes]))[0]
    rest = CatState(state.coeffs * weights, np.delete(state.labels, modes, axis=1), state.mode_count - len(modes))
    nsq = norm_sq(rest)
    if not nsq >= ZERO_NORM_SQ:
        raise ZeroNormError("reference product is orthogonal to the discarded factor")
    return CatState(rest.coeffs / math.sqrt(nsq), rest.labels, rest.mode_count)
