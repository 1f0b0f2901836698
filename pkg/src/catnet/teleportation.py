"""Teleporting an L-mode cat state across an N-party network.

State layout used throughout: the ``L`` input modes come first (indices
``0..L-1``), followed by the channel modes in channel order. Parties and
channel modes are numbered from 1, as in :func:`channel_modes_for`.
Measurement records carry the 0-based index of the mode in this layout.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .cat_algebra import Sign, _log_overlaps, channel_state, fidelity, make_input_cat, sign_value
from .errors import TailMassExceeded, ZeroNormError
from .linear_optics import balanced_bs, phase_shift
from .measurement import (
    TAIL_TOL,
    MeasurementRecord,
    cutoff_for,
    fock_amplitudes,
    sample_number_measurement,
    trial_rng,
)

CaseTag = Literal["case_i", "case_ii", "vacuum_ambiguous"]


@dataclass(frozen=True)
class NetworkConfig:
    N: int
    L: int
    symmetric: bool = True
    channel_sign: Sign = "minus"
    alpha: complex = 1.0
    sender: int = 1
    receiver: int | None = None

    def __post_init__(self):
        if self.N < 2:
            raise ValueError("a network needs at least two parties")
        if self.L < 1:
            raise ValueError("L must be a positive integer")
        sign_value(self.channel_sign)
        if self.receiver is None:
            object.__setattr__(self, "receiver", self.N if self.sender != self.N else 1)
        for p in (self.sender, self.receiver):
            if not 1 <= p <= self.N:
                raise ValueError(f"party {p} outside 1..{self.N}")
        if self.sender == self.receiver:
            raise ValueError("sender and receiver must differ")

    @property
    def channel_mode_count(self) -> int:
        if self.symmetric:
            return self.L * self.N
        return self.L * (self.N - 1) + 1


@dataclass(frozen=True)
class TrialResult:
    case_tag: CaseTag
    parity_sum_odd: bool
    success: bool
    correction_applied: bool
    output_fidelity: float
    records: tuple[MeasurementRecord, ...] = field(repr=False)


def channel_modes_for(config: NetworkConfig) -> dict[int, tuple[int, ...]]:
    """Party -> channel mode numbers (both 1-based).

    Symmetric: party ``q`` holds ``(q-1)L+1 .. qL``. Asymmetric: the sender holds
    mode 1 and the remaining parties, in increasing order, hold consecutive
    blocks of ``L`` modes starting at mode 2.
    """
    L, N = config.L, config.N
    if config.symmetric:
        return {q: tuple(range((q - 1) * L + 1, q * L + 1)) for q in range(1, N + 1)}
    out = {config.sender: (1,)}
    others = [q for q in range(1, N + 1) if q != config.sender]
    for i, q in enumerate(others):
        out[q] = tuple(range(2 + i * L, 2 + (i + 1) * L))
    return out


def _mixing_pairs(config: NetworkConfig, shares) -> list[tuple[int, int]]:
    # (input mode index, channel mode index) in the combined state
    sender_modes = shares[config.sender]
    L = config.L
    if config.symmetric:
        return [(m, L + sender_modes[m] - 1) for m in range(L)]
    return [(0, L + sender_modes[0] - 1)]


def teleport_once(config: NetworkConfig, x: complex, y: complex, rng: np.random.Generator) -> TrialResult:
    """Run one teleportation attempt and report its branch.

    The sender mixes each paired input mode with one of its channel modes on a
    50:50 splitter. Every party but the receiver counts photons in all of its
    modes. If the mixed input modes all read zero (case i) the receiver flips
    the sign of each of its labels; if the mixed channel modes all read zero
    (case ii) it does nothing. The attempt succeeds when the total count is odd
    for a minus channel (even for a plus channel), and fails outright when
    every mixed mode reads zero.
    """
    target, state, pairs, measured = _prepare(config, x, y)

    positions = list(range(state.mode_count))
    counts: dict[int, int] = {}
    records = []
    for mode in measured:
        idx = positions.index(mode)
        record, state = sample_number_measurement(state, idx, rng)
        positions.pop(idx)
        counts[mode] = record.outcome
        records.append(MeasurementRecord(mode, "number", record.outcome, record.probability))

    input_zero = all(counts[a] == 0 for a, _ in pairs)
    channel_zero = all(counts[c] == 0 for _, c in pairs)
    if input_zero and channel_zero:
        case: CaseTag = "vacuum_ambiguous"
    elif input_zero:
        case = "case_i"
    elif channel_zero:
        case = "case_ii"
    else:
        raise AssertionError("both mixed modes clicked; impossible for this channel")

    odd = sum(counts.values()) % 2 == 1
    wanted_odd = config.channel_sign == "minus"
    success = case != "vacuum_ambiguous" and odd == wanted_odd
    corrected = case == "case_i"
    if corrected:
        for j in range(state.mode_count):
            state = phase_shift(state, j, math.pi)
    return TrialResult(case, odd, success, corrected, fidelity(state, target), tuple(records))


def _sign_terms(M: int, x: float, sign: Sign) -> float:
    """``csch(Mx) sinh((M-2)x)`` for minus, ``sech(Mx) cosh((M-2)x)`` for plus."""
    if x == 0.0:
        return (M - 2) / M if sign == "minus" else 1.0
    e2 = math.exp(-2 * x)
    if sign == "minus":
        return e2 * math.expm1(-2 * (M - 2) * x) / math.expm1(-2 * M * x)
    return e2 * (1.0 + math.exp(-2 * (M - 2) * x)) / (1.0 + math.exp(-2 * M * x))


def single_mode_success(M: int, alpha2: float, sign: Sign = "minus") -> float:
    """Success probability of a one-mode cat over an ``M``-mode channel."""
    return 0.5 * (1.0 - _sign_terms(M, alpha2, sign))


def success_probability_analytic(config: NetworkConfig) -> float:
    x = abs(config.alpha) ** 2
    if config.symmetric:
        # one-mode formula with |a|^2 -> L|a|^2 and M -> N
        return single_mode_success(config.N, config.L * x, config.channel_sign)
    return single_mode_success(config.L * (config.N - 1) + 1, x, config.channel_sign)


def _prepare(config: NetworkConfig, x: complex, y: complex):
    if config.alpha == 0:
        raise ZeroNormError("teleportation needs alpha != 0")
    if x == 0 and y == 0:
        raise ZeroNormError("x and y cannot both vanish")
    L = config.L
    target = make_input_cat(x, y, config.alpha, L)
    channel = channel_state(config.channel_mode_count, config.channel_sign, config.alpha)
    state = target.tensor(channel)
    shares = channel_modes_for(config)
    pairs = _mixing_pairs(config, shares)
    for a, c in pairs:
        state = balanced_bs(state, a, c)
    measured = list(range(L)) + [L + m - 1 for m in shares[config.sender]]
    for q in sorted(shares):
        if q not in (config.sender, config.receiver):
            measured += [L + m - 1 for m in shares[q]]
    return target, state, pairs, measured


CASE_TAGS: tuple[CaseTag, ...] = ("case_i", "case_ii", "vacuum_ambiguous")


@dataclass(frozen=True)
class TrialBatch:
    """Outcomes of trials ``start..start+len-1``; ``case`` indexes :data:`CASE_TAGS`."""

    start: int
    measured: tuple[int, ...]
    counts: np.ndarray
    probabilities: np.ndarray
    case: np.ndarray
    odd: np.ndarray
    success: np.ndarray
    fidelity: np.ndarray

    def trial(self, i: int) -> TrialResult:
        records = tuple(
            MeasurementRecord(m, "number", int(n), float(p))
            for m, n, p in zip(self.measured, self.counts[i], self.probabilities[i])
        )
        case = CASE_TAGS[self.case[i]]
        return TrialResult(
            case, bool(self.odd[i]), bool(self.success[i]), case == "case_i", float(self.fidelity[i]), records
        )


def _gram(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    return np.exp(_log_overlaps(left, right))


def simulate_trials(config: NetworkConfig, x: complex, y: complex, seed: int, start: int, stop: int) -> TrialBatch:
    """Vectorized :func:`teleport_once` for trials ``start..stop-1``.

    Measurements only rescale term coefficients and drop a label column, so
    every trial shares one label matrix and carries its own coefficient row.
    Trial ``i`` consumes the same uniforms from ``trial_rng(seed, i)`` in the
    same order as :func:`teleport_once`, and reproduces its outcomes.
    """
    target, state, pairs, measured = _prepare(config, x, y)
    steps = len(measured)
    uniforms = np.array([trial_rng(seed, i).random(steps) for i in range(start, stop)]).reshape(-1, steps)
    B = uniforms.shape[0]
    labels = np.array(state.labels)
    coeffs = np.tile(state.coeffs, (B, 1))
    positions = list(range(state.mode_count))
    counts = np.empty((B, steps), dtype=np.int64)
    probs = np.empty((B, steps))
    rows = np.arange(B)
    for step, mode in enumerate(measured):
        j = positions.index(mode)
        betas = labels[:, j]
        n_max = cutoff_for(float(np.max(np.abs(betas) ** 2)))
        amps_table = fock_amplitudes(n_max, betas)
        total = np.einsum("bi,ik,bk->b", coeffs.conj(), _gram(labels, labels), coeffs).real
        rest = np.delete(labels, j, axis=1)
        g_rest = _gram(rest, rest)
        amps = coeffs[:, None, :] * amps_table[None, :, :]
        p = np.sum(amps.conj() * (amps @ g_rest.T), axis=-1).real / total[:, None]
        p = np.clip(p, 0.0, None)
        leaked = 1.0 - p.sum(axis=1)
        if np.any(leaked > TAIL_TOL):
            raise TailMassExceeded(f"mode {mode}: {leaked.max():.3e} probability above n={n_max}")
        cdf = np.cumsum(p, axis=1)
        u = uniforms[:, step] * cdf[:, -1]
        n = np.minimum((cdf <= u[:, None]).sum(axis=1), n_max)
        counts[:, step] = n
        probs[:, step] = p[rows, n]
        coeffs = coeffs * amps_table[n]
        nsq = np.einsum("bi,ik,bk->b", coeffs.conj(), g_rest, coeffs).real
        coeffs = coeffs / np.sqrt(nsq)[:, None]
        labels = rest
        positions.pop(j)

    col = {m: i for i, m in enumerate(measured)}
    input_zero = np.all(counts[:, [col[a] for a, _ in pairs]] == 0, axis=1)
    channel_zero = np.all(counts[:, [col[c] for _, c in pairs]] == 0, axis=1)
    if np.any(~input_zero & ~channel_zero):
        raise AssertionError("both mixed modes clicked; impossible for this channel")
    case = np.where(input_zero & channel_zero, 2, np.where(input_zero, 0, 1))
    odd = counts.sum(axis=1) % 2 == 1
    wanted_odd = config.channel_sign == "minus"
    success = (case != 2) & (odd == wanted_odd)

    t_coeffs, t_labels = target.coeffs, target.labels
    t_norm = (t_coeffs.conj() @ _gram(t_labels, t_labels) @ t_coeffs).real
    out_norm = np.einsum("bi,ik,bk->b", coeffs.conj(), _gram(labels, labels), coeffs).real
    overlap = np.where(
        case == 0,
        coeffs.conj() @ (_gram(-labels, t_labels) @ t_coeffs),
        coeffs.conj() @ (_gram(labels, t_labels) @ t_coeffs),
    )
    fid = np.abs(overlap) ** 2 / (out_norm * t_norm)
    return TrialBatch(start, tuple(measured), counts, probs, case, odd, success, fid)


@dataclass(frozen=True)
class MonteCarloResult:
    estimate: float
    std_error: float
    trials: int
    case_counts: dict
    samples: tuple[TrialResult, ...] = field(repr=False, default=())

    def __iter__(self):
        # unpacks as (estimate, std_error)
        yield self.estimate
        yield self.std_error


def monte_carlo_success(
    config: NetworkConfig,
    x: complex,
    y: complex,
    trials: int,
    seed: int,
    keep: int = 0,
    chunk: int = 4096,
) -> MonteCarloResult:
    """Fraction of successful :func:`teleport_once` runs with its binomial standard error.

    Trial ``i`` uses :func:`trial_rng` ``(seed, i)``, so the result does not depend
    on how trials are scheduled. ``keep`` retains the first few TrialResults.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    wins = 0
    cases: Counter = Counter()
    kept: list[TrialResult] = []
    for start in range(0, trials, chunk):
        batch = simulate_trials(config, x, y, seed, start, min(start + chunk, trials))
        wins += int(batch.success.sum())
        for code, tag in enumerate(CASE_TAGS):
            in_case = batch.case == code
            cases[tag + "_success"] += int(np.sum(in_case & batch.success))
            cases[tag + "_failure"] += int(np.sum(in_case & ~batch.success))
        kept += [batch.trial(i) for i in range(max(0, min(keep - start, batch.success.size)))]
    est = wins / trials
    se = math.sqrt(max(est * (1.0 - est), 0.0) / trials)
    counts = {k: v for k, v in sorted(cases.items()) if v}
    return MonteCarloResult(est, se, trials, counts, tuple(kept))
