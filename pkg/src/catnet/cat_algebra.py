"""Sparse superpositions of multimode coherent-state products.

A :class:`CatState` stores ``T`` terms, each a complex weight times a product
``|b_1>|b_2>...|b_M>`` of coherent states. Every inner product reduces to the
closed-form overlap of two coherent states, so all algebra here is exact up to
floating point, with no Fock-space truncation.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Literal, NamedTuple, Sequence

import numpy as np

from .errors import ModeError, ZeroNormError

Sign = Literal["plus", "minus"]

MERGE_TOL = 1e-12
PRUNE_REL = 1e-14
ZERO_NORM_SQ = 1e-24

__all__ = [
    "CatState",
    "CatTerm",
    "ChannelSpec",
    "Sign",
    "apply_annihilation",
    "canonicalize",
    "coherent_overlap",
    "dump_state",
    "dumps_state",
    "fidelity",
    "gram_matrix",
    "inner_product",
    "load_state",
    "loads_state",
    "make_channel_state",
    "make_input_cat",
    "channel_state",
    "normalize",
    "norm_sq",
]


def sign_value(sign: Sign) -> int:
    if sign == "plus":
        return 1
    if sign == "minus":
        return -1
    raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")


class CatTerm(NamedTuple):
    coeff: complex
    labels: tuple[complex, ...]


def canonicalize(coeffs, labels) -> tuple[np.ndarray, np.ndarray]:
    """Merge terms with matching labels and drop negligible ones.

    Label vectors equal within ``MERGE_TOL`` per component are merged into the
    first occurrence (coefficients summed). Afterwards terms with
    ``|c| < PRUNE_REL * max|c|`` are dropped; an all-zero input yields zero terms.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    labels = np.asarray(labels, dtype=complex)
    n = coeffs.shape[0]
    if n > 1:
        close = np.abs(labels[:, None, :] - labels[None, :, :]) <= MERGE_TOL
        same = close.all(axis=-1)
        if same.sum() > n:
            owner = np.full(n, -1)
            for i in range(n):
                if owner[i] >= 0:
                    continue
                owner[i] = i
                owner[(owner < 0) & same[i]] = i
            keep = np.unique(owner)
            merged = np.zeros(keep.size, dtype=complex)
            np.add.at(merged, np.searchsorted(keep, owner), coeffs)
            coeffs, labels = merged, labels[keep]
    if coeffs.size:
        mag = np.abs(coeffs)
        alive = mag >= PRUNE_REL * mag.max()
        if mag.max() == 0.0:
            alive[:] = False
        if not alive.all():
            coeffs, labels = coeffs[alive], labels[alive]
    return coeffs, labels


@dataclass(frozen=True, eq=False)
class CatState:
    """Immutable superposition ``sum_t coeffs[t] * prod_j |labels[t, j]>``.

    Construction canonicalizes the terms. Arrays are stored read-only so states
    can be shared freely between measurement branches.
    """

    coeffs: np.ndarray
    labels: np.ndarray
    mode_count: int

    def __init__(self, coeffs, labels, mode_count: int | None = None):
        labels = np.asarray(labels, dtype=complex)
        coeffs = np.asarray(coeffs, dtype=complex).reshape(-1)
        if labels.ndim == 1 and coeffs.size == 1:
            labels = labels.reshape(1, -1)
        if mode_count is None:
            if labels.ndim != 2 or labels.shape[0] == 0:
                raise ModeError("mode_count is required for an empty state")
            mode_count = labels.shape[1]
        labels = labels.reshape(coeffs.size, mode_count)
        if mode_count < 0:
            raise ModeError("mode_count must be non-negative")
        if not (np.all(np.isfinite(coeffs)) and np.all(np.isfinite(labels))):
            raise ValueError("coefficients and labels must be finite")
        coeffs, labels = canonicalize(coeffs, labels)
        coeffs.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "mode_count", int(mode_count))

    @classmethod
    def from_terms(cls, terms: Sequence[tuple[complex, Sequence[complex]]], mode_count=None):
        coeffs = [c for c, _ in terms]
        labels = [list(lab) for _, lab in terms]
        if mode_count is None and labels:
            mode_count = len(labels[0])
        if any(len(lab) != mode_count for lab in labels):
            raise ModeError("every term needs exactly mode_count labels")
        return cls(coeffs, np.array(labels, dtype=complex).reshape(len(terms), mode_count), mode_count)

    @classmethod
    def coherent(cls, labels: Sequence[complex]) -> "CatState":
        """The product state ``|labels[0]>|labels[1]>...`` with unit weight."""
        labels = np.asarray(labels, dtype=complex).reshape(1, -1)
        return cls([1.0], labels, labels.shape[1])

    @property
    def num_terms(self) -> int:
        return self.coeffs.size

    @property
    def terms(self) -> Iterator[CatTerm]:
        for c, lab in zip(self.coeffs, self.labels):
            yield CatTerm(complex(c), tuple(complex(b) for b in lab))

    def scaled(self, factor: complex) -> "CatState":
        return CatState(self.coeffs * factor, self.labels, self.mode_count)

    def __add__(self, other: "CatState") -> "CatState":
        _check_modes(self, other)
        return CatState(
            np.concatenate([self.coeffs, other.coeffs]),
            np.concatenate([self.labels, other.labels]),
            self.mode_count,
        )

    def __sub__(self, other: "CatState") -> "CatState":
        return self + other.scaled(-1.0)

    def tensor(self, other: "CatState") -> "CatState":
        """Product state with ``self``'s modes first."""
        t1, t2 = self.num_terms, other.num_terms
        coeffs = np.outer(self.coeffs, other.coeffs).reshape(-1)
        labels = np.concatenate(
            [np.repeat(self.labels, t2, axis=0), np.tile(other.labels, (t1, 1))], axis=1
        ).reshape(t1 * t2, self.mode_count + other.mode_count)
        return CatState(coeffs, labels, self.mode_count + other.mode_count)

    def terms_equal(self, other: "CatState") -> bool:
        """Exact equality of the stored term lists (order-sensitive)."""
        return (
            self.mode_count == other.mode_count
            and np.array_equal(self.coeffs, other.coeffs)
            and np.array_equal(self.labels, other.labels)
        )

    def __repr__(self) -> str:
        return f"CatState(modes={self.mode_count}, terms={self.num_terms})"


@dataclass(frozen=True)
class ChannelSpec:
    mode_count: int
    sign: Sign
    alpha: complex

    def __post_init__(self):
        if self.mode_count < 2:
            raise ModeError("channel states need at least two modes")
        sign_value(self.sign)


def _check_modes(lhs: CatState, rhs: CatState) -> None:
    if lhs.mode_count != rhs.mode_count:
        raise ModeError(f"mode counts differ: {lhs.mode_count} vs {rhs.mode_count}")


def _check_mode_index(state: CatState, mode: int) -> int:
    if not 0 <= mode < state.mode_count:
        raise ModeError(f"mode {mode} out of range for {state.mode_count}-mode state")
    return int(mode)


def coherent_overlap(beta: complex, gamma: complex) -> complex:
    """``<beta|gamma>`` for single-mode coherent states."""
    return complex(np.exp(-0.5 * (abs(beta) ** 2 + abs(gamma) ** 2) + np.conj(beta) * gamma))


def _log_overlaps(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    # log of prod_j <l_j|r_j> for every (row of left, row of right) pair
    ll = 0.5 * np.sum(np.abs(left) ** 2, axis=1)
    rr = 0.5 * np.sum(np.abs(right) ** 2, axis=1)
    cross = left.conj() @ right.T
    return cross - ll[:, None] - rr[None, :]


def gram_matrix(lhs: CatState, rhs: CatState | None = None) -> np.ndarray:
    """Overlaps between the coherent products of two states' terms."""
    rhs = lhs if rhs is None else rhs
    _check_modes(lhs, rhs)
    return np.exp(_log_overlaps(lhs.labels, rhs.labels))


def inner_product(lhs: CatState, rhs: CatState) -> complex:
    _check_modes(lhs, rhs)
    if lhs.num_terms == 0 or rhs.num_terms == 0:
        return 0j
    return complex(lhs.coeffs.conj() @ gram_matrix(lhs, rhs) @ rhs.coeffs)


def norm_sq(state: CatState) -> float:
    return inner_product(state, state).real


def normalize(state: CatState) -> tuple[CatState, float]:
    """Return ``(state / ||state||, ||state||)``.

    Raises ZeroNormError when the squared norm is below ``ZERO_NORM_SQ``.
    """
    nsq = norm_sq(state)
    if not nsq >= ZERO_NORM_SQ:
        raise ZeroNormError(f"squared norm {nsq:.3e} below threshold {ZERO_NORM_SQ:g}")
    norm = float(np.sqrt(nsq))
    if norm == 1.0:
        return state, norm
    return CatState(state.coeffs / norm, state.labels, state.mode_count), norm


def fidelity(lhs: CatState, rhs: CatState) -> float:
    """Phase-insensitive overlap ``|<l|r>|^2 / (<l|l><r|r>)``."""
    nl, nr = norm_sq(lhs), norm_sq(rhs)
    if not (nl >= ZERO_NORM_SQ and nr >= ZERO_NORM_SQ):
        raise ZeroNormError("fidelity of a zero-norm state")
    return abs(inner_product(lhs, rhs)) ** 2 / (nl * nr)


def make_input_cat(x: complex, y: complex, alpha: complex, L: int) -> CatState:
    """Normalized ``x|a>^L + y|-a>^L``."""
    if L < 1:
        raise ModeError("L must be a positive integer")
    if x == 0 and y == 0:
        raise ZeroNormError("x and y cannot both vanish")
    labels = np.array([[alpha] * L, [-alpha] * L], dtype=complex)
    raw = CatState([x, y], labels, L)
    return normalize(raw)[0]


def make_channel_state(spec: ChannelSpec) -> CatState:
    """Normalized ``|a>^M +/- |-a>^M`` with the requested sign."""
    if spec.alpha == 0:
        raise ZeroNormError("channel states are undefined at alpha = 0")
    s = sign_value(spec.sign)
    M = spec.mode_count
    labels = np.array([[spec.alpha] * M, [-spec.alpha] * M], dtype=complex)
    return normalize(CatState([1.0, s], labels, M))[0]


def channel_state(M: int, sign: Sign, alpha: complex) -> CatState:
    return make_channel_state(ChannelSpec(M, sign, alpha))


def apply_annihilation(state: CatState, mode: int) -> CatState:
    """``a_mode |state>``: each coefficient picks up its label at ``mode``."""
    mode = _check_mode_index(state, mode)
    return CatState(state.coeffs * state.labels[:, mode], state.labels, state.mode_count)


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def dumps_state(state: CatState) -> str:
    doc = {
        "modes": state.mode_count,
        "terms": [
            {"coeff": _pair(c), "labels": [_pair(b) for b in lab]}
            for c, lab in zip(state.coeffs, state.labels)
        ],
    }
    return json.dumps(doc)


def loads_state(text: str) -> CatState:
    doc = json.loads(text)
    M = int(doc["modes"])
    coeffs = [complex(*t["coeff"]) for t in doc["terms"]]
    labels = np.array(
        [[complex(*b) for b in t["labels"]] for t in doc["terms"]], dtype=complex
    ).reshape(len(coeffs), M)
    return CatState(coeffs, labels, M)


def dump_state(state: CatState, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps_state(state))


def load_state(path) -> CatState:
    with open(path) as fh:
        return loads_state(fh.read())
