"""Ladder and tree preparation of multimode entangled cat states.

Both schemes start from a single-mode cat of amplitude ``alpha*sqrt(M)`` with
vacuum in the other modes and split it with passive optics. The tree scheme
only reaches ``M = 2**Q`` modes directly; other ``M`` are reached by measuring
the total photon parity of the trailing ``2**Q - M`` modes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .cat_algebra import CatState, Sign, normalize, sign_value
from .errors import InvalidMError, ZeroNormError
from .linear_optics import balanced_bs, modified_bs_B
from .measurement import MeasurementRecord, discard_factor, project_total_parity


def ladder_angle(n: int) -> float:
    """Splitter angle ``arccos(1/sqrt(n))`` that peels off one mode of ``n``."""
    return math.acos(1.0 / math.sqrt(n))


@dataclass(frozen=True)
class LadderPlan:
    """Splitters ``B(q, q+1; angles[q-1])`` for ``q = 1..M-1`` (1-based modes).

    ``angles[q-1] = arccos(1/sqrt(M+1-q))``; they are applied in increasing
    ``q`` order, the splitter on modes (1, 2) acting first.
    """

    M: int
    angles: tuple[float, ...]

    @classmethod
    def build(cls, M: int) -> "LadderPlan":
        if M < 2:
            raise InvalidMError("ladder needs M >= 2")
        return cls(M, tuple(ladder_angle(M + 1 - q) for q in range(1, M)))


@dataclass(frozen=True)
class TreePlan:
    """Balanced splitter layers; ``layers[i]`` holds the 1-based pairs of layer ``l = i + 1``.

    Layer ``l`` pairs mode ``q`` with ``q + 2**(l-1)`` for ``q = 1..2**(l-1)``.
    Layers are applied in list order (``l = 1`` first).
    """

    Q: int
    layers: tuple[tuple[tuple[int, int], ...], ...]

    @classmethod
    def build(cls, Q: int) -> "TreePlan":
        if Q < 1:
            raise InvalidMError("tree needs Q >= 1")
        layers = tuple(
            tuple((q, q + 2 ** (l - 1)) for q in range(1, 2 ** (l - 1) + 1))
            for l in range(1, Q + 1)
        )
        return cls(Q, layers)

    @property
    def pair_count(self) -> int:
        return sum(len(layer) for layer in self.layers)


@dataclass(frozen=True)
class GenOutcome:
    produced_sign: Sign
    target_hit: bool
    parity_records: tuple[MeasurementRecord, ...]
    state: CatState


def seed_cat(M: int, alpha: complex, sign: Sign) -> CatState:
    """Normalized ``(|a sqrt M> +/- |-a sqrt M>)|0>^(M-1)``."""
    if alpha == 0:
        raise ZeroNormError("generation needs alpha != 0")
    amp = alpha * math.sqrt(M)
    labels = np.zeros((2, M), dtype=complex)
    labels[0, 0], labels[1, 0] = amp, -amp
    return normalize(CatState([1.0, sign_value(sign)], labels, M))[0]


def ladder_generate(M: int, alpha: complex, sign: Sign) -> CatState:
    plan = LadderPlan.build(M)
    state = seed_cat(M, alpha, sign)
    for q, theta in enumerate(plan.angles):
        state = modified_bs_B(state, q, q + 1, theta)
    return state


@lru_cache(maxsize=64)
def tree_generate_pow2(Q: int, alpha: complex, sign: Sign) -> CatState:
    plan = TreePlan.build(Q)
    state = seed_cat(2**Q, alpha, sign)
    for layer in plan.layers:
        for k, l in layer:
            state = balanced_bs(state, k - 1, l - 1)
    return state


def smallest_q(M: int) -> int:
    """Smallest ``Q`` with ``2**Q > M``."""
    if M < 2:
        raise InvalidMError("M must be at least 2")
    return M.bit_length()


def _produced_sign(source_sign: Sign, parity: str) -> Sign:
    # minus source: even -> minus, odd -> plus; plus source: even -> plus, odd -> minus
    if parity == "even":
        return source_sign
    return "plus" if source_sign == "minus" else "minus"


def reduce_by_parity(
    M: int,
    source_sign: Sign,
    alpha: complex,
    rng: np.random.Generator,
    target_sign: Sign | None = None,
) -> GenOutcome:
    """Prepare ``|Psi_M^+/->`` from the tree state on ``2**Q`` modes.

    The total parity of modes ``M+1..2**Q`` is sampled exactly; those modes are
    then discarded. ``target_sign`` defaults to ``source_sign``.
    """
    if M < 2:
        raise InvalidMError("M must be at least 2")
    if M & (M - 1) == 0:
        raise InvalidMError(f"M={M} is a power of two; use tree_generate_pow2")
    target = source_sign if target_sign is None else target_sign
    sign_value(target)
    modes, branches = _parity_branches(M, source_sign, complex(alpha))
    p_even = branches["even"][0]
    parity = "even" if rng.random() < p_even else "odd"
    prob, state = branches[parity]
    record = MeasurementRecord(modes, "parity", parity, prob)
    produced = _produced_sign(source_sign, parity)
    return GenOutcome(produced, produced == target, (record,), state)


@lru_cache(maxsize=256)
def _parity_branches(M: int, source_sign: Sign, alpha: complex):
    # the tree output is deterministic, so both parity branches are fixed per (M, sign, alpha)
    Q = smallest_q(M)
    big = tree_generate_pow2(Q, alpha, source_sign)
    measured = tuple(range(M, 2**Q))
    branches = {}
    for parity in ("even", "odd"):
        projected, prob = project_total_parity(big, measured, parity)
        reduced = discard_factor(projected, measured) if projected.num_terms else projected
        branches[parity] = (prob, reduced)
    return measured, branches


def generation_probability_analytic(
    Q: int, M: int, source_sign: Sign, target_sign: Sign, alpha: complex
) -> float:
    """Closed-form probability of reaching ``target_sign`` on ``M`` modes.

    With ``u = exp(-2|a|^2)``, ``K = 2**Q`` and ``J = K - M`` measured modes the
    success probability is ``(1 +/- u^M)(1 +/- u^J) / (2 (1 +/- u^K))`` where the
    signs follow the target, the parity branch and the source respectively.
    """
    if not 2 <= M < 2**Q:
        raise InvalidMError(f"need 2 <= M < 2**Q, got M={M}, Q={Q}")
    s_src, s_tgt = sign_value(source_sign), sign_value(target_sign)
    K, J = 2**Q, 2**Q - M
    x = abs(alpha) ** 2
    # parity of the measured block: even keeps the source sign
    s_par = s_src * s_tgt
    if x == 0.0:
        return _alpha_zero_limit(M, K, J, s_src, s_tgt, s_par)

    def factor(s, n):
        # 1 + s*exp(-2 n x), computed without cancellation
        return -math.expm1(-2 * n * x) if s < 0 else 1.0 + math.exp(-2 * n * x)

    return factor(s_tgt, M) * factor(s_par, J) / (2.0 * factor(s_src, K))


def _alpha_zero_limit(M, K, J, s_src, s_tgt, s_par) -> float:
    # leading-order ratios of the vanishing (1 - u^n) ~ 2 n x factors
    num = (M if s_tgt < 0 else 2) * (J if s_par < 0 else 2)
    den = 2 * (K if s_src < 0 else 2)
    if (s_tgt < 0) + (s_par < 0) > (s_src < 0):
        return 0.0
    return num / den
