"""Finite-state fading channel distributions and their canonical form.

A channel is described by the possible power-gain realizations ``g_k``
(dimensionless receive SNR per state) and their probabilities ``p_k``.
:func:`prepare` validates a raw :class:`FadingDistribution`, sorts its states
by descending gain, merges physically identical states, and derives the
inverse gains ``n_k = 1/g_k`` and cumulative probabilities ``F_k`` used by
every downstream computation.

Arithmetic is deliberately type-agnostic: gains and probabilities may be
floats or exact :class:`fractions.Fraction` values, and all derived fields
keep the input's arithmetic.  Exact inputs keep exact intersections, which
the degenerate worst-case families rely on.
"""

import math
from dataclasses import dataclass
from typing import Optional

from .errors import ValidationError

__all__ = [
    "FadingDistribution",
    "PreparedChannel",
    "prepare",
    "ergodic_capacity",
    "entropy",
]

#: Relative gap below which two gains are treated as the same physical state.
MERGE_RTOL = 1e-12

#: Allowed deviation of the probability total from one.
PROB_SUM_ATOL = 1e-9


@dataclass(frozen=True)
class FadingDistribution:
    """Raw user-supplied power-gain distribution.

    gains and probs must have equal length K >= 1, every probability must be
    positive with total within 1e-9 of one, and every gain must be
    nonnegative.  Order is irrelevant; :func:`prepare` canonicalizes it.
    """

    gains: tuple
    probs: tuple

    def __post_init__(self):
        object.__setattr__(self, "gains", tuple(self.gains))
        object.__setattr__(self, "probs", tuple(self.probs))
        if len(self.gains) == 0:
            raise ValidationError("gains: need at least one fading state")
        if len(self.gains) != len(self.probs):
            raise ValidationError(
                f"gains/probs length mismatch: {len(self.gains)} != {len(self.probs)}"
            )
        for k, p in enumerate(self.probs, start=1):
            if not p > 0:
                raise ValidationError(f"probs: state {k} has non-positive probability {p}")
        total = sum(self.probs)
        if abs(total - 1) > PROB_SUM_ATOL:
            raise ValidationError(f"probs: must sum to 1 within {PROB_SUM_ATOL}, got {total}")
        for k, g in enumerate(self.gains, start=1):
            if not g >= 0:
                raise ValidationError(f"gains: state {k} has negative gain {g}")


@dataclass(frozen=True)
class PreparedChannel:
    """Validated channel in canonical form.

    Fields:
        gains: strictly descending positive gains (a zero gain, if present in
            the input, has been replaced by a small positive ``epsilon``).
        probs: per-state probabilities after merging duplicates.
        inverse_gains: ``n_k = 1/g_k``, strictly ascending.
        cum_probs: ``F_k``, strictly increasing with ``F_K ~ 1``.
        epsilon_applied: substitute used for an input zero gain, or None.
        degenerate: True only for the single-state all-zero-gain channel,
            which carries no information and admits no inverse gains.
    """

    gains: tuple
    probs: tuple
    inverse_gains: tuple
    cum_probs: tuple
    epsilon_applied: Optional[object] = None
    degenerate: bool = False

    @property
    def num_states(self) -> int:
        return len(self.gains)


def _merge_duplicates(pairs):
    """Merge adjacent (gain, prob) pairs whose gains agree to MERGE_RTOL."""
    merged = [list(pairs[0])]
    for g, p in pairs[1:]:
        g_prev = merged[-1][0]
        scale = g_prev if g_prev >= g else g
        if abs(g_prev - g) <= MERGE_RTOL * scale:
            merged[-1][1] = merged[-1][1] + p
        else:
            merged.append([g, p])
    return merged


def _zero_gain_epsilon(gains, cum_probs):
    """Substitute for a zero smallest gain, small enough that the zero state
    provably receives no power: half of min_k F_k / ((1 - F_k) + n_k) over
    the positive states."""
    bound = None
    for g, f in zip(gains[:-1], cum_probs[:-1]):
        cand = f / ((1 - f) + 1 / g)
        if bound is None or cand < bound:
            bound = cand
    return bound / 2


def prepare(dist: FadingDistribution) -> PreparedChannel:
    """Canonicalize a distribution: sort descending, merge duplicate gains,
    and substitute a positive epsilon for a zero smallest gain.

    The single-state zero-gain channel is returned with ``degenerate=True``
    rather than rejected: both capacities are exactly zero for it.
    """
    pairs = sorted(zip(dist.gains, dist.probs), key=lambda gp: gp[0], reverse=True)
    merged = _merge_duplicates(pairs)

    gains = [g for g, _ in merged]
    probs = [p for _, p in merged]

    if len(gains) == 1 and gains[0] == 0:
        return PreparedChannel(
            gains=(gains[0],),
            probs=(probs[0],),
            inverse_gains=(math.inf,),
            cum_probs=(probs[0],),
            degenerate=True,
        )

    cum = []
    acc = 0
    for p in probs:
        acc = acc + p
        cum.append(acc)

    epsilon = None
    if gains[-1] == 0:
        epsilon = _zero_gain_epsilon(gains, cum)
        gains[-1] = epsilon

    inverse = [1 / g for g in gains]
    return PreparedChannel(
        gains=tuple(gains),
        probs=tuple(probs),
        inverse_gains=tuple(inverse),
        cum_probs=tuple(cum),
        epsilon_applied=epsilon,
    )


def ergodic_capacity(ch: PreparedChannel) -> float:
    """Ergodic capacity sum(p_k * ln(1 + g_k)) in nats per channel use.

    Always evaluated on the original gains: a state whose input gain was zero
    contributes exactly zero even though the prepared channel carries the
    epsilon substitute.
    """
    if ch.degenerate:
        return 0.0
    total = 0.0
    last = ch.num_states - 1
    for k, (g, p) in enumerate(zip(ch.gains, ch.probs)):
        if k == last and ch.epsilon_applied is not None:
            continue
        total += float(p) * math.log1p(float(g))
    return total


def entropy(ch: PreparedChannel) -> float:
    """Entropy -sum(p_k * ln(p_k)) of the state distribution, in nats."""
    total = 0.0
    for p in ch.probs:
        pf = float(p)
        total -= pf * math.log(pf)
    return total + 0.0
