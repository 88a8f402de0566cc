"""Marginal utility functions and their dominating upper envelope.

Each state k has a marginal utility ``u_k(z) = F_k / (n_k + z)``: the rate
value of an extra sliver of cumulative power at level z when layered coding
targets state k.  Because both n_k and F_k increase with k, any two of these
hyperbolas cross exactly once, and the pointwise maximum ``u*(z)`` is traced
by a chain of states built greedily from the strongest state by repeatedly
jumping to the candidate with the smallest crossing point (largest index on
ties).  The chain's breakpoints against the power budget [0, 1] single out
the states that receive positive power.

All arithmetic follows the channel's numeric type; with Fraction channels
the crossing points and tie decisions are exact.
"""

import bisect
import math
from dataclasses import dataclass

from .channel import PreparedChannel
from .errors import ValidationError

__all__ = [
    "MufChain",
    "muf_value",
    "intersection",
    "build_chain",
    "dominating_muf",
    "envelope_integral",
]

#: Two crossing points closer than this relative gap are treated as the same
#: point when breaking argmin ties.  The test is purely relative: crossing
#: points scale with the inverse gains and can be legitimately separated at
#: any absolute magnitude (geometric gain ladders push them below 1e-20), so
#: any absolute band would merge genuinely distinct points.  Exact ties
#: (rational channels) satisfy it with a zero gap.
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class MufChain:
    """Envelope chain for a prepared channel.

    pi: 1-based state indices tracing the envelope, pi[0] == 1, pi[-1] == K.
    breakpoints: length I+1; breakpoints[i-1] is the crossing point where
        segment i takes over (the leading sentinel is -n_1, where u_1 leaves
        its pole) and breakpoints[I] is the +infinity sentinel.
    s: largest segment index whose takeover point is <= 0.
    w: largest segment index whose takeover point is < 1.

    Segments s..w are the ones intersecting the power budget (0, 1]; the
    states pi[s-1..w-1] are exactly those assigned positive power.
    """

    pi: tuple
    breakpoints: tuple
    s: int
    w: int

    @property
    def segment_count(self) -> int:
        return len(self.pi)

    @property
    def active_states(self) -> tuple:
        """1-based indices of the states that receive positive power."""
        return tuple(self.pi[self.s - 1 : self.w])


def muf_value(ch: PreparedChannel, k: int, z):
    """Marginal utility ``F_k / (n_k + z)`` of state k (1-based) at level z.

    Only defined on z > -n_k, where the value is strictly positive.
    """
    n = ch.inverse_gains[k - 1]
    if not z > -n:
        raise ValidationError(f"marginal utility of state {k} undefined at z={z} <= -n_k")
    return ch.cum_probs[k - 1] / (n + z)


def intersection(ch: PreparedChannel, k: int, l: int):
    """Unique crossing point of the utilities of states k < l (1-based).

    Returns ``z_{k,l} = (F_k n_l - F_l n_k) / (F_l - F_k)``, which always
    lies to the right of -n_k.
    """
    if not 1 <= k < l <= ch.num_states:
        raise ValidationError(f"intersection needs 1 <= k < l <= K, got k={k}, l={l}")
    n = ch.inverse_gains
    f = ch.cum_probs
    return (f[k - 1] * n[l - 1] - f[l - 1] * n[k - 1]) / (f[l - 1] - f[k - 1])


def _is_tie(a, b):
    scale = max(abs(float(a)), abs(float(b)))
    return abs(a - b) <= TIE_RTOL * scale


def build_chain(ch: PreparedChannel) -> MufChain:
    """Construct the dominating-envelope chain of a prepared channel.

    Starting from state 1, each step minimizes the crossing point over all
    later states; ties (within TIE_RTOL) resolve to the largest index, so
    exactly tied hyperbolas collapse into a single jump.
    """
    if ch.degenerate or not ch.gains[-1] > 0:
        raise ValidationError("chain construction needs strictly positive gains; run prepare() first")
    k_states = ch.num_states

    pi = [1]
    breakpoints = [-ch.inverse_gains[0]]
    while pi[-1] < k_states:
        cur = pi[-1]
        zs = [(intersection(ch, cur, l), l) for l in range(cur + 1, k_states + 1)]
        z_min = min(z for z, _ in zs)
        best = max(l for z, l in zs if _is_tie(z, z_min))
        z_best = next(z for z, l in zs if l == best)
        pi.append(best)
        breakpoints.append(z_best)

    s = max(i for i in range(1, len(pi) + 1) if breakpoints[i - 1] <= 0)
    w = max(i for i in range(1, len(pi) + 1) if breakpoints[i - 1] < 1)
    breakpoints.append(math.inf)

    return MufChain(pi=tuple(pi), breakpoints=tuple(breakpoints), s=s, w=w)


def _segment_index(chain: MufChain, z) -> int:
    """1-based envelope segment containing z; exact breakpoints belong to the
    higher segment (both neighbours agree in value there)."""
    count = chain.segment_count
    return bisect.bisect_right(chain.breakpoints, z, 0, count)


def dominating_muf(chain: MufChain, ch: PreparedChannel, z):
    """Value of the upper envelope at z along with the achieving state.

    Returns ``(u*(z), k)`` where k is the 1-based state index whose utility
    equals the pointwise maximum at z.
    """
    if not z > chain.breakpoints[0]:
        raise ValidationError(f"envelope undefined at z={z} <= -n_1")
    i = _segment_index(chain, z)
    state = chain.pi[i - 1]
    return muf_value(ch, state, z), state


def envelope_integral(chain: MufChain, ch: PreparedChannel, lo, hi) -> float:
    """Exact integral of the upper envelope over [lo, hi], lo >= 0.

    Each segment contributes ``F_k * ln((n_k + b) / (n_k + a))``; segment
    boundaries inside the range split the integration exactly, so the only
    error is the final float rounding of each log.
    """
    if not 0 <= lo <= hi:
        raise ValidationError(f"integration range must satisfy 0 <= lo <= hi, got [{lo}, {hi}]")
    total = 0.0
    cuts = [lo]
    for z in chain.breakpoints[1:-1]:
        if lo < z < hi:
            cuts.append(z)
    cuts.append(hi)
    for a, b in zip(cuts, cuts[1:]):
        if not b > a:
            continue
        state = chain.pi[_segment_index(chain, a) - 1]
        n = ch.inverse_gains[state - 1]
        f = ch.cum_probs[state - 1]
        total += float(f) * math.log1p(float((b - a) / (n + a)))
    return total
