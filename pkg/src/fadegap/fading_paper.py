"""Writing on fading paper: capacity brackets when the fade also multiplies
a transmitter-known Gaussian interference.

The interference-presubtraction rate ``R = E[(ln G)+]`` is achievable for
any interference power, and it pins the fading-paper ergodic capacity to
within one bit (ln 2 nats) of the interference-free ergodic capacity.  The
one-block expected capacity is unaffected by the known interference, so the
additive loss lands in the interval [A - ln 2, A] of the interference-free
gap A, reported here clamped at zero (relaxing the delay constraint cannot
hurt) together with the raw unclamped lower bound.
"""

import math
from dataclasses import dataclass

from .channel import FadingDistribution, ergodic_capacity, prepare
from .errors import ValidationError
from .gaps import analyze

__all__ = ["FadingPaperReport", "fading_paper_report", "worst_case_fp_bracket"]

LN2 = math.log(2)


@dataclass(frozen=True)
class FadingPaperReport:
    """One-bit capacity bracket for a fading-paper channel.

    inr is carried through untouched: every computed quantity is provably
    independent of the transmit interference-to-noise ratio, and keeping the
    field documents that rather than silently dropping the parameter.
    """

    inr: float
    achievable_rate: float
    c_erg_lower: float
    c_erg_upper: float
    c_exp_fp: float
    gap_lower: float
    gap_upper: float
    gap_lower_raw: float


def fading_paper_report(dist: FadingDistribution, inr: float) -> FadingPaperReport:
    """Brackets for the fading-paper ergodic capacity and expected-rate loss.

    achievable_rate is ``sum(p_k * max(ln g_k, 0))`` on the original gains
    (a zero gain contributes zero); the ergodic bracket is
    [C_erg - ln 2, C_erg] floored at zero, and the loss bracket is
    [max(A - ln 2, 0), A] for the interference-free additive gap A.
    """
    if not inr >= 0:
        raise ValidationError(f"inr must be nonnegative, got {inr}")
    ch = prepare(dist)
    report = analyze(dist)

    rate = 0.0
    last = ch.num_states - 1
    for k, (g, p) in enumerate(zip(ch.gains, ch.probs)):
        if k == last and (ch.epsilon_applied is not None or ch.degenerate):
            continue
        gf = float(g)
        if gf > 1:
            rate += float(p) * math.log(gf)

    c_erg = ergodic_capacity(ch)
    c_erg_lower = max(c_erg - LN2, 0.0)
    gap_raw = report.additive_gap - LN2
    return FadingPaperReport(
        inr=float(inr),
        achievable_rate=rate,
        c_erg_lower=c_erg_lower,
        c_erg_upper=c_erg,
        c_exp_fp=report.c_exp,
        gap_lower=max(c_erg_lower - report.c_exp, 0.0),
        gap_upper=report.additive_gap,
        gap_lower_raw=gap_raw,
    )


def worst_case_fp_bracket(K: int) -> tuple:
    """Bracket [max(ln(K/2), 0), ln K] for the worst-case fading-paper
    additive loss over all K-state distributions and interference powers."""
    if K < 1:
        raise ValidationError(f"K must be at least 1, got {K}")
    return (max(math.log(K / 2), 0.0), math.log(K))
