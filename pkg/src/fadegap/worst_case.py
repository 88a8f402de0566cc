"""Extremal channel families and asymptotic-regime instance generators.

Two parameter families drive the gaps to their worst cases as d grows:

* the additive family, geometric gain ladders ``g_k = d + d^2 + ... +
  d^(K-k+1)`` with uniform probabilities, pushes the additive gap toward
  ln K;
* the multiplicative family, ``n_k = d + ... + d^k`` with probabilities
  proportional to d^k, pushes the multiplicative gap toward K.

The multiplicative family is generated in exact rational arithmetic: its
defining property is that *all* utility crossing points coincide at zero,
which float rounding would destroy (the whole pipeline accepts Fractions,
so exactness survives analysis).  The two SNR-regime generators scale a
fixed gain profile to extreme SNR, where either every state or exactly one
state ends up active.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .channel import FadingDistribution
from .errors import ValidationError
from .gaps import analyze

__all__ = [
    "FamilySpec",
    "additive_family",
    "multiplicative_family",
    "high_snr_instance",
    "low_snr_instance",
    "sweep",
    "sweep_to_csv",
    "SWEEP_CSV_HEADER",
]

SWEEP_KINDS = ("additive", "multiplicative")
SNR_KINDS = ("high_snr", "low_snr")

SWEEP_CSV_HEADER = "d,c_erg,c_exp,additive_gap,multiplicative_gap,entropy"


def additive_family(K: int, d: float) -> FadingDistribution:
    """Uniform-probability geometric gain ladder; requires d > max(K-1, 2).

    Gains use the closed form ``d (d^(K-k+1) - 1) / (d - 1)`` rather than a
    K-term sum, keeping the relative error at one rounding even when the top
    gain reaches ~1e32.
    """
    if K < 1:
        raise ValidationError(f"additive family needs K >= 1, got {K}")
    if not d > max(K - 1, 2):
        raise ValidationError(f"additive family needs d > max(K-1, 2) = {max(K - 1, 2)}, got {d}")
    gains = [d * (d ** (K - k + 1) - 1) / (d - 1) for k in range(1, K + 1)]
    return FadingDistribution(gains=tuple(gains), probs=(1.0 / K,) * K)


def multiplicative_family(K: int, d: float) -> FadingDistribution:
    """Exact-rational family with all utility crossings at zero; d > 0.

    Inverse gains are ``n_k = d + d^2 + ... + d^k`` and probabilities are
    proportional to d^k, making cumulative probability exactly proportional
    to n_k.  Gains and probabilities come back as Fractions.
    """
    if K < 1:
        raise ValidationError(f"multiplicative family needs K >= 1, got {K}")
    if not d > 0:
        raise ValidationError(f"multiplicative family needs d > 0, got {d}")
    dq = Fraction(d)
    powers = [dq**k for k in range(1, K + 1)]
    inverse_gains = []
    acc = Fraction(0)
    for x in powers:
        acc += x
        inverse_gains.append(acc)
    total = acc
    gains = tuple(1 / n for n in inverse_gains)
    probs = tuple(x / total for x in powers)
    return FadingDistribution(gains=gains, probs=probs)


def _check_profile(values, probs, what: str):
    if len(values) == 0:
        raise ValidationError(f"{what}: need at least one state")
    if len(values) != len(probs):
        raise ValidationError(f"{what}: profile and probabilities differ in length")
    prev = None
    for v in values:
        if not v > 0:
            raise ValidationError(f"{what}: entries must be positive, got {v}")
        if prev is not None and not v < prev:
            raise ValidationError(f"{what}: entries must be strictly decreasing")
        prev = v


def high_snr_instance(r, p, snr: float) -> FadingDistribution:
    """Gains ``SNR^r_k`` for a strictly decreasing positive exponent profile.

    At large SNR every state becomes active and the additive gap approaches
    the entropy of the state distribution.
    """
    r = tuple(r)
    p = tuple(p)
    _check_profile(r, p, "high-SNR exponents")
    if not snr > 0:
        raise ValidationError(f"snr must be positive, got {snr}")
    return FadingDistribution(gains=tuple(snr**rk for rk in r), probs=p)


def low_snr_instance(alpha, p, snr: float) -> FadingDistribution:
    """Gains ``alpha_k * SNR`` for a strictly decreasing positive slope profile.

    At small SNR exactly one state stays active (the maximizer of F_k
    alpha_k) and the multiplicative gap approaches the per-unit-cost ratio
    sum(p alpha) / max(F alpha).
    """
    alpha = tuple(alpha)
    p = tuple(p)
    _check_profile(alpha, p, "low-SNR slopes")
    if not snr > 0:
        raise ValidationError(f"snr must be positive, got {snr}")
    return FadingDistribution(gains=tuple(a * snr for a in alpha), probs=p)


@dataclass(frozen=True)
class FamilySpec:
    """Declarative description of one generated instance.

    kind selects the generator: the d-parameterized families take (K, d),
    the SNR regimes take a profile (exponents r or slopes alpha), matching
    probabilities, and an snr.
    """

    kind: str
    K: int = 0
    d: Optional[float] = None
    profile: tuple = ()
    probs: tuple = ()
    snr: Optional[float] = None

    def __post_init__(self):
        if self.kind not in SWEEP_KINDS + SNR_KINDS:
            raise ValidationError(f"unknown family kind {self.kind!r}")
        self.build()  # validate eagerly

    def build(self) -> FadingDistribution:
        if self.kind in SWEEP_KINDS and self.d is None:
            raise ValidationError(f"family kind {self.kind!r} requires the d parameter")
        if self.kind in SNR_KINDS and self.snr is None:
            raise ValidationError(f"family kind {self.kind!r} requires the snr parameter")
        if self.kind == "additive":
            return additive_family(self.K, self.d)
        if self.kind == "multiplicative":
            return multiplicative_family(self.K, self.d)
        if self.kind == "high_snr":
            return high_snr_instance(self.profile, self.probs, self.snr)
        return low_snr_instance(self.profile, self.probs, self.snr)


def sweep(kind: str, K: int, d_values) -> list:
    """Analyze one family at each d; returns [(d, CapacityReport), ...].

    Points are evaluated independently and returned in the given order; any
    invalid d aborts before any work with the offending value named.
    """
    if kind not in SWEEP_KINDS:
        raise ValidationError(f"sweep supports kinds {SWEEP_KINDS}, got {kind!r}")
    d_values = list(d_values)
    build = additive_family if kind == "additive" else multiplicative_family
    for d in d_values:  # validate all points before analyzing any
        build(K, d)
    return [(d, analyze(build(K, d))) for d in d_values]


def sweep_to_csv(rows) -> str:
    """Serialize sweep rows to CSV with full round-trip float precision."""
    lines = [SWEEP_CSV_HEADER]
    for d, report in rows:
        lines.append(
            ",".join(
                repr(float(v))
                for v in (
                    d,
                    report.c_erg,
                    report.c_exp,
                    report.additive_gap,
                    report.multiplicative_gap,
                    report.entropy,
                )
            )
        )
    return "\n".join(lines) + "\n"
