"""Finite-bandwidth feedback model: hold / swing / settle segments of a bin.

When the feedback target changes between bins, the displacement phase is
stale for ``t_hold``, ramps linearly to the new phase during ``t_swing``, and
only then sits at the target.  The bin is modeled as a three-way beam split
with intensity fractions ``t_hold/t_bin``, ``t_swing/t_bin`` and the
remainder; the swing segment has a closed-form no-click probability in the
continuum limit plus a discrete L-mode product used as its oracle.

A discard window of width ``delta_t`` at the bin start is treated as linear
loss: fully covered segments are dropped, a partially covered segment keeps
the uncovered fraction of its intensity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bayes import TruthTables
from .physics import ChannelModel, off_probability_visibility

# signed minimal rotation, in quarter turns, for each (new - prev) mod 4
_SIGNED_SPAN = (0, 1, 2, -1)


@dataclass(frozen=True)
class DelayParams:
    """Bin timing: total width, stale-phase hold, and ramp duration (us)."""

    t_bin: float = 20.0
    t_hold: float = 0.37
    t_swing: float = 0.63

    def __post_init__(self):
        if self.t_hold < 0 or self.t_swing < 0:
            raise ValueError("t_hold and t_swing must be >= 0")
        if self.t_hold + self.t_swing > self.t_bin:
            raise ValueError(
                f"hold + swing ({self.t_hold + self.t_swing}) exceeds t_bin ({self.t_bin})")

    @property
    def ramp_end(self) -> float:
        return self.t_hold + self.t_swing


@dataclass(frozen=True)
class SplitCoefficients:
    """Beam-splitter intensity fractions for the three bin segments."""

    r1_sq: float
    t1_sq: float
    r2_sq: float
    t2_sq: float

    def __post_init__(self):
        for name in ("r1_sq", "t1_sq", "r2_sq", "t2_sq"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        if abs(self.r1_sq + self.t1_sq - 1.0) > 1e-12 or abs(self.r2_sq + self.t2_sq - 1.0) > 1e-12:
            raise ValueError("splitter intensity fractions must pair-sum to 1")

    @property
    def hold_fraction(self) -> float:
        return self.r1_sq

    @property
    def swing_fraction(self) -> float:
        return self.t1_sq * self.r2_sq

    @property
    def settle_fraction(self) -> float:
        return self.t1_sq * self.t2_sq


def split_coefficients(p: DelayParams) -> SplitCoefficients:
    """Splitter fractions reproducing the hold/swing/settle time shares."""
    r1_sq = p.t_hold / p.t_bin
    t1_sq = 1.0 - r1_sq
    if t1_sq <= 0.0:
        raise ZeroDivisionError("t_hold equals t_bin: degenerate first splitter")
    r2_sq = p.t_swing / (p.t_bin * t1_sq)
    return SplitCoefficients(r1_sq, t1_sq, r2_sq, 1.0 - r2_sq)


def off_prob_hold(m: int, prev_target: int, gamma_sq: float,
                  sc: SplitCoefficients, ch: ChannelModel) -> float:
    """No-click probability of the hold segment (previous target still nulled)."""
    theta = ((m - prev_target) % 4) * math.pi / 2
    return math.exp(-2.0 * ch.eta_total * sc.hold_fraction * gamma_sq
                    * (1.0 - ch.xi * math.cos(theta)))


def off_prob_swing_analytic(m: int, prev_target: int, new_target: int,
                            gamma_sq: float, sc: SplitCoefficients,
                            ch: ChannelModel) -> float:
    """Continuum-limit no-click probability of the linear phase ramp.

    Phases are measured in the frame where the previous target is nulled; the
    span m2 is the signed minimal rotation (in quarter turns) from the
    previous to the new target.
    """
    step = (new_target - prev_target) % 4
    m2 = _SIGNED_SPAN[step]
    if m2 == 0:
        raise ValueError("degenerate swing (target unchanged): use the hold formula")
    mm = (m - prev_target) % 4
    w = ch.eta_total * sc.swing_fraction * gamma_sq
    exponent = (-2.0 * w
                + (4.0 * w / (m2 * math.pi)) * ch.xi
                * (math.sin(mm * math.pi / 2) - math.sin((mm - m2) * math.pi / 2)))
    return math.exp(exponent)


def off_prob_swing_discrete(m: int, prev_target: int, new_target: int,
                            gamma_sq: float, sc: SplitCoefficients,
                            ch: ChannelModel, L: int) -> float:
    """L-mode product approximation of the swing segment (oracle for the limit)."""
    if L < 2:
        raise ValueError(f"mode count L must be >= 2, got {L}")
    step = (new_target - prev_target) % 4
    m2 = _SIGNED_SPAN[step]
    mm = (m - prev_target) % 4
    gp_sq = ch.eta_total * sc.swing_fraction * gamma_sq / L
    j = np.arange(1, L + 1)
    theta = m2 * (math.pi / 2) * (j - 1) / (L - 1)
    exponents = -2.0 * gp_sq * (1.0 - ch.xi * np.cos(theta - mm * math.pi / 2))
    return float(math.exp(exponents.sum()))


def _discard_retentions(p: DelayParams, discard_dt: float) -> tuple[float, float, float]:
    """Retained intensity fraction of (hold, swing, settle) for a discard window."""
    if not 0.0 <= discard_dt <= p.t_bin:
        raise ValueError(f"discard window must be in [0, t_bin], got {discard_dt}")
    ret_hold = 1.0 if p.t_hold == 0 else max(p.t_hold - discard_dt, 0.0) / p.t_hold
    if p.t_swing == 0:
        ret_swing = 1.0
    else:
        covered = min(max(discard_dt, p.t_hold), p.ramp_end) - p.t_hold
        ret_swing = 1.0 - covered / p.t_swing
    settle_len = p.t_bin - p.ramp_end
    if settle_len == 0:
        ret_settle = 1.0
    else:
        ret_settle = (p.t_bin - max(discard_dt, p.ramp_end)) / settle_len
    return ret_hold, ret_swing, ret_settle


def off_prob_bin_with_delay(m: int, prev_target: int, new_target: int,
                            gamma_sq: float, p: DelayParams, ch: ChannelModel,
                            nu_per_bin: float = 0.0, discard_dt: float = 0.0) -> float:
    """No-click probability of a full bin under feedback delay and discarding.

    Product of the hold, swing and settle segment probabilities with the
    discard window applied as linear loss per segment.  Dark counts are kept
    at the full per-bin expectation.
    """
    sc = split_coefficients(p)
    ret_hold, ret_swing, ret_settle = _discard_retentions(p, discard_dt)
    dnew = (m - new_target) % 4
    step = (new_target - prev_target) % 4

    hold = off_prob_hold(m, prev_target, gamma_sq * ret_hold, sc, ch)
    if step == 0:
        # no phase motion: the swing window sits at the (unchanged) target
        theta = dnew * math.pi / 2
        swing = math.exp(-2.0 * ch.eta_total * sc.swing_fraction * gamma_sq * ret_swing
                         * (1.0 - ch.xi * math.cos(theta)))
    else:
        swing = off_prob_swing_analytic(m, prev_target, new_target,
                                        gamma_sq * ret_swing, sc, ch)
    settle = math.exp(-2.0 * ch.eta_total * sc.settle_fraction * gamma_sq * ret_settle
                      * (1.0 - ch.xi * math.cos(dnew * math.pi / 2)))
    return hold * swing * settle * math.exp(-nu_per_bin)


def off_prob_bin_no_delay(m: int, target: int, gamma_sq: float, p: DelayParams,
                          ch: ChannelModel, nu_per_bin: float = 0.0,
                          discard_dt: float = 0.0) -> float:
    """Delay-free bin with the same per-bin discard loss (comparison model)."""
    if not 0.0 <= discard_dt <= p.t_bin:
        raise ValueError(f"discard window must be in [0, t_bin], got {discard_dt}")
    theta = ((m - target) % 4) * math.pi / 2
    return off_probability_visibility(theta, gamma_sq * (1.0 - discard_dt / p.t_bin),
                                      ch, nu_per_bin)


def delay_truth_tables(alpha_sq: float, stages: int, ch: ChannelModel,
                       nu_per_state: float, params: DelayParams,
                       discard_dt: float, include_delay: bool = True) -> TruthTables:
    """Outcome-generating model with per-bin discarding and optional delay.

    The first bin has no feedback transient and no discard window; later bins
    use the three-segment model (or, with ``include_delay=False``, the plain
    formula with the discard loss only).
    """
    gamma_sq = alpha_sq / stages
    nu_bin = nu_per_state / stages
    first = np.array([
        off_probability_visibility(d * math.pi / 2, gamma_sq, ch, nu_bin)
        for d in range(4)
    ])
    trans = np.empty((4, 4))
    for dprev in range(4):
        for step in range(4):
            if include_delay:
                trans[dprev, step] = off_prob_bin_with_delay(
                    dprev, 0, step, gamma_sq, params, ch, nu_bin, discard_dt)
            else:
                trans[dprev, step] = off_prob_bin_no_delay(
                    dprev, step, gamma_sq, params, ch, nu_bin, discard_dt)
    return TruthTables(stages, first, trans)
