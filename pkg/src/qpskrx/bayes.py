"""Bayesian feedback engine: posterior recursion, MAP policy, exact enumeration.

The receiver splits the signal into M bins.  Each bin, the current MAP
hypothesis is displaced to vacuum; the detector outcome multiplies the
posterior by the per-bin likelihood and the MAP target is refreshed.  Because
everything is phase-covariant, likelihoods depend only on the index difference
``delta = (m - target) mod 4`` and can be tabulated once per model.

``enumerate_error_probability`` walks all 2^M outcome histories and is the
exact oracle the Monte Carlo engine is checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .physics import ChannelModel, off_probability_visibility

_NEG_INF = float("-inf")


def _log(p: float) -> float:
    return math.log(p) if p > 0.0 else _NEG_INF


def _argmax4(values) -> int:
    """First index attaining the maximum (lowest-index tie-break)."""
    best, arg = values[0], 0
    for i in (1, 2, 3):
        if values[i] > best:
            best, arg = values[i], i
    return arg


@dataclass(frozen=True)
class InferenceModel:
    """Likelihood model used in the posterior update.

    ``eta_total`` is the effective efficiency seen by the inference model,
    including any lumped discard-loss multiplier.  Dark counts are stored per
    state and split evenly over the M bins.
    """

    alpha_sq: float
    stages: int
    eta_total: float = 1.0
    xi: float = 1.0
    nu_per_state: float = 0.0

    def __post_init__(self):
        if self.alpha_sq < 0:
            raise ValueError(f"alpha_sq must be >= 0, got {self.alpha_sq}")
        if self.stages < 1:
            raise ValueError(f"stages must be >= 1, got {self.stages}")
        ChannelModel(self.eta_total, self.xi)  # range validation
        if self.nu_per_state < 0:
            raise ValueError(f"nu_per_state must be >= 0, got {self.nu_per_state}")

    @property
    def gamma_sq(self) -> float:
        return self.alpha_sq / self.stages

    @property
    def nu_per_bin(self) -> float:
        return self.nu_per_state / self.stages

    def channel(self) -> ChannelModel:
        return ChannelModel(self.eta_total, self.xi)

    def off_probs(self) -> np.ndarray:
        """No-click probability by delta = (m - target) mod 4."""
        ch = self.channel()
        return np.array([
            off_probability_visibility(d * math.pi / 2, self.gamma_sq, ch, self.nu_per_bin)
            for d in range(4)
        ])

    def log_likelihood_table(self) -> np.ndarray:
        """(2, 4) array of log p(e | delta); row 0 is "off", row 1 is "on"."""
        p_off = self.off_probs()
        table = np.empty((2, 4))
        for d in range(4):
            table[0, d] = _log(p_off[d])
            table[1, d] = _log(1.0 - p_off[d])
        return table


@dataclass(frozen=True)
class TruthTables:
    """Per-bin no-click probabilities of the outcome-generating model.

    ``first`` is indexed by ``(m - target) mod 4`` and applies to the first
    bin (no feedback transient, no discard window).  ``trans`` applies to all
    later bins and is indexed by ``[(m - prev_target) mod 4,
    (target - prev_target) mod 4]`` so delay-aware models can depend on the
    phase transition.
    """

    stages: int
    first: np.ndarray
    trans: np.ndarray

    def __post_init__(self):
        if self.first.shape != (4,) or self.trans.shape != (4, 4):
            raise ValueError("truth tables must have shapes (4,) and (4, 4)")

    def off_prob(self, bin_index: int, m: int, prev_target: int, target: int) -> float:
        if bin_index == 0:
            return float(self.first[(m - target) % 4])
        return float(self.trans[(m - prev_target) % 4, (target - prev_target) % 4])


def uniform_truth_tables(alpha_sq: float, stages: int, ch: ChannelModel,
                         nu_per_state: float = 0.0) -> TruthTables:
    """Truth model with identical per-bin statistics (no delay, lumped loss)."""
    gamma_sq = alpha_sq / stages
    nu_bin = nu_per_state / stages
    p = np.array([
        off_probability_visibility(d * math.pi / 2, gamma_sq, ch, nu_bin)
        for d in range(4)
    ])
    trans = np.empty((4, 4))
    for dprev in range(4):
        for step in range(4):
            trans[dprev, step] = p[(dprev - step) % 4]
    return TruthTables(stages, p.copy(), trans)


def truth_from_inference(model: InferenceModel) -> TruthTables:
    """Matched truth model: outcomes generated from the inference likelihoods."""
    return uniform_truth_tables(model.alpha_sq, model.stages, model.channel(),
                                model.nu_per_state)


@dataclass(frozen=True)
class FeedbackState:
    """Posterior over the four hypotheses plus the current MAP target.

    ``log_posterior`` is the unnormalized log-space accumulator; the MAP
    target is derived from it so the decision sequence is bitwise identical
    to the batch kernels, which never renormalize.
    """

    posterior: np.ndarray
    target: int
    log_posterior: np.ndarray | None = None

    def __post_init__(self):
        p = np.asarray(self.posterior, dtype=float)
        if p.shape != (4,):
            raise ValueError("posterior must be a 4-vector")
        if np.any(p < -1e-12) or abs(p.sum() - 1.0) > 1e-10:
            raise ValueError(f"posterior must be normalized probabilities, got {p}")
        if p[self.target] < p.max() - 1e-9:
            raise ValueError("target must be a MAP index")


def initial_state() -> FeedbackState:
    """Uniform prior; symbol 0 is displaced to vacuum first."""
    return FeedbackState(np.full(4, 0.25), 0, np.zeros(4))


def bin_likelihood(model: InferenceModel, m: int, target: int, e: int) -> float:
    """p(e | hypothesis m, current target), phase theta = (m - target)*pi/2."""
    if m not in range(4) or target not in range(4):
        raise ValueError("hypothesis and target indices must be in 0..3")
    if e not in (0, 1):
        raise ValueError(f"outcome bit must be 0 or 1, got {e}")
    p_off = off_probability_visibility(((m - target) % 4) * math.pi / 2,
                                       model.gamma_sq, model.channel(),
                                       model.nu_per_bin)
    return p_off if e == 0 else 1.0 - p_off


def posterior_update(state: FeedbackState, e: int, model: InferenceModel) -> FeedbackState:
    """Bayes step in log space; renormalizes and refreshes the MAP target."""
    table = model.log_likelihood_table()
    if state.log_posterior is not None:
        logpost = state.log_posterior
    else:
        with np.errstate(divide="ignore"):
            logpost = np.log(state.posterior)
    delta = (np.arange(4) - state.target) % 4
    logpost = logpost + table[e, delta]
    peak = logpost.max()
    if not np.isfinite(peak):
        raise FloatingPointError("all hypotheses have zero likelihood")
    post = np.exp(logpost - peak)
    post /= post.sum()
    return FeedbackState(post, _argmax4(logpost), logpost)


def decide(state: FeedbackState) -> int:
    """Final MAP decision; ties broken by lowest index."""
    if state.log_posterior is not None:
        return _argmax4(state.log_posterior)
    return _argmax4(state.posterior)


MAX_ENUM_STAGES = 20


@dataclass
class EnumerationDetail:
    """Exact enumeration output with per-symbol bookkeeping."""

    error_prob: float
    per_symbol_error: np.ndarray
    branch_totals: np.ndarray = field(repr=False)


def enumerate_detail(model: InferenceModel, truth: TruthTables | None = None,
                     max_stages: int = MAX_ENUM_STAGES) -> EnumerationDetail:
    """Walk all 2^M outcome histories; exact up to floating point.

    Each history is weighted by its probability under the truth model while
    the posterior is propagated with the inference model, mirroring the
    receiver's actual feedback trajectory.
    """
    M = model.stages
    if M > max_stages:
        raise ValueError(
            f"enumeration is capped at {max_stages} stages (2^M histories); got M={M}")
    if truth is None:
        truth = truth_from_inference(model)
    if truth.stages != M:
        raise ValueError("truth model stage count must match the inference model")

    ll = model.log_likelihood_table().tolist()
    first = [float(x) for x in truth.first]
    trans = [[float(x) for x in row] for row in truth.trans]

    correct = [0.0, 0.0, 0.0, 0.0]
    total = [0.0, 0.0, 0.0, 0.0]

    def walk(i, lp, prev, cur, lb):
        if i == M:
            d = _argmax4(lp)
            for m in range(4):
                if lb[m] != _NEG_INF:
                    w = math.exp(lb[m])
                    total[m] += w
                    if m == d:
                        correct[m] += w
            return
        if i == 0:
            p_t = [first[(m - cur) % 4] for m in range(4)]
        else:
            row = (cur - prev) % 4
            p_t = [trans[(m - prev) % 4][row] for m in range(4)]
        for e in (0, 1):
            lb2 = [lb[m] + (_log(p_t[m]) if e == 0 else _log(1.0 - p_t[m]))
                   for m in range(4)]
            lp2 = [lp[h] + ll[e][(h - cur) % 4] for h in range(4)]
            walk(i + 1, lp2, cur, _argmax4(lp2), lb2)

    walk(0, [0.0] * 4, 0, 0, [0.0] * 4)
    per_symbol = 1.0 - np.array(correct)
    return EnumerationDetail(
        error_prob=float(per_symbol.mean()),
        per_symbol_error=per_symbol,
        branch_totals=np.array(total),
    )


def enumerate_error_probability(model: InferenceModel,
                                truth: TruthTables | None = None,
                                max_stages: int = MAX_ENUM_STAGES) -> float:
    """Exact average error probability over all 2^M outcome histories."""
    return enumerate_detail(model, truth, max_stages).error_prob
