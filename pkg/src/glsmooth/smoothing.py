"""Numerical kernel for uncertainty-driven generalized label smoothing.

Expert confidence is a seven-level ordinal score u in {-3..3}: the sign gives
polarity relative to the stored binary label, the magnitude gives confidence,
and 0 is maximal ambiguity.  Each score converts to a per-example smoothing
rate

    r = -k * |u| + r0        (defaults k = 5/12, r0 = 1)

and the rate builds a two-class soft target

    t = (1 - r) * onehot(y_eff) + (r / 2) * [1, 1]

where y_eff is the label after flipping (y -> 1-y when u < 0).  Rates may be
negative, in which case the target leaves [0, 1] ("negative smoothing": the
target is sharpened beyond one-hot).  The matching loss is the same affine
combination written against the prediction,

    L = (1 - r) * CE(p, y_eff) + r * CE(p, uniform),

which is algebraically identical to the cross-entropy of p against t.

Everything here is a pure function of its arguments; no shared state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ConfigError

SCORE_LEVELS = (-3, -2, -1, 0, 1, 2, 3)

# 5/12 rather than the rounded decimal 0.417: the exact slope is the unique
# value that makes r(0)=1, r(2)=1/6 and r(3)=-1/4 simultaneously (0.417 would
# give r(3) = -0.251).
DEFAULT_K = Fraction(5, 12)
DEFAULT_R0 = Fraction(1)


def check_score(u: int) -> int:
    """Validate a seven-level uncertainty score and return it as int."""
    if isinstance(u, bool) or int(u) != u or int(u) not in SCORE_LEVELS:
        raise ValueError(f"uncertainty score must be an integer in {{-3..3}}, got {u!r}")
    return int(u)


def check_label(y: int) -> int:
    """Validate a binary label and return it as int."""
    if isinstance(y, bool) or int(y) != y or int(y) not in (0, 1):
        raise ValueError(f"binary label must be 0 or 1, got {y!r}")
    return int(y)


@dataclass(frozen=True)
class SmoothingParams:
    """Score-to-rate conversion parameters, kept as exact rationals.

    k is the slope, r0 the intercept.  r0 = 1 encodes the clinical
    constraint that a maximally ambiguous score (u = 0) smooths all the
    way to the uniform target.
    """

    k: Fraction = DEFAULT_K
    r0: Fraction = DEFAULT_R0

    def __post_init__(self) -> None:
        object.__setattr__(self, "k", Fraction(self.k))
        object.__setattr__(self, "r0", Fraction(self.r0))
        if self.k <= 0:
            raise ConfigError(f"slope k must be positive, got {self.k}")


DEFAULT_PARAMS = SmoothingParams()


def smoothing_rate_exact(u: int, params: SmoothingParams = DEFAULT_PARAMS) -> Fraction:
    """Smoothing rate r = -k*|u| + r0 as an exact rational."""
    u = check_score(u)
    r = params.r0 - params.k * abs(u)
    if r > 1:
        raise ConfigError(
            f"smoothing rate {r} exceeds 1 (r0={params.r0} must not exceed 1)"
        )
    return r


def smoothing_rate(u: int, params: SmoothingParams = DEFAULT_PARAMS) -> float:
    """Smoothing rate r = -k*|u| + r0, computed exactly then converted to float."""
    return float(smoothing_rate_exact(u, params))


def effective_label(y: int, u: int) -> int:
    """Label actually smoothed: y when the score is non-negative, else 1-y."""
    y = check_label(y)
    u = check_score(u)
    return y if u >= 0 else 1 - y


def gls_target(y_eff: int, r: float) -> np.ndarray:
    """Two-class soft target (1-r)*onehot(y_eff) + r/2 on each component.

    Components always sum to 1; they leave [0, 1] exactly when r < 0.
    """
    y_eff = check_label(y_eff)
    r = float(r)
    if not math.isfinite(r) or r > 1:
        raise ValueError(f"smoothing rate must be finite and <= 1, got {r}")
    target = np.full(2, r / 2.0)
    target[y_eff] += 1.0 - r
    return target


def gls_target_exact(y_eff: int, r: Fraction) -> tuple[Fraction, Fraction]:
    """Exact-rational counterpart of gls_target, for identities that must hold exactly."""
    y_eff = check_label(y_eff)
    r = Fraction(r)
    if r > 1:
        raise ValueError(f"smoothing rate must be <= 1, got {r}")
    half = r / 2
    return (half + (1 - r) * (1 - y_eff), half + (1 - r) * y_eff)


def check_probability_pair(p) -> np.ndarray:
    """Validate a strictly positive two-class probability vector."""
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (2,):
        raise ValueError(f"probability pair must have shape (2,), got {p.shape}")
    if not np.all(p > 0):
        raise ValueError(f"probabilities must be strictly positive, got {p.tolist()}")
    if abs(float(p[0] + p[1]) - 1.0) > 1e-9:
        raise ValueError(f"probabilities must sum to 1, got {p.tolist()}")
    return p


def gls_loss(p, y_eff: int, r: float) -> float:
    """Uncertainty-weighted loss (1-r)*L_ce + r*L_uniform.

    L_ce is -log p[y_eff]; L_uniform is the cross-entropy of p against the
    uniform distribution, -(log p0 + log p1)/2.  Equals the cross-entropy of
    p against gls_target(y_eff, r) for every admissible r, including r < 0.
    Rejects non-positive probabilities rather than clamping; callers that
    need clamping (the trainer) do it on their side.
    """
    p = check_probability_pair(p)
    y_eff = check_label(y_eff)
    r = float(r)
    if not math.isfinite(r) or r > 1:
        raise ValueError(f"smoothing rate must be finite and <= 1, got {r}")
    log_p = np.log(p)
    l_ce = -float(log_p[y_eff])
    l_uniform = -0.5 * float(log_p[0] + log_p[1])
    return (1.0 - r) * l_ce + r * l_uniform


def softmax_pair(logits) -> np.ndarray:
    """Numerically stable two-class softmax."""
    z = np.asarray(logits, dtype=np.float64)
    if z.shape != (2,):
        raise ValueError(f"logits must have shape (2,), got {z.shape}")
    if not np.all(np.isfinite(z)):
        raise ValueError(f"logits must be finite, got {z.tolist()}")
    z = z - z.max()
    e = np.exp(z)
    return e / e.sum()


def gls_loss_gradient(logits, y_eff: int, r: float) -> np.ndarray:
    """Gradient of gls_loss with respect to the logits: softmax(logits) - target.

    The components sum to zero (softmax keeps predictions on the simplex,
    and the target sums to one).
    """
    p = softmax_pair(logits)
    return p - gls_target(y_eff, r)


@dataclass(frozen=True)
class ScoreTableRow:
    u: int
    r: Fraction
    target: tuple[Fraction, Fraction]
    interpretation: str


_INTERPRETATIONS = {
    3: "Definitively positive (strong negative smoothing)",
    2: "Highly confident (mild positive smoothing)",
    1: "Moderately confident (moderate smoothing)",
    0: "Ambiguous/Neutral (maximum uncertainty)",
    -1: "Moderately uncertain (moderate smoothing)",
    -2: "Highly uncertain (mild smoothing)",
    -3: "Definitively negative (strong negative smoothing)",
}


def score_rate_table(params: SmoothingParams = DEFAULT_PARAMS) -> list[ScoreTableRow]:
    """All seven (u, r, target) rows for the positive-label convention.

    Each row reports the target a y=1 annotation would train against at that
    score, i.e. gls_target(effective_label(1, u), r(u)), in exact rationals.
    Rows are ordered from u=3 down to u=-3.
    """
    rows = []
    for u in sorted(SCORE_LEVELS, reverse=True):
        r = smoothing_rate_exact(u, params)
        target = gls_target_exact(effective_label(1, u), r)
        rows.append(ScoreTableRow(u=u, r=r, target=target, interpretation=_INTERPRETATIONS[u]))
    return rows
