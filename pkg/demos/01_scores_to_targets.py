"""From ordinal confidence scores to smoothing rates, targets, and losses.

A radiologist's statement carries graded confidence: "definitely pneumonia"
is not the same annotation as "pneumonia cannot be excluded", even though a
hard-label pipeline stores both as y=1.  This walk-through shows how the
seven-level score u in {-3..3} turns into a per-example training target.
"""

from fractions import Fraction

import numpy as np

from glsmooth import (
    SmoothingParams,
    effective_label,
    gls_loss,
    gls_target,
    score_rate_table,
    smoothing_rate,
)

# --- 1. The score-to-rate line: r = -k|u| + r0 ------------------------------
#
# r0 = 1 pins maximal ambiguity (u = 0) to the uniform target, and the
# default slope k = 5/12 makes the extremes (|u| = 3) dip below zero:
# negative smoothing, i.e. targets sharpened beyond one-hot.

print("rate line with default parameters (k = 5/12, r0 = 1):")
for u in range(-3, 4):
    print(f"  u = {u:+d}  ->  r = {smoothing_rate(u):+.4f}")

# --- 2. The full mapping table ----------------------------------------------

print("\nscore / rate / target (targets for the y=1 convention):")
for row in score_rate_table():
    neg, pos = (float(x) for x in row.target)
    print(f"  {row.u:+d}  r={float(row.r):+.3f}  [{neg:+.4f}, {pos:+.4f}]  {row.interpretation}")

# Note the symmetry: the u = -s row is the component swap of the u = +s row.
# Negative scores flip the label before smoothing, so a confident negative
# statement ("no pneumothorax", u = -3) trains the classifier toward class 0
# with the same sharpened strength a confident positive would get.

# --- 3. What the loss sees ---------------------------------------------------
#
# The loss is (1-r) * CE(p, y_eff) + r * CE(p, uniform): plain cross-entropy
# at r=0, pure uniform regularization at r=1, and an *amplified* cross-
# entropy at r<0.  Watch the same prediction scored under different
# confidences:

p = np.array([0.2, 0.8])  # model says class 1 with 80%
print(f"\nloss of p={p.tolist()} for a positive annotation at each score:")
for u in range(4):
    r = smoothing_rate(u)
    y_eff = effective_label(1, u)
    print(f"  u = {u:+d}  ->  loss = {gls_loss(p, y_eff, r):.4f}")

# The ambiguous case (u=0) is indifferent to which class the model picks
# (both targets are 0.5), while the confident case (u=3) rewards the correct
# high-probability prediction even more than plain cross-entropy would.

# --- 4. Negative smoothing leaves the probability simplex --------------------

target = gls_target(1, smoothing_rate(3))
print(f"\nu=3 target: {target.tolist()}  (components sum to {target.sum():.1f})")
print("components outside [0, 1] are intentional: that is negative smoothing.")

# --- 5. The slope is tunable --------------------------------------------------

for k in ("0.375", "5/12", "0.458"):
    params = SmoothingParams(k=Fraction(k))
    rates = [smoothing_rate(u, params) for u in (3, 2, 1, 0)]
    print(f"k = {k:>5}: rates (u=3..0) = {[round(r, 4) for r in rates]}")
