"""
Detection thresholds
====================

Realignment detects a random induced state while ``s`` is below about
``gamma d^2`` (balanced case) or ``d1^2`` when ``d2`` is much larger.
At desk scale the crossing is blurred but clearly bracketed.
"""

from realign import ExperimentConfig
from realign.harness import default_balanced_grid, run_threshold_balanced, run_threshold_unbalanced

d = 10
res = run_threshold_balanced(ExperimentConfig("threshold_balanced", d=d, trials=40, seed=0))
print("grid:", default_balanced_grid(d))
for pt in res.points:
    print(f"s={pt.s:4d} s/d^2={pt.s / d**2:.2f} detected {pt.detect_fraction:.2f}")
print("half crossing at s/d^2 =", res.crossing_ratio())

# unbalanced: the threshold sits at d1^2 = 4
res = run_threshold_unbalanced(ExperimentConfig("threshold_unbalanced", d1=2, d2=150, s_grid=(2, 3, 4, 5, 6), trials=40))
for pt in res.points:
    print(f"s={pt.s} detected {pt.detect_fraction:.2f}  mean sv(R/d2) {pt.sv_mean:.3f}  sqrt(s) {pt.s ** 0.5:.3f}")
