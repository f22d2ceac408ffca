"""
Quarter-circle spectrum of the recentred realignment
====================================================

For d = s the singular values of ``Q`` follow the quarter-circle law
``sqrt(4 - x^2) / pi`` on [0, 2].  Its mean ``8 / (3 pi)`` is what sets the
realignment threshold ``gamma = (8 / (3 pi))^2``.
"""

import numpy as np

from realign import QUARTER_CIRCLE, ExperimentConfig, run_spectrum, threshold_gamma
from realign.spectra import spectrum_moment

res = run_spectrum(ExperimentConfig("spectrum", d=20, s=20, trials=5, seed=0))
print(f"KS distance {res.ks:.4f}")
print(f"mean singular value {res.mean_singular_value:.4f} vs {QUARTER_CIRCLE.mean():.4f}")
for k in (2, 4, 6):
    print(f"moment {k}: {spectrum_moment(res.spectrum, k):.3f} vs {QUARTER_CIRCLE.moment(k)}")

# text histogram against the density
centres = 0.5 * (res.edges[:-1] + res.edges[1:])
for c, h in list(zip(centres, res.density))[::4]:
    if c > 2.2:
        break
    print(f"{c:5.2f} {'#' * int(40 * h):40s} {QUARTER_CIRCLE.pdf(c):.3f}")

print("gamma =", threshold_gamma())
