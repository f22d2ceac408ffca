"""
PPT against realignment
=======================

Around ``s = d^2`` induced states are almost always non-PPT, yet realignment
already misses them.  Both tests are one linear map plus a spectral check.
"""

from realign import ExperimentConfig
from realign.harness import run_criteria_compare

for d in (4, 8, 12):
    res = run_criteria_compare(ExperimentConfig("criteria_compare", d=d, s=d * d, trials=30, seed=1))
    sm = res.summary
    print(f"d={d:2d} s={d * d:3d}  non-PPT {sm['fraction_non_ppt']:.2f}  "
          f"realignment {sm['fraction_realignment_detects']:.2f}  "
          f"missed {sm['fraction_non_ppt_not_realignment']:.2f}")

# one trial in detail
r = res.reports[0]
print(r.as_dict())
