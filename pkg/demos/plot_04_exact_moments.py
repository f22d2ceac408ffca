"""
Exact moments from permutation sums
===================================

The expected moments ``E Tr[(R R^*)^p]`` are finite sums over permutations
of 2p points, weighted by powers of d1, d2 and s.  Evaluated with integers
and fractions they give exact references for the Monte Carlo.
"""

from fractions import Fraction

from realign import (
    BipartiteShape,
    catalan,
    enumerate_noncrossing,
    exact_moment_qq,
    exact_moment_rr,
    fat,
    signed_sum_check,
)
from realign.harness import mc_trace_moments
from realign.perm_comb import saturating_permutations

# closed forms at p = 1, 2
d, s = 3, 4
print(exact_moment_qq(1, d, s), "=", d * d)
print(exact_moment_qq(2, d, s), "=", 2 * d * d + Fraction(2 * d * d, s) + 1 + Fraction(4, s))

# the centred moments come from a sum with no fixed points
print("cancellation holds:", signed_sum_check(2, d, s))

# exact against Monte Carlo
shape = BipartiteShape(2, 3, 2)
mean, se = mc_trace_moments(shape, 50_000, 2, seed=1)
for p in (1, 2):
    exact = exact_moment_rr(p, 2, 3, 2)
    print(f"p={p}: exact {exact}  MC {mean[p - 1]:.2f} +- {se[p - 1]:.2f}")

# normalised moments approach the Catalan numbers
for p in (1, 2, 3, 4):
    print(p, float(exact_moment_qq(p, 1000, 1000) / 10**6), catalan(p))

# the leading terms are the fattened noncrossing partitions
for pi in enumerate_noncrossing(3):
    print(pi.blocks, "->", fat(pi).cycles())
print(len(saturating_permutations(3)), "saturating permutations =", catalan(3))
