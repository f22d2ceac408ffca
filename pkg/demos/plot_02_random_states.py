"""
Induced random states
=====================

Tracing out an s-dimensional environment from a random pure state gives a
normalised Wishart matrix ``rho = W / tr W`` with ``W = X X^*``.  Every draw
is addressed by ``(seed, stream)``, so any trial can be regenerated alone.
"""

import numpy as np

from realign import BipartiteShape, RngSeed, induced_state, q_matrix, sample_wishart, trace_deviation

shape = BipartiteShape(3, 3, 5)

# E tr W = d1 d2 s
traces = [sample_wishart(shape, RngSeed(1, t)).trace for t in range(2000)]
print("mean tr W:", np.mean(traces), "expected", 9 * 5)

# the same (seed, stream) reproduces the same state
a = induced_state(shape, RngSeed(7, 3))
b = induced_state(shape, RngSeed(7, 3))
print("reproducible:", np.array_equal(a.matrix, b.matrix))

# tr W concentrates around d^2 s like a Gamma(d^2 s) variable
for s in (10, 100, 1000):
    dev = [trace_deviation(sample_wishart(BipartiteShape(4, 4, s), RngSeed(2, t))) for t in range(300)]
    print(f"s={s:5d}  std of tr W/(d^2 s) - 1 = {np.std(dev):.4f}  (1/sqrt(16 s) = {1 / np.sqrt(16 * s):.4f})")

# Q recentres the realigned Wishart matrix; E Tr QQ* = d^2
q = q_matrix(sample_wishart(BipartiteShape(6, 6, 10), RngSeed(3)))
print("Tr QQ* =", np.trace(q @ q.conj().T).real, "vs 36 on average")
