"""
Reshuffling bipartite matrices
==============================

A matrix on C^d1 (x) C^d2 is a four-index array ``a[i, j, k, l]``.  The
realignment swaps the inner indices ``j`` and ``k``; the partial transpose
swaps ``j`` and ``l``.  Both are pure index permutations, so they are exact.
"""

import numpy as np

from realign import BipartiteShape, max_entangled, max_mixed, partial_transpose, product_state, realign
from realign.spectra import trace_norm

shape = BipartiteShape(2, 2)

# the identity realigns to d times the maximally entangled projector
print(realign(np.eye(4), shape))
print(np.array_equal(realign(np.eye(4), shape), 2 * max_entangled(2).matrix))

# a pure product state stays rank one, so its trace norm is exactly 1
rng = np.random.default_rng(0)
u = rng.standard_normal(3) + 1j * rng.standard_normal(3)
v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
rho = product_state(u, v)
print("product state:", trace_norm(rho.realigned()))

# the maximally entangled state sits far outside: value d
print("entangled:", trace_norm(max_entangled(3).realigned()))
print("maximally mixed:", trace_norm(max_mixed(3).realigned()))

# unbalanced shapes realign to a rectangle d1^2 x d2^2
print(realign(np.eye(6), BipartiteShape(2, 3)).shape)

# partial transpose of E_2 is the swap operator over 2, eigenvalue -1/2 appears
print(np.linalg.eigvalsh(partial_transpose(max_entangled(2).matrix, shape)))
