"""Symmetric-group combinatorics and exact moment oracles.

Everything here is zero-based: a permutation of ``n`` points acts on
``{0, ..., n-1}`` and a set partition of ``[p]`` covers ``{0, ..., p-1}``.
One-based cycle notation from the literature translates by subtracting one
from every point.

The moment oracles enumerate the symmetric group explicitly and tabulate the
exponents of ``s``, ``d2`` and ``d1`` contributed by each permutation.  The
tables are cached, so evaluating a moment at many ``(d, s)`` points costs one
enumeration per ``p``.  All sums are carried out in exact integer or rational
arithmetic.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

__all__ = [
    "CapacityError",
    "P_MAX",
    "P2_MAX",
    "NC_MAX",
    "Permutation",
    "SetPartition",
    "cycle_count",
    "length",
    "is_geodesic",
    "catalan",
    "enumerate_noncrossing",
    "is_noncrossing",
    "fat",
    "collapse",
    "gamma_perm",
    "delta_perm",
    "gamma12_perm",
    "delta12_perm",
    "permutations_lex",
    "derangements_lex",
    "moment_table_rr",
    "moment_table_qq",
    "exact_moment_rr",
    "exact_moment_qq",
    "signed_sum_qq",
    "signed_sum_check",
    "exact_second_moment_qq",
    "exact_variance_qq",
    "dominant_term_unbalanced",
    "saturating_permutations",
]

P_MAX = 5
P2_MAX = 2
NC_MAX = 12
SIGNED_P_MAX = 3


class CapacityError(ValueError):
    """Raised when an exact enumeration would exceed its size bound."""


class Permutation:
    """A bijection of ``{0, ..., n-1}`` stored in one-line notation.

    ``Permutation((1, 2, 0))`` sends 0 to 1, 1 to 2 and 2 to 0.  Products
    follow function composition: ``(a * b)(i) == a(b(i))``.
    """

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(int(i) for i in images)
        n = len(images)
        if sorted(images) != list(range(n)):
            raise ValueError(f"not a permutation of range({n}): {images}")
        self.images = images

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Permutation":
        """Build a permutation from disjoint cycles; missing points are fixed."""
        images = list(range(n))
        seen = set()
        for cyc in cycles:
            for a in cyc:
                if a in seen or not 0 <= a < n:
                    raise ValueError(f"invalid cycle {cyc} for n={n}")
                seen.add(a)
            for a, b in zip(cyc, tuple(cyc[1:]) + tuple(cyc[:1])):
                images[a] = b
        return cls(images)

    @classmethod
    def full_cycle(cls, n: int) -> "Permutation":
        """The canonical full cycle ``(0 1 ... n-1)``."""
        return cls([(i + 1) % n for i in range(n)])

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        if self.n != other.n:
            raise ValueError("permutations act on different sets")
        return Permutation(self.images[j] for j in other.images)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def cycles(self) -> list[tuple[int, ...]]:
        """Disjoint cycles, each starting at its smallest point, fixed points included."""
        seen = [False] * self.n
        out = []
        for start in range(self.n):
            if seen[start]:
                continue
            cyc = []
            j = start
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def cycle_count(self) -> int:
        return _count_cycles(self.images)

    def length(self) -> int:
        return self.n - self.cycle_count()

    def fixed_points(self) -> list[int]:
        return [i for i, j in enumerate(self.images) if i == j]

    def is_involution(self) -> bool:
        return all(self.images[j] == i for i, j in enumerate(self.images))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        body = "".join(
            "(" + " ".join(map(str, c)) + ")" for c in self.cycles() if len(c) > 1
        )
        return f"Permutation[{self.n}]{body or '()'}"


@dataclass(frozen=True)
class SetPartition:
    """Partition of ``{0, ..., size-1}`` into disjoint nonempty blocks.

    Blocks are normalised to sorted tuples ordered by their smallest element,
    so equal partitions compare and hash equal.
    """

    blocks: tuple[tuple[int, ...], ...]
    size: int

    def __init__(self, blocks: Iterable[Iterable[int]], size: int | None = None):
        norm = sorted((tuple(sorted(b)) for b in blocks), key=lambda b: b[0] if b else -1)
        flat = [x for b in norm for x in b]
        if size is None:
            size = len(flat)
        if any(len(b) == 0 for b in norm):
            raise ValueError("blocks must be nonempty")
        if sorted(flat) != list(range(size)):
            raise ValueError(f"blocks do not partition range({size}): {norm}")
        object.__setattr__(self, "blocks", tuple(norm))
        object.__setattr__(self, "size", size)

    def as_permutation(self) -> Permutation:
        """Each block becomes an increasing cycle (the geodesic representative)."""
        return Permutation.from_cycles(self.blocks, self.size)

    def block_of(self) -> list[int]:
        lab = [0] * self.size
        for k, b in enumerate(self.blocks):
            for x in b:
                lab[x] = k
        return lab

    def __repr__(self):
        return "{" + ", ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def _count_cycles(images: Sequence[int]) -> int:
    n = len(images)
    seen = bytearray(n)
    count = 0
    for start in range(n):
        if seen[start]:
            continue
        count += 1
        j = start
        while not seen[j]:
            seen[j] = 1
            j = images[j]
    return count


def cycle_count(sigma: Permutation) -> int:
    """Number of cycles of ``sigma``, fixed points included."""
    return sigma.cycle_count()


def length(sigma: Permutation) -> int:
    """Minimal number of transpositions whose product is ``sigma``."""
    return sigma.length()


def is_geodesic(sigma: Permutation) -> bool:
    """True iff ``sigma`` lies on a geodesic from the identity to the full cycle."""
    p = sigma.n
    xi = Permutation.full_cycle(p)
    return sigma.length() + (sigma.inverse() * xi).length() == max(p - 1, 0)


def catalan(p: int) -> int:
    if p < 0:
        raise ValueError("p must be nonnegative")
    from math import comb

    return comb(2 * p, p) // (p + 1)


def is_noncrossing(partition: SetPartition) -> bool:
    """No a < b < c < d with a, c in one block and b, d in another."""
    lab = partition.block_of()
    n = partition.size
    for a, b, c, d in itertools.combinations(range(n), 4):
        if lab[a] == lab[c] and lab[b] == lab[d] and lab[a] != lab[b]:
            return False
    return True


def _nc_blocks(points: tuple[int, ...]) -> Iterator[list[tuple[int, ...]]]:
    # The block containing the first point splits the rest into independent gaps.
    if not points:
        yield []
        return
    first, rest = points[0], points[1:]
    m = len(rest)
    for k in range(m + 1):
        for chosen in itertools.combinations(range(m), k):
            block = (first,) + tuple(rest[i] for i in chosen)
            cuts = (-1,) + chosen + (m,)
            gaps = [rest[cuts[t] + 1 : cuts[t + 1]] for t in range(len(cuts) - 1)]
            for parts in itertools.product(*(list(_nc_blocks(g)) for g in gaps)):
                yield [block] + [b for part in parts for b in part]


def enumerate_noncrossing(p: int) -> list[SetPartition]:
    """All noncrossing partitions of ``{0, ..., p-1}``."""
    if p < 1:
        raise ValueError("p must be at least 1")
    if p > NC_MAX:
        raise CapacityError(f"p={p} exceeds the enumeration bound {NC_MAX}")
    return [SetPartition(bl, p) for bl in _nc_blocks(tuple(range(p)))]


def fat(partition: SetPartition) -> Permutation:
    """Fat pairing of a noncrossing partition, as an involution on ``2p`` points.

    A block ``i_1 < ... < i_k`` contributes the pairs ``{2 i_1, 2 i_k + 1}`` and
    ``{2 i_j + 1, 2 i_{j+1}}`` for ``j < k``.
    """
    if not is_noncrossing(partition):
        raise ValueError(f"partition {partition} is crossing")
    n = 2 * partition.size
    images = list(range(n))
    for b in partition.blocks:
        pairs = [(2 * b[0], 2 * b[-1] + 1)]
        pairs += [(2 * b[j] + 1, 2 * b[j + 1]) for j in range(len(b) - 1)]
        for x, y in pairs:
            images[x], images[y] = y, x
    return Permutation(images)


def collapse(pairing: Permutation) -> SetPartition:
    """Merge ``2i`` and ``2i+1`` into ``i`` and read off the blocks linked by ``pairing``."""
    if pairing.n % 2:
        raise ValueError("pairing must act on an even number of points")
    p = pairing.n // 2
    parent = list(range(p))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in enumerate(pairing.images):
        ra, rb = find(a // 2), find(b // 2)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for i in range(p):
        groups.setdefault(find(i), []).append(i)
    return SetPartition(groups.values(), p)


def gamma_perm(p: int) -> Permutation:
    """``(0 1)(2 3)...(2p-2 2p-1)``."""
    if p < 1:
        raise ValueError("p must be at least 1")
    return Permutation.from_cycles([(2 * i, 2 * i + 1) for i in range(p)], 2 * p)


def delta_perm(p: int) -> Permutation:
    """``(0 2p-1)(1 2)(3 4)...(2p-3 2p-2)``."""
    if p < 1:
        raise ValueError("p must be at least 1")
    if p == 1:
        return Permutation((1, 0))
    cycles = [(0, 2 * p - 1)] + [(2 * i - 1, 2 * i) for i in range(1, p)]
    return Permutation.from_cycles(cycles, 2 * p)


def _block_sum(a: Permutation, b: Permutation) -> Permutation:
    n = a.n
    return Permutation(list(a.images) + [n + j for j in b.images])


def gamma12_perm(p: int) -> Permutation:
    """Two disjoint copies of :func:`gamma_perm` on ``4p`` points."""
    g = gamma_perm(p)
    return _block_sum(g, g)


def delta12_perm(p: int) -> Permutation:
    """Two disjoint copies of :func:`delta_perm` on ``4p`` points."""
    d = delta_perm(p)
    return _block_sum(d, d)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


def permutations_lex(n: int) -> Iterator[tuple[int, ...]]:
    """All of S_n in lexicographic one-line order."""
    return itertools.permutations(range(n))


def derangements_lex(n: int) -> Iterator[tuple[int, ...]]:
    """Fixed-point-free permutations in lexicographic order.

    Branches that would place ``i`` at position ``i`` are pruned during the
    depth-first walk, so nothing is generated and then discarded.
    """
    images = [0] * n
    used = [False] * n

    def walk(pos):
        if pos == n:
            yield tuple(images)
            return
        for v in range(n):
            if v == pos or used[v]:
                continue
            used[v] = True
            images[pos] = v
            yield from walk(pos + 1)
            used[v] = False

    return walk(0)


def _tabulate(perms: Iterable[tuple[int, ...]], g: Permutation, d: Permutation) -> Counter:
    # (#alpha, #(alpha g^-1), #(alpha d^-1)) -> multiplicity
    gi = g.inverse().images
    di = d.inverse().images
    table: Counter = Counter()
    for a in perms:
        ag = [a[j] for j in gi]
        ad = [a[j] for j in di]
        table[(_count_cycles(a), _count_cycles(ag), _count_cycles(ad))] += 1
    return table


def _check_p(p: int, bound: int, allow_large: bool = False) -> None:
    if p < 1:
        raise ValueError("p must be at least 1")
    if p > bound and not allow_large:
        raise CapacityError(f"p={p} exceeds the exact enumeration bound {bound}")


@lru_cache(maxsize=None)
def moment_table_rr(p: int) -> dict[tuple[int, int, int], int]:
    """Exponent table of the sum over all of S_2p: ``(#a, #a g^-1, #a d^-1) -> count``."""
    _check_p(p, P_MAX)
    return dict(_tabulate(permutations_lex(2 * p), gamma_perm(p), delta_perm(p)))


@lru_cache(maxsize=None)
def moment_table_qq(p: int) -> dict[tuple[int, int, int], int]:
    """Same table restricted to fixed-point-free permutations of ``[2p]``."""
    _check_p(p, P_MAX)
    return dict(_tabulate(derangements_lex(2 * p), gamma_perm(p), delta_perm(p)))


@lru_cache(maxsize=None)
def _second_moment_table(p: int) -> dict[tuple[int, int, int], int]:
    return dict(_tabulate(derangements_lex(4 * p), gamma12_perm(p), delta12_perm(p)))


def exact_moment_rr(p: int, d1: int, d2: int, s: int) -> int:
    """Exact ``E Tr[(R R^*)^p]`` for the realigned Wishart matrix ``R``.

    Sum over ``a`` in S_2p of ``s^#a * d2^#(a g^-1) * d1^#(a d^-1)``.
    """
    _check_dims(d1, d2, s)
    return sum(
        c * s**a * d2**b * d1**e for (a, b, e), c in moment_table_rr(p).items()
    )


def exact_moment_qq(p: int, d: int, s: int) -> Fraction:
    """Exact ``E Tr[(Q Q^*)^p]`` for the centred, rescaled realignment ``Q``.

    Only fixed-point-free permutations contribute; each carries weight
    ``d^-2p s^-p s^#a d^#(a g^-1) d^#(a d^-1)``.
    """
    _check_dims(d, d, s)
    num = sum(c * s**a * d ** (b + e) for (a, b, e), c in moment_table_qq(p).items())
    return Fraction(num, d ** (2 * p) * s**p)


def signed_sum_qq(p: int, d: int, s: int) -> Fraction:
    """``E Tr[(QQ^*)^p]`` from the full binomial expansion of ``Q = (R - dsE)/(d sqrt s)``.

    Each choice ``(f1, f2)`` of which factors are replaced by ``dsE`` restricts
    the sum to permutations fixing ``2i`` (when ``f1(i) = 1``) or ``2i+1``
    (when ``f2(i) = 1``), with sign ``(-1)^(|f1| + |f2|)``.  Nothing about the
    cancellation of fixed points is assumed.
    """
    _check_p(p, SIGNED_P_MAX)
    _check_dims(d, d, s)
    g, dl = gamma_perm(p), delta_perm(p)
    gi, di = g.inverse().images, dl.inverse().images
    weights = {}
    for a in permutations_lex(2 * p):
        ag = [a[j] for j in gi]
        ad = [a[j] for j in di]
        weights[a] = s ** _count_cycles(a) * d ** (_count_cycles(ag) + _count_cycles(ad))
    total = 0
    for f1 in itertools.product((0, 1), repeat=p):
        for f2 in itertools.product((0, 1), repeat=p):
            pinned = [2 * i for i in range(p) if f1[i]] + [2 * i + 1 for i in range(p) if f2[i]]
            sign = -1 if (sum(f1) + sum(f2)) % 2 else 1
            total += sign * sum(w for a, w in weights.items() if all(a[x] == x for x in pinned))
    return Fraction(total, d ** (2 * p) * s**p)


def signed_sum_check(p: int, d: int, s: int) -> bool:
    """True iff the signed full expansion equals the fixed-point-free sum exactly."""
    return signed_sum_qq(p, d, s) == exact_moment_qq(p, d, s)


def exact_second_moment_qq(p: int, d: int, s: int, allow_large: bool = False) -> Fraction:
    """Exact ``E (Tr[(QQ^*)^p])^2`` as a fixed-point-free sum over S_4p.

    ``p = 3`` needs 12! permutations and is refused unless ``allow_large``.
    """
    _check_p(p, P2_MAX, allow_large)
    _check_dims(d, d, s)
    num = sum(c * s**a * d ** (b + e) for (a, b, e), c in _second_moment_table(p).items())
    return Fraction(num, d ** (4 * p) * s ** (2 * p))


def exact_variance_qq(p: int, d: int, s: int, allow_large: bool = False) -> Fraction:
    """``Var Tr[(QQ^*)^p]`` in exact arithmetic."""
    return exact_second_moment_qq(p, d, s, allow_large) - exact_moment_qq(p, d, s) ** 2


def dominant_term_unbalanced(p: int, d1: int, s: int) -> int:
    """Coefficient ``s^p d1^2`` of ``d2^(2p)`` in ``E Tr[(RR^*)^p]`` (the ``a = g`` term)."""
    if p < 1:
        raise ValueError("p must be at least 1")
    return s**p * d1**2


def saturating_permutations(p: int) -> set[Permutation]:
    """Fixed-point-free ``a`` in S_2p with ``#a = p`` and ``#(a g^-1) + #(a d^-1) = 2p + 2``."""
    _check_p(p, P_MAX)
    g, dl = gamma_perm(p), delta_perm(p)
    gi, di = g.inverse().images, dl.inverse().images
    out = set()
    for a in derangements_lex(2 * p):
        if _count_cycles(a) != p:
            continue
        ag = [a[j] for j in gi]
        ad = [a[j] for j in di]
        if _count_cycles(ag) + _count_cycles(ad) == 2 * p + 2:
            out.add(Permutation(a))
    return out


def _check_dims(d1: int, d2: int, s: int) -> None:
    for name, v in (("d1", d1), ("d2", d2), ("s", s)):
        if int(v) != v or v < 1:
            raise ValueError(f"{name} must be a positive integer, got {v}")
