"""Gaussian, Wishart and induced random states.

Seeding contract
----------------
A draw is identified by ``RngSeed(seed, stream)``.  The pair is fed to
``numpy.random.SeedSequence(entropy=seed, spawn_key=(stream,))`` and drives a
``PCG64`` generator, so distinct streams are statistically independent and a
fixed pair reproduces the same sample bit-for-bit on a given numpy build.
Complex Gaussians are drawn as one real array of shape ``(rows, cols, 2)``
(real part, imaginary part) from ``Generator.standard_normal`` and scaled by
``1/sqrt(2)``, giving ``E|z|^2 = 1``.

Harness trials use ``stream = trial index``.  Batched Monte Carlo helpers use
``stream = block index`` with a fixed block size.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tensor_ops import BipartiteShape, DensityMatrix, max_entangled, realign

__all__ = [
    "RngSeed",
    "WishartSample",
    "sample_gaussian",
    "sample_wishart",
    "wishart_from_gaussian",
    "induced_state",
    "q_matrix",
    "trace_deviation",
    "gaussian_blocks",
]

_U64 = 2**64


@dataclass(frozen=True)
class RngSeed:
    seed: int
    stream: int = 0

    def __post_init__(self):
        for name in ("seed", "stream"):
            v = int(getattr(self, name))
            if not 0 <= v < _U64:
                raise ValueError(f"{name} must be a 64-bit unsigned integer, got {v}")
            object.__setattr__(self, name, v)

    def generator(self) -> np.random.Generator:
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream,))
        return np.random.Generator(np.random.PCG64(ss))

    def substream(self, stream: int) -> "RngSeed":
        return RngSeed(self.seed, stream)


@dataclass(frozen=True, eq=False)
class WishartSample:
    shape: BipartiteShape
    w: np.ndarray
    trace: float


def _complex_normal(rng: np.random.Generator, size: tuple[int, ...]) -> np.ndarray:
    z = rng.standard_normal(size + (2,))
    return (z[..., 0] + 1j * z[..., 1]) * np.sqrt(0.5)


def sample_gaussian(rows: int, cols: int, seed: RngSeed) -> np.ndarray:
    """``rows x cols`` matrix of i.i.d. standard complex Gaussians (E|z|^2 = 1)."""
    if rows < 1 or cols < 1:
        raise ValueError(f"dimensions must be positive, got {rows}x{cols}")
    return _complex_normal(seed.generator(), (rows, cols))


def wishart_from_gaussian(x: np.ndarray, shape: BipartiteShape) -> WishartSample:
    """``W = X X^*``, symmetrised so it is exactly Hermitian in storage."""
    if x.shape[0] != shape.n:
        raise ValueError(f"X has {x.shape[0]} rows, expected {shape.n}")
    w = x @ x.conj().T
    w = 0.5 * (w + w.conj().T)
    return WishartSample(shape, w, float(np.trace(w).real))


def sample_wishart(shape: BipartiteShape, seed: RngSeed) -> WishartSample:
    return wishart_from_gaussian(sample_gaussian(shape.n, shape.s, seed), shape)


def induced_state(shape: BipartiteShape, seed: RngSeed) -> DensityMatrix:
    """Random state ``W / tr W`` with distribution mu_{d1 d2, s}."""
    ws = sample_wishart(shape, seed)
    if not ws.trace > 0:
        # probability zero; one retry on a shifted stream, then give up
        ws = sample_wishart(shape, RngSeed(seed.seed, (seed.stream + 2**63) % _U64))
        if not ws.trace > 0:
            raise RuntimeError("degenerate Wishart sample with zero trace")
    return DensityMatrix(shape, ws.w / ws.trace)


def q_matrix(ws: WishartSample) -> np.ndarray:
    """Centred, rescaled realignment ``(W^R - d s E) / (d sqrt(s))`` (balanced only)."""
    shape = ws.shape
    if not shape.is_balanced:
        raise ValueError("Q is only defined for d1 == d2")
    d, s = shape.d1, shape.s
    return (realign(ws.w, shape) - d * s * max_entangled(d).matrix) / (d * np.sqrt(s))


def trace_deviation(ws: WishartSample) -> float:
    """``alpha`` with ``tr W = (1 + alpha) d1 d2 s``."""
    return ws.trace / (ws.shape.n * ws.shape.s) - 1.0


def gaussian_blocks(n_trials: int, rows: int, cols: int, seed: int, block: int = 10_000):
    """Yield batches of i.i.d. Gaussian matrices, shape ``(b, rows, cols)``.

    Batch ``k`` is drawn from ``RngSeed(seed, k)`` and holds ``block`` trials
    (the last one may be shorter).
    """
    done = 0
    k = 0
    while done < n_trials:
        b = min(block, n_trials - done)
        yield _complex_normal(RngSeed(seed, k).generator(), (b, rows, cols))
        done += b
        k += 1
