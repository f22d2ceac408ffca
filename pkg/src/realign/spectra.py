"""Singular values, Schatten norms and the quarter-circle law."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy import optimize

__all__ = [
    "EmpiricalSpectrum",
    "QuarterCircleLaw",
    "QUARTER_CIRCLE",
    "singular_values",
    "trace_norm",
    "schatten_norm",
    "qc_density",
    "qc_cdf",
    "qc_moment",
    "qc_mean",
    "spectrum_moment",
    "ks_distance",
    "histogram",
]

HIST_BINS = 64


@dataclass(frozen=True, eq=False)
class EmpiricalSpectrum:
    """Singular values in nonincreasing order, normalised by ``dimension``."""

    values: np.ndarray
    dimension: int

    def __post_init__(self):
        v = np.sort(np.asarray(self.values, dtype=float))[::-1].copy()
        if v.size and v[-1] < 0:
            raise ValueError("singular values must be nonnegative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        if self.dimension < 1:
            raise ValueError("dimension must be positive")

    def __len__(self):
        return self.values.size

    @classmethod
    def pooled(cls, spectra: Iterable["EmpiricalSpectrum"]) -> "EmpiricalSpectrum":
        spectra = list(spectra)
        return cls(
            np.concatenate([sp.values for sp in spectra]),
            sum(sp.dimension for sp in spectra),
        )

    def scaled(self, factor: float) -> "EmpiricalSpectrum":
        return EmpiricalSpectrum(self.values * abs(factor), self.dimension)

    def mean(self) -> float:
        return spectrum_moment(self, 1)

    def std(self) -> float:
        m1 = spectrum_moment(self, 1)
        return math.sqrt(max(spectrum_moment(self, 2) - m1 * m1, 0.0))


def _finite(m) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has NaN or infinite entries")
    return m


def singular_values(m) -> EmpiricalSpectrum:
    m = _finite(m)
    if m.size == 0:
        raise ValueError("empty matrix")
    sv = np.linalg.svd(m, compute_uv=False)
    return EmpiricalSpectrum(sv, min(m.shape))


def schatten_norm(m, p: float) -> float:
    """``(sum_i sigma_i^p)^(1/p)`` for ``p >= 1`` (``p = inf`` gives the operator norm)."""
    if not p >= 1:
        raise ValueError(f"Schatten exponent must be >= 1, got {p}")
    sv = singular_values(m).values
    if math.isinf(p):
        return float(sv[0])
    if p == 2:
        return float(np.sqrt(np.sum(sv * sv)))
    if p == 1:
        return float(np.sum(sv))
    top = sv[0]
    if top == 0:
        return 0.0
    return float(top * np.sum((sv / top) ** p) ** (1.0 / p))


def trace_norm(m) -> float:
    return schatten_norm(m, 1)


# ---------------------------------------------------------------------------
# quarter-circle law on [0, 2]
# ---------------------------------------------------------------------------


def qc_density(x):
    """``sqrt(4 - x^2) / pi`` on ``[0, 2]``, zero elsewhere."""
    x = np.asarray(x, dtype=float)
    inside = (x >= 0) & (x <= 2)
    out = np.where(inside, np.sqrt(np.clip(4 - x * x, 0, None)) / np.pi, 0.0)
    return out if out.ndim else float(out)


def qc_cdf(x):
    """Closed form ``(x sqrt(4 - x^2) + 4 arcsin(x/2)) / (2 pi)`` clipped to [0, 1]."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 2.0)
    out = (x * np.sqrt(4 - x * x) + 4 * np.arcsin(x / 2)) / (2 * np.pi)
    out = np.clip(out, 0.0, 1.0)
    return out if out.ndim else float(out)


def qc_moment(k: int) -> float:
    """``int_0^2 x^k dmu``: Catalan numbers for even ``k``, closed form for odd."""
    if k < 0 or int(k) != k:
        raise ValueError("moment order must be a nonnegative integer")
    k = int(k)
    p, odd = divmod(k, 2)
    if not odd:
        return float(math.comb(2 * p, p) // (p + 1))
    num = 2 ** (4 * p + 5) * math.factorial(p) * math.factorial(p + 2)
    return num / (math.pi * math.factorial(2 * p + 4))


def qc_mean() -> float:
    return qc_moment(1)


class QuarterCircleLaw:
    """The quarter-circle distribution as an object (density, CDF, moments, quantiles)."""

    support = (0.0, 2.0)

    def pdf(self, x):
        return qc_density(x)

    def cdf(self, x):
        return qc_cdf(x)

    def moment(self, k: int) -> float:
        return qc_moment(k)

    def mean(self) -> float:
        return qc_mean()

    def ppf(self, q: float) -> float:
        if not 0 <= q <= 1:
            raise ValueError("quantile level must lie in [0, 1]")
        if q in (0, 1):
            return 2.0 * q
        return optimize.brentq(lambda x: qc_cdf(x) - q, 0.0, 2.0, xtol=1e-14)

    def __repr__(self):
        return "QuarterCircleLaw()"


QUARTER_CIRCLE = QuarterCircleLaw()


def spectrum_moment(spec: EmpiricalSpectrum, k: int) -> float:
    """``(1/dimension) sum_i sigma_i^k``."""
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    if k == 0:
        return len(spec) / spec.dimension
    return float(np.sum(spec.values**k) / spec.dimension)


def ks_distance(spec: EmpiricalSpectrum, law: QuarterCircleLaw = QUARTER_CIRCLE) -> float:
    """Kolmogorov-Smirnov distance between the empirical CDF and ``law``."""
    n = len(spec)
    if n == 0:
        raise ValueError("empty spectrum")
    x = spec.values[::-1]
    f = np.asarray(law.cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def histogram(spec: EmpiricalSpectrum, bins: int = HIST_BINS):
    """Density histogram on ``[0, max(2.5, max sigma)]`` with uniform bins.

    Returns ``(edges, counts, density)``.
    """
    top = max(2.5, float(spec.values[0]) if len(spec) else 0.0)
    counts, edges = np.histogram(spec.values, bins=bins, range=(0.0, top))
    width = edges[1] - edges[0]
    density = counts / (max(len(spec), 1) * width)
    return edges, counts, density
