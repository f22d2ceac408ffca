"""Realignment and PPT entanglement tests, the realignment gauge, thresholds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .spectra import trace_norm
from .tensor_ops import BipartiteShape, DensityMatrix, max_entangled

__all__ = [
    "TOL_CRIT",
    "CriterionReport",
    "realignment_value",
    "realignment_detects",
    "ppt_min_eig",
    "is_ppt",
    "gauge_norm",
    "evaluate",
    "threshold_gamma",
    "predicted_regime",
]

TOL_CRIT = 1e-9
GAUGE_TOL = 1e-8
GAUGE_MAX_ITER = 60
# unbalanced predictions need d_max / d_min at least this large
RATIO_MIN = 10


@dataclass(frozen=True)
class CriterionReport:
    realignment_value: float
    ppt_min_eig: float
    gauge: Optional[float] = None

    @property
    def realignment_detects(self) -> bool:
        return self.realignment_value > 1 + TOL_CRIT

    @property
    def ppt_detects(self) -> bool:
        return self.ppt_min_eig < -TOL_CRIT

    def as_dict(self) -> dict:
        return {
            "realignment_value": self.realignment_value,
            "ppt_min_eig": self.ppt_min_eig,
            "realignment_detects": self.realignment_detects,
            "ppt_detects": self.ppt_detects,
            "gauge": self.gauge,
        }


def realignment_value(rho: DensityMatrix) -> float:
    """Trace norm of the realigned state; above 1 certifies entanglement."""
    return trace_norm(rho.realigned())


def realignment_detects(rho: DensityMatrix) -> bool:
    return realignment_value(rho) > 1 + TOL_CRIT


def ppt_min_eig(rho: DensityMatrix) -> float:
    pt = rho.partial_transposed()
    # the partial transpose of a Hermitian matrix is Hermitian; eigvalsh reads one triangle
    return float(np.linalg.eigvalsh(pt)[0])


def is_ppt(rho: DensityMatrix) -> tuple[bool, float]:
    """``(passes, lambda_min)`` for the positive-partial-transpose test."""
    lam = ppt_min_eig(rho)
    return lam >= -TOL_CRIT, lam


def gauge_norm(rho: DensityMatrix, tol: float = GAUGE_TOL) -> float:
    """Minkowski gauge of the realignment body around the maximally mixed state.

    Smallest ``t >= 0`` with ``|| E/d + (rho^R - E/d) / t ||_1 <= 1``, found
    by bisection.  Feasibility is monotone in ``t``: the map
    ``u -> ||E/d + u (rho^R - E/d)||_1`` is convex and equals ``1/d < 1`` at 0.
    """
    shape = rho.shape
    if not shape.is_balanced:
        raise ValueError("the realignment gauge is defined for d1 == d2 only")
    d = shape.d1
    centre = max_entangled(d).matrix / d
    delta = rho.realigned() - centre
    if not np.any(delta):
        return 0.0

    def feasible(t):
        return trace_norm(centre + delta / t) <= 1.0

    lo, hi = 0.0, 1.0
    while not feasible(hi):
        lo, hi = hi, 2 * hi
    for _ in range(GAUGE_MAX_ITER):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if feasible(mid):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def evaluate(rho: DensityMatrix, with_gauge: bool = False) -> CriterionReport:
    gauge = gauge_norm(rho) if with_gauge and rho.shape.is_balanced else None
    return CriterionReport(realignment_value(rho), ppt_min_eig(rho), gauge)


def threshold_gamma() -> float:
    """``(8 / (3 pi))^2``, the balanced detection threshold ratio ``s / d^2``."""
    return (8.0 / (3.0 * math.pi)) ** 2


def predicted_regime(shape: BipartiteShape, margin: float = 0.1, ratio_min: float = RATIO_MIN) -> str:
    """Asymptotic prediction for induced states: ``detect``, ``not_detect`` or ``near_threshold``.

    Balanced shapes compare ``s`` with ``(gamma -/+ margin) d^2``.  Strongly
    unbalanced shapes compare ``s`` with ``min(d1, d2)^2``.  Moderately
    unbalanced shapes have no prediction and report ``near_threshold``.
    """
    s = shape.s
    if shape.is_balanced:
        d2 = shape.d1**2
        g = threshold_gamma()
        if s < (g - margin) * d2:
            return "detect"
        if s > (g + margin) * d2:
            return "not_detect"
        return "near_threshold"
    small, big = sorted((shape.d1, shape.d2))
    if big / small < ratio_min:
        return "near_threshold"
    if s < small**2:
        return "detect"
    if s > small**2:
        return "not_detect"
    return "near_threshold"
