"""Fitness functions scoring a candidate model against the measured data.

Both objectives are minimized. AIC adds twice the parameter count to the
log residual variance, so every extra parameter must buy a residual
variance reduction of exp(2/n) to break even; SSE measures fit alone.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .beam_structure import MeasuredData

ObjectiveKind = Literal["AIC", "SSE"]

MODE_COUNT = 5
SIGMA_SQ_FLOOR = 1e-12  # Hz^2, guards log(0) on a perfect fit


@dataclass(frozen=True)
class ObjectiveValue:
    """A scored fitness. `value` is dimensionless for AIC, Hz^2 for SSE;
    `sigma_squared` is the mean squared residual either way."""

    kind: ObjectiveKind
    value: float
    sigma_squared: float
    d: int | None
    n: int


def residuals(measured: MeasuredData, fem: np.ndarray) -> np.ndarray:
    """Elementwise measured minus computed frequencies, in Hz."""
    fem = np.asarray(fem, dtype=float)
    if fem.shape != measured.frequencies_hz.shape:
        raise ValueError(
            f"frequency vector length mismatch: measured {measured.frequencies_hz.shape}, "
            f"fem {fem.shape}"
        )
    return measured.frequencies_hz - fem


def sse(residual_vector: np.ndarray, d: int | None = None) -> ObjectiveValue:
    """Half the squared residual sum; blind to model complexity."""
    r = np.asarray(residual_vector, dtype=float)
    total = float(np.sum(r**2))
    return ObjectiveValue(
        kind="SSE",
        value=total / 2.0,
        sigma_squared=total / r.size,
        d=d,
        n=r.size,
    )


_VARIANCE_TERM_GRID = 2.0**44


def aic(residual_vector: np.ndarray, d: int) -> ObjectiveValue:
    """n ln(sigma^2) + 2d with the floored residual variance."""
    r = np.asarray(residual_vector, dtype=float)
    if not 1 <= d <= 5:
        raise ValueError("d must lie in 1..5")
    n = r.size
    sigma_squared = float(np.sum(r**2)) / n
    variance_term = n * math.log(max(sigma_squared, SIGMA_SQ_FLOOR))
    # Snapping the variance term to a 2^-44 grid keeps the sum with the
    # integer penalty exactly representable (for |AIC| < 2^8), so scores
    # for the same residuals at consecutive d always differ by exactly 2.
    variance_term = round(variance_term * _VARIANCE_TERM_GRID) / _VARIANCE_TERM_GRID
    value = variance_term + 2.0 * d
    return ObjectiveValue(
        kind="AIC",
        value=value,
        sigma_squared=sigma_squared,
        d=d,
        n=n,
    )
