"""Fractal-dimension signature curves and the weighted distance between them.

All logarithms are base 2. The reference scale is fixed at delta = 1, so the
signature is defined for delta = 2..delta_max:

    FD(d) = 2 + (log2 A(1) - log2 A(d)) / log2 d

A flat surface (constant area) has FD = 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .blanket import AreaCurve, AreaVariant
from .errors import CurveLengthMismatch, CurveTooShort, NonPositiveArea, VariantMismatch

LOG_BASE = 2


@dataclass(frozen=True)
class FDCurve:
    values: tuple[float, ...]
    source_variant: AreaVariant

    @property
    def delta_max(self) -> int:
        return len(self.values) + 1

    @property
    def deltas(self) -> range:
        return range(2, self.delta_max + 1)


def fd_curve(area: AreaCurve) -> FDCurve:
    if area.delta_max < 2:
        raise CurveTooShort(f"need delta_max >= 2 for a signature, got {area.delta_max}")
    if any(not a > 0 for a in area.values):
        raise NonPositiveArea("fractal areas must be strictly positive")
    log_a1 = math.log2(area.values[0])
    values = tuple(
        2.0 + (log_a1 - math.log2(area.values[d - 1])) / math.log2(d)
        for d in range(2, area.delta_max + 1)
    )
    return FDCurve(values, area.variant)


def scale_weight(delta: int) -> float:
    """Weight of scale ``delta`` in :func:`fd_distance`, log2((d + 1/2) / (d - 1/2))."""
    return math.log2((delta + 0.5) / (delta - 0.5))


def fd_distance(a: FDCurve, b: FDCurve) -> float:
    """Weighted squared difference of two signatures, summed over ascending delta."""
    if len(a.values) != len(b.values):
        raise CurveLengthMismatch(
            f"signature lengths differ: delta_max {a.delta_max} vs {b.delta_max}"
        )
    if a.source_variant is not b.source_variant:
        raise VariantMismatch(
            f"cannot compare {a.source_variant.value} and {b.source_variant.value} signatures"
        )
    total = 0.0
    for d, fa, fb in zip(a.deltas, a.values, b.values):
        total += (fa - fb) ** 2 * scale_weight(d)
    return total
