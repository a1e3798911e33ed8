"""Measurable-set descriptors: finite unions of half-open intervals on a
circle (circumference 2*pi, angles in [-pi, pi)) or on a circular line
segment of length L.

Rotation and translation both act by adding t to every endpoint and
renormalising modulo the period, so they are measure preserving by
construction.
"""

import math
from dataclasses import dataclass, field

CIRCLE = "circle"
LINE = "line"

_EPS = 1e-12


@dataclass(frozen=True)
class RegionSet:
    """Disjoint union of half-open cells [a, b) on a periodic domain.

    ``base`` is the left end of the canonical coordinate window
    [base, base + period).  Circle domains default to base = -pi,
    period = 2*pi; line domains to base = 0.
    """

    domain: str
    period: float
    cells: tuple = ()
    base: float = field(default=0.0)

    def __post_init__(self):
        if self.domain not in (CIRCLE, LINE):
            raise ValueError(f"unknown domain tag {self.domain!r}")
        if self.period <= 0:
            raise ValueError("period must be positive")
        object.__setattr__(self, "cells", self._normalize(self.cells))

    def _normalize(self, cells):
        lo = self.base
        per = self.period
        out = []
        for a, b in cells:
            length = b - a
            if length < -_EPS:
                raise ValueError(f"cell [{a}, {b}) has negative length")
            if length <= _EPS:
                continue
            if length >= per - _EPS:
                # full domain
                return ((lo, lo + per),)
            a = lo + math.fmod(a - lo, per)
            if a < lo - _EPS:
                a += per
            if a >= lo + per - _EPS:
                a -= per
            b = a + length
            if b > lo + per + _EPS:
                out.append((a, lo + per))
                out.append((lo, b - per))
            else:
                out.append((a, min(b, lo + per)))
        out.sort()
        for (a1, b1), (a2, b2) in zip(out, out[1:]):
            if a2 < b1 - 1e-9:
                raise ValueError(f"overlapping cells [{a1},{b1}) and [{a2},{b2})")
        return tuple(out)

    @classmethod
    def circle(cls, cells):
        return cls(domain=CIRCLE, period=2 * math.pi, cells=tuple(cells),
                   base=-math.pi)

    @classmethod
    def line(cls, cells, length, base=0.0):
        return cls(domain=LINE, period=length, cells=tuple(cells), base=base)

    @classmethod
    def full(cls, like: "RegionSet") -> "RegionSet":
        return cls(domain=like.domain, period=like.period,
                   cells=((like.base, like.base + like.period),),
                   base=like.base)

    @property
    def measure(self) -> float:
        return sum(b - a for a, b in self.cells)

    def shifted(self, t: float) -> "RegionSet":
        """Translate (line) / rotate (circle) by t."""
        return RegionSet(domain=self.domain, period=self.period,
                         cells=tuple((a + t, b + t) for a, b in self.cells),
                         base=self.base)

    # the rotation e^{it}B on the circle and the translation B + t on the
    # line are the same endpoint action
    rotate = shifted
    translate = shifted

    def contains(self, x: float) -> bool:
        lo = self.base
        x = lo + math.fmod(x - lo, self.period)
        if x < lo:
            x += self.period
        for a, b in self.cells:
            if a - _EPS <= x < b - _EPS:
                return True
        return False

    def indicator(self, xs):
        """Evaluate the set indicator at each point of ``xs``."""
        return [1.0 if self.contains(x) else 0.0 for x in xs]

    def is_aligned(self, h: float, tol: float = 1e-9) -> bool:
        """True when every endpoint sits on the grid base + h*Z."""
        for a, b in self.cells:
            for x in (a, b):
                r = (x - self.base) / h
                if abs(r - round(r)) > tol:
                    return False
        return True


def equal_partition(like: RegionSet, k: int):
    """Split the domain of ``like`` into k equal consecutive cells."""
    if k < 1:
        raise ValueError("need at least one cell")
    w = like.period / k
    lo = like.base
    return [RegionSet(domain=like.domain, period=like.period,
                      cells=((lo + i * w, lo + (i + 1) * w),), base=like.base)
            for i in range(k)]


def circle_full() -> RegionSet:
    return RegionSet.circle([(-math.pi, math.pi)])
