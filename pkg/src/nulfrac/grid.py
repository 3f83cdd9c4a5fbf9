"""Samples of a function on a unit-step grid with a real base point."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import AlignmentError, DomainError, SizeError

#: Tolerance used when matching grid points.
GRID_TOL = 1e-9


def _close_to_int(x: float) -> bool:
    return abs(x - round(x)) <= GRID_TOL


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Values ``f(base + k)`` for ``k = 0 .. count-1``.

    ``anchor`` (optional) records that the function is known to vanish at
    every grid point ``z <= anchor``.  Results of fractional sums carry such an
    anchor (an empty sum is zero), and operators that need values left of
    ``base`` extend the function by zeros instead of shrinking their output.
    The anchor is either ``base`` (then ``values[0] == 0``) or ``base - 1``.
    """

    base: float
    values: np.ndarray
    anchor: float | None = None

    def __post_init__(self) -> None:
        vals = np.array(self.values, dtype=float, copy=True).reshape(-1)
        if vals.size == 0:
            raise SizeError("a grid function needs at least one sample")
        if not np.all(np.isfinite(vals)):
            raise DomainError("grid function values must be finite")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        base = float(self.base)
        if not math.isfinite(base):
            raise DomainError("base must be finite")
        object.__setattr__(self, "base", base)
        if self.anchor is not None:
            anchor = float(self.anchor)
            off = base - anchor
            if abs(off) <= GRID_TOL:
                anchor = base
                if vals[0] != 0.0:
                    raise DomainError("value at the anchor must be zero")
            elif abs(off - 1.0) <= GRID_TOL:
                anchor = base - 1.0
            else:
                raise AlignmentError("anchor must be base or base - 1")
            object.__setattr__(self, "anchor", anchor)

    # -- basic geometry -----------------------------------------------------
    @property
    def count(self) -> int:
        return int(self.values.size)

    @property
    def last(self) -> float:
        return self.base + self.count - 1

    @property
    def points(self) -> np.ndarray:
        return self.base + np.arange(self.count, dtype=float)

    @property
    def anchored(self) -> bool:
        return self.anchor is not None

    def index_of(self, z: float) -> int:
        """Integer offset ``z - base``; raises :class:`AlignmentError` off-grid."""
        off = z - self.base
        if not _close_to_int(off):
            raise AlignmentError(f"{z} is not on the grid based at {self.base}")
        return int(round(off))

    def value_at(self, z: float) -> float:
        """``f(z)``, using the zero extension left of ``base`` when anchored."""
        i = self.index_of(z)
        if 0 <= i < self.count:
            return float(self.values[i])
        if i < 0 and self.anchored:
            return 0.0
        raise SizeError(f"{z} is outside the grid [{self.base}, {self.last}]")

    def extended(self, start: float) -> np.ndarray:
        """Values on ``start, start+1, ..., last`` (zero-padded when anchored)."""
        i = self.index_of(start)
        if i >= 0:
            if i >= self.count:
                raise SizeError(f"{start} lies beyond the last grid point {self.last}")
            return self.values[i:].copy()
        if not self.anchored:
            raise SizeError(f"{start} lies left of the grid base {self.base}")
        return np.concatenate([np.zeros(-i), self.values])

    def restrict(self, start: float, stop: float | None = None) -> "GridFunction":
        """Sub-grid ``[start, stop]`` (inclusive); anchors are kept when still valid."""
        stop = self.last if stop is None else stop
        vals = self.extended(start)
        n = int(round(stop - start)) + 1
        if n < 1 or n > vals.size:
            raise SizeError(f"cannot restrict to [{start}, {stop}]")
        anchor = None
        if self.anchor is not None:
            d = start - self.anchor
            if d <= GRID_TOL:
                anchor = start
            elif abs(d - 1.0) <= GRID_TOL:
                anchor = self.anchor
        return GridFunction(start, vals[:n], anchor)

    def with_values(self, values) -> "GridFunction":
        return GridFunction(self.base, values, None)

    def same_class(self, other: "GridFunction") -> bool:
        return _close_to_int(self.base - other.base)

    def __repr__(self) -> str:
        tail = "" if self.anchor is None else f", anchor={self.anchor:g}"
        return f"GridFunction(base={self.base:g}, count={self.count}{tail})"


def overlap(f: GridFunction, g: GridFunction) -> tuple[float, np.ndarray, np.ndarray]:
    """Common grid of ``f`` and ``g``: ``(start, f_values, g_values)``."""
    if not f.same_class(g):
        raise AlignmentError(f"grids based at {f.base} and {g.base} do not align")
    start = max(f.base, g.base)
    stop = min(f.last, g.last)
    if stop < start - GRID_TOL:
        raise SizeError("grids do not overlap")
    n = int(round(stop - start)) + 1
    return start, f.extended(start)[:n], g.extended(start)[:n]


def sample(func, base: float, count: int) -> GridFunction:
    """Tabulate ``func`` on ``base, base+1, ..., base+count-1``."""
    pts = base + np.arange(count, dtype=float)
    return GridFunction(base, [func(float(p)) for p in pts])


__all__ = ["GridFunction", "overlap", "sample", "GRID_TOL"]
