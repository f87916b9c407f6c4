"""Transverse grids, sampled fields, and their plain-text file format.

Files carry one header line

    # nx=<int> ny=<int> dx=<float> dy=<float> x0=<float> y0=<float>

followed by ny rows of nx whitespace-separated values (row-major, y
increasing).  Values are written with 17 significant digits, which
round-trips IEEE doubles bit-exactly.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidSpecError


@dataclass(frozen=True)
class TransverseGrid:
    """Uniform x-y grid (micrometers); x0, y0 locate the first sample."""

    nx: int
    ny: int
    dx: float
    dy: float
    x0: float
    y0: float

    def __post_init__(self):
        if self.nx < 8 or self.ny < 8:
            raise InvalidSpecError(f"grid must be at least 8x8, got {self.nx}x{self.ny}")
        if not (self.dx > 0 and self.dy > 0):
            raise InvalidSpecError("grid steps must be > 0")

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.nx)

    @property
    def y(self) -> np.ndarray:
        return self.y0 + self.dy * np.arange(self.ny)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.x, self.y)

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    @staticmethod
    def centered(width: float, height: float, dx: float, dy: float) -> "TransverseGrid":
        """Grid spanning [-width/2, width/2] x [-height/2, height/2]."""
        nx = int(round(width / dx)) + 1
        ny = int(round(height / dy)) + 1
        return TransverseGrid(nx, ny, dx, dy, -dx * (nx - 1) / 2.0, -dy * (ny - 1) / 2.0)


@dataclass(frozen=True)
class Field:
    """Scalar field sampled on a TransverseGrid; real modes, complex beams."""

    grid: TransverseGrid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values)
        object.__setattr__(self, "values", v)
        if v.shape != (self.grid.ny, self.grid.nx):
            raise InvalidSpecError(
                f"field shape {v.shape} does not match grid ({self.grid.ny}, {self.grid.nx})"
            )

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.values) ** 2) * self.grid.cell_area))

    def normalized(self) -> "Field":
        n = self.norm()
        if n == 0.0:
            raise InvalidSpecError("cannot normalize a zero field")
        return Field(self.grid, self.values / n)


def inner(a: Field, b: Field) -> complex:
    """Grid inner product <a|b> = sum conj(a) * b * dx * dy."""
    if a.grid != b.grid:
        raise InvalidSpecError("fields live on different grids")
    return complex(np.sum(np.conj(a.values) * b.values) * a.grid.cell_area)


_HEADER_RE = re.compile(
    r"^#\s*nx=(\S+)\s+ny=(\S+)\s+dx=(\S+)\s+dy=(\S+)\s+x0=(\S+)\s+y0=(\S+)\s*$"
)


def write_field(path: str, field: Field) -> None:
    """Write a real field/profile; 17 significant digits, atomic replace."""
    v = np.asarray(field.values)
    if np.iscomplexobj(v):
        raise InvalidSpecError("field files store real values; write re/im separately")
    g = field.grid
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(
            f"# nx={g.nx} ny={g.ny} dx={g.dx:.17g} dy={g.dy:.17g} "
            f"x0={g.x0:.17g} y0={g.y0:.17g}\n"
        )
        for row in v:
            fh.write(" ".join(format(x, ".17g") for x in row))
            fh.write("\n")
    os.replace(tmp, path)


def read_field(path: str) -> Field:
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        m = _HEADER_RE.match(header)
        if not m:
            raise InvalidSpecError(f"{path}: malformed field header {header!r}")
        nx, ny = int(m.group(1)), int(m.group(2))
        dx, dy, x0, y0 = (float(m.group(i)) for i in range(3, 7))
        data = np.loadtxt(fh, ndmin=2)
    if data.shape != (ny, nx):
        raise InvalidSpecError(
            f"{path}: data shape {data.shape} does not match header ({ny}, {nx})"
        )
    return Field(TransverseGrid(nx, ny, dx, dy, x0, y0), data)
