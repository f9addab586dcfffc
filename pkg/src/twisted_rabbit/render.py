"""Escape-time rendering of filled Julia sets of z -> z^d + c, written as PPM."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InvalidParameterError, InvalidViewportError, check_degree

DEFAULT_MAX_ITER = 500


def default_escape_radius(c: complex) -> float:
    return max(2.0, 1.0 + abs(c))


@dataclass(frozen=True)
class RenderConfig:
    c: complex
    d: int = 2
    center: complex = 0j
    width: float = 3.0
    pixels_wide: int = 256
    pixels_high: int = 256
    max_iter: int = DEFAULT_MAX_ITER
    escape_radius: float | None = None

    def __post_init__(self):
        check_degree(self.d)
        if self.pixels_wide < 1 or self.pixels_high < 1:
            raise InvalidParameterError("resolution must be positive")
        if not self.width > 0:
            raise InvalidViewportError(f"viewport width must be positive, got {self.width}")
        if self.max_iter < 1:
            raise InvalidParameterError("max_iter must be at least 1")

    @property
    def radius(self) -> float:
        return default_escape_radius(self.c) if self.escape_radius is None else self.escape_radius

    @property
    def height(self) -> float:
        return self.width * self.pixels_high / self.pixels_wide

    def grid(self) -> np.ndarray:
        """Complex coordinates of the pixel centres; row 0 is the top."""
        xs = (np.arange(self.pixels_wide) + 0.5) / self.pixels_wide - 0.5
        ys = 0.5 - (np.arange(self.pixels_high) + 0.5) / self.pixels_high
        return self.center + self.width * xs[None, :] + 1j * self.height * ys[:, None]


def escape_counts(z0, c: complex, d: int, max_iter: int, radius: float) -> np.ndarray:
    """First k with |z_k| > radius under z -> z^d + c, or max_iter if none."""
    z = np.array(z0, dtype=complex)
    counts = np.full(z.shape, max_iter, dtype=np.int64)
    alive = np.ones(z.shape, dtype=bool)
    for k in range(max_iter):
        out = alive & (np.abs(z) > radius)
        counts[out] = k
        alive &= ~out
        if not alive.any():
            break
        z[alive] = z[alive] ** d + c
    return counts


def render_julia(cfg: RenderConfig) -> np.ndarray:
    return escape_counts(cfg.grid(), cfg.c, cfg.d, cfg.max_iter, cfg.radius)


def palette(grid: np.ndarray, max_iter: int) -> np.ndarray:
    """Grayscale: interior black, escaping pixels brighter the sooner they escape."""
    grid = np.asarray(grid)
    level = np.where(grid >= max_iter, 0, 255 - (255 * grid) // max_iter)
    gray = level.astype(np.uint8)
    return np.repeat(gray[:, :, None], 3, axis=2)


def ppm_bytes(grid: np.ndarray, max_iter: int) -> bytes:
    grid = np.asarray(grid)
    if grid.ndim != 2 or grid.size == 0:
        raise InvalidParameterError("grid must be a nonempty 2-D array")
    h, w = grid.shape
    return f"P6\n{w} {h}\n255\n".encode("ascii") + palette(grid, max_iter).tobytes()


def write_image(grid: np.ndarray, path, max_iter: int = DEFAULT_MAX_ITER) -> Path:
    """Write ``grid`` as binary PPM; cells equal to ``max_iter`` are interior."""
    data = ppm_bytes(grid, max_iter)
    path = Path(path)
    path.write_bytes(data)
    return path


def read_ppm(path) -> tuple[int, int, np.ndarray]:
    """Minimal P6 reader: returns (width, height, HxWx3 uint8 array)."""
    data = Path(path).read_bytes()
    fields, pos = [], 0
    while len(fields) < 4:
        while data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            pos = data.index(b"\n", pos) + 1
            continue
        end = pos
        while not data[end:end + 1].isspace():
            end += 1
        fields.append(data[pos:end])
        pos = end
    pos += 1  # single whitespace byte after maxval
    magic, w, h, maxval = fields[0], int(fields[1]), int(fields[2]), int(fields[3])
    if magic != b"P6" or maxval != 255:
        raise ValueError("not an 8-bit P6 file")
    body = data[pos:]
    if len(body) != w * h * 3:
        raise ValueError(f"expected {w * h * 3} pixel bytes, found {len(body)}")
    return w, h, np.frombuffer(body, dtype=np.uint8).reshape(h, w, 3)
