"""Lenslet-sensor geometry: pixel grid and hexagonal micro-lens lattice."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateMla

__all__ = [
    "SensorSpec",
    "LensletArraySpec",
    "LYTRO_SENSOR",
    "LYTRO_MLA",
    "lattice_basis",
    "lenslet_centers",
    "nearest_lenslet",
]


@dataclass(frozen=True)
class SensorSpec:
    """Monochrome square-pixel sensor behind the lenslet array."""

    width_px: int = 3280
    height_px: int = 3280
    pixel_pitch_um: float = 1.4
    bit_depth: int = 12

    def __post_init__(self):
        if min(self.width_px, self.height_px, self.bit_depth) <= 0:
            raise ValueError("sensor dimensions and bit depth must be positive")
        if self.pixel_pitch_um <= 0:
            raise ValueError("pixel pitch must be positive")

    @property
    def width_mm(self) -> float:
        return self.width_px * self.pixel_pitch_um * 1e-3

    @property
    def height_mm(self) -> float:
        return self.height_px * self.pixel_pitch_um * 1e-3

    def scaled(self, width_px: int, height_px: int) -> "SensorSpec":
        """Same pixels, smaller active area (for reduced-size test frames)."""
        return SensorSpec(width_px, height_px, self.pixel_pitch_um, self.bit_depth)


@dataclass(frozen=True)
class LensletArraySpec:
    """Hexagonally packed micro-lens array on top of the sensor.

    The lenslet focal length is ``pitch * f_number``; the sensor sits at
    that focal distance (plenoptic-1.0 spacing).  ``offset_px`` displaces
    the lattice origin from the sensor center.
    """

    pitch_um: float = 14.0
    f_number: float = 2.0
    lattice: str = "hex"
    rotation_rad: float = 0.0
    offset_px: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.pitch_um <= 0:
            raise ValueError("pitch must be positive")
        if self.lattice != "hex":
            raise ValueError("only hexagonal lattices are supported")

    @property
    def focal_length_um(self) -> float:
        return self.pitch_um * self.f_number

    def pitch_px(self, sensor: SensorSpec) -> float:
        p = self.pitch_um / sensor.pixel_pitch_um
        if p <= 1.0:
            raise DegenerateMla(f"lenslet pitch {p:.2f} px is not above one pixel")
        return p


LYTRO_SENSOR = SensorSpec()
LYTRO_MLA = LensletArraySpec()


def lattice_basis(mla: LensletArraySpec, sensor: SensorSpec):
    """Oblique basis (u, v) of the hex lattice in pixel units.

    ``center = a * u + b * v + origin`` over integer (a, b); the 60-degree
    basis encodes the half-pitch stagger of alternate rows.
    """
    p = mla.pitch_px(sensor)
    c, s = math.cos(mla.rotation_rad), math.sin(mla.rotation_rad)
    u = np.array([p * c, p * s])
    cv, sv = math.cos(mla.rotation_rad + math.pi / 3), math.sin(mla.rotation_rad + math.pi / 3)
    v = np.array([p * cv, p * sv])
    origin = np.array([sensor.width_px / 2 + mla.offset_px[0],
                       sensor.height_px / 2 + mla.offset_px[1]])
    return u, v, origin


def lenslet_centers(mla: LensletArraySpec, sensor: SensorSpec):
    """All lenslet centers whose disc lies fully on the sensor.

    Returns ``(centers, indices)``: centers in pixel coordinates, shape
    (N, 2); indices are the integer (a, b) lattice coordinates.
    """
    u, v, origin = lattice_basis(mla, sensor)
    p = mla.pitch_px(sensor)
    r = p / 2
    # generous index bounds, filtered afterwards
    n_a = int(sensor.width_px / p) + 3
    n_b = int(sensor.height_px / (p * math.sin(math.pi / 3))) + 3
    a = np.arange(-n_a, n_a + 1)
    b = np.arange(-n_b, n_b + 1)
    aa, bb = np.meshgrid(a, b, indexing="ij")
    pts = (aa[..., None] * u + bb[..., None] * v) + origin
    ok = ((pts[..., 0] >= r) & (pts[..., 0] <= sensor.width_px - r)
          & (pts[..., 1] >= r) & (pts[..., 1] <= sensor.height_px - r))
    centers = pts[ok]
    indices = np.stack([aa[ok], bb[ok]], axis=1)
    return centers, indices


def nearest_lenslet(mla: LensletArraySpec, sensor: SensorSpec, x, y):
    """Lattice indices and center of the lenslet nearest each (x, y) pixel point.

    The nearest hex center is always a corner of the basis cell containing
    the point (the cell splits into equilateral triangles), so four
    candidates suffice.
    """
    u, v, origin = lattice_basis(mla, sensor)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = np.stack([x - origin[0], y - origin[1]], axis=-1)
    basis = np.stack([u, v], axis=1)  # columns u, v
    frac = d @ np.linalg.inv(basis).T
    fa, fb = np.floor(frac[..., 0]), np.floor(frac[..., 1])
    best_d2 = np.full(x.shape, np.inf)
    best_a = np.zeros(x.shape, dtype=np.int64)
    best_b = np.zeros(x.shape, dtype=np.int64)
    for da in (0.0, 1.0):
        for db in (0.0, 1.0):
            ca, cb = fa + da, fb + db
            cx = ca * u[0] + cb * v[0] + origin[0]
            cy = ca * u[1] + cb * v[1] + origin[1]
            d2 = (x - cx) ** 2 + (y - cy) ** 2
            take = d2 < best_d2
            best_d2 = np.where(take, d2, best_d2)
            best_a = np.where(take, ca.astype(np.int64), best_a)
            best_b = np.where(take, cb.astype(np.int64), best_b)
    cx = best_a * u[0] + best_b * v[0] + origin[0]
    cy = best_a * u[1] + best_b * v[1] + origin[1]
    return best_a, best_b, cx, cy
