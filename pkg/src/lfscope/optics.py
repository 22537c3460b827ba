"""First-order (paraxial) modeling of thin-lens trains.

Conventions, used everywhere in the package:

* The optical axis is ``z``, increasing from the object toward the sensor.
  Element positions are absolute coordinates on that axis.
* ``conjugate`` uses the real-is-positive convention: a positive object
  distance means a real object to the left of the lens.  The returned image
  distance is positive for a real image to the right, negative for a virtual
  image; the signed magnification is ``M = -image/object``.
* Rays carry paraxial slopes.  A slope is identified with the sine of the
  marginal-ray angle when numerical apertures are formed (first-order optics
  linearizes all trigonometry), which makes the Lagrange invariant and the
  working f-number identities hold to machine precision for traced cones.

All quantities are millimetres unless a name says otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import AfocalConfiguration, NoImageFormed, ZeroMagnification

__all__ = [
    "Regime",
    "OpticalElement",
    "OpticalTrain",
    "ConjugatePair",
    "TrainSummary",
    "conjugate",
    "solve_lens_placement",
    "f_number",
    "microscope_f_number",
    "working_f_number",
    "chain_magnification",
    "optical_invariant",
    "classify_regime",
    "conjugate_pair",
    "summarize",
    "system_efl",
    "image_plane",
    "axial_marginal",
    "entrance_pupil",
    "trace_to_elements",
    "chief_arrival_slope",
]


class Regime(Enum):
    """Pickup regime of a camera: real object in front vs. virtual behind."""

    REGULAR = "regular"
    INVERSE = "inverse"


@dataclass(frozen=True)
class OpticalElement:
    """A thin lens with a circular aperture at an axial position.

    Positive focal lengths converge, negative diverge.  The principal
    planes collapse onto the element plane (thin-lens idealization).
    ``group`` tags elements that belong to a named subsystem, e.g. the
    camera whose factory calibration defines the decode reference.
    """

    focal_length_mm: float
    aperture_diameter_mm: float
    axial_position_mm: float
    group: str = ""

    def __post_init__(self):
        if self.focal_length_mm == 0:
            raise ValueError("focal_length_mm must be nonzero")
        if self.aperture_diameter_mm <= 0:
            raise ValueError("aperture_diameter_mm must be positive")


@dataclass(frozen=True)
class OpticalTrain:
    """An ordered sequence of thin lenses plus the object plane.

    The object plane may lie past the first element; a pickup plane behind
    the first surface encodes a virtual object (inverse-regime operation).
    """

    elements: tuple[OpticalElement, ...]
    object_plane_mm: float = 0.0
    medium_index_object: float = 1.0
    medium_index_image: float = 1.0

    def __post_init__(self):
        if not self.elements:
            raise ValueError("train needs at least one element")
        object.__setattr__(self, "elements", tuple(self.elements))
        positions = [e.axial_position_mm for e in self.elements]
        if any(b <= a for a, b in zip(positions, positions[1:])):
            raise ValueError("elements must be strictly ordered along the axis")
        if self.medium_index_object < 1 or self.medium_index_image < 1:
            raise ValueError("medium indices must be >= 1")

    def positions(self) -> np.ndarray:
        return np.array([e.axial_position_mm for e in self.elements])

    def semi_apertures(self) -> np.ndarray:
        return np.array([e.aperture_diameter_mm / 2 for e in self.elements])

    def subgroup(self, group: str) -> "OpticalTrain | None":
        """Train made of the elements tagged ``group``, None when absent.

        The subgroup keeps this train's media; its object plane is set to
        the plane the subgroup itself is conjugate to (its pickup plane).
        """
        members = tuple(e for e in self.elements if e.group == group)
        if not members:
            return None
        sub = OpticalTrain(members, object_plane_mm=members[0].axial_position_mm - 1.0,
                           medium_index_object=self.medium_index_object,
                           medium_index_image=self.medium_index_image)
        return sub

    def with_object_plane(self, z: float) -> "OpticalTrain":
        return replace(self, object_plane_mm=z)


@dataclass(frozen=True)
class ConjugatePair:
    """Object/image heights and cone half-angles for one traced conjugate."""

    object_height_mm: float
    image_height_mm: float
    object_half_angle_rad: float
    image_half_angle_rad: float
    magnification: float
    image_plane_mm: float


@dataclass(frozen=True)
class TrainSummary:
    """End-to-end first-order description of a focused train."""

    total_magnification: float
    f_number: float
    working_f_number: float
    object_side_na: float
    image_side_na: float
    regime: Regime
    image_plane_mm: float = field(default=math.nan)
    stop_index: int = field(default=0)
    entrance_pupil_mm: float = field(default=math.nan)


# ---------------------------------------------------------------------------
# scalar thin-lens relations


def conjugate(focal_length_mm: float, object_distance_mm: float) -> tuple[float, float]:
    """Image distance and signed magnification for a thin lens.

    An object distance of zero is the degenerate contact conjugate: the
    image coincides with the lens plane at unit magnification.

    Raises:
        AfocalConfiguration: object at the front focal plane.
    """
    f, d = float(focal_length_mm), float(object_distance_mm)
    if f == 0:
        raise ValueError("focal length must be nonzero")
    if d == 0.0:
        return 0.0, 1.0
    if d == f:
        raise AfocalConfiguration(f"object at front focal plane (f={f} mm)")
    v = 1.0 / (1.0 / f - 1.0 / d)
    return v, -v / d


def solve_lens_placement(focal_length_mm: float, target_magnification: float) -> float:
    """Object distance at which a thin lens yields the signed magnification.

    Inverse of :func:`conjugate`: ``x = f (M - 1) / M``.

    Raises:
        ZeroMagnification: the target magnification is zero.
    """
    if target_magnification == 0:
        raise ZeroMagnification("no finite placement gives zero magnification")
    return focal_length_mm * (target_magnification - 1.0) / target_magnification


def f_number(focal_length_mm: float, entrance_pupil_mm: float) -> float:
    """Ratio of focal length to entrance-pupil diameter."""
    if entrance_pupil_mm <= 0:
        raise ValueError("entrance pupil must be positive")
    return focal_length_mm / entrance_pupil_mm


def microscope_f_number(magnification: float, na_object: float) -> float:
    """Finite-conjugate f-number of a microscope, ``M / (2 NA_o)``."""
    if na_object <= 0:
        raise ValueError("object-side NA must be positive")
    return magnification / (2.0 * na_object)


def working_f_number(f_number: float, magnification: float) -> float:
    """Working f-number ``(1 - M) N`` with signed magnification."""
    if f_number <= 0:
        raise ValueError("f-number must be positive")
    return (1.0 - magnification) * f_number


def chain_magnification(stages) -> float:
    """Product of signed per-stage magnifications."""
    stages = list(stages)
    if not stages:
        raise ValueError("need at least one stage")
    return float(np.prod(np.asarray(stages, dtype=float)))


def optical_invariant(pair: ConjugatePair, n: float, n_prime: float) -> float:
    """Residual of the Lagrange invariant ``y n sin(a) - y' n' sin(a')``."""
    return (pair.object_height_mm * n * math.sin(pair.object_half_angle_rad)
            - pair.image_height_mm * n_prime * math.sin(pair.image_half_angle_rad))


def classify_regime(train: OpticalTrain, pickup_plane_mm: float) -> Regime:
    """Inverse when the pickup plane lies behind the first surface.

    A plane exactly on the first surface counts as regular.
    """
    first = train.elements[0].axial_position_mm
    return Regime.INVERSE if pickup_plane_mm > first else Regime.REGULAR


# ---------------------------------------------------------------------------
# matrix engine


def _element_matrices(train: OpticalTrain):
    """Cumulative ray matrices from the object plane.

    Returns ``(at_element, system)`` where ``at_element[k]`` maps the
    object-plane state to the height/slope arriving at element ``k``
    (before refraction) and ``system`` maps it to just after the last
    refraction.
    """
    m = np.eye(2)
    z = train.object_plane_mm
    at_element = []
    for el in train.elements:
        d = el.axial_position_mm - z
        m = np.array([[1.0, d], [0.0, 1.0]]) @ m
        at_element.append(m.copy())
        m = np.array([[1.0, 0.0], [-1.0 / el.focal_length_mm, 1.0]]) @ m
        z = el.axial_position_mm
    return at_element, m


def trace_to_elements(train: OpticalTrain, y0, u0):
    """Heights at every element plus the exit state, vectorized.

    ``y0``/``u0`` broadcast; no apertures are applied here (clipping is a
    caller concern).  Returns ``(heights, y_out, u_out)`` with ``heights``
    stacked along the first axis.
    """
    y0 = np.asarray(y0, dtype=float)
    u0 = np.asarray(u0, dtype=float)
    at_element, system = _element_matrices(train)
    heights = np.stack([m[0, 0] * y0 + m[0, 1] * u0 for m in at_element])
    y_out = system[0, 0] * y0 + system[0, 1] * u0
    u_out = system[1, 0] * y0 + system[1, 1] * u0
    return heights, y_out, u_out


def axial_marginal(train: OpticalTrain):
    """Largest slope from the axial object point clearing every aperture.

    Returns ``(u_max, stop_index)``.  Uses paraxial linearity: heights of
    the unit-slope axial ray scale with the launch slope.
    """
    at_element, _ = _element_matrices(train)
    semis = train.semi_apertures()
    u_limit = math.inf
    stop = 0
    for k, m in enumerate(at_element):
        b = m[0, 1]  # height of the (0, 1) axial ray at element k
        if abs(b) < 1e-12:
            continue  # element conjugate to the object point, cannot clip it
        cap = semis[k] / abs(b)
        if cap < u_limit:
            u_limit = cap
            stop = k
    if not math.isfinite(u_limit):
        raise NoImageFormed("no aperture bounds the axial beam")
    return u_limit, stop


def image_plane(train: OpticalTrain) -> tuple[float, float]:
    """Conjugate plane of the object plane and its signed magnification.

    Raises:
        AfocalConfiguration: the exit beam from an object point is collimated.
    """
    _, system = _element_matrices(train)
    b, d = system[0, 1], system[1, 1]
    if abs(d) < 1e-12:
        raise AfocalConfiguration("train is afocal for this object plane")
    t = -b / d
    m = system[0, 0] + t * system[1, 0]
    z_img = train.elements[-1].axial_position_mm + t
    return z_img, m


def system_efl(train: OpticalTrain) -> float:
    """Effective focal length of the element stack (object plane ignored)."""
    m = np.eye(2)
    z = train.elements[0].axial_position_mm
    for el in train.elements:
        d = el.axial_position_mm - z
        m = np.array([[1.0, 0.0], [-1.0 / el.focal_length_mm, 1.0]]) @ np.array(
            [[1.0, d], [0.0, 1.0]]) @ m
        z = el.axial_position_mm
    c = m[1, 0]
    if abs(c) < 1e-15:
        return math.inf
    return -1.0 / c


def entrance_pupil(train: OpticalTrain) -> tuple[float, float]:
    """Axial position and diameter of the entrance pupil.

    The pupil is the object-space image of the aperture stop; its edge is
    where the extended object-space marginal ray crosses the pupil plane.
    """
    u_max, stop = axial_marginal(train)
    at_element, _ = _element_matrices(train)
    a, b = at_element[stop][0, 0], at_element[stop][0, 1]
    if abs(a) < 1e-12:
        raise NoImageFormed("stop is conjugate to the object plane")
    z_ep = train.object_plane_mm + b / a
    return z_ep, 2.0 * abs(u_max * b / a)


def conjugate_pair(train: OpticalTrain, object_height_mm: float = 1.0) -> ConjugatePair:
    """Trace the axial marginal cone and report the conjugate quantities.

    Half-angles are stored so that their sines equal the traced paraxial
    slopes, keeping the Lagrange invariant exact for the stored cone.
    """
    u_max, _ = axial_marginal(train)
    _, _, u_out = trace_to_elements(train, 0.0, u_max)
    u_out = float(u_out)
    if abs(u_out) < 1e-15:
        raise AfocalConfiguration("marginal ray exits collimated")
    z_img, m = image_plane(train)
    n, n_p = train.medium_index_object, train.medium_index_image
    # Lagrange-consistent magnification of the traced cone
    m_cone = (n * u_max) / (n_p * u_out)
    return ConjugatePair(
        object_height_mm=object_height_mm,
        image_height_mm=m_cone * object_height_mm,
        object_half_angle_rad=_slope_angle(u_max),
        image_half_angle_rad=_slope_angle(u_out),
        magnification=m_cone,
        image_plane_mm=z_img,
    )


def _slope_angle(u: float) -> float:
    # paraxial slope == sine of the stored cone; arcsin keeps that exact
    if abs(u) < 1.0:
        return math.asin(u)
    return math.atan(u)


def summarize(train: OpticalTrain) -> TrainSummary:
    """First-order summary of a train focused on its object plane."""
    u_max, stop = axial_marginal(train)
    _, _, u_out = trace_to_elements(train, 0.0, u_max)
    u_out = float(u_out)
    if abs(u_out) < 1e-15:
        raise AfocalConfiguration("marginal ray exits collimated")
    z_img, m = image_plane(train)
    n, n_p = train.medium_index_object, train.medium_index_image
    na_o = n * u_max
    na_i = n_p * abs(u_out)
    magnification = (n * u_max) / (n_p * u_out)
    efl = system_efl(train)
    try:
        _, epd = entrance_pupil(train)
        n_sys = abs(efl) / epd if math.isfinite(efl) else math.inf
    except NoImageFormed:
        epd = math.nan
        n_sys = math.nan
    return TrainSummary(
        total_magnification=magnification,
        f_number=n_sys,
        working_f_number=1.0 / (2.0 * na_i),
        object_side_na=na_o,
        image_side_na=na_i,
        regime=classify_regime(train, train.object_plane_mm),
        image_plane_mm=z_img,
        stop_index=stop,
        entrance_pupil_mm=epd,
    )


def chief_arrival_slope(train: OpticalTrain, image_plane_mm: float | None = None) -> float:
    """Arrival slope at the image plane, per unit image height, of the
    chief ray through the stop center.

    This is the reference direction a lenslet sensor calibrated behind this
    train associates with its central sub-aperture sample.
    """
    _, stop = axial_marginal(train)
    at_element, system = _element_matrices(train)
    a_s, b_s = at_element[stop][0, 0], at_element[stop][0, 1]
    if image_plane_mm is None:
        image_plane_mm, _ = image_plane(train)
    if abs(b_s) < 1e-12:
        # stop on the object plane: every ray from a point is "chief"
        u0, y0 = 1.0, 0.0
    elif abs(a_s) < 1e-12:
        # stop conjugate to the object plane: chief leaves the axis point
        y0, u0 = 0.0, 1.0
        raise NoImageFormed("stop conjugate to object plane; chief field undefined")
    else:
        y0, u0 = 1.0, -a_s / b_s
    y_exit = system[0, 0] * y0 + system[0, 1] * u0
    u_exit = system[1, 0] * y0 + system[1, 1] * u0
    t = image_plane_mm - train.elements[-1].axial_position_mm
    q = y_exit + t * u_exit  # image height reached by this chief ray
    if abs(q) < 1e-12:
        raise NoImageFormed("chief ray lands on the axis; field collapsed")
    return u_exit / q
