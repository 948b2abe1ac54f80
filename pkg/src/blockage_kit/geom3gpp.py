"""Two-screen human body and the 3GPP blockage models A and B.

Coordinate frame: x along the link (Tx at -d/2, Rx at +d/2), y across the
link, z up from the floor.  Both antennas sit at height ``hc``.  The body is
replaced by two w x h metallic screens perpendicular to the link at
``offset -/+ r/2``.

Model B works on path lengths: the top/bottom edges are handled in the
vertical x-z plane, the side edges in the horizontal x-y plane.  Model A uses
only the angles from the Rx to the screen edges plus the Rx-screen range.
Each screen's loss is ``-20 log10(1 - (F_top + F_bottom)(F_left + F_right))``
and the two screen losses are added in dB.

Edge sign convention: an edge counts as shadowing when the LoS crosses the
screen plane on the screen side of that edge (its projection).  This is what
makes a screen well below the LoS give almost no loss and a screen whose top
edge grazes the LoS give about 6 dB.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Literal

from .bgmodels import CiParams, eval_ci
from .core import ValidationError, check_frequency, wavelength_m

FLOOR_DB = 240.0
SINGULAR_TOL = 1e-12
GPP_VALID_MAX_GHZ = 100.0

EDGES = ("top", "bottom", "left", "right")


class BlockerTouchesAntenna(ValidationError):
    pass


class NegativeExcessWhileShadowed(ValidationError):
    pass


class FullBlockSingular(UserWarning):
    """The F-product reached 1; loss clamped to the floor."""


class GppExtrapolationWarning(UserWarning):
    """3GPP blockage models evaluated above their 100 GHz validity range."""


@dataclass(frozen=True)
class BodyDims:
    h: float = 1.7  # height
    r: float = 0.4  # extent along the LoS (hip width)
    w: float = 0.3  # screen width across the LoS (body depth)

    def __post_init__(self):
        for name in ("h", "r", "w"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValidationError(f"body {name} must be > 0, got {v!r}")


@dataclass(frozen=True)
class LinkLayout:
    d: float
    hc: float = 1.0
    offset: float = 0.0  # blocker position along the link, from the midpoint

    def __post_init__(self):
        if not (math.isfinite(self.d) and self.d > 0):
            raise ValidationError(f"link distance must be > 0, got {self.d!r}")
        if not (math.isfinite(self.hc) and self.hc > 0):
            raise ValidationError(f"antenna height must be > 0, got {self.hc!r}")
        if not math.isfinite(self.offset):
            raise ValidationError("blocker offset must be finite")

    @property
    def tx(self) -> tuple[float, float, float]:
        return (-self.d / 2.0, 0.0, self.hc)

    @property
    def rx(self) -> tuple[float, float, float]:
        return (self.d / 2.0, 0.0, self.hc)

    def swapped(self) -> "LinkLayout":
        """Same scene seen with Tx and Rx exchanged."""
        return LinkLayout(self.d, self.hc, -self.offset)


@dataclass(frozen=True)
class Screen:
    x: float  # plane position along the link
    width: float  # extent in y, centred on the LoS axis
    height: float  # extent in z, base on the floor

    @property
    def y_range(self) -> tuple[float, float]:
        return (-self.width / 2.0, self.width / 2.0)

    @property
    def z_range(self) -> tuple[float, float]:
        return (0.0, self.height)

    def edge_coord(self, edge: str) -> float:
        return {
            "top": self.height,
            "bottom": 0.0,
            "left": -self.width / 2.0,
            "right": self.width / 2.0,
        }[edge]


def build_screens(body: BodyDims, link: LinkLayout) -> tuple[Screen, Screen]:
    """Tx-side screen first, Rx-side second."""
    half = link.d / 2.0
    if abs(link.offset) + body.r / 2.0 >= half:
        raise BlockerTouchesAntenna(
            f"screen at {abs(link.offset) + body.r / 2:g} m from the midpoint reaches an antenna at {half:g} m"
        )
    return (
        Screen(link.offset - body.r / 2.0, body.w, body.h),
        Screen(link.offset + body.r / 2.0, body.w, body.h),
    )


def _los_at(screen: Screen, link: LinkLayout) -> tuple[float, float]:
    # LoS is the horizontal segment y=0, z=hc
    return 0.0, link.hc


def edge_shadowed(screen: Screen, link: LinkLayout, edge: str) -> bool:
    y, z = _los_at(screen, link)
    c = screen.edge_coord(edge)
    return {
        "top": z < c,
        "bottom": z > c,
        "left": y > c,
        "right": y < c,
    }[edge]


def blocks_los(screen: Screen, link: LinkLayout) -> bool:
    """True when the LoS segment passes through the screen rectangle."""
    return all(edge_shadowed(screen, link, e) for e in EDGES)


@dataclass(frozen=True)
class EdgePath:
    D1: float  # Tx to edge, projected
    D2: float  # edge to Rx, projected
    r_proj: float  # direct Tx-Rx, projected
    shadowed: bool

    @property
    def excess(self) -> float:
        return self.D1 + self.D2 - self.r_proj


def edge_paths(screens, link: LinkLayout) -> list[dict[str, EdgePath]]:
    """Projected diffraction-path lengths for every edge of every screen."""
    tx_x, _, hc = link.tx
    rx_x = link.rx[0]
    out = []
    for s in screens:
        per = {}
        for edge in EDGES:
            c = s.edge_coord(edge)
            # top/bottom: x-z plane around height hc; sides: x-y plane around y=0
            offset = c - hc if edge in ("top", "bottom") else c
            D1 = math.hypot(s.x - tx_x, offset)
            D2 = math.hypot(rx_x - s.x, offset)
            per[edge] = EdgePath(D1, D2, rx_x - tx_x, edge_shadowed(s, link, edge))
        out.append(per)
    return out


def ked_f(path_excess_m: float, wavelength: float, shadowed: bool) -> float:
    """Knife-edge F-term: atan(+-(pi/2) sqrt((pi/lambda) * excess)) / pi."""
    if not wavelength > 0:
        raise ValidationError(f"wavelength must be > 0, got {wavelength!r}")
    if path_excess_m < 0:
        # planar triangle inequality allows tiny negative round-off
        if path_excess_m < -1e-12:
            if shadowed:
                raise NegativeExcessWhileShadowed(f"excess path {path_excess_m!r} m < 0")
            raise ValidationError(f"excess path {path_excess_m!r} m < 0")
        path_excess_m = 0.0
    sign = 1.0 if shadowed else -1.0
    return math.atan(sign * (math.pi / 2.0) * math.sqrt(math.pi / wavelength * path_excess_m)) / math.pi


def screen_loss_db(f_top: float, f_bottom: float, f_left: float, f_right: float) -> float:
    """Attenuation of a single screen in dB (positive means loss)."""
    prod = (f_top + f_bottom) * (f_left + f_right)
    if prod >= 1.0 - SINGULAR_TOL:
        warnings.warn("F-product reached 1; clamping screen loss", FullBlockSingular, stacklevel=3)
        return FLOOR_DB
    return min(-20.0 * math.log10(1.0 - prod), FLOOR_DB)


def _validity(f: float) -> None:
    if f > GPP_VALID_MAX_GHZ:
        warnings.warn(
            f"3GPP blockage models are specified up to {GPP_VALID_MAX_GHZ:g} GHz; "
            f"{f:g} GHz is an analytic extension",
            GppExtrapolationWarning,
            stacklevel=3,
        )


def gpp_b_gain(body: BodyDims, link: LinkLayout, f_ghz: float, warn: bool = True) -> float:
    """Deterministic (model B) blockage gain in dB, <= 0 for a shadowing body."""
    f = check_frequency(f_ghz)
    if warn:
        _validity(f)
    lam = wavelength_m(f)
    total = 0.0
    for per in edge_paths(build_screens(body, link), link):
        F = {e: ked_f(p.excess, lam, p.shadowed) for e, p in per.items()}
        total += screen_loss_db(F["top"], F["bottom"], F["left"], F["right"])
    return -total


@dataclass(frozen=True)
class AngularRegion:
    """Blocking region seen from the Rx, angles in radians relative to the LoS."""

    az_center: float
    az_span: float
    el_center: float
    el_span: float
    range_m: float  # Rx to screen plane

    def offsets(self) -> dict[str, float]:
        # LoS arrives at azimuth 0 / elevation 0
        return {
            "left": 0.0 - (self.az_center - self.az_span / 2.0),
            "right": 0.0 - (self.az_center + self.az_span / 2.0),
            "top": 0.0 - (self.el_center + self.el_span / 2.0),
            "bottom": 0.0 - (self.el_center - self.el_span / 2.0),
        }


def angular_region(screen: Screen, link: LinkLayout) -> AngularRegion:
    rng = link.rx[0] - screen.x
    hc = link.hc
    az_hi = math.atan2(screen.width / 2.0, rng)
    az_lo = math.atan2(-screen.width / 2.0, rng)
    el_hi = math.atan2(screen.height - hc, rng)
    el_lo = math.atan2(0.0 - hc, rng)
    return AngularRegion(
        (az_hi + az_lo) / 2.0, az_hi - az_lo, (el_hi + el_lo) / 2.0, el_hi - el_lo, rng
    )


def ked_f_angle(angle: float, range_m: float, wavelength: float, shadowed: bool) -> float:
    """Angle form of the F-term: excess = r (1/cos(angle) - 1)."""
    c = math.cos(angle)
    if c <= 0:
        raise ValidationError("edge angle must lie within +-90 degrees of the LoS")
    return ked_f(range_m * (1.0 / c - 1.0), wavelength, shadowed)


def gpp_a_gain(body: BodyDims, link: LinkLayout, f_ghz: float, warn: bool = True) -> float:
    """Angle-based (model A) blockage gain in dB using the Rx-side view of each screen."""
    f = check_frequency(f_ghz)
    if warn:
        _validity(f)
    lam = wavelength_m(f)
    total = 0.0
    for s in build_screens(body, link):
        region = angular_region(s, link)
        F = {}
        for edge, ang in region.offsets().items():
            F[edge] = ked_f_angle(ang, region.range_m, lam, edge_shadowed(s, link, edge))
        total += screen_loss_db(F["top"], F["bottom"], F["left"], F["right"])
    return -total


def gpp_gain(model: Literal["a", "b"], body: BodyDims, link: LinkLayout, f_ghz: float, warn: bool = True) -> float:
    if model == "a":
        return gpp_a_gain(body, link, f_ghz, warn)
    if model == "b":
        return gpp_b_gain(body, link, f_ghz, warn)
    raise ValidationError(f"unknown 3GPP model {model!r} (expected a or b)")


def gpp_discrepancy(
    body: BodyDims,
    link: LinkLayout,
    f_ghz: float,
    ci: CiParams,
    model: Literal["a", "b"] = "b",
    warn: bool = True,
) -> float:
    """3GPP gain minus the CI prediction; positive when 3GPP predicts less attenuation."""
    return gpp_gain(model, body, link, f_ghz, warn) - eval_ci(ci, link.d, f_ghz)
