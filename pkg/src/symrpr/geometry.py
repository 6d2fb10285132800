"""Design parameters, workspace coordinate charts and conversions.

The workspace of a symmetric planar 3-RPR manipulator is parameterized by the
glide reflection (psi, r, g) carrying the base triangle onto the platform
triangle: reflection across the axis x*cos(psi) + y*sin(psi) = r followed by a
translation of 2g along that axis.  The actuated joint space uses the squared
leg lengths (rho1^2, rho2^2, rho3^2), or equivalently the chart
(nu, delta2, delta3) with nu the sum of squares and
delta_i = (rho_i^2 - rho1^2)/4.
"""

import math
from dataclasses import dataclass

from .errors import InvalidJointPoint

HALF_PI = 0.5 * math.pi
TWO_PI = 2.0 * math.pi


def wrap_half_angle(psi: float) -> float:
    """Reduce an angle modulo pi into [-pi/2, pi/2)."""
    y = math.fmod(psi + HALF_PI, math.pi)
    if y < 0.0:
        y += math.pi
    return y - HALF_PI


def angle_distance_mod_pi(a: float, b: float) -> float:
    """Distance between two axis directions (angles identified modulo pi)."""
    d = abs(wrap_half_angle(a - b))
    return min(d, math.pi - d)


@dataclass(frozen=True)
class GeometryParams:
    """Base triangle A1=(0,0), A2=(b,0), A3=(d,h) of one manipulator.

    Requires b > 0 and h > 0; a base triangle with h < 0 must be reflected by
    the caller before constructing.
    """

    b: float
    h: float
    d: float = 0.0

    def __post_init__(self):
        if not self.b > 0.0:
            raise ValueError(f"b must be positive, got {self.b}")
        if not self.h > 0.0:
            raise ValueError(f"h must be positive, got {self.h}")

    @classmethod
    def from_file(cls, path) -> "GeometryParams":
        """Parse a `key = value` geometry file with keys b, h, d and # comments."""
        values = {}
        with open(path, "r", encoding="utf-8") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, val = line.partition("=")
                key = key.strip()
                if not sep:
                    raise ValueError(f"{path}:{lineno}: expected 'key = value'")
                if key not in ("b", "h", "d"):
                    raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
                if key in values:
                    raise ValueError(f"{path}:{lineno}: duplicate key {key!r}")
                try:
                    values[key] = float(val.strip())
                except ValueError:
                    raise ValueError(
                        f"{path}:{lineno}: bad float literal {val.strip()!r}"
                    ) from None
        missing = {"b", "h"} - set(values)
        if missing:
            raise ValueError(f"{path}: missing keys {sorted(missing)}")
        return cls(b=values["b"], h=values["h"], d=values.get("d", 0.0))


@dataclass(frozen=True)
class GlidePose:
    """Workspace point as glide-reflection coordinates (psi, r, g).

    psi is kept in [-pi/2, pi/2]; the two boundary representatives are
    identified, (-pi/2, r, g) == (pi/2, -r, -g).  canonical() maps the +pi/2
    representative into the half-open chart [-pi/2, pi/2).
    """

    psi: float
    r: float
    g: float

    def __post_init__(self):
        if abs(self.psi) > HALF_PI + 1e-12:
            raise ValueError(f"psi must lie in [-pi/2, pi/2], got {self.psi}")

    def canonical(self) -> "GlidePose":
        if self.psi >= HALF_PI:
            return GlidePose(self.psi - math.pi, -self.r, -self.g)
        return self


@dataclass(frozen=True)
class RigidPose:
    """Platform pose as a rigid motion: rotation phi and translation (x, y) of B1."""

    phi: float
    x: float
    y: float

    def __post_init__(self):
        phi = math.fmod(self.phi, TWO_PI)
        if phi < 0.0:
            phi += TWO_PI
        object.__setattr__(self, "phi", phi)


@dataclass(frozen=True)
class JointSquares:
    """Actuated joint-space point (rho1^2, rho2^2, rho3^2)."""

    rho1_sq: float
    rho2_sq: float
    rho3_sq: float

    def __post_init__(self):
        for name in ("rho1_sq", "rho2_sq", "rho3_sq"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0, got {getattr(self, name)}")

    def as_tuple(self):
        return (self.rho1_sq, self.rho2_sq, self.rho3_sq)


@dataclass(frozen=True)
class NuDelta:
    """Joint-space point in the (nu, delta2, delta3) chart."""

    nu: float
    delta2: float
    delta3: float

    def __post_init__(self):
        if self.nu < 0.0:
            raise ValueError(f"nu must be >= 0, got {self.nu}")

    def as_tuple(self):
        return (self.nu, self.delta2, self.delta3)


@dataclass(frozen=True)
class PlanarPoint:
    """A point of the base plane."""

    x: float
    y: float


def leg_lengths_squared(geom: GeometryParams, pose: GlidePose) -> JointSquares:
    """Squared leg lengths of the pose.

    Each square is four times (distance of the base vertex to the axis)^2
    plus 4g^2 from the glide translation.
    """
    c = math.cos(pose.psi)
    s = math.sin(pose.psi)
    gsq = pose.g * pose.g
    u1 = pose.r
    u2 = geom.b * c - pose.r
    u3 = geom.d * c + geom.h * s - pose.r
    return JointSquares(
        4.0 * (u1 * u1 + gsq),
        4.0 * (u2 * u2 + gsq),
        4.0 * (u3 * u3 + gsq),
    )


def deltas_from_pose(geom: GeometryParams, psi: float, r: float):
    """(delta2, delta3) of a pose; depends only on psi and r, not on g."""
    c = math.cos(psi)
    s = geom.d * c + geom.h * math.sin(psi)
    bc = geom.b * c
    return bc * bc - 2.0 * bc * r, s * s - 2.0 * r * s


def glide_to_rigid(pose: GlidePose) -> RigidPose:
    """Rigid-motion coordinates (phi, x, y) of a glide pose."""
    c = math.cos(pose.psi)
    s = math.sin(pose.psi)
    return RigidPose(
        2.0 * pose.psi + math.pi,
        2.0 * (pose.r * c - pose.g * s),
        2.0 * (pose.r * s + pose.g * c),
    )


def rigid_to_glide(pose: RigidPose) -> GlidePose:
    """Inverse of glide_to_rigid, canonicalized into psi in [-pi/2, pi/2)."""
    psi = 0.5 * (pose.phi - math.pi)
    c = math.cos(psi)
    s = math.sin(psi)
    r = 0.5 * (pose.x * c + pose.y * s)
    g = 0.5 * (-pose.x * s + pose.y * c)
    return GlidePose(psi, r, g).canonical()


def platform_vertices(geom: GeometryParams, pose: GlidePose):
    """Platform vertices B1, B2, B3: base vertices reflected across the axis
    and translated by 2g along it."""
    c = math.cos(pose.psi)
    s = math.sin(pose.psi)
    tx = -2.0 * pose.g * s
    ty = 2.0 * pose.g * c

    def image(ax, ay):
        k = 2.0 * (ax * c + ay * s - pose.r)
        return PlanarPoint(ax - k * c + tx, ay - k * s + ty)

    return (image(0.0, 0.0), image(geom.b, 0.0), image(geom.d, geom.h))


def joint_to_nudelta(j: JointSquares) -> NuDelta:
    """Linear chart change to (nu, delta2, delta3)."""
    return NuDelta(
        j.rho1_sq + j.rho2_sq + j.rho3_sq,
        0.25 * (j.rho2_sq - j.rho1_sq),
        0.25 * (j.rho3_sq - j.rho1_sq),
    )


def nudelta_to_joint(n: NuDelta, tol: float = 1e-9) -> JointSquares:
    """Inverse chart change; raises InvalidJointPoint when a recovered square
    is negative beyond tol*(1+nu)."""
    rho1_sq = (n.nu - 4.0 * n.delta2 - 4.0 * n.delta3) / 3.0
    rho2_sq = rho1_sq + 4.0 * n.delta2
    rho3_sq = rho1_sq + 4.0 * n.delta3
    band = tol * (1.0 + abs(n.nu))
    squares = []
    for v in (rho1_sq, rho2_sq, rho3_sq):
        if v < -band:
            raise InvalidJointPoint(
                f"chart point ({n.nu}, {n.delta2}, {n.delta3}) has negative square {v}"
            )
        squares.append(max(v, 0.0))
    return JointSquares(*squares)


def pose_distance(p: GlidePose, q: GlidePose) -> float:
    """Euclidean distance in (psi, r, g), minimized over the boundary
    identification (psi, r, g) == (psi +- pi, -r, -g)."""
    best = math.sqrt((p.psi - q.psi) ** 2 + (p.r - q.r) ** 2 + (p.g - q.g) ** 2)
    for shift in (math.pi, -math.pi):
        d = math.sqrt(
            (p.psi - q.psi - shift) ** 2 + (p.r + q.r) ** 2 + (p.g + q.g) ** 2
        )
        if d < best:
            best = d
    return best
