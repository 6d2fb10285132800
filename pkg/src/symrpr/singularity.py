"""Singular loci of the leg-length map.

Two surfaces make up the singular set of the joint space: S1, a cylinder with
generatrix (1,1,1) over the discriminant curve of the branch cubic (a rational
quartic shaped like a deltoid, with three cusps), and S2, the image of the
fold g = 0.  Their workspace counterparts are the jacobian curve
r = gamma_r(psi) (times the g axis) and the plane g = 0.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .dkp import characteristic_cubic, discriminant_raw, r_from_psi, solve_cubic_real
from .errors import AtCusp, OnBifurcationBoundary
from .geometry import (
    HALF_PI,
    GeometryParams,
    JointSquares,
    GlidePose,
    angle_distance_mod_pi,
    leg_lengths_squared,
    wrap_half_angle,
)


@dataclass(frozen=True)
class CuspPoint:
    """One cusp half-line of S1, determined by its angle and axis offset."""

    psi_cusp: float
    r_cusp: float
    beta: float
    t_cusp: float
    k: int


@dataclass(frozen=True)
class CurveSample:
    """One sampled point of a named locus, kept next to its parameter."""

    locus: str
    parameter: float
    point: tuple


@dataclass(frozen=True)
class Bifurcations:
    """Sorted rho1^2 levels at which the cusp count of a slice changes."""

    beta1: float
    beta2: float
    beta3: float

    def __post_init__(self):
        if not (0.0 <= self.beta1 <= self.beta2 <= self.beta3):
            raise ValueError("bifurcation values must be sorted and nonnegative")

    def as_tuple(self):
        return (self.beta1, self.beta2, self.beta3)


class DeltoidVerdict(enum.Enum):
    INSIDE = "inside"
    OUTSIDE = "outside"
    ON_CURVE = "on-curve"


def gamma_r(geom: GeometryParams, psi: float) -> float:
    """Axis offset r of the jacobian curve at angle psi."""
    b, h, d = geom.b, geom.h, geom.d
    c = math.cos(psi)
    s = math.sin(psi)
    return (c / h) * (
        (h * h + b * d - d * d) * c * s + (2.0 * d - b) * h * c * c + (b - d) * h
    )


def curve_c(geom: GeometryParams, t: float):
    """Point (delta2, delta3) of the discriminant curve at parameter t = tan(psi).

    Accepts t = +-infinity and returns the limit point (0, h^2).
    """
    b, h, d = geom.b, geom.h, geom.d
    if math.isinf(t):
        return (0.0, h * h)
    w = 1.0 + t * t
    w2h = w * w * h
    delta2 = (
        b * ((2.0 * d - b) * h * t * t + 2.0 * (d * d - b * d - h * h) * t + (b - 2.0 * d) * h)
        / w2h
    )
    hd = h * t + d
    delta3 = hd * hd * (h * t * t + 2.0 * (d - b) * t - h) / w2h
    return (delta2, delta3)


def cusp_points(geom: GeometryParams):
    """The three cusps of the discriminant curve, sorted by angle.

    The cusp angles form the lattice atan2(d^2 - b*d - h^2, (b - 2d)*h)/3 + k*pi/3
    reduced modulo pi into [-pi/2, pi/2); atan2 keeps the b = 2d case regular.
    """
    b, h, d = geom.b, geom.h, geom.d
    base = math.atan2(d * d - b * d - h * h, (b - 2.0 * d) * h) / 3.0
    pts = []
    for k in range(3):
        psi = wrap_half_angle(base + k * math.pi / 3.0)
        r = gamma_r(geom, psi)
        t = math.inf if abs(psi + HALF_PI) < 1e-15 else math.tan(psi)
        pts.append(CuspPoint(psi_cusp=psi, r_cusp=r, beta=4.0 * r * r, t_cusp=t, k=k))
    pts.sort(key=lambda p: p.psi_cusp)
    return tuple(pts)


def cusp_cubic_discriminant(geom: GeometryParams) -> float:
    """Discriminant of the cusp-parameter cubic, via the generic formula.

    Always strictly positive: it factors as 108 (d^2+h^2)^2 ((d-b)^2+h^2)^2,
    which is why the curve always carries exactly three real cusps.
    """
    b, h, d = geom.b, geom.h, geom.d
    a3 = (b - 2.0 * d) * h
    a2 = 3.0 * (h * h - d * d + d * b)
    a1 = 3.0 * h * (2.0 * d - b)
    a0 = d * d - d * b - h * h
    return discriminant_raw(a3, a2, a1, a0)


def bifurcation_values(geom: GeometryParams) -> Bifurcations:
    """Sorted rho1^2 levels of the three cusp half-line origins."""
    betas = sorted(p.beta for p in cusp_points(geom))
    return Bifurcations(*betas)


def count_cusps(geom: GeometryParams, rho1_sq: float, tol: float = 1e-9) -> int:
    """Number of cusp points in the slice at the given rho1^2 level."""
    betas = bifurcation_values(geom).as_tuple()
    for beta in betas:
        if abs(rho1_sq - beta) <= tol * (1.0 + beta):
            raise OnBifurcationBoundary(
                f"rho1_sq={rho1_sq} is a bifurcation value of the cusp count"
            )
    return sum(1 for beta in betas if rho1_sq > beta)


def s1_point(geom: GeometryParams, psi: float, g: float) -> JointSquares:
    """Joint point of the first singular surface over angle psi at height g."""
    return leg_lengths_squared(geom, GlidePose(wrap_half_angle(psi), gamma_r(geom, psi), g))


def s2_point(geom: GeometryParams, psi: float, r: float) -> JointSquares:
    """Joint point of the second singular surface (the g = 0 fold image)."""
    return leg_lengths_squared(geom, GlidePose(wrap_half_angle(psi), r, 0.0))


def deltoid_discriminant(geom: GeometryParams, delta2: float, delta3: float):
    """Raw branch-cubic discriminant at a chart point, plus the coefficient norm."""
    cub = characteristic_cubic(geom, delta2, delta3)
    scale = max(abs(v) for v in cub.coefficients())
    return discriminant_raw(*cub.coefficients()), scale


def normalized_discriminant(geom: GeometryParams, delta2: float, delta3: float) -> float:
    """Branch-cubic discriminant scaled by the fourth power of the coefficient
    norm (the discriminant has degree four in the coefficients)."""
    disc, scale = deltoid_discriminant(geom, delta2, delta3)
    if scale == 0.0:
        return 0.0
    return disc / scale**4


def is_inside_deltoid(
    geom: GeometryParams, delta2: float, delta3: float, tol: float = 1e-9
) -> DeltoidVerdict:
    """Classify a (delta2, delta3) point against the discriminant curve.

    Three real branches (counting t = infinity) inside, one outside; the
    on-curve band is |disc| <= tol * norm^4.
    """
    disc, scale = deltoid_discriminant(geom, delta2, delta3)
    band = tol * scale**4
    if disc > band:
        return DeltoidVerdict.INSIDE
    if disc < -band:
        return DeltoidVerdict.OUTSIDE
    return DeltoidVerdict.ON_CURVE


def on_s2(geom: GeometryParams, j: JointSquares, tol: float = 1e-9) -> bool:
    """Whether some branch of the joint point satisfies rho1^2 = 4 r^2, i.e.
    the point lies on the image of the g = 0 fold."""
    delta2 = 0.25 * (j.rho2_sq - j.rho1_sq)
    delta3 = 0.25 * (j.rho3_sq - j.rho1_sq)
    roots = solve_cubic_real(characteristic_cubic(geom, delta2, delta3), tol)
    for t, _ in roots:
        psi = -HALF_PI if math.isinf(t) else math.atan(t)
        r = r_from_psi(geom, psi, delta2, delta3)
        if abs(4.0 * r * r - j.rho1_sq) <= tol * (1.0 + j.rho1_sq):
            return True
    return False


def classify_arc(geom: GeometryParams, psi_double: float, tol: float = 1e-9) -> int:
    """Arc of the deltoid containing the given double-root angle.

    With cusp angles sorted ascending as c1 < c2 < c3 in [-pi/2, pi/2):
    arc 1 = (c1, c2), arc 2 = (c2, c3), arc 3 wraps through +-pi/2.
    """
    angles = [p.psi_cusp for p in cusp_points(geom)]
    q = wrap_half_angle(psi_double)
    for a in angles:
        if angle_distance_mod_pi(q, a) <= tol:
            raise AtCusp(f"angle {q} is within {tol} of the cusp angle {a}")
    c1, c2, c3 = angles
    if c1 < q < c2:
        return 1
    if c2 < q < c3:
        return 2
    return 3


def bifurcation_sweep(b: float, h_range, d_range, grid):
    """Grid of (h, d, beta1, beta2, beta3) rows, h outer and d inner,
    endpoints inclusive."""
    h_lo, h_hi = h_range
    d_lo, d_hi = d_range
    nh, nd = grid
    if h_lo <= 0.0 or h_hi <= 0.0:
        raise ValueError("h range must be positive")
    rows = []
    for h in np.linspace(h_lo, h_hi, nh):
        for d in np.linspace(d_lo, d_hi, nd):
            betas = bifurcation_values(GeometryParams(b=b, h=float(h), d=float(d)))
            rows.append((float(h), float(d)) + betas.as_tuple())
    return rows


def _turn_angle(p0, pm, p1):
    ax, ay = pm[0] - p0[0], pm[1] - p0[1]
    bx, by = p1[0] - pm[0], p1[1] - pm[1]
    if (ax == 0.0 and ay == 0.0) or (bx == 0.0 and by == 0.0):
        return 0.0
    return abs(math.atan2(ax * by - ay * bx, ax * bx + ay * by))


def _refined_samples(f, params, closed, period, angle_deg, max_depth):
    """Sample f over params with curvature-adaptive midpoint refinement."""
    thr = math.radians(angle_deg)
    out = []

    def refine(t0, p0, t1, p1, depth):
        tm = 0.5 * (t0 + t1)
        pm = f(tm)
        if depth > 0 and _turn_angle(p0, pm, p1) > thr:
            refine(t0, p0, tm, pm, depth - 1)
            refine(tm, pm, t1, p1, depth - 1)
        else:
            out.append((tm, pm))
            out.append((t1, p1))

    pts = [f(t) for t in params]
    edges = list(zip(params, pts, params[1:], pts[1:]))
    if closed and len(params) > 1:
        edges.append((params[-1], pts[-1], params[0] + period, pts[0]))
    out.append((params[0], pts[0]))
    for t0, p0, t1, p1 in edges:
        refine(t0, p0, t1, p1, max_depth)
    return out


def sample_curve_c(
    geom: GeometryParams, samples: int = 720, angle_deg: float = 5.0, max_depth: int = 12
):
    """Adaptively sampled discriminant curve, one closed pass in psi."""
    params = [-HALF_PI + (i + 0.5) * math.pi / samples for i in range(samples)]

    def f(psi):
        return curve_c(geom, math.tan(psi))

    raw = _refined_samples(f, params, closed=True, period=math.pi,
                           angle_deg=angle_deg, max_depth=max_depth)
    return [CurveSample("C", wrap_half_angle(t), p) for t, p in raw]


def sample_slice(
    geom: GeometryParams,
    rho1_sq: float,
    samples: int = 720,
    angle_deg: float = 5.0,
    max_depth: int = 12,
):
    """Slice of S1 and S2 at a fixed rho1^2 level, in the (rho2^2, rho3^2) plane.

    Returns (s1_runs, s2_samples): the S1 slice is clipped to angles whose
    cusp height allows the level (rho1^2 >= 4 gamma_r^2) and to the positive
    quadrant, so it comes as a list of polyline runs.
    """
    base = [-HALF_PI + (i + 0.5) * math.pi / samples for i in range(samples)]

    def s1_val(psi):
        d2, d3 = curve_c(geom, math.tan(psi))
        return (rho1_sq + 4.0 * d2, rho1_sq + 4.0 * d3)

    def keep(psi):
        gr = gamma_r(geom, psi)
        if rho1_sq < 4.0 * gr * gr:
            return False
        p = s1_val(psi)
        return p[0] >= 0.0 and p[1] >= 0.0

    runs = []
    run = []
    for psi in base:
        if keep(psi):
            run.append(psi)
        elif run:
            runs.append(run)
            run = []
    if run:
        runs.append(run)
    # the parameter is circular: merge a run ending at +pi/2 with one
    # starting at -pi/2
    if len(runs) > 1 and keep(base[0]) and keep(base[-1]):
        runs[0] = [p - math.pi for p in runs[-1]] + runs[0]
        runs.pop()

    s1_runs = []
    for run in runs:
        if len(run) < 2:
            s1_runs.append([CurveSample("S1-slice", wrap_half_angle(run[0]), s1_val(run[0]))])
            continue
        raw = _refined_samples(s1_val, run, closed=False, period=math.pi,
                               angle_deg=angle_deg, max_depth=max_depth)
        s1_runs.append([CurveSample("S1-slice", wrap_half_angle(t), p) for t, p in raw])

    half = math.sqrt(rho1_sq) / 2.0

    def s2_val(theta):
        if theta < HALF_PI:
            psi, r = theta, half
        else:
            psi, r = theta - math.pi, -half
        c = math.cos(psi)
        s = geom.d * c + geom.h * math.sin(psi)
        u2 = r - geom.b * c
        u3 = r - s
        return (4.0 * u2 * u2, 4.0 * u3 * u3)

    thetas = [-HALF_PI + (i + 0.5) * TWO_PI_SPAN / samples for i in range(samples)]
    raw = _refined_samples(s2_val, thetas, closed=True, period=TWO_PI_SPAN,
                           angle_deg=angle_deg, max_depth=max_depth)
    s2 = [CurveSample("S2-slice", t, p) for t, p in raw]
    return s1_runs, s2


TWO_PI_SPAN = 2.0 * math.pi


def sample_nu_section(
    geom: GeometryParams,
    nu: float,
    samples: int = 720,
    angle_deg: float = 5.0,
    max_depth: int = 12,
):
    """Constant-nu section: the deltoid plus the S2 section, in (delta2, delta3).

    Returns (c_samples, s2_runs); the S2 section may be clipped for small nu.
    """
    c_samples = sample_curve_c(geom, samples, angle_deg, max_depth)

    def branch(theta):
        if theta < HALF_PI:
            psi, sign = theta, 1.0
        else:
            psi, sign = theta - math.pi, -1.0
        c = math.cos(psi)
        s = geom.d * c + geom.h * math.sin(psi)
        w = geom.b * c + s
        rad = w * w - 0.75 * (4.0 * (geom.b * c) ** 2 + 4.0 * s * s - nu)
        if rad < 0.0:
            return None
        r = (w + sign * math.sqrt(rad)) / 3.0
        bc = geom.b * c
        return (bc * bc - 2.0 * bc * r, s * s - 2.0 * r * s)

    thetas = [-HALF_PI + (i + 0.5) * TWO_PI_SPAN / samples for i in range(samples)]
    keepers = [theta for theta in thetas if branch(theta) is not None]
    runs = []
    run = []
    for theta in thetas:
        if branch(theta) is not None:
            run.append(theta)
        elif run:
            runs.append(run)
            run = []
    if run:
        runs.append(run)
    closed = len(keepers) == len(thetas)
    if closed:
        runs = [thetas]
    elif len(runs) > 1 and branch(thetas[0]) is not None and branch(thetas[-1]) is not None:
        runs[0] = [p - TWO_PI_SPAN for p in runs[-1]] + runs[0]
        runs.pop()

    s2_runs = []
    for run in runs:
        if len(run) < 2:
            s2_runs.append([CurveSample("S2-section", run[0], branch(run[0]))])
            continue
        raw = _refined_samples(branch, run, closed=closed, period=TWO_PI_SPAN,
                               angle_deg=angle_deg, max_depth=max_depth)
        s2_runs.append([CurveSample("S2-section", t, p) for t, p in raw])
    return c_samples, s2_runs
