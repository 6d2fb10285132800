"""Assembly-mode labels and aspect signatures.

Within an aspect the solutions of the direct problem sort into four classes:
label 0 maps outside the discriminant deltoid, labels 1-3 map inside and are
named after the deltoid arc through which they connect to class 0.  The
boundaries between classes are the characteristic curves, the preimage of the
deltoid away from the jacobian curve.
"""

import math
from typing import NamedTuple

import numpy as np

from .dkp import characteristic_cubic, discriminant_raw, solve_cubic_real
from .errors import OnSingularity
from .geometry import (
    HALF_PI,
    GeometryParams,
    GlidePose,
    angle_distance_mod_pi,
    deltas_from_pose,
    wrap_half_angle,
)
from .singularity import classify_arc, gamma_r

# assembly-mode label: 0 (outside the deltoid) or 1..3 (inside, by arc)
AssemblyLabel = int


class AspectId(NamedTuple):
    """Chart-local aspect signature: sign of g and side of the jacobian curve."""

    g_sign: int
    gamma_side: int


def characteristic_r(geom: GeometryParams, psi: float):
    """The two characteristic curves r_minus(psi) <= r_plus(psi).

    Their image lies on the discriminant deltoid; together with the jacobian
    curve they bound the label regions.
    """
    b, h, d = geom.b, geom.h, geom.d
    base = (h * (2.0 * d + b) * math.cos(psi) + (h * h + b * d - d * d) * math.sin(psi)) / (
        4.0 * h
    )
    off = math.sqrt((h * h + d * d) * (h * h + d * d + b * b - 2.0 * b * d)) / (4.0 * h)
    return (base - off, base + off)


def aspect_of(geom: GeometryParams, pose: GlidePose, tol: float = 1e-9) -> AspectId:
    """Aspect signature of a pose; undefined on the singular set."""
    gam = gamma_r(geom, pose.psi)
    if abs(pose.g) <= tol:
        raise OnSingularity(f"pose has |g| = {abs(pose.g)} <= {tol}")
    if abs(pose.r - gam) <= tol:
        raise OnSingularity(f"pose is on the jacobian curve (r - gamma = {pose.r - gam})")
    return AspectId(1 if pose.g > 0.0 else -1, 1 if pose.r > gam else -1)


def _raw_disc_at(geom, d2, d3):
    cub = characteristic_cubic(geom, d2, d3)
    return discriminant_raw(*cub.coefficients())


def _norm_disc_at(geom, d2, d3):
    cub = characteristic_cubic(geom, d2, d3)
    scale = max(abs(v) for v in cub.coefficients())
    if scale == 0.0:
        return 0.0
    return discriminant_raw(*cub.coefficients()) / scale**4


def exit_crossing(geom: GeometryParams, psi: float, r0: float, sigma: float,
                  tol: float = 1e-9):
    """First crossing of the deltoid by the fixed-psi ray r0 + sigma*u, u > 0.

    The raw discriminant along the ray is an exact quartic in u; its roots
    bracket the candidate crossings and bisection then localizes the first
    sign change to |du| <= 1e-10.  Returns (u_inside, (delta2, delta3)) at the
    inside end of the final bracket.
    """
    c = math.cos(psi)
    s = geom.d * c + geom.h * math.sin(psi)
    d20, d30 = deltas_from_pose(geom, psi, r0)
    v2 = -2.0 * geom.b * c * sigma
    v3 = -2.0 * s * sigma

    def ndisc(u):
        return _norm_disc_at(geom, d20 + v2 * u, d30 + v3 * u)

    lam = 1.0 + abs(r0)
    for _ in range(200):
        if ndisc(lam) < -tol:
            break
        lam *= 2.0
    else:  # pragma: no cover - the image line always leaves the bounded deltoid
        raise RuntimeError("fixed-psi ray failed to exit the deltoid")

    xs = np.linspace(0.0, lam, 5)
    ys = [_raw_disc_at(geom, d20 + v2 * u, d30 + v3 * u) for u in xs]
    coeffs = np.linalg.solve(np.vander(xs, 5), ys)
    rts = [
        float(z.real)
        for z in np.roots(coeffs)
        if abs(z.imag) <= 1e-8 * (1.0 + abs(z.real)) and 0.0 < z.real < lam
    ]
    cuts = [0.0] + sorted(rts) + [lam]

    lo = 0.0
    hi = None
    for a, b_ in zip(cuts, cuts[1:]):
        mid = 0.5 * (a + b_)
        if ndisc(mid) < 0.0:
            hi = mid
            break
        lo = mid
    if hi is None:
        hi = lam
    while hi - lo > 1e-10:
        mid = 0.5 * (lo + hi)
        if ndisc(mid) < 0.0:
            hi = mid
        else:
            lo = mid
    return lo, (d20 + v2 * lo, d30 + v3 * lo)


def merged_pair_angle(geom: GeometryParams, d2: float, d3: float, psi_keep: float,
                      tol: float = 1e-9) -> float:
    """Angle of the double root about to exit at a deltoid crossing.

    The branch at psi_keep persists through the fold; the remaining roots of
    the cubic (nearly merged at the crossing) are averaged on the mod-pi
    circle.
    """
    roots = solve_cubic_real(characteristic_cubic(geom, d2, d3), tol)
    angles = []
    for t, mult in roots:
        ang = -HALF_PI if math.isinf(t) else math.atan(t)
        angles.extend([ang] * mult)
    if len(angles) < 2:  # pragma: no cover - inside points carry three branches
        raise RuntimeError("expected a merged pair at the deltoid crossing")
    drop = min(range(len(angles)), key=lambda i: angle_distance_mod_pi(angles[i], psi_keep))
    rest = [a for i, a in enumerate(angles) if i != drop]
    sin2 = sum(math.sin(2.0 * a) for a in rest)
    cos2 = sum(math.cos(2.0 * a) for a in rest)
    return wrap_half_angle(0.5 * math.atan2(sin2, cos2))


def label_pose(geom: GeometryParams, pose: GlidePose, tol: float = 1e-9) -> AssemblyLabel:
    """Assembly-mode label of a pose (0 outside the deltoid image, else 1-3).

    Inside points are labeled by casting the fixed-psi ray away from the
    jacobian curve: the ray's image is a straight line that must leave the
    deltoid, the tracked branch t = tan(psi) persists at the first crossing,
    and the exiting double root names the crossed arc.  Never reads g beyond
    the singularity guard, so labels are g-independent.
    """
    gam = gamma_r(geom, pose.psi)
    if abs(pose.g) <= tol:
        raise OnSingularity(f"pose has |g| = {abs(pose.g)} <= {tol}")
    if abs(pose.r - gam) <= tol:
        raise OnSingularity(f"pose is on the jacobian curve (r - gamma = {pose.r - gam})")
    d2, d3 = deltas_from_pose(geom, pose.psi, pose.r)
    if _norm_disc_at(geom, d2, d3) < -tol:
        return 0
    sigma = 1.0 if pose.r > gam else -1.0
    _, (e2, e3) = exit_crossing(geom, pose.psi, pose.r, sigma, tol)
    psi_double = merged_pair_angle(geom, e2, e3, pose.psi, tol)
    return classify_arc(geom, psi_double, tol)


def characteristic_section_rows(geom: GeometryParams, samples: int = 720):
    """Rows (psi, r_gamma, r_minus, r_plus) over a uniform psi grid, the
    constant-g section of the jacobian and characteristic cylinders."""
    rows = []
    for i in range(samples):
        psi = -HALF_PI + (i + 0.5) * math.pi / samples
        rm, rp = characteristic_r(geom, psi)
        rows.append((psi, gamma_r(geom, psi), rm, rp))
    return rows
