import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from symrpr import (
    AtCusp,
    DeltoidVerdict,
    GeometryParams,
    GlidePose,
    OnSingularity,
    aspect_of,
    characteristic_r,
    deltas_from_pose,
    gamma_r,
    is_inside_deltoid,
    label_pose,
)
from symrpr.dkp import characteristic_cubic, r_from_psi, solve_cubic_real
from symrpr.modes import exit_crossing, merged_pair_angle
from symrpr.singularity import normalized_discriminant

REF = GeometryParams(1.0, 1.0, 0.0)


def test_characteristic_r_examples():
    rm, rp = characteristic_r(REF, math.pi / 4)
    assert rm == pytest.approx(0.0, abs=1e-12)
    assert rp == pytest.approx(0.707107, abs=1e-6)
    assert rp == pytest.approx(gamma_r(REF, math.pi / 4))  # tangency at a cusp angle
    assert characteristic_r(REF, 0.0) == pytest.approx((-0.103553, 0.603553), abs=1e-6)


@given(st.floats(-math.pi / 2 + 1e-3, math.pi / 2 - 1e-3))
def test_characteristic_curves_map_onto_deltoid(psi):
    for r in characteristic_r(REF, psi):
        d2, d3 = deltas_from_pose(REF, psi, r)
        assert abs(normalized_discriminant(REF, d2, d3)) <= 1e-6


def test_aspect_examples():
    assert aspect_of(REF, GlidePose(math.pi / 4, 1.1, 0.4)) == (1, 1)
    assert aspect_of(REF, GlidePose(math.pi / 4, 0.176777, 1.0)) == (1, -1)
    with pytest.raises(OnSingularity):
        aspect_of(REF, GlidePose(math.pi / 4, 0.707107, 0.5), tol=1e-5)
    with pytest.raises(OnSingularity):
        aspect_of(REF, GlidePose(0.3, 0.9, 0.0))


def test_label_examples():
    assert label_pose(REF, GlidePose(math.pi / 4, 1.1, 0.4)) == 0
    assert label_pose(REF, GlidePose(math.pi / 4, 0.176777, 1.0)) == 1


def test_label_exit_ray_oracle():
    # from (pi/4, 0.176777) the ray moves away from the jacobian curve and the
    # cofactor roots -2 +- sqrt(3) merge; their angles lie in the first arc
    u, (e2, e3) = exit_crossing(REF, math.pi / 4, 0.176777, -1.0)
    assert e2 == pytest.approx(0.5, abs=1e-6)
    assert e3 == pytest.approx(0.5, abs=1e-6)
    psi_d = merged_pair_angle(REF, e2, e3, math.pi / 4)
    assert psi_d == pytest.approx(-math.pi / 4, abs=1e-4)
    assert -5 * math.pi / 12 < psi_d < -math.pi / 12


@given(st.floats(0.05, 3.0))
def test_label_ignores_g(g):
    base = label_pose(REF, GlidePose(math.pi / 4, 0.176777, g))
    assert base == label_pose(REF, GlidePose(math.pi / 4, 0.176777, 2 * g))
    assert base == label_pose(REF, GlidePose(math.pi / 4, 0.176777, -g))


def test_label_zero_iff_outside(rng):
    for _ in range(800):
        psi = rng.uniform(-1.55, 1.55)
        r = rng.uniform(-2.0, 2.0)
        pose = GlidePose(psi, r, 1.0)
        verdict = is_inside_deltoid(REF, *deltas_from_pose(REF, psi, r))
        if verdict is DeltoidVerdict.ON_CURVE:
            continue
        try:
            label = label_pose(REF, pose)
        except (OnSingularity, AtCusp):
            continue
        assert (label == 0) == (verdict is DeltoidVerdict.OUTSIDE)


def test_partition_inside_points(rng):
    found = 0
    while found < 60:
        d2, d3 = rng.uniform(-0.6, 1.3, size=2)
        if normalized_discriminant(REF, d2, d3) < 1e-6:
            continue
        roots = solve_cubic_real(characteristic_cubic(REF, d2, d3))
        branches = [t for t, m in roots for _ in range(m) if not math.isinf(t)]
        if len(branches) != 3:
            continue
        labels = set()
        try:
            for t in branches:
                r = r_from_psi(REF, math.atan(t), d2, d3)
                labels.add(label_pose(REF, GlidePose(math.atan(t), r, 1.0)))
        except (OnSingularity, AtCusp):
            continue
        assert labels == {1, 2, 3}, (d2, d3)
        found += 1


def test_label_changes_only_at_boundaries(rng):
    # along random (psi, r) segments every label change brackets a sign change
    # of (r - r_minus)(r - r_plus)(r - gamma)
    def boundary_product(psi, r):
        rm, rp = characteristic_r(REF, psi)
        return (r - rm) * (r - rp) * (r - gamma_r(REF, psi))

    segments = 0
    while segments < 20:
        psi0, psi1 = rng.uniform(-1.4, 1.4, size=2)
        r0, r1 = rng.uniform(-1.5, 1.5, size=2)
        n = 120
        labels = []
        products = []
        ok = True
        for i in range(n + 1):
            s = i / n
            psi = psi0 + (psi1 - psi0) * s
            r = r0 + (r1 - r0) * s
            try:
                labels.append(label_pose(REF, GlidePose(psi, r, 1.0)))
            except (OnSingularity, AtCusp):
                ok = False
                break
            products.append(boundary_product(psi, r))
        if not ok:
            continue
        segments += 1
        for i in range(n):
            if labels[i] != labels[i + 1]:
                assert products[i] * products[i + 1] <= 0.0, (
                    (psi0, r0, psi1, r1), i, labels[i], labels[i + 1]
                )
