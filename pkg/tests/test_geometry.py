import math

import pytest
from hypothesis import given, strategies as st

from symrpr import (
    GeometryParams,
    GlidePose,
    JointSquares,
    NuDelta,
    RigidPose,
    InvalidJointPoint,
    deltas_from_pose,
    glide_to_rigid,
    joint_to_nudelta,
    leg_lengths_squared,
    nudelta_to_joint,
    platform_vertices,
    pose_distance,
    rigid_to_glide,
)

REF = GeometryParams(1.0, 1.0, 0.0)

angles = st.floats(-math.pi / 2 + 1e-6, math.pi / 2 - 1e-6)
lengths = st.floats(-3.0, 3.0)


def test_geometry_validation():
    with pytest.raises(ValueError):
        GeometryParams(b=0.0, h=1.0)
    with pytest.raises(ValueError):
        GeometryParams(b=1.0, h=-1.0)
    GeometryParams(b=1.0, h=1.0, d=-0.5)


def test_geometry_file_parsing(tmp_path):
    f = tmp_path / "geom.txt"
    f.write_text("# reference design\nb = 1.0\nh = 1.0  # apex height\nd = 0\n")
    g = GeometryParams.from_file(f)
    assert (g.b, g.h, g.d) == (1.0, 1.0, 0.0)

    f2 = tmp_path / "partial.txt"
    f2.write_text("b = 2\nh = 0.5\n")
    assert GeometryParams.from_file(f2).d == 0.0

    bad = tmp_path / "bad.txt"
    bad.write_text("b = 1\nh = 1\nq = 3\n")
    with pytest.raises(ValueError):
        GeometryParams.from_file(bad)


def test_leg_lengths_worked_pose():
    j = leg_lengths_squared(REF, GlidePose(math.pi / 4, 1.1, 0.4))
    assert j.rho1_sq == pytest.approx(5.48, abs=1e-12)
    assert j.rho2_sq == pytest.approx(1.257461, abs=1e-5)
    assert j.rho3_sq == pytest.approx(1.257461, abs=1e-5)
    assert math.sqrt(j.rho1_sq) == pytest.approx(2.34, abs=5e-3)
    assert math.sqrt(j.rho2_sq) == pytest.approx(1.12, abs=5e-3)


def test_leg_lengths_reflections():
    assert leg_lengths_squared(REF, GlidePose(0.0, 0.0, 0.0)).as_tuple() == (0.0, 4.0, 0.0)
    j = leg_lengths_squared(REF, GlidePose(math.pi / 2, 0.0, 0.0))
    assert j.rho1_sq == pytest.approx(0.0, abs=1e-30)
    assert j.rho2_sq == pytest.approx(0.0, abs=1e-30)
    assert j.rho3_sq == pytest.approx(4.0, abs=1e-12)


@given(lengths, lengths)
def test_boundary_identification(r, g):
    a = leg_lengths_squared(REF, GlidePose(-math.pi / 2, r, g))
    b = leg_lengths_squared(REF, GlidePose(math.pi / 2, -r, -g))
    for x, y in zip(a.as_tuple(), b.as_tuple()):
        assert x == pytest.approx(y, rel=1e-12, abs=1e-12)


def test_deltas_examples():
    d2, d3 = deltas_from_pose(REF, math.pi / 4, 1.1)
    assert d2 == pytest.approx(-1.05564, abs=1e-5)
    assert d3 == pytest.approx(-1.05564, abs=1e-5)
    d2, d3 = deltas_from_pose(REF, math.pi / 4, math.sqrt(2.0) / 8.0)
    assert d2 == pytest.approx(0.25, abs=1e-12)
    assert d3 == pytest.approx(0.25, abs=1e-12)
    d2, _ = deltas_from_pose(REF, math.pi / 2, 1.7)
    assert abs(d2) <= 1e-12


@given(angles, lengths, lengths)
def test_deltas_agree_with_leg_lengths(psi, r, g):
    j = leg_lengths_squared(REF, GlidePose(psi, r, g))
    d2, d3 = deltas_from_pose(REF, psi, r)
    assert (j.rho2_sq - j.rho1_sq) / 4.0 == pytest.approx(d2, abs=1e-12 * (1 + abs(d2)))
    assert (j.rho3_sq - j.rho1_sq) / 4.0 == pytest.approx(d3, abs=1e-12 * (1 + abs(d3)))


def test_glide_to_rigid_examples():
    q = glide_to_rigid(GlidePose(0.0, 0.0, 0.0))
    assert (q.phi, q.x, q.y) == (math.pi, 0.0, 0.0)
    q = glide_to_rigid(GlidePose(math.pi / 4, 1.1, 0.4))
    assert q.phi == pytest.approx(3 * math.pi / 2)
    assert q.x == pytest.approx(0.989949, abs=1e-6)
    assert q.y == pytest.approx(2.121320, abs=1e-6)


def test_rigid_to_glide_examples():
    p = rigid_to_glide(RigidPose(math.pi, 0.0, 0.0))
    assert (p.psi, p.r, p.g) == (0.0, 0.0, 0.0)
    p = rigid_to_glide(RigidPose(3 * math.pi / 2, 0.989949, 2.121320))
    assert p.psi == pytest.approx(math.pi / 4)
    assert p.r == pytest.approx(1.1, abs=1e-6)
    assert p.g == pytest.approx(0.4, abs=1e-6)


@given(angles, lengths, lengths)
def test_glide_rigid_round_trip(psi, r, g):
    p = GlidePose(psi, r, g)
    back = rigid_to_glide(glide_to_rigid(p))
    assert back.psi == pytest.approx(psi, abs=1e-12)
    assert back.r == pytest.approx(r, abs=1e-12)
    assert back.g == pytest.approx(g, abs=1e-12)


def test_platform_vertices_reflection():
    b1, b2, b3 = platform_vertices(REF, GlidePose(0.0, 0.0, 0.0))
    assert (b1.x, b1.y) == (0.0, 0.0)
    assert (b2.x, b2.y) == (-1.0, 0.0)
    assert (b3.x, b3.y) == pytest.approx((0.0, 1.0))


@given(angles, lengths, lengths)
def test_platform_vertices_reproduce_leg_lengths(psi, r, g):
    pose = GlidePose(psi, r, g)
    j = leg_lengths_squared(REF, pose)
    anchors = ((0.0, 0.0), (REF.b, 0.0), (REF.d, REF.h))
    for (ax, ay), rho_sq in zip(anchors, j.as_tuple()):
        bx, by = [(v.x, v.y) for v in platform_vertices(REF, pose)][anchors.index((ax, ay))]
        assert (bx - ax) ** 2 + (by - ay) ** 2 == pytest.approx(rho_sq, abs=1e-12 * (1 + rho_sq))


def test_nudelta_examples():
    n = joint_to_nudelta(JointSquares(5.48, 1.257461, 1.257461))
    assert n.nu == pytest.approx(7.994922, abs=1e-6)
    assert n.delta2 == pytest.approx(-1.055635, abs=1e-6)
    assert n.delta3 == pytest.approx(-1.055635, abs=1e-6)

    j = nudelta_to_joint(NuDelta(8.0, 0.0, 0.0))
    assert j.as_tuple() == pytest.approx((8 / 3, 8 / 3, 8 / 3))

    with pytest.raises(InvalidJointPoint):
        nudelta_to_joint(NuDelta(1.0, 1.0, 1.0))


@given(st.floats(0.0, 10.0), st.floats(0.0, 10.0), st.floats(0.0, 10.0))
def test_nudelta_round_trip(a, b, c):
    j = JointSquares(a, b, c)
    back = nudelta_to_joint(joint_to_nudelta(j))
    for x, y in zip(j.as_tuple(), back.as_tuple()):
        assert x == pytest.approx(y, abs=1e-12 * (1 + x))


def test_pose_distance_identification():
    p = GlidePose(-math.pi / 2 + 1e-9, 0.7, 0.3)
    q = GlidePose(math.pi / 2 - 1e-9, -0.7, -0.3)
    assert pose_distance(p, q) < 1e-8
    assert pose_distance(p, GlidePose(-math.pi / 2 + 1e-9, 0.7, -0.3)) == pytest.approx(0.6)
