"""
Unit tests for screw algebra, bounding boxes and antipodal grids.
"""
import numpy as np
import pytest

from src.errors import GeometryError
from src.geometry import (axis_aligned_box, box_faces, box_in_frame, moment_about_screw,
                          object_frame_from_box, oriented_box_pca, parse_screw,
                          sample_antipodal_grid, screw_from_point_dir)
from src.models.geometry import BOX_EPS, AntipodalPair, Face, OrientedBox, PointCloud, Screw


def _rot_z(deg):
    a = np.deg2rad(deg)
    c, s = np.cos(a), np.sin(a)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


@pytest.fixture
def block_cloud():
    """Solid 0.20 x 0.10 x 0.05 block sampled on a regular grid, resting on z = 0."""
    xs = np.linspace(-0.10, 0.10, 21)
    ys = np.linspace(-0.05, 0.05, 11)
    zs = np.linspace(0.0, 0.05, 6)
    pts = np.array([[x, y, z] for x in xs for y in ys for z in zs])
    return PointCloud(pts)


@pytest.fixture
def unit_box():
    return OrientedBox(np.zeros(3), np.eye(3), np.full(3, 0.5))


class TestScrew:
    """Tests for screw construction and moments."""

    def test_line_through_origin(self):
        s = screw_from_point_dir([0, 0, 0], [0, 0, 1])
        assert np.allclose(s.m, 0.0)

    def test_moment_is_cross_product(self):
        assert np.allclose(screw_from_point_dir([1, 0, 0], [0, 0, 1]).m, [0, -1, 0])
        assert np.allclose(screw_from_point_dir([0, 1, 0], [1, 0, 0]).m, [0, 0, -1])

    def test_direction_is_normalised(self):
        s = screw_from_point_dir([0, 0, 0], [0, 0, 5])
        assert np.allclose(s.l, [0, 0, 1])

    def test_zero_direction_rejected(self):
        with pytest.raises(GeometryError, match="degenerate direction"):
            screw_from_point_dir([0, 0, 0], [0, 0, 0])

    def test_plucker_condition_enforced(self):
        with pytest.raises(GeometryError):
            Screw([0, 0, 1], [0, 0, 1])

    def test_anchor_off_line_rejected(self):
        with pytest.raises(GeometryError):
            Screw([0, 0, 1], [0, 0, 0], [1, 0, 0])

    def test_unit_moment_arm(self):
        s = screw_from_point_dir([0, 0, 0], [0, 0, 1])
        assert moment_about_screw(s, [0, 1, 0], [1, 0, 0]) == pytest.approx(1.0)

    def test_force_on_line_has_no_moment(self):
        s = screw_from_point_dir([0.3, -0.2, 0.1], [1, 2, 3])
        point = s.p + 0.7 * s.l
        assert moment_about_screw(s, [4.0, -1.0, 2.0], point) == pytest.approx(0.0, abs=1e-12)

    def test_moment_invariant_to_sliding_anchor(self):
        rng = np.random.default_rng(3)
        a = screw_from_point_dir([0.1, 0.2, 0.3], [0.3, -0.5, 0.8])
        b = screw_from_point_dir(a.p + 2.5 * a.l, a.l)
        for _ in range(10):
            f, c = rng.normal(size=3), rng.normal(size=3)
            assert moment_about_screw(a, f, c) == pytest.approx(moment_about_screw(b, f, c),
                                                                abs=1e-12)

    def test_parse_screw(self):
        s = parse_screw("1,0,0,0,0,2")
        assert np.allclose(s.p, [1, 0, 0])
        assert np.allclose(s.l, [0, 0, 1])

    def test_parse_screw_rejects_wrong_count(self):
        with pytest.raises(GeometryError):
            parse_screw("1,2,3")


class TestAxisAlignedBox:
    """Tests for axis_aligned_box."""

    def test_cube_corners(self):
        corners = [[x, y, z] for x in (0, 1) for y in (0, 1) for z in (0, 1)]
        box = axis_aligned_box(PointCloud(corners))
        assert np.allclose(box.center, 0.5)
        assert np.allclose(box.half_extents, 0.5)
        assert np.allclose(box.rotation, np.eye(3))

    def test_single_point_is_clamped(self):
        box = axis_aligned_box(PointCloud([[1.0, 2.0, 3.0]]))
        assert np.allclose(box.half_extents, BOX_EPS)

    def test_idempotent_on_own_vertices(self, block_cloud):
        box = axis_aligned_box(block_cloud)
        again = axis_aligned_box(PointCloud(np.vstack([block_cloud.points, box.vertices()])))
        assert np.allclose(again.center, box.center)
        assert np.allclose(again.half_extents, box.half_extents)


class TestOrientedBox:
    """Tests for the support-plane PCA box."""

    def test_axis_aligned_block(self, block_cloud):
        box = oriented_box_pca(block_cloud)
        assert np.allclose(box.half_extents, [0.10, 0.05, 0.025], atol=1e-9)
        assert np.allclose(np.abs(box.rotation), np.eye(3), atol=1e-9)
        assert np.allclose(box.rotation[:, 2], [0, 0, 1])
        assert not box.fallback

    def test_rotated_block_is_tight(self, block_cloud):
        R = _rot_z(30.0)
        rotated = PointCloud(block_cloud.points @ R.T)
        box = oriented_box_pca(rotated)
        aabb = axis_aligned_box(rotated)
        assert box.volume <= aabb.volume
        assert np.allclose(box.half_extents, [0.10, 0.05, 0.025], atol=1e-9)

    def test_contains_every_point(self, block_cloud):
        R = _rot_z(17.0)
        rotated = PointCloud(block_cloud.points @ R.T + [0.3, -0.1, 0.0])
        box = oriented_box_pca(rotated)
        assert np.all(box.contains(rotated.points))

    def test_right_handed(self, block_cloud):
        box = oriented_box_pca(PointCloud(block_cloud.points @ _rot_z(70.0).T))
        assert np.linalg.det(box.rotation) == pytest.approx(1.0)

    def test_mirrored_cloud_keeps_extents(self, block_cloud):
        skewed = block_cloud.points.copy()
        skewed = np.vstack([skewed, [[0.10, 0.0, 0.0]] * 20])
        mirrored = skewed * [1.0, -1.0, 1.0]
        a = oriented_box_pca(PointCloud(skewed))
        b = oriented_box_pca(PointCloud(mirrored))
        assert np.allclose(a.half_extents, b.half_extents)

    def test_skewness_sets_axis_sign(self, block_cloud):
        # extra mass at one end breaks the skewness tie
        heavy = np.vstack([block_cloud.points, [[-0.10, 0.0, 0.0]] * 50])
        box = oriented_box_pca(PointCloud(heavy))
        coords = (heavy - heavy.mean(axis=0)) @ box.rotation[:, 0]
        assert np.mean(coords ** 3) >= 0

    def test_collinear_cloud_falls_back(self):
        pts = np.column_stack([np.linspace(0, 1, 10), np.zeros(10), np.zeros(10)])
        box = oriented_box_pca(PointCloud(pts))
        assert box.fallback
        assert np.allclose(box.rotation, np.eye(3))

    def test_zero_support_normal_rejected(self, block_cloud):
        with pytest.raises(GeometryError, match="degenerate direction"):
            oriented_box_pca(block_cloud, [0, 0, 0])

    def test_frame_equivariance(self, block_cloud):
        heavy = np.vstack([block_cloud.points, [[0.08, 0.03, 0.01]] * 30])
        R = _rot_z(40.0)
        t = np.array([0.5, -0.2, 0.0])
        box_a = oriented_box_pca(PointCloud(heavy))
        box_b = oriented_box_pca(PointCloud(heavy @ R.T + t))
        local_a = (heavy - box_a.center) @ box_a.rotation
        local_b = (heavy @ R.T + t - box_b.center) @ box_b.rotation
        assert np.allclose(local_a, local_b, atol=1e-9)


class TestObjectFrame:
    """Tests for object_frame_from_box and box_in_frame."""

    def test_identity_box(self, unit_box):
        T = object_frame_from_box(unit_box)
        assert np.allclose(T.rotation, np.eye(3))
        assert np.allclose(T.translation, [0.5, 0.5, 0.5])

    def test_translated_box(self, unit_box):
        moved = OrientedBox([1.0, 2.0, 3.0], np.eye(3), unit_box.half_extents)
        T = object_frame_from_box(moved)
        assert np.allclose(T.rotation, np.eye(3))
        assert np.allclose(T.apply([0.5, 1.5, 2.5]), 0.0)

    def test_vertices_are_nonnegative(self):
        box = OrientedBox([0.2, -0.4, 0.1], _rot_z(33.0), [0.1, 0.03, 0.05])
        local = object_frame_from_box(box).apply(box.vertices())
        assert np.all(local >= -1e-12)
        assert np.allclose(local.max(axis=0), box.extents)

    def test_box_in_own_frame_is_axis_aligned(self):
        box = OrientedBox([0.2, -0.4, 0.1], _rot_z(33.0), [0.1, 0.03, 0.05])
        local = box_in_frame(box, object_frame_from_box(box))
        assert np.allclose(local.rotation, np.eye(3), atol=1e-12)
        assert np.allclose(local.center, box.half_extents)


class TestAntipodalGrid:
    """Tests for sample_antipodal_grid."""

    def test_two_by_two_on_unit_cube(self, unit_box):
        f_i, f_j = Face(unit_box, 0, -1), Face(unit_box, 0, 1)
        pairs = sample_antipodal_grid(f_i, f_j, 2, 2)
        assert len(pairs) == 4
        for pair in pairs:
            assert pair.width == pytest.approx(1.0)
            assert np.allclose(np.abs(pair.c_i[1:]), 0.45)

    def test_training_resolution(self, unit_box):
        pairs = sample_antipodal_grid(Face(unit_box, 1, -1), Face(unit_box, 1, 1), 34, 19)
        assert len(pairs) == 646

    def test_row_major_u_fastest(self, unit_box):
        pairs = sample_antipodal_grid(Face(unit_box, 2, -1), Face(unit_box, 2, 1), 3, 2)
        xs = [p.c_i[0] for p in pairs]
        ys = [p.c_i[1] for p in pairs]
        assert xs[:3] == sorted(xs[:3])
        assert ys[0] == ys[1] == ys[2]
        assert ys[3] > ys[0]

    def test_pairs_are_antipodal(self):
        box = OrientedBox([0.1, 0.2, 0.3], _rot_z(25.0), [0.05, 0.02, 0.07])
        pairs = sample_antipodal_grid(Face(box, 1, -1), Face(box, 1, 1), 5, 4)
        for pair in pairs:
            assert isinstance(pair, AntipodalPair)
            assert np.allclose(pair.n_i, box.rotation[:, 1])
            assert pair.width == pytest.approx(0.04)

    def test_faces_must_be_opposite(self, unit_box):
        with pytest.raises(GeometryError, match="faces are not opposite"):
            sample_antipodal_grid(Face(unit_box, 0, -1), Face(unit_box, 1, 1), 2, 2)

    def test_resolution_at_least_two(self, unit_box):
        with pytest.raises(GeometryError):
            sample_antipodal_grid(Face(unit_box, 0, -1), Face(unit_box, 0, 1), 1, 2)

    def test_box_faces_order(self, unit_box):
        faces = box_faces(unit_box)
        assert [(f.axis_index, f.sign) for f in faces] == [
            (0, -1), (0, 1), (1, -1), (1, 1), (2, -1), (2, 1)]
