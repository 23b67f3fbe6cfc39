"""
Unit tests for primitive meshes, ray casting and normal estimation.
"""
import numpy as np
import pytest

from src.errors import GeometryError, MeshFormatError
from src.models.geometry import PointCloud
from src.models.scene import TriMesh, VirtualCamera
from src.synthetic import (box_mesh, cylinder_mesh, default_catalog, estimate_normals,
                           intersect_rays, orbit_cameras, render_partial_cloud, t_handle_mesh)
from src.synthetic.shapes import ORBIT_ELEVATION


@pytest.fixture
def cube():
    return box_mesh((0.1, 0.1, 0.1))


@pytest.fixture
def camera():
    return VirtualCamera.look_at([0.3, 0.2, 0.3], [0.0, 0.0, 0.05], width=32, height=24,
                                 noise_std=0.0)


class TestShapes:
    """Tests for primitive meshes and the catalogue."""

    def test_box_rests_on_table(self, cube):
        lo, hi = cube.bounds
        assert np.allclose(lo, [-0.05, -0.05, 0.0])
        assert np.allclose(hi, [0.05, 0.05, 0.1])
        assert len(cube) == 12

    def test_box_triangles_face_outward(self, cube):
        v = cube.vertices[cube.triangles]
        normals = np.cross(v[:, 1] - v[:, 0], v[:, 2] - v[:, 0])
        outward = v.mean(axis=1) - np.array([0.0, 0.0, 0.05])
        assert np.all(np.einsum("ij,ij->i", normals, outward) > 0)

    def test_cylinder(self):
        mesh = cylinder_mesh(0.03, 0.15, segments=16)
        assert len(mesh) == 4 * 16
        lo, hi = mesh.bounds
        assert hi[2] == pytest.approx(0.15)
        assert hi[0] == pytest.approx(0.03)

    def test_t_handle_height(self):
        lo, hi = t_handle_mesh().bounds
        assert lo[2] == pytest.approx(0.0)
        assert hi[2] == pytest.approx(0.15)
        assert hi[0] - lo[0] == pytest.approx(0.16)

    def test_catalog_fits_the_gripper(self):
        catalog = default_catalog()
        assert sorted(catalog) == ["box", "cylinder", "flat_box", "t_handle", "tall_box"]
        for mesh in catalog.values():
            lo, hi = mesh.bounds
            assert min(hi - lo) <= 0.08

    def test_orbit_cameras(self, cube):
        rng = np.random.default_rng(0)
        cams = orbit_cameras(cube, 3, rng, width=16, height=16)
        target = np.array([0.0, 0.0, 0.05])
        for cam in cams:
            offset = cam.position - target
            assert np.linalg.norm(offset) == pytest.approx(0.5)
            elevation = np.arcsin(offset[2] / 0.5)
            assert ORBIT_ELEVATION[0] <= elevation <= ORBIT_ELEVATION[1]

    def test_mesh_without_faces(self):
        with pytest.raises(MeshFormatError, match="no faces"):
            TriMesh(np.zeros((3, 3)), np.zeros((0, 3)))

    def test_degenerate_triangles_removed(self):
        mesh = TriMesh([[0, 0, 0], [1, 0, 0], [0, 1, 0], [2, 0, 0]], [[0, 1, 2], [0, 1, 3]])
        assert len(mesh.cleaned()) == 1


class TestRayCasting:
    """Tests for ray-mesh intersection and partial clouds."""

    def test_hit_and_miss(self, cube):
        origin = np.array([0.0, 0.0, 1.0])
        dirs = np.array([[0.0, 0.0, -1.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]])
        t = intersect_rays(origin, dirs, cube)
        assert t[0] == pytest.approx(0.9)
        assert np.isinf(t[1])
        assert np.isinf(t[2])

    def test_points_lie_on_the_surface(self, cube, camera):
        cloud = render_partial_cloud(cube, camera)
        assert len(cloud) > 0
        assert cloud.frame_tag == "world"
        lo, hi = cube.bounds
        pts = cloud.points
        assert np.all(pts >= lo - 1e-9) and np.all(pts <= hi + 1e-9)
        on_face = np.isclose(pts, lo, atol=1e-9) | np.isclose(pts, hi, atol=1e-9)
        assert np.all(on_face.any(axis=1))

    def test_only_visible_side(self, cube, camera):
        pts = render_partial_cloud(cube, camera).points
        # camera sits at +x, +y, +z: the far faces are hidden
        assert not np.any(np.isclose(pts[:, 0], -0.05, atol=1e-9))
        assert not np.any(np.isclose(pts[:, 2], 0.0, atol=1e-9))

    def test_noise_is_seeded(self, cube):
        cam = VirtualCamera.look_at([0.3, 0.2, 0.3], [0.0, 0.0, 0.05], width=16, height=12,
                                    noise_std=0.002)
        a = render_partial_cloud(cube, cam, seed=3).points
        b = render_partial_cloud(cube, cam, seed=3).points
        c = render_partial_cloud(cube, cam, seed=4).points
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_object_not_visible(self, cube):
        cam = VirtualCamera.look_at([0.5, 0.0, 0.05], [1.0, 0.0, 0.05], width=16, height=12)
        with pytest.raises(GeometryError, match="not visible"):
            render_partial_cloud(cube, cam)

    def test_camera_checks(self):
        with pytest.raises(GeometryError):
            VirtualCamera(width=4)
        with pytest.raises(GeometryError, match="coincide"):
            VirtualCamera.look_at([0, 0, 0], [0, 0, 0])


class TestNormals:
    """Tests for plane-fit normals."""

    def test_plane_normals_face_viewpoint(self):
        xs, ys = np.meshgrid(np.linspace(0, 0.1, 10), np.linspace(0, 0.1, 10))
        pts = np.column_stack([xs.ravel(), ys.ravel(), np.zeros(100)])
        cloud = estimate_normals(PointCloud(pts), k=8, viewpoint=(0.05, 0.05, 1.0))
        assert np.allclose(cloud.normals, [0.0, 0.0, 1.0], atol=1e-9)

    def test_flip_toward_viewpoint_below(self):
        xs, ys = np.meshgrid(np.linspace(0, 0.1, 5), np.linspace(0, 0.1, 5))
        pts = np.column_stack([xs.ravel(), ys.ravel(), np.zeros(25)])
        cloud = estimate_normals(PointCloud(pts), k=6, viewpoint=(0.0, 0.0, -1.0))
        assert np.allclose(cloud.normals[:, 2], -1.0)

    def test_too_few_points(self):
        with pytest.raises(GeometryError, match="at least 16"):
            estimate_normals(PointCloud(np.zeros((5, 3))))

    def test_rendered_cube_normals(self, cube, camera):
        cloud = estimate_normals(render_partial_cloud(cube, camera), k=8,
                                 viewpoint=camera.position)
        assert np.allclose(np.linalg.norm(cloud.normals, axis=1), 1.0)

    def test_sphere_normals_are_radial(self):
        """Test normals on a sampled sphere point along the radius."""
        n = 2000
        golden = np.pi * (3.0 - np.sqrt(5.0))
        z = 1.0 - 2.0 * (np.arange(n) + 0.5) / n
        r = np.sqrt(1.0 - z * z)
        theta = golden * np.arange(n)
        center = np.array([0.1, -0.2, 0.3])
        radial = np.column_stack([r * np.cos(theta), r * np.sin(theta), z])
        cloud = estimate_normals(PointCloud(center + 0.05 * radial), k=16, viewpoint=center)
        cosines = np.abs(np.einsum("ij,ij->i", cloud.normals, radial))
        assert np.all(cosines >= np.cos(np.deg2rad(5.0)))
        # flipped toward the viewpoint at the center
        assert np.all(np.einsum("ij,ij->i", cloud.normals, radial) < 0)


class TestResolution:
    """Tests for render resolution."""

    def test_doubling_resolution_quadruples_points(self, cube):
        coarse = VirtualCamera.look_at([0.3, 0.2, 0.3], [0.0, 0.0, 0.05], width=160, height=120,
                                       noise_std=0.0)
        fine = VirtualCamera.look_at([0.3, 0.2, 0.3], [0.0, 0.0, 0.05], width=320, height=240,
                                     noise_std=0.0)
        ratio = len(render_partial_cloud(cube, fine)) / len(render_partial_cloud(cube, coarse))
        assert 3.6 <= ratio <= 4.4
