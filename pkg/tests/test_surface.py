import io
import math
from collections import Counter

import numpy as np
import pytest

import rotsurf as rs
from rotsurf import Mesh

SQRT2 = math.sqrt(2.0)


def edge_census(faces):
    """Directed-edge counts: a consistently oriented manifold strip uses
    every undirected interior edge once in each direction."""
    directed = Counter()
    for tri in faces:
        for i in range(3):
            directed[(int(tri[i]), int(tri[(i + 1) % 3]))] += 1
    reused = sum(1 for c in directed.values() if c != 1)
    boundary = sum(1 for (u, v) in directed if directed.get((v, u), 0) == 0)
    return reused, boundary


class TestRevolve:
    def test_vertex_count_and_meridian(self):
        prof = rs.sphere_profile(n=71)
        mesh = rs.revolve(prof, 24)
        assert mesh.vertices.shape == (71 * 24, 3)
        ring0 = mesh.vertices[::24]
        assert np.array_equal(ring0[:, 0], prof.x)
        assert np.max(np.abs(ring0[:, 2] - prof.z)) == 0.0
        assert np.max(np.abs(ring0[:, 1])) == 0.0

    def test_sphere_vertices_on_sphere(self):
        mesh = rs.revolve(rs.sphere_profile(n=201), 48)
        d = np.linalg.norm(mesh.vertices - np.array([-SQRT2, 0.0, 0.0]), axis=1)
        assert np.max(np.abs(d - SQRT2)) <= 1e-12

    def test_cylinder_radius(self):
        mesh = rs.revolve(rs.cylinder_profile(2.0, n=9), 16)
        r = np.hypot(mesh.vertices[:, 1], mesh.vertices[:, 2])
        assert np.max(np.abs(r - 1.0)) <= 1e-15

    def test_rotational_symmetry_permutation(self):
        prof = rs.sphere_profile(n=31)
        n_ang = 20
        mesh = rs.revolve(prof, n_ang)
        phi = 2 * math.pi / n_ang
        rot = np.array([
            [1, 0, 0],
            [0, math.cos(phi), math.sin(phi)],
            [0, -math.sin(phi), math.cos(phi)],
        ])
        rotated = mesh.vertices @ rot.T
        rings = mesh.vertices.reshape(31, n_ang, 3)
        rolled = np.roll(rings, -1, axis=1).reshape(-1, 3)
        assert np.max(np.abs(rotated - rolled)) <= 1e-12

    def test_outward_orientation_on_cylinder(self):
        mesh = rs.revolve(rs.cylinder_profile(1.0, n=3), 12)
        for tri in mesh.faces[:24]:
            a, b, c = mesh.vertices[tri]
            n = np.cross(b - a, c - a)
            centroid = (a + b + c) / 3.0
            assert np.dot(n, [0.0, centroid[1], centroid[2]]) > 0.0

    def test_manifold_interior(self):
        mesh = rs.revolve(rs.sphere_profile(n=41), 18)
        reused, boundary = edge_census(mesh.faces)
        assert reused == 0
        assert boundary == 2 * 18  # two open boundary rings, no caps

    def test_angular_minimum(self):
        with pytest.raises(ValueError):
            rs.revolve(rs.cylinder_profile(1.0), 2)


class TestExport:
    def test_single_triangle_obj(self):
        mesh = Mesh(np.eye(3), np.array([[0, 1, 2]]), 3, 1, "test")
        buf = io.StringIO()
        rs.export_obj(mesh, buf)
        lines = buf.getvalue().splitlines()
        assert len(lines) == 4
        assert lines[-1] == "f 1 2 3"

    def test_obj_roundtrip_bit_exact(self):
        mesh = rs.revolve(rs.sphere_profile(n=17), 9)
        buf = io.StringIO()
        rs.export_obj(mesh, buf)
        buf.seek(0)
        verts, faces = rs.parse_obj(buf)
        assert np.array_equal(verts, mesh.vertices)
        assert np.array_equal(faces, mesh.faces)

    def test_mesh_csv_layout(self):
        mesh = rs.revolve(rs.cylinder_profile(1.0, n=2), 3)
        buf = io.StringIO()
        rs.export_mesh_csv(mesh, buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "i,j,x,y,z"
        assert len(lines) == 1 + 6
        first = lines[1].split(",")
        assert first[0] == "0" and first[1] == "0"

    def test_deterministic_bytes(self):
        mesh = rs.revolve(rs.sphere_profile(n=17), 9)
        a, b = io.StringIO(), io.StringIO()
        rs.export_obj(mesh, a)
        rs.export_obj(mesh, b)
        assert a.getvalue() == b.getvalue()
