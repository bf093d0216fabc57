"""Revolve profile curves about the x-axis into triangle meshes and export them.

Vertices are (x(t_i), z(t_i) sin(phi_j), z(t_i) cos(phi_j)) on a closed
angular ring; faces wind so their normals follow tangent x azimuthal
(radially outward on the cylinder).  Profiles with self-intersections are
revolved as-is: the mesh is immersed, not embedded, by design.  Open profile
ends stay open, no caps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateProfileError
from .profile import ProfileCurve


@dataclass(frozen=True)
class Mesh:
    vertices: np.ndarray  # (n_profile * n_angular, 3) float
    faces: np.ndarray  # (m, 3) int, counter-clockwise as seen from outside
    n_profile: int
    n_angular: int
    source_kind: str


def revolve(profile: ProfileCurve, n_angular: int) -> Mesh:
    """Surface of revolution of the profile about the x-axis.

    Vertex (i, j) sits at angle phi_j = 2 pi j / n_angular; the ring is
    closed by index wraparound, so vertex count is exactly
    len(profile) * n_angular.
    """
    if n_angular < 3:
        raise ValueError("need n_angular >= 3")
    if not np.all(profile.z > 0.0):
        raise DegenerateProfileError("profile touches the axis (z <= 0)")
    n_p = len(profile)
    phi = 2.0 * math.pi * np.arange(n_angular) / n_angular
    sin_phi, cos_phi = np.sin(phi), np.cos(phi)
    verts = np.empty((n_p * n_angular, 3))
    verts[:, 0] = np.repeat(profile.x, n_angular)
    verts[:, 1] = np.outer(profile.z, sin_phi).ravel()
    verts[:, 2] = np.outer(profile.z, cos_phi).ravel()

    quads = []
    for i in range(n_p - 1):
        base0 = i * n_angular
        base1 = (i + 1) * n_angular
        for j in range(n_angular):
            j1 = (j + 1) % n_angular
            a, b = base0 + j, base1 + j
            c, d = base1 + j1, base0 + j1
            quads.append((a, b, c))
            quads.append((a, c, d))
    faces = np.asarray(quads, dtype=np.int64)
    return Mesh(verts, faces, n_p, n_angular, profile.kind)


def export_obj(mesh: Mesh, sink) -> None:
    """Plain OBJ: `v x y z` then 1-based `f a b c` lines, LF, 17 digits."""
    own = isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__")
    fh = open(sink, "w", newline="\n") if own else sink
    try:
        for v in mesh.vertices:
            fh.write(f"v {v[0]:.17g} {v[1]:.17g} {v[2]:.17g}\n")
        for f in mesh.faces:
            fh.write(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}\n")
    finally:
        if own:
            fh.close()


def export_mesh_csv(mesh: Mesh, sink) -> None:
    """Vertex table `i,j,x,y,z` (profile index, angular index) for plotting."""
    own = isinstance(sink, (str, bytes)) or hasattr(sink, "__fspath__")
    fh = open(sink, "w", newline="\n") if own else sink
    try:
        fh.write("i,j,x,y,z\n")
        for idx, v in enumerate(mesh.vertices):
            i, j = divmod(idx, mesh.n_angular)
            fh.write(f"{i},{j},{v[0]:.17g},{v[1]:.17g},{v[2]:.17g}\n")
    finally:
        if own:
            fh.close()


def parse_obj(source) -> tuple[np.ndarray, np.ndarray]:
    """Read back vertices and 0-based faces from the OBJ text format."""
    own = isinstance(source, (str, bytes)) or hasattr(source, "__fspath__")
    fh = open(source, "r") if own else source
    verts, faces = [], []
    try:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            if parts[0] == "v":
                verts.append([float(p) for p in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(p) - 1 for p in parts[1:4]])
    finally:
        if own:
            fh.close()
    return np.asarray(verts), np.asarray(faces, dtype=np.int64)
