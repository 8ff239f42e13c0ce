"""Elementary meshes: subdivision spheres, discs, cylinders.

Sphere meshes come from midpoint subdivision of a base polyhedron with
re-projection, so they are exactly equivariant under the polyhedron's
rotation group (octahedron: O24 and its subgroups; icosahedron: I60).
"""

import numpy as np

from .mesh import TriMesh, refine
from .symmetry import GOLDEN


def octahedron():
    v = np.array([[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0],
                  [0, 0, 1], [0, 0, -1]], dtype=float)
    t = np.array([[0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4],
                  [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5]])
    return TriMesh(v, t, sphere_radius=1.0)


def icosahedron():
    phi = GOLDEN
    v = []
    for s1 in (1, -1):
        for s2 in (1, -1):
            v.append([0, s1, s2 * phi])
            v.append([s1, s2 * phi, 0])
            v.append([s2 * phi, 0, s1])
    v = np.array(v, dtype=float)
    v /= np.linalg.norm(v[0])
    # faces from the convex hull; hull normals already point outward
    from scipy.spatial import ConvexHull

    hull = ConvexHull(v)
    t = []
    for simplex, eq in zip(hull.simplices, hull.equations):
        a, b, c = simplex
        n = np.cross(v[b] - v[a], v[c] - v[a])
        t.append([a, b, c] if np.dot(n, eq[:3]) > 0 else [a, c, b])
    return TriMesh(v, np.array(t), sphere_radius=1.0)


def tetrahedron():
    v = np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]],
                 dtype=float) / np.sqrt(3.0)
    t = np.array([[0, 1, 2], [0, 2, 3], [0, 3, 1], [1, 3, 2]])
    return TriMesh(v, t, sphere_radius=1.0)


_BASE_BUILDERS = {"octahedron": octahedron, "icosahedron": icosahedron,
                  "tetrahedron": tetrahedron}


def sphere_mesh(radius=1.0, refinement=3, base="icosahedron", group=None):
    """Subdivision sphere of the given radius, optionally orbit-tagged.

    The base polyhedron determines the symmetry: use ``octahedron`` for
    O24/T12 equivariance and ``icosahedron`` (the default, and the more
    accurate area sampler per triangle) for I60 or untagged work.
    """
    mesh = _BASE_BUILDERS[base]()
    for _ in range(refinement):
        mesh = refine(mesh)
    verts = mesh.vertices * radius
    orbit = group.vertex_orbit_tags(verts) if group is not None else None
    return TriMesh(verts, mesh.triangles, sphere_radius=radius, orbit=orbit)


def disc_mesh(radius, n_rings, n_theta=64, plane="z", grading=1.0):
    """Polar disc mesh in a coordinate plane through the origin.

    ``grading`` > 1 concentrates rings near the center.  The integrands
    this feeds are radially symmetric, so a fixed angular count with thin
    annular quads loses no accuracy.
    """
    rings = radius * (np.arange(1, n_rings + 1) / n_rings) ** grading
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    verts = np.zeros((1 + n_rings * n_theta, 3))
    axes = {"z": (0, 1), "x": (1, 2), "y": (2, 0)}[plane]
    for j, r in enumerate(rings):
        s = slice(1 + j * n_theta, 1 + (j + 1) * n_theta)
        verts[s, axes[0]] = r * cos_t
        verts[s, axes[1]] = r * sin_t

    tris = []
    for e in range(n_theta):
        tris.append([0, 1 + e, 1 + (e + 1) % n_theta])
    for j in range(n_rings - 1):
        inner = 1 + j * n_theta
        outer = 1 + (j + 1) * n_theta
        for e in range(n_theta):
            e1 = (e + 1) % n_theta
            tris.append([inner + e, outer + e, outer + e1])
            tris.append([inner + e, outer + e1, inner + e1])
    return TriMesh(verts, np.array(tris))


def cylinder_mesh(radius, half_height, n_theta=64, n_z=32, axis="z"):
    """Open cylinder tube around a coordinate axis through the origin."""
    z = np.linspace(-half_height, half_height, n_z + 1)
    theta = 2 * np.pi * np.arange(n_theta) / n_theta
    verts = np.zeros(((n_z + 1) * n_theta, 3))
    for j, zz in enumerate(z):
        s = slice(j * n_theta, (j + 1) * n_theta)
        if axis == "z":
            verts[s, 0] = radius * np.cos(theta)
            verts[s, 1] = radius * np.sin(theta)
            verts[s, 2] = zz
        else:
            verts[s, 1] = radius * np.cos(theta)
            verts[s, 2] = radius * np.sin(theta)
            verts[s, 0] = zz
    tris = []
    for j in range(n_z):
        for e in range(n_theta):
            a = j * n_theta + e
            b = j * n_theta + (e + 1) % n_theta
            c = (j + 1) * n_theta + (e + 1) % n_theta
            d = (j + 1) * n_theta + e
            tris.append([a, b, c])
            tris.append([a, c, d])
    return TriMesh(verts, np.array(tris))


def planar_patch(n=10, extent=1.0):
    """Square grid patch in the plane z=0 with upward winding."""
    xs = np.linspace(-extent, extent, n + 1)
    gx, gy = np.meshgrid(xs, xs, indexing="ij")
    verts = np.column_stack([gx.ravel(), gy.ravel(), np.zeros(gx.size)])
    tris = []
    for i in range(n):
        for j in range(n):
            a = i * (n + 1) + j
            b = a + 1
            c = a + n + 2
            d = a + n + 1
            tris.append([a, b, c])
            tris.append([a, c, d])
    return TriMesh(verts, np.array(tris))
