"""Oriented triangle meshes with topology queries and refinement.

The mesh is an indexed triangle list: a float array of vertex positions
and an int array of vertex-index triples.  Edge adjacency is built lazily
from the triangle array; there is no halfedge store.  Meshes are immutable
after construction (the arrays are marked read-only), so every query is
safe to share across threads and mutation means building a new mesh.
"""

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import (
    DegenerateTriangle,
    MeshError,
    NonManifoldEdge,
    OrientationConflict,
    UnexpectedBoundary,
    UnreferencedVertex,
    ZeroNormal,
)

# Triangles with area below this fraction of (bbox diagonal)^2 are rejected.
DEGENERATE_AREA_FACTOR = 1e-14


@dataclass
class OrbitTags:
    """Group-orbit bookkeeping for the vertices of an equivariant mesh.

    Attributes
    ----------
    group : RotationGroup
        The acting group (duck-typed; only ``elements`` and
        ``vertex_orbit_tags`` are used from here).
    orbit_id : ndarray of int, shape (n,)
        Orbit index of each vertex.
    element : ndarray of int, shape (n,)
        Index into ``group.elements`` of a rotation mapping the orbit
        representative onto this vertex.  The representative itself
        carries the identity.
    rep_vertex : ndarray of int, shape (n_orbits,)
        Vertex index of each orbit's representative.
    stabilizer : list of ndarray of int
        Per orbit, the element indices fixing the representative point.
        Needed so that symmetrization can keep on-axis vertices on their
        axis.
    """

    group: object
    orbit_id: np.ndarray
    element: np.ndarray
    rep_vertex: np.ndarray
    stabilizer: list

    @property
    def n_orbits(self):
        return len(self.rep_vertex)

    def is_representative(self):
        """Boolean mask over vertices: True at orbit representatives."""
        mask = np.zeros(len(self.orbit_id), dtype=bool)
        mask[self.rep_vertex] = True
        return mask


class TriMesh:
    """Indexed, oriented triangle surface in R^3.

    Parameters
    ----------
    vertices : array_like, shape (n, 3)
        Vertex positions.
    triangles : array_like, shape (m, 3)
        Ordered vertex-index triples.  Consistent winding encodes the
        orientation; all closed meshes built by this package wind
        counter-clockwise seen from outside.
    sphere_radius : float, optional
        When set, the mesh samples the origin-centered sphere of this
        radius and :func:`refine` re-projects new vertices onto it.
    orbit : OrbitTags, optional
        Group-orbit tags for equivariant meshes.
    metadata : dict, optional
        Free-form construction metadata (family parameters, flags).
    """

    def __init__(self, vertices, triangles, sphere_radius=None, orbit=None,
                 metadata=None):
        v = np.ascontiguousarray(vertices, dtype=np.float64)
        t = np.ascontiguousarray(triangles, dtype=np.int64)
        if v.ndim != 2 or v.shape[1] != 3:
            raise MeshError(f"vertices must be (n, 3), got {v.shape}")
        if t.size == 0:
            t = t.reshape(0, 3)
        if t.ndim != 2 or t.shape[1] != 3:
            raise MeshError(f"triangles must be (m, 3), got {t.shape}")
        v.flags.writeable = False
        t.flags.writeable = False
        self.vertices = v
        self.triangles = t
        self.sphere_radius = sphere_radius
        self.orbit = orbit
        self.metadata = dict(metadata) if metadata else {}

    # ------------------------------------------------------------------
    # basic quantities

    @property
    def n_vertices(self):
        return self.vertices.shape[0]

    @property
    def n_triangles(self):
        return self.triangles.shape[0]

    def with_vertices(self, vertices):
        """New mesh with moved vertices and identical connectivity/tags."""
        return TriMesh(vertices, self.triangles, sphere_radius=None,
                       orbit=self.orbit, metadata=self.metadata)

    def corner_positions(self):
        """Positions of the three corners of every triangle, shape (m, 3, 3)."""
        return self.vertices[self.triangles]

    @cached_property
    def triangle_cross(self):
        """Cross product (v1-v0) x (v2-v0) per triangle; length = 2*area."""
        p = self.corner_positions()
        return np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])

    @cached_property
    def triangle_areas(self):
        return 0.5 * np.linalg.norm(self.triangle_cross, axis=1)

    @cached_property
    def triangle_normals(self):
        """Unit normals following the triangle winding."""
        cr = self.triangle_cross
        nrm = np.linalg.norm(cr, axis=1)
        nrm = np.where(nrm == 0.0, 1.0, nrm)
        return cr / nrm[:, None]

    def area(self):
        return float(np.sum(self.triangle_areas))

    def bbox_diagonal(self):
        if self.n_vertices == 0:
            return 0.0
        span = self.vertices.max(axis=0) - self.vertices.min(axis=0)
        return float(np.linalg.norm(span))

    @cached_property
    def _edge_data(self):
        """Unique undirected edges and per-edge triangle multiplicities.

        Returns (edges (E,2) with edges[:,0] < edges[:,1], counts (E,),
        directed_dup flag array over directed edges).
        """
        t = self.triangles
        directed = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        und = np.sort(directed, axis=1)
        edges, counts = np.unique(und, axis=0, return_counts=True)
        return edges, counts, directed

    @property
    def edges(self):
        """Unique undirected edges, shape (E, 2), each row sorted."""
        return self._edge_data[0]

    def edge_lengths(self):
        e = self.edges
        return np.linalg.norm(self.vertices[e[:, 1]] - self.vertices[e[:, 0]],
                              axis=1)

    def max_edge_length(self):
        return float(self.edge_lengths().max())

    @cached_property
    def vertex_neighbors(self):
        """List of neighbor-vertex index arrays (1-ring), per vertex."""
        e = self.edges
        nbr = [[] for _ in range(self.n_vertices)]
        for a, b in e:
            nbr[a].append(b)
            nbr[b].append(a)
        return [np.array(sorted(x), dtype=np.int64) for x in nbr]

    # ------------------------------------------------------------------
    # dual areas and quality

    def cotangents(self):
        """Cotangent of the interior angle at each triangle corner, (m, 3)."""
        p = self.corner_positions()
        double_area = 2.0 * self.triangle_areas
        cots = np.empty((self.n_triangles, 3))
        for c in range(3):
            e1 = p[:, (c + 1) % 3] - p[:, c]
            e2 = p[:, (c + 2) % 3] - p[:, c]
            cots[:, c] = np.einsum("ij,ij->i", e1, e2) / np.where(
                double_area == 0.0, 1.0, double_area)
        return cots

    def vertex_dual_areas(self, kind="mixed"):
        """Dual area per vertex.

        ``barycentric`` assigns one third of each incident triangle.
        ``mixed`` uses the Voronoi piece on non-obtuse triangles and the
        half/quarter split on obtuse ones, which is markedly more accurate
        for curvature estimates on near-regular meshes.
        """
        t = self.triangles
        areas = self.triangle_areas
        out = np.zeros(self.n_vertices)
        if kind == "barycentric":
            np.add.at(out, t.ravel(), np.repeat(areas / 3.0, 3))
            return out
        if kind != "mixed":
            raise ValueError(f"unknown dual area kind {kind!r}")
        cots = self.cotangents()
        p = self.corner_positions()
        sq = np.empty((self.n_triangles, 3))
        for c in range(3):
            d = p[:, (c + 2) % 3] - p[:, (c + 1) % 3]
            sq[:, c] = np.einsum("ij,ij->i", d, d)  # |edge opposite c|^2
        obtuse = cots < 0.0  # corner angle > pi/2
        any_obtuse = obtuse.any(axis=1)
        # Voronoi piece at corner c: (|e_b|^2 cot_b + |e_c|^2 cot_c)/8 for
        # the two edges meeting at c (named by their opposite corners).
        vor = np.empty((self.n_triangles, 3))
        for c in range(3):
            b, a = (c + 1) % 3, (c + 2) % 3
            vor[:, c] = (sq[:, b] * cots[:, b] + sq[:, a] * cots[:, a]) / 8.0
        mixed = np.where(any_obtuse[:, None],
                         np.where(obtuse, 0.5, 0.25) * areas[:, None],
                         vor)
        np.add.at(out, t.ravel(), mixed.ravel())
        return out

    def triangle_quality(self):
        """Per-triangle shape quality in (0, 1]: 4*sqrt(3)*A / sum(l^2)."""
        p = self.corner_positions()
        l2 = np.zeros(self.n_triangles)
        for c in range(3):
            d = p[:, (c + 1) % 3] - p[:, c]
            l2 += np.einsum("ij,ij->i", d, d)
        return 4.0 * np.sqrt(3.0) * self.triangle_areas / np.where(
            l2 == 0.0, 1.0, l2)


@dataclass
class TopologyReport:
    """Counts and derived topology of a validated mesh."""

    V: int
    E: int
    F: int
    euler_char: int
    genus: int
    boundary_loops: int
    components: int
    orientable: bool = True

    def __post_init__(self):
        if self.euler_char != self.V - self.E + self.F:
            raise MeshError("inconsistent Euler characteristic")


def validate(mesh, allow_boundary=False):
    """Check manifoldness, orientation and degeneracy; report topology.

    Parameters
    ----------
    mesh : TriMesh
        Mesh with at least one triangle.
    allow_boundary : bool
        Permit edges incident to exactly one triangle.

    Returns
    -------
    TopologyReport

    Raises
    ------
    NonManifoldEdge, OrientationConflict, DegenerateTriangle,
    UnexpectedBoundary, UnreferencedVertex, MeshError
    """
    if mesh.n_triangles < 1:
        raise MeshError("mesh has no triangles")
    t = mesh.triangles
    if t.min() < 0 or t.max() >= mesh.n_vertices:
        raise MeshError("triangle vertex index out of range")
    if (np.diff(np.sort(t, axis=1), axis=1) == 0).any():
        raise DegenerateTriangle("triangle with repeated vertex")

    referenced = np.zeros(mesh.n_vertices, dtype=bool)
    referenced[t.ravel()] = True
    if not referenced.all():
        missing = int(np.flatnonzero(~referenced)[0])
        raise UnreferencedVertex(f"vertex {missing} unused by any triangle")

    floor = DEGENERATE_AREA_FACTOR * mesh.bbox_diagonal() ** 2
    areas = mesh.triangle_areas
    if (areas <= floor).any():
        bad = int(np.argmin(areas))
        raise DegenerateTriangle(
            f"triangle {bad} area {areas[bad]:.3e} below threshold {floor:.3e}")

    edges, counts, directed = mesh._edge_data
    if (counts > 2).any():
        bad = edges[np.argmax(counts)]
        raise NonManifoldEdge(
            f"edge {tuple(bad)} shared by {int(counts.max())} triangles")
    d_unique, d_counts = np.unique(directed, axis=0, return_counts=True)
    if (d_counts > 1).any():
        bad = d_unique[np.argmax(d_counts)]
        raise OrientationConflict(
            f"directed edge {tuple(bad)} appears {int(d_counts.max())} times")

    boundary_edges = edges[counts == 1]
    if len(boundary_edges) and not allow_boundary:
        raise UnexpectedBoundary(
            f"{len(boundary_edges)} boundary edges in a mesh declared closed")

    n = mesh.n_vertices
    adj = coo_matrix(
        (np.ones(len(edges)), (edges[:, 0], edges[:, 1])), shape=(n, n))
    n_comp, labels = connected_components(adj, directed=False)
    # only components containing triangles count (all vertices referenced)
    components = len(np.unique(labels[t[:, 0]]))

    if len(boundary_edges):
        badj = coo_matrix((np.ones(len(boundary_edges)),
                           (boundary_edges[:, 0], boundary_edges[:, 1])),
                          shape=(n, n))
        nb, blabels = connected_components(badj, directed=False)
        bverts = np.unique(boundary_edges.ravel())
        boundary_loops = len(np.unique(blabels[bverts]))
    else:
        boundary_loops = 0

    V = int(referenced.sum())
    E = len(edges)
    F = mesh.n_triangles
    chi = V - E + F
    # chi = 2*components - 2*genus_total - boundary_loops for orientable
    # surfaces; orientation consistency was established above.
    two_g = 2 * components - chi - boundary_loops
    if two_g < 0 or two_g % 2 != 0:
        raise MeshError(
            f"no consistent genus for chi={chi}, components={components}, "
            f"loops={boundary_loops}")
    return TopologyReport(V=V, E=E, F=F, euler_char=chi, genus=two_g // 2,
                          boundary_loops=boundary_loops,
                          components=components, orientable=True)


def refine(mesh):
    """Split every triangle 1-to-4 at edge midpoints.

    New vertices of a sphere-tagged mesh are re-projected onto the sphere.
    Orbit tags are re-derived from the acting group so that refinement of
    an equivariant mesh stays equivariant.
    """
    v = mesh.vertices
    t = mesh.triangles
    edges = mesh.edges
    n = mesh.n_vertices

    # map undirected edge -> new midpoint vertex index
    key = edges[:, 0].astype(np.int64) * n + edges[:, 1]
    order = np.argsort(key)
    sorted_key = key[order]
    midpoints = 0.5 * (v[edges[:, 0]] + v[edges[:, 1]])
    if mesh.sphere_radius is not None:
        r = np.linalg.norm(midpoints, axis=1)
        midpoints = midpoints * (mesh.sphere_radius / r)[:, None]
    new_v = np.vstack([v, midpoints[order]])

    def midpoint_index(a, b):
        lo, hi = np.minimum(a, b), np.maximum(a, b)
        k = lo.astype(np.int64) * n + hi
        return n + np.searchsorted(sorted_key, k)

    a, b, c = t[:, 0], t[:, 1], t[:, 2]
    mab = midpoint_index(a, b)
    mbc = midpoint_index(b, c)
    mca = midpoint_index(c, a)
    new_t = np.concatenate([
        np.stack([a, mab, mca], axis=1),
        np.stack([b, mbc, mab], axis=1),
        np.stack([c, mca, mbc], axis=1),
        np.stack([mab, mbc, mca], axis=1),
    ])
    orbit = None
    if mesh.orbit is not None:
        orbit = mesh.orbit.group.vertex_orbit_tags(new_v)
    return TriMesh(new_v, new_t, sphere_radius=mesh.sphere_radius,
                   orbit=orbit, metadata=mesh.metadata)


def vertex_normals(mesh):
    """Area-weighted vertex normals, unit length, following the winding.

    Raises
    ------
    ZeroNormal
        If incident triangle normal vectors cancel exactly at a vertex.
    """
    acc = np.zeros((mesh.n_vertices, 3))
    cr = mesh.triangle_cross  # length 2*area: area weighting for free
    for c in range(3):
        np.add.at(acc, mesh.triangles[:, c], cr)
    nrm = np.linalg.norm(acc, axis=1)
    referenced = np.zeros(mesh.n_vertices, dtype=bool)
    referenced[mesh.triangles.ravel()] = True
    scale = max(mesh.bbox_diagonal(), 1.0)
    bad = referenced & (nrm <= 1e-300 * scale)
    if bad.any():
        raise ZeroNormal(f"normals cancel at vertex {int(np.flatnonzero(bad)[0])}")
    nrm = np.where(nrm == 0.0, 1.0, nrm)
    return acc / nrm[:, None]


def concatenate(meshes, metadata=None):
    """Disjoint union of meshes (indices shifted); tags are dropped."""
    offsets = np.cumsum([0] + [m.n_vertices for m in meshes[:-1]])
    verts = np.vstack([m.vertices for m in meshes])
    tris = np.vstack([m.triangles + off for m, off in zip(meshes, offsets)])
    return TriMesh(verts, tris, metadata=metadata)


def merge_duplicate_vertices(mesh, tol):
    """Weld vertices closer than ``tol`` and drop the duplicates.

    Used when assembling surfaces from patches that share boundary rings;
    ``tol`` must be far below the mesh edge length.
    """
    from scipy.spatial import cKDTree

    v = mesh.vertices
    pairs = cKDTree(v).query_pairs(tol, output_type="ndarray")
    parent = np.arange(mesh.n_vertices)

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    root = np.array([find(i) for i in range(mesh.n_vertices)])
    keep = np.unique(root)
    remap = np.zeros(mesh.n_vertices, dtype=np.int64)
    remap[keep] = np.arange(len(keep))
    new_v = v[keep]
    new_t = remap[root[mesh.triangles]]
    return TriMesh(new_v, new_t, sphere_radius=mesh.sphere_radius,
                   metadata=mesh.metadata)
