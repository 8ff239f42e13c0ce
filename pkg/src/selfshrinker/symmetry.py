"""Finite rotation subgroups of SO(3) and mesh equivariance utilities.

Groups are generated by matrix closure from two generators and carry an
explicit element list plus the census of rotation axes with their
isotropy orders.  Standard coordinates are used throughout: the cube/
octahedron axes are the coordinate axes, the tetrahedron is inscribed in
the cube, and the icosahedron has vertices at cyclic permutations of
(0, +-1, +-phi).
"""

import re
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import MissingOrbitTags, NonDivisible
from .mesh import OrbitTags

GOLDEN = (1.0 + np.sqrt(5.0)) / 2.0

# matrices agreeing to this tolerance are the same group element
_MATRIX_TOL = 1e-9
# points closer than this are the same orbit point
POINT_MERGE_TOL = 1e-10


def rotation_matrix(axis, angle):
    """Rotation by ``angle`` about ``axis`` (Rodrigues)."""
    u = np.asarray(axis, dtype=float)
    u = u / np.linalg.norm(u)
    K = np.array([[0.0, -u[2], u[1]],
                  [u[2], 0.0, -u[0]],
                  [-u[1], u[0], 0.0]])
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)


@dataclass
class AxisClass:
    """All rotation axes of one isotropy order.

    ``rays`` holds both unit directions of every axis, so a class with
    ``n`` axes lists ``2n`` rays.
    """

    order: int
    rays: np.ndarray  # (n_rays, 3)

    @property
    def ray_count(self):
        return len(self.rays)

    @property
    def axis_count(self):
        return len(self.rays) // 2


@dataclass
class BranchData:
    """Branch points on a quotient surface: (isotropy order, count) pairs."""

    points: list

    def __post_init__(self):
        for m, count in self.points:
            if m < 2:
                raise ValueError(f"branch order {m} < 2")
            if count < 0:
                raise ValueError("negative branch point count")


class RotationGroup:
    """Finite subgroup of SO(3) with explicit elements and axis census."""

    def __init__(self, name, elements, axis_classes):
        self.name = name
        self.elements = np.ascontiguousarray(elements)
        self.elements.flags.writeable = False
        self.axis_classes = axis_classes
        self._identity_index = int(np.argmin(
            [np.abs(e - np.eye(3)).max() for e in self.elements]))

    @property
    def order(self):
        return len(self.elements)

    @property
    def identity_index(self):
        return self._identity_index

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"RotationGroup({self.name}, |G|={self.order})"

    # ------------------------------------------------------------------

    def element_index(self, matrix, tol=_MATRIX_TOL):
        """Index of ``matrix`` in the element list, or -1."""
        diffs = np.abs(self.elements - matrix[None]).max(axis=(1, 2))
        i = int(np.argmin(diffs))
        return i if diffs[i] < tol else -1

    def multiply_index(self, i, j):
        """Index of elements[i] @ elements[j]."""
        k = self.element_index(self.elements[i] @ self.elements[j])
        if k < 0:
            raise ValueError("group not closed; generation bug")
        return k

    def inverse_index(self, i):
        return self.element_index(self.elements[i].T)

    def orbit(self, point):
        """Deduplicated orbit of a point; |orbit| * |stabilizer| = |G|."""
        pts = np.einsum("kij,j->ki", self.elements, np.asarray(point, float))
        return _dedup_points(pts, POINT_MERGE_TOL)

    def stabilizer_indices(self, point, tol=POINT_MERGE_TOL):
        pts = np.einsum("kij,j->ki", self.elements, np.asarray(point, float))
        d = np.linalg.norm(pts - np.asarray(point, float)[None], axis=1)
        return np.flatnonzero(d < max(tol, tol * np.linalg.norm(point)))

    def rays(self):
        """All singular rays (unit directions), stacked over axis classes."""
        if not self.axis_classes:
            return np.zeros((0, 3))
        return np.vstack([c.rays for c in self.axis_classes])

    def ray_orbits(self, order):
        """Orbits of the rays of one isotropy class, as arrays of rays.

        For most schemes the class is a single orbit; for the tetrahedral
        3-fold class the eight rays split into two orbits of four.
        """
        cls = next(c for c in self.axis_classes if c.order == order)
        rays = cls.rays
        tree = cKDTree(rays)
        n = len(rays)
        parent = list(range(n))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for g in self.elements:
            mapped = rays @ g.T
            d, j = tree.query(mapped)
            if d.max() > 1e-8:
                raise ValueError("axis rays not closed under the group")
            for a, b in enumerate(j):
                ra, rb = find(a), find(int(b))
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        roots = np.array([find(i) for i in range(n)])
        return [rays[roots == r] for r in np.unique(roots)]

    # ------------------------------------------------------------------

    def vertex_orbit_tags(self, positions, tol=None):
        """Derive :class:`OrbitTags` for an exactly equivariant point set.

        Every group element must permute ``positions`` within ``tol``.
        """
        pos = np.asarray(positions, dtype=float)
        n = len(pos)
        if tol is None:
            scale = float(np.abs(pos).max()) if n else 1.0
            tol = 1e-7 * max(scale, 1.0)
        tree = cKDTree(pos)
        perms = np.empty((self.order, n), dtype=np.int64)
        for k, g in enumerate(self.elements):
            d, j = tree.query(pos @ g.T)
            if d.max() > tol:
                raise ValueError(
                    f"point set is not equivariant under element {k} "
                    f"(max displacement {d.max():.3e} > {tol:.3e})")
            if len(np.unique(j)) != n:
                raise ValueError("group action is not a permutation; "
                                 "duplicate points or tolerance too large")
            perms[k] = j

        parent = np.arange(n)

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for k in range(self.order):
            for a in range(n):
                ra, rb = find(a), find(perms[k, a])
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
        roots = np.array([find(i) for i in range(n)])
        reps = np.unique(roots)
        orbit_of = np.searchsorted(reps, roots)

        element = np.full(n, -1, dtype=np.int64)
        stabilizers = []
        for o, rep in enumerate(reps):
            members = perms[:, rep]  # vertex hit by each element
            stab = np.flatnonzero(members == rep)
            stabilizers.append(stab)
            # first element reaching each member wins; representative gets
            # the identity because perms[identity] is the identity map
            for k in np.argsort(np.abs(np.arange(self.order) - self.identity_index)):
                w = members[k]
                if element[w] < 0:
                    element[w] = k
        if (element < 0).any():
            raise ValueError("orbit tagging failed to cover all vertices")
        return OrbitTags(group=self, orbit_id=orbit_of, element=element,
                         rep_vertex=reps, stabilizer=stabilizers)


def _dedup_points(points, tol):
    out = []
    for p in points:
        if not any(np.linalg.norm(p - q) < max(tol, tol * np.linalg.norm(q))
                   for q in out):
            out.append(p)
    return np.array(out)


def _closure(generators):
    """All products of the generators (matrix BFS with dedup)."""
    elements = [np.eye(3)]

    def index_of(m):
        for i, e in enumerate(elements):
            if np.abs(e - m).max() < _MATRIX_TOL:
                return i
        return -1

    frontier = list(generators)
    for g in frontier:
        if index_of(g) < 0:
            elements.append(g)
    while frontier:
        new = []
        for g in frontier:
            for e in list(elements):
                for m in (g @ e, e @ g):
                    if index_of(m) < 0:
                        elements.append(m)
                        new.append(m)
        frontier = new
        if len(elements) > 200:
            raise ValueError("group closure did not terminate; bad generators")
    return np.array(elements)


def _axis_classes_from_elements(elements):
    """Census of rotation axes grouped by isotropy order."""
    lines = {}  # canonical line key -> [direction, count of non-identity rotations]
    for e in elements:
        tr = np.trace(e)
        if tr > 3.0 - 1e-9:
            continue  # identity
        angle = np.arccos(np.clip((tr - 1.0) / 2.0, -1.0, 1.0))
        if angle < np.pi - 1e-9:
            u = np.array([e[2, 1] - e[1, 2], e[0, 2] - e[2, 0],
                          e[1, 0] - e[0, 1]]) / (2.0 * np.sin(angle))
        else:
            # 180-degree rotation: axis from the +1 eigenvector of (R+I)/2
            m = (e + np.eye(3)) / 2.0
            u = m[:, int(np.argmax(np.linalg.norm(m, axis=0)))]
            u = u / np.linalg.norm(u)
        # canonical representative of the line {u, -u}
        v = np.round(u / np.linalg.norm(u), 9)
        for comp in v:
            if abs(comp) > 1e-9:
                if comp < 0:
                    v = -v
                break
        key = tuple(np.round(v, 7))
        if key not in lines:
            lines[key] = [u / np.linalg.norm(u), 0]
        lines[key][1] += 1

    by_order = {}
    for direction, count in lines.values():
        m = count + 1  # cyclic subgroup fixing the axis includes identity
        by_order.setdefault(m, []).append(direction)
    classes = []
    for m in sorted(by_order):
        dirs = np.array(by_order[m])
        rays = np.vstack([dirs, -dirs])
        classes.append(AxisClass(order=m, rays=rays))
    return classes


_GROUP_ORDERS = {"T12": 12, "O24": 24, "I60": 60}


def build_group(name):
    """Construct a rotation group by name.

    Accepted names: ``T12``, ``O24``, ``I60``, ``C<n>`` (cyclic) and
    ``D<n>`` (dihedral), case-insensitive.
    """
    key = name.strip().upper()
    if key in ("T12", "O24", "I60"):
        if key == "T12":
            gens = [rotation_matrix([1, 1, 1], 2 * np.pi / 3),
                    rotation_matrix([0, 0, 1], np.pi)]
        elif key == "O24":
            gens = [rotation_matrix([0, 0, 1], np.pi / 2),
                    rotation_matrix([1, 1, 1], 2 * np.pi / 3)]
        else:
            gens = [rotation_matrix([0, 1, GOLDEN], 2 * np.pi / 5),
                    rotation_matrix([0, 0, 1], np.pi)]
        elements = _closure(gens)
        if len(elements) != _GROUP_ORDERS[key]:
            raise ValueError(
                f"{key} closure produced {len(elements)} elements")
        return RotationGroup(key, elements, _axis_classes_from_elements(elements))

    m = re.fullmatch(r"C(\d+)", key)
    if m:
        n = int(m.group(1))
        if n < 1:
            raise ValueError("cyclic order must be >= 1")
        elements = np.array([rotation_matrix([0, 0, 1], 2 * np.pi * k / n)
                             for k in range(n)])
        classes = _axis_classes_from_elements(elements) if n > 1 else []
        return RotationGroup(f"C{n}", elements, classes)

    m = re.fullmatch(r"D(\d+)", key)
    if m:
        n = int(m.group(1))
        if n < 2:
            raise ValueError("dihedral order must be >= 2")
        elements = [rotation_matrix([0, 0, 1], 2 * np.pi * k / n)
                    for k in range(n)]
        elements += [rotation_matrix(
            [np.cos(np.pi * k / n), np.sin(np.pi * k / n), 0], np.pi)
            for k in range(n)]
        elements = np.array(elements)
        return RotationGroup(f"D{n}", elements,
                             _axis_classes_from_elements(elements))

    raise ValueError(f"unknown group name {name!r}")


# ----------------------------------------------------------------------
# equivariance operations


def orbit_points(group, point):
    """Deduplicated group orbit of a point (functional form of .orbit)."""
    return group.orbit(point)


def symmetrize(mesh, group):
    """Project a tagged mesh onto the nearest exactly equivariant one.

    Each orbit representative is replaced by the average of the pulled-back
    member positions (then projected onto the fixed subspace of its
    stabilizer, which keeps on-axis vertices on their axis), and every
    member is re-derived by applying its tagged group element.
    """
    tags = mesh.orbit
    if tags is None:
        raise MissingOrbitTags("mesh carries no orbit tags")
    if tags.group is not group and getattr(tags.group, "name", None) != group.name:
        raise MissingOrbitTags(
            f"mesh tagged for {getattr(tags.group, 'name', '?')}, "
            f"symmetrize called with {group.name}")
    els = group.elements
    pulled = np.einsum("vji,vj->vi", els[tags.element], mesh.vertices)
    n_orbits = tags.n_orbits
    sums = np.zeros((n_orbits, 3))
    np.add.at(sums, tags.orbit_id, pulled)
    counts = np.bincount(tags.orbit_id, minlength=n_orbits)
    reps = sums / counts[:, None]
    for o, stab in enumerate(tags.stabilizer):
        if len(stab) > 1:
            proj = els[stab].mean(axis=0)
            reps[o] = proj @ reps[o]
    new_vertices = np.einsum("vij,vj->vi", els[tags.element],
                             reps[tags.orbit_id])
    return mesh.with_vertices(new_vertices)


def symmetry_error(mesh, group):
    """Max over elements of the vertex-set displacement under the action."""
    tree = cKDTree(mesh.vertices)
    worst = 0.0
    for g in group.elements:
        d, _ = tree.query(mesh.vertices @ g.T)
        worst = max(worst, float(d.max()))
    return worst


def riemann_hurwitz_chi(sheets, chi_quotient, branch):
    """Euler characteristic of a branched cover with ``sheets`` sheets.

    Each quotient branch point of isotropy order ``m`` lifts to
    ``sheets/m`` points, each contributing ``m - 1`` to the defect.
    """
    if sheets < 1:
        raise ValueError("sheets must be >= 1")
    points = branch.points if isinstance(branch, BranchData) else list(branch)
    total = 0
    for m, count in points:
        if sheets % m != 0:
            raise NonDivisible(f"{sheets} sheets not divisible by order {m}")
        total += count * (sheets // m) * (m - 1)
    return sheets * chi_quotient - total


def singular_set_distance(mesh, group):
    """Minimum distance from mesh vertices to the union of axis rays."""
    rays = group.rays()
    if len(rays) == 0:
        return float("inf")
    x = mesh.vertices
    r2 = np.einsum("ij,ij->i", x, x)
    along = x @ rays.T  # (n, n_rays)
    along = np.maximum(along, 0.0)  # behind the origin: nearest point is 0
    d2 = r2[:, None] - along**2
    return float(np.sqrt(np.maximum(d2, 0.0).min()))
