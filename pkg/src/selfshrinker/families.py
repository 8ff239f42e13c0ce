"""Sweepout families: spheres, retraction curves, cones, doubled surfaces.

All two-sheet surfaces are assembled from an equivariant chart of the
unit sphere with circular holes around the neck points.  The chart is
built cell by cell over the spherical Voronoi tessellation of the neck
set, with boundary samples shared exactly between adjacent cells, so the
vertex set is equivariant by construction.
"""

import math
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np

from .errors import InvalidParams
from .gaussian import GaussKernelConfig, gaussian_area
from .mesh import TriMesh, validate
from .primitives import sphere_mesh
from .symmetry import build_group, symmetrize

# radius clamps: below R_MIN a sphere is a point slice, beyond R_MAX the
# Gaussian weight has underflowed (exp(-400) at |x| = 40)
R_MIN = 1e-3
R_MAX = 40.0

SPHERE_F_MAX = 4.0 / math.e  # max of r^2 exp(-r^2/4), attained at r = 2
DEGENERATE_F_FRACTION = 1e-6

# cap parameter below which a pinched slice is meshed as disjoint spheres
_CAP_PARAM_MIN = 1e-3

_SCHEME_TABLE = {
    "t12-z3": ("T12", 3),
    "o24-z4": ("O24", 4),
    "o24-z3": ("O24", 3),
    "i60-z5": ("I60", 5),
    "i60-z3": ("I60", 3),
}


def shrinking_sphere_parameter():
    """The t with tan(pi t/2) = 2, where the sphere family hits radius 2."""
    return (2.0 / math.pi) * math.atan(2.0)


def param_radius(t):
    """Radius tan(pi t / 2) of the concentric-sphere family at t."""
    if t <= 0.0:
        return 0.0
    if t >= 1.0:
        return math.inf
    return math.tan(0.5 * math.pi * t)


@dataclass
class PlatonicScheme:
    """One doubled-Platonic configuration: group, neck rays, genus."""

    name: str
    group: object
    neck_axis_order: int
    neck_points: np.ndarray  # (k, 3) unit rays, one group orbit

    @property
    def k(self):
        return len(self.neck_points)

    @property
    def expected_genus(self):
        return self.k - 1


@lru_cache(maxsize=None)
def build_scheme(name):
    """Construct one of the five doubled-Platonic schemes by name."""
    key = name.strip().lower()
    if key not in _SCHEME_TABLE:
        raise InvalidParams(
            f"unknown scheme {name!r}; choose from {sorted(_SCHEME_TABLE)}")
    group_name, order = _SCHEME_TABLE[key]
    group = build_group(group_name)
    orbits = group.ray_orbits(order)
    # deterministic orbit choice: the one owning the ray that maximizes
    # (coordinate sum, then lexicographic order)
    best = None
    for orb in orbits:
        scores = [(float(r.sum()), tuple(np.round(r, 9))) for r in orb]
        top = max(scores)
        if best is None or top > best[0]:
            best = (top, orb)
    return PlatonicScheme(name=key, group=group, neck_axis_order=order,
                          neck_points=np.array(best[1]))


def scheme_names():
    return sorted(_SCHEME_TABLE)


# ----------------------------------------------------------------------
# spherical cell complex


def _slerp(a, b, t):
    """Geodesic interpolation between unit vectors; exact at t=0 and t=1."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    t = np.asarray(t, float)
    dot = np.clip(np.sum(a * b, axis=-1), -1.0, 1.0)
    theta = np.arccos(dot)
    small = theta < 1e-9
    theta_safe = np.where(small, 1.0, theta)
    wa = np.sin((1.0 - t) * theta_safe) / np.sin(theta_safe)
    wb = np.sin(t * theta_safe) / np.sin(theta_safe)
    wa = np.where(small, 1.0 - t, wa)
    wb = np.where(small, t, wb)
    return wa[..., None] * a + wb[..., None] * b


class CellComplex:
    """Spherical Voronoi cells of the neck points with shared sampling.

    Attributes
    ----------
    boundary_points : (B, 3) unit vectors shared between adjacent cells.
    loops : list of (L,) int arrays; per cell, the ordered boundary loop
        (corners interleaved with edge samples, CCW seen from outside).
    inradius : float, angular distance from a cell center to its edges.
    """

    def __init__(self, scheme, n_edge):
        self.scheme = scheme
        self.n_edge = n_edge
        necks = scheme.neck_points
        k = len(necks)

        cos_ang = np.clip(necks @ necks.T, -1.0, 1.0)
        np.fill_diagonal(cos_ang, -1.0)
        angles = np.arccos(cos_ang)

        corner_pos = []  # global corner table
        corner_ids = {}

        def corner_id(c):
            keyed = tuple(np.round(c, 8))
            if keyed not in corner_ids:
                for q, cid in corner_ids.items():
                    if np.linalg.norm(np.array(q) - c) < 1e-7:
                        return cid
                corner_ids[keyed] = len(corner_pos)
                corner_pos.append(c)
            return corner_ids[keyed]

        cell_corners = []
        for i in range(k):
            p = necks[i]
            amin = angles[i].min()
            nbr = np.flatnonzero(angles[i] < amin + 1e-6)
            # order neighbors CCW around p as seen from outside
            e1 = necks[nbr[0]] - p * (necks[nbr[0]] @ p)
            e1 /= np.linalg.norm(e1)
            e2 = np.cross(p, e1)
            az = np.arctan2(necks[nbr] @ e2, necks[nbr] @ e1)
            nbr = nbr[np.argsort(az)]
            ids = []
            for a in range(len(nbr)):
                qa, qb = necks[nbr[a]], necks[nbr[(a + 1) % len(nbr)]]
                c = np.cross(p - qa, p - qb)
                c /= np.linalg.norm(c)
                if c @ p < 0:
                    c = -c
                ids.append(corner_id(c))
            cell_corners.append(ids)

        corner_pos = np.array(corner_pos)
        n_corners = len(corner_pos)

        # one sample table per undirected corner pair
        edge_samples = {}
        sample_count = 0

        def edge_ids(ca, cb):
            nonlocal sample_count
            lo, hi = min(ca, cb), max(ca, cb)
            if (lo, hi) not in edge_samples:
                ts = np.arange(1, n_edge) / n_edge
                pts = _slerp(corner_pos[lo], corner_pos[hi], ts)
                edge_samples[(lo, hi)] = (n_corners + sample_count, pts)
                sample_count += len(pts)
            start, pts = edge_samples[(lo, hi)]
            ids = np.arange(start, start + len(pts))
            return (ids, pts) if ca == lo else (ids[::-1], pts[::-1])

        loops = []
        for ids in cell_corners:
            loop = []
            for a in range(len(ids)):
                ca, cb = ids[a], ids[(a + 1) % len(ids)]
                loop.append(np.array([ca]))
                loop.append(edge_ids(ca, cb)[0])
            loops.append(np.concatenate(loop))

        pts = [corner_pos]
        for (lo, hi), (start, p) in sorted(edge_samples.items(),
                                           key=lambda kv: kv[1][0]):
            pts.append(p)
        self.boundary_points = np.vstack(pts)
        self.loops = loops
        self.centers = necks

        # angular inradius: distance from a center to its edge great circles
        p = necks[0]
        ids = cell_corners[0]
        rin = np.inf
        for a in range(len(ids)):
            ca, cb = corner_pos[ids[a]], corner_pos[ids[(a + 1) % len(ids)]]
            nrm = np.cross(ca, cb)
            nrm /= np.linalg.norm(nrm)
            rin = min(rin, math.asin(abs(float(p @ nrm))))
        self.inradius = rin

        # circumradius: center-to-corner angle (equal for all by symmetry)
        self.circumradius = float(
            np.arccos(np.clip(corner_pos[cell_corners[0][0]] @ necks[0], -1, 1)))


@lru_cache(maxsize=None)
def _complex_for(scheme_name, n_edge):
    return CellComplex(build_scheme(scheme_name), n_edge)


@dataclass
class SphereChart:
    """Unit-sphere mesh with one circular hole per neck point.

    ``profile_coord`` is the retraction-frozen angular coordinate used to
    evaluate offset profiles: in the hole-opening phase it equals the
    angular distance to the owning neck point; during retraction it stays
    frozen while the geometry moves.
    """

    points: np.ndarray        # (N, 3) unit
    triangles: np.ndarray     # (M, 3)
    cap_rings: list           # per neck, ordered vertex ids of the hole rim
    profile_coord: np.ndarray  # (N,)
    cap_angle: float
    blend: float


def build_chart(scheme, cap_angle, blend, n_edge, n_rings, grading=1.4,
                freeze_angle=None):
    """Equivariant sphere-minus-caps chart.

    Parameters
    ----------
    cap_angle : float
        Angular radius of the holes at ``blend=0``; must stay inside the
        cell inradius.
    blend : float in [0, 1]
        Retraction blend: 0 keeps circular holes, 1 morphs the hole rim
        onto the full cell boundary (the one-skeleton).
    freeze_angle : float, optional
        When set, ``profile_coord`` uses this hole angle instead of
        ``cap_angle`` (profiles frozen at the start of the retraction).
    """
    cx = _complex_for(scheme.name, n_edge)
    if not 0.0 < cap_angle < cx.inradius:
        raise InvalidParams(
            f"cap angle {cap_angle:.4f} outside (0, {cx.inradius:.4f})")
    base_angle = cap_angle if freeze_angle is None else freeze_angle

    all_points = [cx.boundary_points]
    all_coords = [np.full(len(cx.boundary_points), np.nan)]
    tris = []
    cap_rings = []
    offset = len(cx.boundary_points)

    for ci, loop in enumerate(cx.loops):
        p = cx.centers[ci]
        b = cx.boundary_points[loop]  # (L, 3)
        L = len(loop)
        d = np.arccos(np.clip(b @ p, -1.0, 1.0))  # (L,) corner/edge distances
        circ = _slerp(p[None, :], b, cap_angle / d)
        rim = _slerp(circ, b, blend)

        grade = (np.arange(n_rings + 1) / n_rings) ** grading
        # rings 0..n_rings-1 are cell-local; ring n_rings is the shared loop
        ring_ids = np.empty((n_rings + 1, L), dtype=np.int64)
        for j in range(n_rings):
            ring = _slerp(rim, b, grade[j])
            ring_ids[j] = offset + np.arange(L)
            offset += L
            all_points.append(ring)
            # frozen radial coordinate for offset profiles
            coord = base_angle + (d - base_angle) * grade[j]
            all_coords.append(coord)
        ring_ids[n_rings] = loop

        for j in range(n_rings):
            a = ring_ids[j]
            c = ring_ids[j + 1]
            a1 = np.roll(a, -1)
            c1 = np.roll(c, -1)
            tris.append(np.stack([a, c, c1], axis=1))
            tris.append(np.stack([a, c1, a1], axis=1))
        cap_rings.append(ring_ids[0])

    points = np.vstack(all_points)
    coords = np.concatenate(all_coords)
    # boundary points: distance to the nearest neck (well defined: they
    # are equidistant from the adjacent cells' centers)
    bmask = np.isnan(coords)
    ang = np.arccos(np.clip(points[bmask] @ cx.centers.T, -1.0, 1.0))
    coords[bmask] = ang.min(axis=1)
    return SphereChart(points=points, triangles=np.vstack(tris),
                       cap_rings=cap_rings, profile_coord=coords,
                       cap_angle=cap_angle, blend=blend)


# ----------------------------------------------------------------------
# assemblies


def _orient_outward(verts, tris):
    """Flip all windings if the total signed volume is negative."""
    p = verts[tris]
    vol = np.einsum("ij,ij->i", p[:, 0], np.cross(p[:, 1], p[:, 2])).sum() / 6.0
    if vol < 0:
        tris = tris[:, [0, 2, 1]]
    return tris


def pinched_mesh(chart, radii_out, radii_in):
    """Two radial graphs over the chart joined along the hole rims.

    ``radii_out`` and ``radii_in`` are per-chart-vertex radii that must
    agree on every cap ring (the sheets meet there).
    """
    n = len(chart.points)
    cap = np.unique(np.concatenate(chart.cap_rings))
    if not np.allclose(radii_out[cap], radii_in[cap], atol=1e-12):
        raise InvalidParams("sheet radii disagree on the junction rings")
    keep = np.setdiff1d(np.arange(n), cap)
    remap = np.empty(n, dtype=np.int64)
    remap[keep] = n + np.arange(len(keep))
    remap[cap] = cap  # shared junction vertices

    verts = np.vstack([radii_out[:, None] * chart.points,
                       radii_in[keep, None] * chart.points[keep]])
    tris_out = chart.triangles
    tris_in = remap[chart.triangles][:, [0, 2, 1]]
    tris = _orient_outward(verts, np.vstack([tris_out, tris_in]))
    return TriMesh(verts, tris)


def tube_mesh(chart, r_in, r_out, n_tube):
    """Two spheres over the chart joined by radial tubes over the rims."""
    n = len(chart.points)
    verts = [r_out * chart.points, r_in * chart.points]
    tris = [chart.triangles, chart.triangles[:, [0, 2, 1]] + n]
    offset = 2 * n
    for ring in chart.cap_rings:
        L = len(ring)
        lam = r_in + (r_out - r_in) * np.arange(1, n_tube) / n_tube
        rows = [ring + n]  # inner sphere rim
        for l in lam:
            verts.append(l * chart.points[ring])
            rows.append(offset + np.arange(L))
            offset += L
        rows.append(ring)  # outer sphere rim
        for a, c in zip(rows[:-1], rows[1:]):
            a1 = np.roll(a, -1)
            c1 = np.roll(c, -1)
            tris.append(np.stack([a, c, c1], axis=1))
            tris.append(np.stack([a, c1, a1], axis=1))
    verts = np.vstack(verts)
    tris = _orient_outward(verts, np.vstack(tris))
    return TriMesh(verts, tris)


def disjoint_spheres(radii, refinement, base):
    """Union of concentric subdivision spheres (clamped radii)."""
    meshes = []
    for r in radii:
        meshes.append(sphere_mesh(r, refinement=refinement, base=base))
    offsets = np.cumsum([0] + [m.n_vertices for m in meshes[:-1]])
    verts = np.vstack([m.vertices for m in meshes])
    tris = np.vstack([m.triangles + o for m, o in zip(meshes, offsets)])
    return TriMesh(verts, tris)


# ----------------------------------------------------------------------
# profiles


def log_cutoff(t, r):
    """Logarithmic cutoff: 1 for r >= t, 0 for r <= t^2, log-linear between.

    Vectorized in ``r``; requires 0 < t < 1.
    """
    if not 0.0 < t < 1.0:
        raise InvalidParams(f"cutoff parameter t={t} outside (0, 1)")
    r = np.asarray(r, dtype=float)
    with np.errstate(divide="ignore"):
        mid = (2.0 * math.log(t) - np.log(np.maximum(r, 1e-300))) / math.log(t)
    out = np.where(r >= t, 1.0, np.where(r <= t * t, 0.0, mid))
    return out if out.ndim else float(out)


@dataclass
class CutoffProfile:
    """Log-cutoff at parameter ``t`` plus a reparameterization ``f``.

    ``f`` maps a sweep coordinate to a sphere radius and must be strictly
    increasing with derivative bounded below by ``f_lower_bound``.
    """

    t: float
    f: object = None
    f_lower_bound: float = 0.0

    def __call__(self, r):
        return log_cutoff(self.t, r)


def bump_eta(t, s, eps1, amplitude):
    """Smooth neck-size bump on [0,1] x [eps1,1], zero on the boundary."""
    if s <= eps1 or s >= 1.0 or t <= 0.0 or t >= 1.0:
        return 0.0
    val = amplitude * math.sin(math.pi * t) * math.sin(
        math.pi * (s - eps1) / (1.0 - eps1))
    return min(max(val, 0.0), 1.0)


def tan_radius_map(eps1):
    """The radius reparameterization used by the parameterized estimate.

    f(x) = tan((pi/2)(T(1-eps1) + x(1-eps1))) maps the sweep coordinate
    near 0 to sphere radii near (but below) 2; f' >= C > 0 on the domain.
    """
    T = shrinking_sphere_parameter()

    def f(x):
        return param_radius(T * (1.0 - eps1) + x * (1.0 - eps1))

    # derivative at the left end of a symmetric domain is the lower bound
    return f


# ----------------------------------------------------------------------
# family configuration and slices


@dataclass
class FamilyConfig:
    """Resolution and estimate parameters shared by the slice generators."""

    refinement: int = 3
    eps1: float = 0.05
    neck_amplitude: float = 0.02
    cutoff_R: float = 0.3        # outer angle of the log-cutoff ramp
    alpha: float = 0.5           # |offset| bound for the tube estimates
    alpha2: float = 0.2          # sweep-coordinate bound, parameterized form
    grading: float = 1.4
    decay_power: float = 2.0     # amplitude decay during retraction
    eta_min: float = 1e-3        # below: necks collapse to disjoint spheres
    tag_slices: bool = False     # attach orbit tags (and symmetrize) per slice
    gauss: GaussKernelConfig = field(default_factory=GaussKernelConfig)

    @property
    def n_edge(self):
        return 2 ** self.refinement

    @property
    def n_rings(self):
        return 2 ** self.refinement

    @property
    def n_tube(self):
        return max(4, 2 ** (self.refinement - 1))

    def sphere_refinement(self):
        return self.refinement + 1


@dataclass
class SweepoutSlice:
    """A mesh tagged with its family parameters and construction data."""

    mesh: TriMesh
    params: dict
    family_tag: str
    degenerate: bool
    F: float
    metadata: dict = field(default_factory=dict)

    def topology(self, allow_boundary=False):
        return validate(self.mesh, allow_boundary=allow_boundary)


def _finish_slice(mesh, params, tag, cfg, scheme=None, metadata=None):
    if cfg.tag_slices and scheme is not None:
        orbit = scheme.group.vertex_orbit_tags(mesh.vertices)
        mesh = TriMesh(mesh.vertices, mesh.triangles, orbit=orbit,
                       metadata=mesh.metadata)
        mesh = symmetrize(mesh, scheme.group)
    F = gaussian_area(mesh, cfg.gauss)
    degenerate = F < DEGENERATE_F_FRACTION * SPHERE_F_MAX
    return SweepoutSlice(mesh=mesh, params=params, family_tag=tag,
                         degenerate=degenerate, F=F,
                         metadata=metadata or {})


# ----------------------------------------------------------------------
# generators


def sphere_family(t, refinement=4, group=None, base="icosahedron",
                  gauss=None):
    """Concentric-sphere sweepout: radius tan(pi t/2), clamped to
    [R_MIN, R_MAX] with the clamp recorded in the metadata."""
    if not 0.0 <= t <= 1.0:
        raise InvalidParams(f"t={t} outside [0, 1]")
    r = param_radius(t)
    clamped = not (R_MIN <= r <= R_MAX)
    mesh = sphere_mesh(min(max(r, R_MIN), R_MAX), refinement=refinement,
                       base=base, group=group)
    F = gaussian_area(mesh, gauss or GaussKernelConfig())
    return SweepoutSlice(
        mesh=mesh, params={"t": t}, family_tag="sphere",
        degenerate=F < DEGENERATE_F_FRACTION * SPHERE_F_MAX or clamped,
        F=F, metadata={"radius": r, "clamped": clamped})


def retraction_curves(scheme, tau, n_edge=16):
    """The k closed curves sweeping from the neck points to the skeleton.

    For tau <= 1/2 the curves are geodesic circles of angular radius
    2*tau*inradius around the neck points; beyond, the circles morph onto
    the cell boundaries, ending at (twice) the one-skeleton at tau = 1.
    """
    if not 0.0 <= tau <= 1.0:
        raise InvalidParams(f"tau={tau} outside [0, 1]")
    cx = _complex_for(scheme.name, n_edge)
    curves = []
    for ci, loop in enumerate(cx.loops):
        p = cx.centers[ci]
        b = cx.boundary_points[loop]
        d = np.arccos(np.clip(b @ p, -1.0, 1.0))
        if tau <= 0.5:
            rho = 2.0 * tau * cx.inradius
            curves.append(_slerp(p[None, :], b, rho / d))
        else:
            circ = _slerp(p[None, :], b, cx.inradius / d)
            curves.append(_slerp(circ, b, 2.0 * tau - 1.0))
    return curves


def cone_segment(curves, a, b, n_radial=8):
    """Ruled radial surface over each curve between tan-parameter radii.

    Returns a mesh with two boundary loops per curve; at ``a == b`` the
    strip collapses and the (triangle-free) mesh is flagged in metadata.
    """
    if not 0.0 < a <= b < 1.0:
        raise InvalidParams(f"need 0 < a <= b < 1, got a={a}, b={b}")
    r0, r1 = param_radius(a), min(param_radius(b), R_MAX)
    verts = []
    tris = []
    offset = 0
    for curve in curves:
        L = len(curve)
        lam = r0 + (r1 - r0) * np.arange(n_radial + 1) / n_radial
        rows = []
        for l in lam:
            verts.append(l * curve)
            rows.append(offset + np.arange(L))
            offset += L
        if a < b:
            for lo, hi in zip(rows[:-1], rows[1:]):
                lo1 = np.roll(lo, -1)
                hi1 = np.roll(hi, -1)
                tris.append(np.stack([lo, lo1, hi1], axis=1))
                tris.append(np.stack([lo, hi1, hi], axis=1))
    verts = np.vstack(verts)
    tris = np.vstack(tris) if tris else np.zeros((0, 3), dtype=np.int64)
    return TriMesh(verts, tris, metadata={"collapsed": a == b})


def doubled_family(scheme, t, s, cfg=None):
    """Two spheres joined by k necks; the paper-facing two-parameter grid.

    For s >= eps1 the slice is two spheres at the family radii with holes
    sized by the neck bump, joined by radial tubes.  For s < eps1 the
    radii freeze at their s=eps1 values and the slice runs the
    hole-opening/retraction estimate down to a graph sliver at s=0.
    """
    cfg = cfg or FamilyConfig()
    if not (0.0 <= t <= 1.0 and 0.0 <= s <= 1.0):
        raise InvalidParams(f"(t={t}, s={s}) outside the unit square")
    base = "icosahedron" if scheme.group.name == "I60" else "octahedron"

    if s >= cfg.eps1:
        a = t * (1.0 - s)
        b = t + s * (1.0 - t)
        ra = min(max(param_radius(a), R_MIN), R_MAX)
        rb = min(max(param_radius(b), R_MIN), R_MAX)
        eta = bump_eta(t, s, cfg.eps1, cfg.neck_amplitude)
        params = {"t": t, "s": s, "a": a, "b": b, "eta": eta}
        if eta <= cfg.eta_min or rb - ra < 1e-6:
            mesh = disjoint_spheres([ra, rb], cfg.sphere_refinement(), base)
            return _finish_slice(mesh, params, "doubled", cfg, scheme,
                                 {"structure": "disjoint-spheres"})
        cx = _complex_for(scheme.name, cfg.n_edge)
        rho = min(2.0 * eta, 1.0) * cx.inradius
        chart = build_chart(scheme, rho, 0.0, cfg.n_edge, cfg.n_rings,
                            cfg.grading)
        mesh = tube_mesh(chart, ra, rb, cfg.n_tube)
        return _finish_slice(mesh, params, "doubled", cfg, scheme,
                             {"structure": "tube", "cap_angle": rho})

    # extension strip: frozen radii, hole-opening + retraction
    a = t * (1.0 - cfg.eps1)
    b = t + cfg.eps1 * (1.0 - t)
    ra = min(max(param_radius(a), R_MIN), R_MAX)
    rb = min(max(param_radius(b), R_MIN), R_MAX)
    tau = 1.0 - s / cfg.eps1
    params = {"t": t, "s": s, "a": a, "b": b, "tau": tau}
    return _pinched_slice(scheme, ra, rb, tau, cfg, params, "doubled", base)


def _pinched_slice(scheme, r_in, r_out, tau, cfg, params, tag, base):
    """Hole-opening (tau <= 1/2) then retraction (tau > 1/2) over the
    radius-2 sphere bridging sheet radii ``r_in`` and ``r_out``."""
    d_in, d_out = r_in - 2.0, r_out - 2.0
    m = float(np.clip(0.0, min(d_in, d_out), max(d_in, d_out)))
    if tau <= 0.5:
        c = 2.0 * tau * cfg.cutoff_R
        if c <= _CAP_PARAM_MIN:
            mesh = disjoint_spheres([r_in, r_out], cfg.sphere_refinement(),
                                    base)
            return _finish_slice(mesh, params, tag, cfg, scheme,
                                 {"structure": "disjoint-spheres",
                                  "segments": scheme.k})
        blend, decay, freeze = 0.0, 1.0, None
        cap = c * c
    else:
        c = cfg.cutoff_R
        blend = 2.0 * tau - 1.0
        decay = (1.0 - blend) ** cfg.decay_power
        freeze = c * c
        cap = c * c
    chart = build_chart(scheme, cap, blend, cfg.n_edge, cfg.n_rings,
                        cfg.grading, freeze_angle=freeze)
    prof = log_cutoff(c, chart.profile_coord)
    radii_out = 2.0 + m + decay * (d_out - m) * prof
    radii_in = 2.0 + m + decay * (d_in - m) * prof
    mesh = pinched_mesh(chart, radii_out, radii_in)
    return _finish_slice(mesh, params, tag, cfg, scheme,
                         {"structure": "pinched", "cap_angle": cap,
                          "cutoff": c, "blend": blend, "junction": 2.0 + m})


def catenoid_family(scheme, eps, delta, t, cfg=None):
    """Neck-opening sweepout of the tube between offset spheres 2+delta
    and 2+eps; opposite-sign offsets cut both sheets off logarithmically,
    same-sign offsets cut only the moving sheet."""
    cfg = cfg or FamilyConfig()
    if eps <= delta:
        raise InvalidParams(f"need eps > delta, got eps={eps}, delta={delta}")
    if max(abs(eps), abs(delta)) > cfg.alpha:
        raise InvalidParams(f"offsets exceed alpha={cfg.alpha}")
    if not 0.0 <= t <= 1.0:
        raise InvalidParams(f"t={t} outside [0, 1]")
    base = "icosahedron" if scheme.group.name == "I60" else "octahedron"
    params = {"t": t, "eps": eps, "delta": delta}
    return _pinched_slice(scheme, 2.0 + delta, 2.0 + eps, t, cfg, params,
                          "catenoid", base)


def catenoid_family_with_parameter(scheme, s, t, eta, cfg=None):
    """Two-parameter pasted estimate: at t=0 the slice is the boundary of
    the tube between sphere radii f(s) and f(s+eta)."""
    cfg = cfg or FamilyConfig()
    if eta <= 0.0:
        raise InvalidParams("eta must be positive")
    if not -cfg.alpha2 <= s <= cfg.alpha2 - eta:
        raise InvalidParams(
            f"s={s} outside [{-cfg.alpha2}, {cfg.alpha2 - eta}]")
    if not 0.0 <= t <= 1.0:
        raise InvalidParams(f"t={t} outside [0, 1]")
    f = tan_radius_map(cfg.eps1)
    base = "icosahedron" if scheme.group.name == "I60" else "octahedron"
    params = {"s": s, "t": t, "eta": eta}
    return _pinched_slice(scheme, f(s), f(s + eta), t, cfg, params,
                          "catenoid-param", base)
