"""Numerical construction of equivariant self-shrinkers in Gaussian R^3."""

from .mesh import TriMesh, TopologyReport, OrbitTags, validate, refine, vertex_normals
from .meshio import read_mesh, write_mesh
from .gaussian import (GaussKernelConfig, ResidualField, gaussian_area,
                       gaussian_area_gradient, mean_curvature,
                       shrinker_residual)
from .symmetry import (RotationGroup, AxisClass, BranchData, build_group,
                       orbit_points, symmetrize, symmetry_error,
                       riemann_hurwitz_chi, singular_set_distance)

__version__ = "0.1.0"
