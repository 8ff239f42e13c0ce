"""Exception types raised across the package."""


class MeshError(Exception):
    """Base class for mesh construction and validation failures."""


class NonManifoldEdge(MeshError):
    """An edge is shared by more than two triangles."""


class OrientationConflict(MeshError):
    """Two triangles traverse the same edge in the same direction."""


class DegenerateTriangle(MeshError):
    """A triangle has (numerically) zero area or a repeated vertex."""


class UnexpectedBoundary(MeshError):
    """The mesh has boundary edges but the caller required a closed mesh."""


class UnreferencedVertex(MeshError):
    """A vertex is not used by any triangle."""


class ZeroNormal(MeshError):
    """Incident triangle normals cancel exactly at a vertex."""


class ParseError(MeshError):
    """A mesh file could not be parsed; carries the offending line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedFeature(MeshError):
    """The mesh file uses a feature outside the triangles-only subset."""


class MissingOrbitTags(Exception):
    """An equivariant operation was called on a mesh without orbit tags."""


class NonDivisible(Exception):
    """Sheet count is not divisible by a branch isotropy order."""


class IllConditionedFit(Exception):
    """The local quadric fit stencil is numerically rank-deficient."""


class InvalidParams(Exception):
    """Family parameters outside their declared domain."""


class SolverError(Exception):
    """Base class for shrinker-solver failures."""

    def __init__(self, message, report=None, mesh=None):
        super().__init__(message)
        self.report = report
        self.mesh = mesh


class GenusChanged(SolverError):
    """A neck pinched or sheets merged during the solve."""

    def __init__(self, message, iteration=None, report=None, mesh=None):
        super().__init__(message, report=report, mesh=mesh)
        self.iteration = iteration


class MeshQualityCollapse(SolverError):
    """Triangle quality fell below the configured floor."""


class MaxIterations(SolverError):
    """Iteration budget exhausted before reaching the residual tolerance."""
