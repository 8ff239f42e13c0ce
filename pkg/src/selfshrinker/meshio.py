"""OBJ and ascii-PLY readers/writers, triangles only.

Coordinates are printed with 17 significant digits so that write followed
by read reproduces every float64 bit-exactly.
"""

import os

import numpy as np

from .errors import ParseError, UnsupportedFeature
from .mesh import TriMesh


def write_mesh(mesh, path):
    """Write a mesh to ``path``; format chosen by extension (.obj/.ply)."""
    ext = os.path.splitext(path)[1].lower()
    if ext == ".obj":
        _write_obj(mesh, path)
    elif ext == ".ply":
        _write_ply(mesh, path)
    else:
        raise UnsupportedFeature(f"unknown mesh extension {ext!r}")


def read_mesh(path):
    """Read a mesh from ``path``; format chosen by extension (.obj/.ply)."""
    ext = os.path.splitext(path)[1].lower()
    if ext == ".obj":
        return _read_obj(path)
    if ext == ".ply":
        return _read_ply(path)
    raise UnsupportedFeature(f"unknown mesh extension {ext!r}")


def _write_obj(mesh, path):
    with open(path, "w") as fh:
        for x, y, z in mesh.vertices:
            fh.write(f"v {x:.17g} {y:.17g} {z:.17g}\n")
        for a, b, c in mesh.triangles + 1:
            fh.write(f"f {a} {b} {c}\n")


def _read_obj(path):
    verts = []
    tris = []
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            tag = parts[0]
            if tag == "v":
                if len(parts) < 4:
                    raise ParseError("vertex with fewer than 3 coordinates",
                                     line=lineno)
                try:
                    verts.append([float(p) for p in parts[1:4]])
                except ValueError as exc:
                    raise ParseError(str(exc), line=lineno) from exc
            elif tag == "f":
                idx = parts[1:]
                if len(idx) != 3:
                    raise UnsupportedFeature(
                        f"line {lineno}: face with {len(idx)} vertices "
                        "(triangles only)")
                try:
                    # accept v, v/vt, v/vt/vn references; keep the vertex id
                    tris.append([int(p.split("/")[0]) - 1 for p in idx])
                except ValueError as exc:
                    raise ParseError(str(exc), line=lineno) from exc
            # other tags (vn, vt, o, g, s, usemtl, ...) are ignored
    if not verts:
        raise ParseError("no vertices found", line=0)
    return TriMesh(np.array(verts), np.array(tris, dtype=np.int64).reshape(-1, 3))


def _write_ply(mesh, path):
    with open(path, "w") as fh:
        fh.write("ply\nformat ascii 1.0\n")
        fh.write(f"element vertex {mesh.n_vertices}\n")
        fh.write("property double x\nproperty double y\nproperty double z\n")
        fh.write(f"element face {mesh.n_triangles}\n")
        fh.write("property list uchar int vertex_indices\n")
        fh.write("end_header\n")
        for x, y, z in mesh.vertices:
            fh.write(f"{x:.17g} {y:.17g} {z:.17g}\n")
        for a, b, c in mesh.triangles:
            fh.write(f"3 {a} {b} {c}\n")


def _read_ply(path):
    with open(path) as fh:
        lines = fh.readlines()
    if not lines or lines[0].strip() != "ply":
        raise ParseError("missing 'ply' magic", line=1)
    n_vert = n_face = None
    body_start = None
    elements = []  # (name, count) in declaration order
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if line.startswith("comment"):
            continue
        if line.startswith("format"):
            if "ascii" not in line:
                raise UnsupportedFeature(f"line {lineno}: only ascii PLY supported")
        elif line.startswith("element"):
            parts = line.split()
            if len(parts) != 3:
                raise ParseError("malformed element line", line=lineno)
            elements.append((parts[1], int(parts[2])))
            if parts[1] == "vertex":
                n_vert = int(parts[2])
            elif parts[1] == "face":
                n_face = int(parts[2])
            else:
                raise UnsupportedFeature(
                    f"line {lineno}: element {parts[1]!r} not supported")
        elif line == "end_header":
            body_start = lineno  # 0-based index into lines is lineno-1+1
            break
    if body_start is None:
        raise ParseError("missing end_header", line=len(lines))
    if n_vert is None or n_face is None:
        raise ParseError("header lacks vertex or face element", line=body_start)
    if [name for name, _ in elements] != ["vertex", "face"]:
        raise UnsupportedFeature("elements must be vertex then face")

    body = lines[body_start:]
    if len(body) < n_vert + n_face:
        raise ParseError("file truncated", line=len(lines))
    verts = np.empty((n_vert, 3))
    for i in range(n_vert):
        lineno = body_start + 1 + i
        parts = body[i].split()
        if len(parts) < 3:
            raise ParseError("vertex with fewer than 3 coordinates", line=lineno)
        try:
            verts[i] = [float(p) for p in parts[:3]]
        except ValueError as exc:
            raise ParseError(str(exc), line=lineno) from exc
    tris = np.empty((n_face, 3), dtype=np.int64)
    for i in range(n_face):
        lineno = body_start + 1 + n_vert + i
        parts = body[n_vert + i].split()
        try:
            count = int(parts[0])
        except (ValueError, IndexError) as exc:
            raise ParseError("malformed face line", line=lineno) from exc
        if count != 3 or len(parts) < 4:
            raise UnsupportedFeature(
                f"line {lineno}: face with {count} vertices (triangles only)")
        tris[i] = [int(p) for p in parts[1:4]]
    return TriMesh(verts, tris)
