"""Mesh files: OBJ geometry plus a JSON sidecar for the structure OBJ
cannot carry (topology tag, boundary loops, orientability)."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..curve import PolylineCurve
from ..errors import MeshError
from .mesh import TriangleMesh


def sidecar_path(obj_path: str | Path) -> Path:
    return Path(str(obj_path) + ".json")


def save_mesh(mesh: TriangleMesh, obj_path: str | Path) -> None:
    if mesh.dim != 3:
        raise MeshError("OBJ export requires meshes in R^3")
    lines = []
    for v in mesh.vertices:
        lines.append(f"v {float(v[0])!r} {float(v[1])!r} {float(v[2])!r}")
    for t in mesh.triangles:
        lines.append(f"f {t[0] + 1} {t[1] + 1} {t[2] + 1}")
    Path(obj_path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    sidecar = {
        "topology": mesh.topology,
        "boundary_loops": [list(map(int, loop)) for loop in mesh.boundary_loops],
        "orientable": mesh.orientable,
    }
    sidecar_path(obj_path).write_text(json.dumps(sidecar), encoding="utf-8")


def load_mesh(obj_path: str | Path) -> TriangleMesh:
    verts = []
    tris = []
    for line in Path(obj_path).read_text(encoding="utf-8").splitlines():
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "v":
            verts.append([float(x) for x in parts[1:4]])
        elif parts[0] == "f":
            idx = [int(tok.split("/")[0]) - 1 for tok in parts[1:4]]
            tris.append(idx)
    side = sidecar_path(obj_path)
    if not side.exists():
        raise MeshError(f"missing mesh sidecar {side}")
    meta = json.loads(side.read_text(encoding="utf-8"))
    vertices = np.asarray(verts, dtype=np.float64)
    loops = [list(map(int, loop)) for loop in meta["boundary_loops"]]
    curves = [
        PolylineCurve(dim=3, vertices=vertices[loop], closed=True) for loop in loops
    ]
    return TriangleMesh(
        vertices=vertices,
        triangles=np.asarray(tris, dtype=np.int64),
        boundary_loops=loops,
        boundary_curves=curves,
        topology=meta["topology"],
        orientable=bool(meta["orientable"]),
    )
