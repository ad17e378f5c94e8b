"""
Combinatorial ideal triangulations of punctured surfaces with boundary.

A triangulation is a list of oriented triangles whose sides are labelled by
edge identifiers.  Each face lists its three sides counterclockwise; a side
``-e`` traverses the edge ``e`` against its intrinsic tail-to-head direction.
Interior edges occur in exactly two face slots with opposite flags, boundary
edges in exactly one.

Vertices (the punctures) are recovered by gluing edge endpoints: the end of
slot ``j`` of a face is identified with the start of slot ``j+1``.

Example::

    >>> t = parse_triangulation("face T e1 e2 e3")
    >>> (t.genus, t.num_punctures, t.num_boundary_components)
    (0, 3, 1)
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from importlib import resources


class TriangulationError(ValueError):
    """Raised when a triangulation file or value is malformed."""


class _UnionFind:
    def __init__(self, items):
        self.parent = {x: x for x in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


@dataclass(frozen=True)
class Corner:
    """Corner ``slot`` of face ``face``: between slots ``slot`` and ``slot+1``."""
    face: int
    slot: int
    vertex: int
    edges: tuple      # (edge of slot j, edge of slot j+1)
    opposite: str     # edge of slot j+2

    @property
    def key(self):
        return (self.face, self.slot)


@dataclass(frozen=True)
class Triangulation:
    """
    An oriented ideal triangulation.

    ``faces`` holds tuples ``(face_id, ((edge, sign), (edge, sign), (edge, sign)))``
    with ``sign`` in ``{+1, -1}``; ``edges`` is the indexing order.
    """
    faces: tuple
    edges: tuple

    def __post_init__(self):
        _validate(self)

    # -- basic lookups -------------------------------------------------
    @cached_property
    def edge_index(self):
        return {e: i for i, e in enumerate(self.edges)}

    @cached_property
    def face_index(self):
        return {fid: i for i, (fid, _) in enumerate(self.faces)}

    @property
    def num_faces(self):
        return len(self.faces)

    @property
    def num_edges(self):
        return len(self.edges)

    def slot(self, f, j):
        """(edge, sign) of slot ``j`` of face index ``f``."""
        return self.faces[f][1][j % 3]

    @cached_property
    def occurrences(self):
        """edge -> list of (face index, slot, sign)."""
        occ = {e: [] for e in self.edges}
        for f, (_, sides) in enumerate(self.faces):
            for j, (e, sg) in enumerate(sides):
                occ[e].append((f, j, sg))
        return occ

    @cached_property
    def boundary_edges(self):
        return tuple(e for e in self.edges if len(self.occurrences[e]) == 1)

    @cached_property
    def interior_edges(self):
        return tuple(e for e in self.edges if len(self.occurrences[e]) == 2)

    def is_boundary(self, e):
        return len(self.occurrences[e]) == 1

    # -- vertices ------------------------------------------------------
    @cached_property
    def _endpoint_classes(self):
        uf = _UnionFind([(e, end) for e in self.edges for end in (0, 1)])
        for _, sides in self.faces:
            for j in range(3):
                e, sg = sides[j]
                e2, sg2 = sides[(j + 1) % 3]
                end_of_j = (e, 1 if sg > 0 else 0)
                start_of_next = (e2, 0 if sg2 > 0 else 1)
                uf.union(end_of_j, start_of_next)
        roots = {}
        label = {}
        for e in self.edges:
            for end in (0, 1):
                r = uf.find((e, end))
                if r not in roots:
                    roots[r] = len(roots)
                label[(e, end)] = roots[r]
        return label, len(roots)

    @property
    def num_vertices(self):
        return self._endpoint_classes[1]

    def endpoints(self, e):
        """(tail vertex, head vertex) of edge ``e``."""
        label = self._endpoint_classes[0]
        return label[(e, 0)], label[(e, 1)]

    def slot_start(self, f, j):
        e, sg = self.slot(f, j)
        tail, head = self.endpoints(e)
        return tail if sg > 0 else head

    def slot_end(self, f, j):
        e, sg = self.slot(f, j)
        tail, head = self.endpoints(e)
        return head if sg > 0 else tail

    @cached_property
    def corners(self):
        out = []
        for f, (_, sides) in enumerate(self.faces):
            for j in range(3):
                out.append(Corner(f, j, self.slot_end(f, j),
                                  (sides[j][0], sides[(j + 1) % 3][0]),
                                  sides[(j + 2) % 3][0]))
        return tuple(out)

    def corner(self, f, j):
        return self.corners[3 * f + (j % 3)]

    # -- boundary structure --------------------------------------------
    @cached_property
    def boundary_components(self):
        """Tuple of tuples of boundary edges, one per component of the boundary."""
        bd = self.boundary_edges
        uf = _UnionFind(bd)
        at_vertex = {}
        for e in bd:
            for v in self.endpoints(e):
                at_vertex.setdefault(v, []).append(e)
        for es in at_vertex.values():
            for e in es[1:]:
                uf.union(es[0], e)
        comps = {}
        for e in bd:
            comps.setdefault(uf.find(e), []).append(e)
        return tuple(tuple(c) for c in comps.values())

    @cached_property
    def boundary_vertices(self):
        return frozenset(v for e in self.boundary_edges for v in self.endpoints(e))

    @cached_property
    def inner_punctures(self):
        return tuple(v for v in range(self.num_vertices) if v not in self.boundary_vertices)

    def component_vertices(self, comp):
        return sorted({v for e in self.boundary_components[comp] for v in self.endpoints(e)})

    # -- invariants ----------------------------------------------------
    @cached_property
    def num_components(self):
        uf = _UnionFind(range(self.num_faces))
        for occ in self.occurrences.values():
            if len(occ) == 2:
                uf.union(occ[0][0], occ[1][0])
        return len({uf.find(f) for f in range(self.num_faces)})

    @property
    def euler_characteristic(self):
        return self.num_vertices - self.num_edges + self.num_faces

    @property
    def num_punctures(self):
        return self.num_vertices

    @property
    def num_inner_punctures(self):
        return len(self.inner_punctures)

    @property
    def num_boundary_components(self):
        return len(self.boundary_components)

    @property
    def genus(self):
        g2 = 2 * self.num_components - self.num_boundary_components - self.euler_characteristic
        return g2 // 2

    @property
    def dimension_exponent(self):
        """3g - 3 + s + n_boundary, the exponent of N in the irreducible dimension."""
        return 3 * self.genus - 3 + self.num_punctures + self.num_boundary_components

    def summary(self):
        return {
            "genus": self.genus,
            "punctures": self.num_punctures,
            "innerPunctures": self.num_inner_punctures,
            "boundaryComponents": self.num_boundary_components,
            "boundaryEdges": list(self.boundary_edges),
            "eulerCharacteristic": self.euler_characteristic,
        }

    def summary_json(self):
        return json.dumps(self.summary(), sort_keys=True)

    # -- adjacency -----------------------------------------------------
    @cached_property
    def adjacency(self):
        """a[i][i'] = number of faces where edge i' follows edge i counterclockwise."""
        n = self.num_edges
        a = [[0] * n for _ in range(n)]
        idx = self.edge_index
        for _, sides in self.faces:
            for j in range(3):
                a[idx[sides[j][0]]][idx[sides[(j + 1) % 3][0]]] += 1
        return a

    def serialize(self):
        lines = [f"edge {e}" for e in self.edges]
        for fid, sides in self.faces:
            names = [(e if sg > 0 else "-" + e) for e, sg in sides]
            lines.append("face " + fid + " " + " ".join(names))
        return "\n".join(lines) + "\n"

    def reindexed(self, order):
        """Same triangulation with edge indexing ``order``."""
        if sorted(order) != sorted(self.edges):
            raise TriangulationError("indexing must be a permutation of the edges")
        return Triangulation(self.faces, tuple(order))

    def cut(self, e, names=None):
        """
        Cut along interior edge ``e``.

        The slot with flag ``+1`` receives the new boundary edge ``names[0]``,
        the other one ``names[1]``.  Indexing puts both where ``e`` was.
        """
        if e not in self.edge_index or self.is_boundary(e):
            raise TriangulationError(f"{e!r} is not an interior edge")
        a, b = names or (e + ".a", e + ".b")
        faces = []
        for fid, sides in self.faces:
            new = []
            for x, sg in sides:
                if x == e:
                    x = a if sg > 0 else b
                new.append((x, sg))
            faces.append((fid, tuple(new)))
        edges = []
        for x in self.edges:
            edges.extend([a, b] if x == e else [x])
        return Triangulation(tuple(faces), tuple(edges))


def _validate(t):
    if not t.faces:
        raise TriangulationError("empty triangulation")
    if len(set(t.edges)) != len(t.edges):
        raise TriangulationError("duplicate edge declaration")
    seen_faces = set()
    uses = {e: [] for e in t.edges}
    for fid, sides in t.faces:
        if fid in seen_faces:
            raise TriangulationError(f"duplicate face id {fid!r}")
        seen_faces.add(fid)
        if len(sides) != 3:
            raise TriangulationError(f"face {fid!r} must have three sides")
        names = [e for e, _ in sides]
        if len(set(names)) < 3:
            raise TriangulationError(f"face {fid!r} is self-folded")
        for e, sg in sides:
            if e not in uses:
                raise TriangulationError(f"undeclared edge {e!r}")
            if sg not in (1, -1):
                raise TriangulationError("direction flag must be +1 or -1")
            uses[e].append(sg)
    for e, sgs in uses.items():
        if len(sgs) == 0:
            raise TriangulationError(f"edge {e!r} is not used by any face")
        if len(sgs) > 2:
            raise TriangulationError(f"edge {e!r} used {len(sgs)} times")
        if len(sgs) == 2 and sgs[0] == sgs[1]:
            raise TriangulationError(f"edge {e!r} glued with equal direction flags (non-orientable)")
    for comp in t.boundary_components:
        if not comp:
            raise TriangulationError("boundary component without vertices")
    g2 = 2 * t.num_components - t.num_boundary_components - t.euler_characteristic
    if g2 < 0 or g2 % 2:
        raise TriangulationError("inconsistent Euler characteristic")


def parse_triangulation(text):
    """
    Parse the line-based triangulation format.

    INPUT: ``text`` with lines ``edge <id>``, ``face <fid> <e1> <e2> <e3>``
    and ``#`` comments.

    OUTPUT: a validated :class:`Triangulation`.
    """
    edges = []
    declared = set()
    faces = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "edge" and len(parts) == 2:
            if parts[1] in declared:
                raise TriangulationError(f"line {lineno}: edge {parts[1]!r} declared twice")
            declared.add(parts[1])
            edges.append(parts[1])
        elif parts[0] == "face" and len(parts) == 5:
            sides = []
            for tok in parts[2:]:
                sg = -1 if tok.startswith("-") else 1
                name = tok.lstrip("-")
                if not name or tok.startswith("--"):
                    raise TriangulationError(f"line {lineno}: bad edge token {tok!r}")
                if name not in declared:
                    declared.add(name)
                    edges.append(name)
                sides.append((name, sg))
            faces.append((parts[1], tuple(sides)))
        else:
            raise TriangulationError(f"line {lineno}: malformed line {raw!r}")
    if not faces:
        raise TriangulationError("empty input")
    return Triangulation(tuple(faces), tuple(edges))


def load_triangulation(path):
    with open(path, encoding="utf-8") as fh:
        return parse_triangulation(fh.read())


FIXTURES = ("triangle", "square", "annulus", "punctured_disc", "holed_torus", "pentagon")


def fixture_text(name):
    return resources.files("skeintorus.fixtures").joinpath(name + ".tri").read_text(encoding="utf-8")


def fixture(name):
    """Bundled triangulation by name (see ``FIXTURES``)."""
    name = name.lower().replace("-", "_")
    aliases = {"once_holed_torus": "holed_torus", "punctureddisc": "punctured_disc"}
    return parse_triangulation(fixture_text(aliases.get(name, name)))


def corner_table(t):
    return list(t.corners)


def adjacency_counts(t):
    return [row[:] for row in t.adjacency]
