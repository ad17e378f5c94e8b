"""
Stated simple diagrams in normal coordinates.

A diagram is a nonnegative corner weight per ``(face, corner)`` together with
a word over ``-+`` on each boundary edge.  Corner ``j`` of a face sits
between slots ``j`` and ``j+1``; its ``w`` parallel strands are nested with
depth 0 closest to the vertex.

Points of ``D`` on an edge are indexed by their edge position ``0..n-1``
along the tail-to-head direction of the edge.  On slot ``j`` of a face the
slot position runs along the counterclockwise boundary of the face, and the
points of corner ``j-1`` come first.

States are ``+1``/``-1``.  A segment of corner ``j`` is bad when its end on
slot ``j+1`` carries ``-`` and its end on slot ``j`` carries ``+``.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .lattice import (LatticeError, check_switch, constant_weights,
                      phi_from_train_track, phi_to_train_track, vscale,
                      weights_from_json, weights_to_json)


class DiagramError(ValueError):
    pass


class StateOverflow(RuntimeError):
    """Raised when an enumeration exceeds its budget."""


DEFAULT_BUDGET = 1 << 20


def _sign(ch):
    if ch == "+":
        return 1
    if ch == "-":
        return -1
    raise DiagramError(f"bad state symbol {ch!r}")


def _word(states):
    return "".join("+" if s > 0 else "-" for s in states)


@dataclass(frozen=True)
class Segment:
    face: int
    corner: int
    depth: int
    forward: bool      # traversed from slot ``corner`` to slot ``corner+1``


@dataclass(frozen=True)
class Component:
    """
    A connected component.  ``points[i]`` and ``points[i+1]`` (cyclically for
    closed curves) are joined by ``segments[i]``.
    """
    kind: str                  # "arc" or "closed"
    points: tuple              # ((edge, position), ...)
    segments: tuple

    @property
    def is_arc(self):
        return self.kind == "arc"

    def __len__(self):
        return len(self.segments)


class StatedDiagram:
    """
    Stated simple diagram ``(D, s)`` on the triangulated surface ``t``.

    ``weights`` maps ``(face index, corner)`` to a nonnegative integer;
    ``states`` maps boundary edge ids to words over ``-+`` in the
    counterclockwise direction of the boundary.
    """

    def __init__(self, t, weights=None, states=None, check=True):
        self.t = t
        w = {c.key: 0 for c in t.corners}
        for key, x in (weights or {}).items():
            if key not in w:
                raise DiagramError(f"unknown corner {key!r}")
            w[key] = int(x)
        self.weights = w
        self.states = {e: str(s) for e, s in (states or {}).items() if s}
        self._components = None
        if check:
            self.validate()

    # ------------------------------------------------------------------
    # basic structure

    def slot_count(self, f, j):
        w = self.weights
        return w[(f, (j - 1) % 3)] + w[(f, j)]

    def count(self, e):
        f, j, _ = self.t.occurrences[e][0]
        return self.slot_count(f, j)

    def intersection_vector(self):
        return tuple(self.count(e) for e in self.t.edges)

    def total_weight(self):
        return sum(self.intersection_vector())

    def is_empty(self):
        return not any(self.weights.values())

    def key(self):
        return (tuple(sorted(self.weights.items())), tuple(sorted(self.states.items())))

    def __eq__(self, other):
        return isinstance(other, StatedDiagram) and self.t == other.t and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        ws = {k: v for k, v in self.weights.items() if v}
        return f"StatedDiagram({ws}, {self.states})"

    def boundary_state(self, e, slot_pos):
        return _sign(self.states[e][slot_pos])

    def validate(self, allow_bad=False):
        t = self.t
        if any(x < 0 for x in self.weights.values()):
            raise DiagramError("corner weights must be nonnegative")
        try:
            check_switch(t, self.weights)
        except LatticeError as exc:
            raise DiagramError(str(exc)) from None
        for e in self.states:
            if e not in t.edge_index:
                raise DiagramError(f"unknown edge {e!r}")
            if not t.is_boundary(e):
                raise DiagramError(f"states given on interior edge {e!r}")
        for e in t.boundary_edges:
            n = self.count(e)
            word = self.states.get(e, "")
            if len(word) != n:
                raise DiagramError(
                    f"edge {e!r}: state word has length {len(word)}, expected {n}")
            for ch in word:
                _sign(ch)
            if "+-" in word:
                raise DiagramError(f"edge {e!r}: states are not increasing")
        if not allow_bad:
            bad = detect_bad_arcs(self)
            if bad:
                raise DiagramError(f"diagram contains {len(bad)} bad arc(s)")

    # ------------------------------------------------------------------
    # points

    def _slot_to_edge_pos(self, f, j, p):
        e, sg = self.t.slot(f, j)
        n = self.slot_count(f, j)
        return e, (p if sg > 0 else n - 1 - p)

    def segment_ends(self, f, j, d):
        """Edge points ``(slot j end, slot j+1 end)`` of the depth ``d`` strand of corner j."""
        w = self.weights
        pa = w[(f, (j - 1) % 3)] + w[(f, j)] - 1 - d
        a = self._slot_to_edge_pos(f, j, pa)
        b = self._slot_to_edge_pos(f, (j + 1) % 3, d)
        return a, b

    def points(self):
        """All points of D on edges, sorted by (edge index, edge position)."""
        return [(e, q) for e in self.t.edges for q in range(self.count(e))]

    def boundary_points(self):
        return [(e, q) for e in self.t.boundary_edges for q in range(self.count(e))]

    def slot_position(self, e, q):
        """Position of edge point (e, q) along the counterclockwise slot of a boundary edge."""
        (f, j, sg), = self.t.occurrences[e]
        return q if sg > 0 else self.count(e) - 1 - q

    def point_state(self, pt):
        e, q = pt
        return self.boundary_state(e, self.slot_position(e, q))

    # ------------------------------------------------------------------
    # components

    def components(self):
        if self._components is None:
            self._components = _trace(self)
        return self._components

    def subdiagram(self, indices):
        """Diagram formed by the components with the given indices."""
        comps = self.components()
        w = {c.key: 0 for c in self.t.corners}
        keep_pts = set()
        for i in indices:
            for s in comps[i].segments:
                w[(s.face, s.corner)] += 1
            keep_pts.update(comps[i].points)
        states = {}
        for e in self.t.boundary_edges:
            n = self.count(e)
            word = []
            for p in range(n):
                (_, _, sg), = self.t.occurrences[e]
                q = p if sg > 0 else n - 1 - p
                if (e, q) in keep_pts:
                    word.append(self.states[e][p])
            if word:
                states[e] = "".join(word)
        return StatedDiagram(self.t, w, states, check=False)

    # ------------------------------------------------------------------
    # io

    def to_json(self):
        t = self.t
        return {"corners": {k: v for k, v in weights_to_json(t, self.weights).items() if v},
                "states": {e: s for e, s in sorted(self.states.items())}}

    @classmethod
    def from_json(cls, t, data):
        return cls(t, weights_from_json(t, data.get("corners", {})), data.get("states", {}))

    def serialize(self):
        t = self.t
        lines = []
        for (f, j), x in sorted(self.weights.items()):
            if x:
                lines.append(f"corner {t.faces[f][0]} {j} {x}")
        for e in t.boundary_edges:
            if self.states.get(e):
                lines.append(f"states {e} {self.states[e]}")
        return "\n".join(lines) + "\n"


def parse_diagram(t, text, check=True):
    """
    Parse the line format ``corner <face> <slot> <weight>`` / ``states <edge> <word>``.
    """
    weights = {}
    states = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "corner" and len(tok) == 4:
                f = t.face_index[tok[1]]
                j = int(tok[2])
                if j not in (0, 1, 2):
                    raise ValueError
                key = (f, j)
                if key in weights:
                    raise DiagramError(f"line {lineno}: corner given twice")
                weights[key] = int(tok[3])
            elif tok[0] == "states" and len(tok) in (2, 3):
                if tok[1] in states:
                    raise DiagramError(f"line {lineno}: states given twice")
                states[tok[1]] = tok[2] if len(tok) == 3 else ""
            else:
                raise DiagramError(f"line {lineno}: cannot parse {raw!r}")
        except (KeyError, ValueError):
            raise DiagramError(f"line {lineno}: cannot parse {raw!r}") from None
    return StatedDiagram(t, weights, states, check=check)


def load_diagram(t, path, check=True):
    with open(path, encoding="utf-8") as fh:
        return parse_diagram(t, fh.read(), check=check)


DIAGRAM_FIXTURES = {
    "spiral_annulus": ("annulus", None),
    "theta_square": ("square", None),
    "theta_square_cut": ("square", "x"),
}


def fixture_diagram(name):
    """
    Bundled stated diagram by name.

    OUTPUT: the diagram on its surface (cut along the recorded edge if any).
    """
    from importlib import resources
    from .surface import fixture
    surf, cut = DIAGRAM_FIXTURES[name]
    t = fixture(surf)
    if cut is not None:
        t = t.cut(cut)
    text = resources.files("skeintorus.fixtures").joinpath(name + ".dia").read_text(encoding="utf-8")
    return parse_diagram(t, text)


def _trace(d):
    """Decompose ``d`` into components (arcs first, from their smallest boundary point)."""
    t = d.t
    ends = {}           # point -> list of (segment, which end)
    segs = []
    for f in range(t.num_faces):
        for j in range(3):
            for dep in range(d.weights[(f, j)]):
                a, b = d.segment_ends(f, j, dep)
                sid = len(segs)
                segs.append((f, j, dep, a, b))
                ends.setdefault(a, []).append((sid, 0))
                ends.setdefault(b, []).append((sid, 1))
    used = [False] * len(segs)
    comps = []

    def walk(start, sid, end_idx):
        pts = [start]
        seglist = []
        cur_sid, cur_end = sid, end_idx
        while True:
            f, j, dep, a, b = segs[cur_sid]
            used[cur_sid] = True
            nxt = b if cur_end == 0 else a
            seglist.append(Segment(f, j, dep, cur_end == 0))
            pts.append(nxt)
            following = [x for x in ends[nxt] if x[0] != cur_sid]
            if not following:
                return pts, seglist, False
            cur_sid, cur_end = following[0]
            if used[cur_sid]:
                return pts, seglist, True

    for pt in sorted(d.boundary_points(), key=lambda p: (t.edge_index[p[0]], p[1])):
        (sid, end_idx), = ends[pt]
        if used[sid]:
            continue
        pts, seglist, closed = walk(pt, sid, end_idx)
        comps.append(Component("arc", tuple(pts), tuple(seglist)))
    for sid in range(len(segs)):
        if used[sid]:
            continue
        f, j, dep, a, b = segs[sid]
        pts, seglist, closed = walk(a, sid, 0)
        if pts[-1] != pts[0]:
            raise DiagramError("inconsistent closed component")
        comps.append(Component("closed", tuple(pts[:-1]), tuple(seglist)))
    return tuple(comps)


def trace_components(d):
    return list(d.components())


# ----------------------------------------------------------------------
# bad arcs and forced states

def _forbidden(seg):
    """(prev, next) state pair forbidden along a traversed segment."""
    return (-1, 1) if not seg.forward else (1, -1)


def corner_vertex(t, seg):
    return t.corner(seg.face, seg.corner).vertex


def is_corner_arc(d, comp):
    """The vertex p if every segment of ``comp`` turns around p the same way."""
    if not comp.is_arc or not comp.segments:
        return None
    t = d.t
    verts = {corner_vertex(t, s) for s in comp.segments}
    dirs = {s.forward for s in comp.segments}
    if len(verts) == 1 and len(dirs) == 1:
        return verts.pop()
    return None


def detect_bad_arcs(d):
    """Arc components that are corner arcs at a boundary puncture stated - then + counterclockwise."""
    out = []
    for comp in d.components():
        if is_corner_arc(d, comp) is None:
            continue
        first, last = comp.points[0], comp.points[-1]
        if comp.segments[0].forward:
            first, last = last, first
        if d.point_state(first) < 0 and d.point_state(last) > 0:
            out.append(comp)
    return out


def critical_part(d, comp, endpoint=0):
    """
    Critical part at an endpoint of an arc.

    INPUT: ``endpoint`` -- 0 for ``comp.points[0]``, 1 for ``comp.points[-1]``.

    OUTPUT: ``(n, points)`` where the ``n`` points are those forced to ``-``
    by a ``-`` state at that endpoint.
    """
    if not comp.is_arc:
        raise DiagramError("critical parts are defined for arcs only")
    segs = comp.segments if endpoint == 0 else tuple(reversed(comp.segments))
    pts = comp.points if endpoint == 0 else tuple(reversed(comp.points))
    want = False if endpoint == 0 else True   # segment orientation that forbids (-, +)
    n = 0
    for s in segs:
        if s.forward != want:
            break
        n += 1
    n = min(n, len(segs) - 1)
    return n, list(pts[1:1 + n])


# ----------------------------------------------------------------------
# full states

def _component_states(d, comp, budget):
    """All admissible state sequences on the points of one component."""
    m = len(comp.points)
    if comp.is_arc:
        s0 = d.point_state(comp.points[0])
        s1 = d.point_state(comp.points[-1])
        partial = [(s0,)]
        for i, seg in enumerate(comp.segments):
            bad = _forbidden(seg)
            last = i == len(comp.segments) - 1
            choices = (s1,) if last else (-1, 1)
            nxt = []
            for seq in partial:
                for c in choices:
                    if (seq[-1], c) != bad:
                        nxt.append(seq + (c,))
            partial = nxt
            if len(partial) > budget:
                raise StateOverflow(f"more than {budget} states on one component")
        return partial
    out = []
    for s0 in (-1, 1):
        partial = [(s0,)]
        for i, seg in enumerate(comp.segments):
            bad = _forbidden(seg)
            last = i == m - 1
            nxt = []
            for seq in partial:
                for c in ((s0,) if last else (-1, 1)):
                    if (seq[-1], c) != bad:
                        nxt.append(seq + (c,))
            partial = nxt
            if len(partial) > budget:
                raise StateOverflow(f"more than {budget} states on one component")
        out.extend(seq[:-1] for seq in partial)
    return out


def enumerate_admissible_states(d, budget=DEFAULT_BUDGET):
    """
    Admissible full states of ``d``.

    OUTPUT: list of dicts ``point -> +-1``, sorted lexicographically along
    :meth:`StatedDiagram.points` with ``-`` before ``+``.
    """
    per = [(_component_states(d, c, budget), c) for c in d.components()]
    total = 1
    for seqs, _ in per:
        total *= len(seqs)
        if total > budget:
            raise StateOverflow(f"more than {budget} admissible states")
    order = d.points()
    out = []
    for combo in product(*[seqs for seqs, _ in per]):
        fs = {}
        for seq, (_, comp) in zip(combo, per):
            fs.update(zip(comp.points, seq))
        out.append(fs)
    out.sort(key=lambda fs: tuple(fs[p] for p in order))
    return out


def is_admissible(d, fs):
    for comp in d.components():
        pts = comp.points
        for i, seg in enumerate(comp.segments):
            a, b = pts[i], pts[(i + 1) % len(pts)]
            if (fs[a], fs[b]) == _forbidden(seg):
                return False
    for pt in d.boundary_points():
        if fs[pt] != d.point_state(pt):
            return False
    return True


def state_weight(d, fs, check=True):
    """The balanced vector sum of states of the points on each edge."""
    if check and not is_admissible(d, fs):
        raise DiagramError("full state is not admissible")
    idx = d.t.edge_index
    k = [0] * d.t.num_edges
    for (e, _), s in fs.items():
        k[idx[e]] += s
    return tuple(k)


def valuation_state(d):
    """The admissible full state realizing the valuation."""
    fs = {}
    for comp in d.components():
        for p in comp.points:
            fs[p] = 1
        if not comp.is_arc:
            continue
        fs[comp.points[0]] = d.point_state(comp.points[0])
        fs[comp.points[-1]] = d.point_state(comp.points[-1])
        for endpoint, p in ((0, comp.points[0]), (1, comp.points[-1])):
            if d.point_state(p) < 0:
                _, forced = critical_part(d, comp, endpoint)
                for q in forced:
                    fs[q] = -1
    return fs


def valuation(d):
    """The maximal balanced vector among admissible full states, in closed form."""
    return state_weight(d, valuation_state(d), check=False)


def valuation_by_enumeration(d, budget=DEFAULT_BUDGET):
    """Maximum over all admissible states for the componentwise order (oracle)."""
    weights = {state_weight(d, fs, check=False)
               for fs in enumerate_admissible_states(d, budget)}
    top = tuple(max(col) for col in zip(*weights)) if d.t.num_edges else ()
    if top not in weights:
        raise AssertionError("admissible weights have no maximum")
    return top


# ----------------------------------------------------------------------
# train tracks and decompositions

def from_train_track(t, w):
    """All-``+`` stated diagram with the given nonnegative corner weights."""
    w = {c.key: int(w.get(c.key, 0)) for c in t.corners}
    if any(x < 0 for x in w.values()):
        raise DiagramError("train track weights must be nonnegative")
    d = StatedDiagram(t, w, None, check=False)
    try:
        check_switch(t, w)
    except LatticeError as exc:
        raise DiagramError(str(exc)) from None
    d.states = {e: "+" * d.count(e) for e in t.boundary_edges if d.count(e)}
    d.validate()
    return d


def decompose_valuation(t, k):
    """
    Two all-``+`` diagrams with ``k == v(d1) - v(d2)``.
    """
    phi = phi_to_train_track(t, k)
    n0 = max(0, -min(phi.values()))
    d1 = from_train_track(t, {c: x + n0 for c, x in phi.items()})
    d2 = from_train_track(t, constant_weights(t, n0))
    return d1, d2


def decompose_mod_n(t, k, N):
    """
    An all-``+`` diagram ``d`` and ``k0`` with ``k == v(d) + N*k0``.
    """
    phi = phi_to_train_track(t, k)
    low = -min(phi.values())
    n0 = max(0, -(-low // N))
    d = from_train_track(t, {c: x + N * n0 for c, x in phi.items()})
    k0 = vscale(-n0, phi_from_train_track(t, constant_weights(t, 1)))
    return d, k0


def peripheral_copies(d, p):
    """Closed components that are peripheral curves around the inner puncture ``p``."""
    out = []
    for comp in d.components():
        if comp.is_arc:
            continue
        if {corner_vertex(d.t, s) for s in comp.segments} == {p}:
            out.append(comp)
    return out


@dataclass(frozen=True)
class CornerWitness:
    puncture: int
    corner: tuple | None
    peripheral: int

    @property
    def found(self):
        return self.corner is not None


def corner_zero_witness(d, p):
    """
    A corner adjacent to the inner puncture ``p`` where the train track
    coordinates of the valuation vanish, or the number of peripheral copies.
    """
    t = d.t
    if p not in t.inner_punctures:
        raise DiagramError(f"vertex {p} is not an inner puncture")
    phi = phi_to_train_track(t, valuation(d))
    per = len(peripheral_copies(d, p))
    for c in t.corners:
        if c.vertex == p and phi[c.key] == 0:
            return CornerWitness(p, c.key, per)
    return CornerWitness(p, None, per)


def peripheral_curve(t, p, copies=1):
    """``copies`` parallel peripheral curves around the inner puncture ``p``."""
    if p not in t.inner_punctures:
        raise DiagramError(f"vertex {p} is not an inner puncture")
    w = {c.key: (copies if c.vertex == p else 0) for c in t.corners}
    return StatedDiagram(t, w, None)


def boundary_element(t, comp_index=0, sign=1):
    """The union of the corner arcs at the boundary punctures of one boundary component."""
    verts = set(t.component_vertices(comp_index))
    w = {c.key: int(c.vertex in verts) for c in t.corners}
    d = StatedDiagram(t, w, None, check=False)
    ch = "+" if sign > 0 else "-"
    d.states = {e: ch * d.count(e) for e in t.boundary_edges if d.count(e)}
    d._components = None
    d.validate()
    return d


# ----------------------------------------------------------------------
# cutting along an interior edge

@dataclass(frozen=True)
class ThetaCut:
    """
    Result of cutting ``d`` along an interior edge.

    ``cut`` is the diagram ``(D', s')`` with the maximal matching state,
    ``diagram`` the increasing diagram ``(D'', s'')`` reached from it by
    ``moves`` positive moves, and ``[D', s'] = w^exponent [D'', s'']``.
    """
    surface: object
    edges: tuple               # the two new boundary edges (plus slot, minus slot)
    cut: "StatedDiagram"
    diagram: "StatedDiagram"
    moves: int
    exponent: int
    blocks: dict               # new edge -> (n1, n2, n3) of s'


def _three_blocks(word):
    """(n1, n2, n3) for a word -^n1 +^n2 -^n3, or None."""
    n1 = len(word) - len(word.lstrip("-"))
    rest = word[n1:]
    n2 = len(rest) - len(rest.lstrip("+"))
    tail = rest[n2:]
    if tail.strip("-"):
        return None
    return n1, n2, len(tail)


def _cut_with_states(d, t2, e, ab, c_states):
    """Diagram on the cut surface with states ``c_states[q]`` on both copies of point q of e."""
    words = dict(d.states)
    base = StatedDiagram(t2, d.weights, None, check=False)
    for x in ab:
        n = base.count(x)
        word = [""] * n
        for q in range(n):
            word[base.slot_position(x, q)] = "+" if c_states[q] > 0 else "-"
        if n:
            words[x] = "".join(word)
    out = StatedDiagram(t2, d.weights, words, check=False)
    out._components = base.components()
    return out


def maximal_matching_state(d, t2, e, ab):
    """
    The largest state on the points of ``e`` such that the cut diagram has
    no bad arc, found by forcing ``-`` at the ``+`` end of each bad arc.
    """
    n = d.count(e)
    c_states = [1] * n
    while True:
        cutd = _cut_with_states(d, t2, e, ab, c_states)
        bad = detect_bad_arcs(cutd)
        if not bad:
            return c_states, cutd
        changed = False
        for comp in bad:
            for pt in (comp.points[0], comp.points[-1]):
                if pt[0] in ab and cutd.point_state(pt) > 0:
                    c_states[pt[1]] = -1
                    changed = True
        if not changed:
            raise DiagramError("bad arc away from the cut edge")


def _oriented_path(comp, start):
    """Segments of an arc as ``(face, in slot, out slot)``, read from endpoint ``start``."""
    segs = [(s.face, s.corner, (s.corner + 1) % 3) if s.forward
            else (s.face, (s.corner + 1) % 3, s.corner) for s in comp.segments]
    if start == 0:
        return segs
    return [(f, b, a) for f, a, b in reversed(segs)]


def _slot_corner(a, b):
    return a if (a + 1) % 3 == b else b


def positive_move(d, x):
    """
    One positive move along the boundary edge ``x``.

    OUTPUT: ``(d2, n)`` with ``[d] = w^n [d2]``, or None if the word on
    ``x`` is increasing.

    The strands through the first adjacent pair ``+-`` on ``x`` are joined
    and pushed off ``x``; U-turns are cancelled until the joined arc is
    normal (``n = 1``).  If everything cancels the join is a trivial arc and
    both strands disappear (``n = 2``).
    """
    t = d.t
    word = d.states.get(x, "")
    p = word.find("+-")
    if p < 0:
        return None
    ends = {}
    comps = d.components()
    for i, comp in enumerate(comps):
        for k, pt in ((0, comp.points[0]), (1, comp.points[-1])):
            if pt[0] == x:
                ends[d.slot_position(*pt)] = i, k
    (i1, k1), (i2, k2) = ends[p], ends[p + 1]
    alpha, beta = comps[i2], comps[i1]
    far_a = alpha.points[-1] if k2 == 0 else alpha.points[0]
    far_b = beta.points[-1] if k1 == 0 else beta.points[0]
    if is_corner_arc(d, alpha) is None or d.point_state(far_a) > 0:
        raise DiagramError("the - strand of a positive move is not a stated - corner arc")
    head = [(f, b, a) for f, a, b in reversed(_oriented_path(alpha, k2))]   # ends at x
    tail = _oriented_path(beta, k1)                                        # starts at x
    while head and tail and head[-1][1] == tail[0][2]:
        head.pop()
        tail.pop(0)
    w = dict(d.weights)
    for s in alpha.segments + beta.segments:
        w[(s.face, s.corner)] -= 1
    if not head and not tail:
        if d.point_state(far_b) < 0:
            raise DiagramError("trivial arc of a positive move is not stated -+")
        return d.subdiagram([i for i in range(len(comps)) if i not in (i1, i2)]), 2
    if not head or not tail:
        raise DiagramError("joined arc of a positive move is not embedded")
    f = head[-1][0]
    merged = head[:-1] + [(f, head[-1][1], tail[0][2])] + tail[1:]
    for f, a, b in merged:
        w[(f, _slot_corner(a, b))] += 1
    states = dict(d.states)
    states[x] = word[:p] + word[p + 2:]
    if not states[x]:
        del states[x]
    return StatedDiagram(t, w, states, check=False), 1


def theta_cut(d, e, names=None):
    """
    Cut the stated diagram ``d`` along the interior edge ``e``.

    INPUT: ``d`` -- valid stated diagram; ``e`` -- interior edge id;
    ``names`` -- optional ids of the two new boundary edges.

    OUTPUT: a :class:`ThetaCut`; its ``diagram`` is valid on the cut surface.
    """
    t = d.t
    if e not in t.edge_index or t.is_boundary(e):
        raise DiagramError(f"{e!r} is not an interior edge")
    t2 = t.cut(e, names)
    ab = tuple(x for x in t2.edges if x not in t.edge_index)
    _, cutd = maximal_matching_state(d, t2, e, ab)
    blocks = {}
    for x in ab:
        b = _three_blocks(cutd.states.get(x, ""))
        if b is None:
            raise DiagramError(f"matching state on {x!r} is not of the form -+-")
        blocks[x] = b
    cur, moves, exponent = cutd, 0, 0
    for x in ab:
        while True:
            step = positive_move(cur, x)
            if step is None:
                break
            cur, n = step
            moves, exponent = moves + 1, exponent + n
    cur.validate()
    return ThetaCut(t2, ab, cutd, cur, moves, exponent, blocks)


# ----------------------------------------------------------------------
# enumeration of diagrams

def enumerate_weights(t, max_total):
    """All nonnegative switch-compatible corner weights with total edge weight <= max_total."""
    out = []
    edge_count = {}

    def rec(fi, w, total):
        if fi == t.num_faces:
            out.append(dict(w))
            return
        _, sides = t.faces[fi]
        B = max_total
        for a in range(B + 1):
            for b in range(B + 1 - a):
                for c in range(B + 1):
                    ws = (a, b, c)
                    counts = [ws[(j - 1) % 3] + ws[j] for j in range(3)]
                    if max(counts) > B:
                        continue
                    ok = True
                    new_total = total
                    added = []
                    for j, (e, _) in enumerate(sides):
                        if e in edge_count:
                            if edge_count[e] != counts[j]:
                                ok = False
                                break
                        elif e in [x for x, _ in added]:
                            ok = False
                            break
                        else:
                            added.append((e, counts[j]))
                            new_total += counts[j]
                    if not ok or new_total > max_total:
                        continue
                    for e, n in added:
                        edge_count[e] = n
                    for j in range(3):
                        w[(fi, j)] = ws[j]
                    rec(fi + 1, w, new_total)
                    for e, _ in added:
                        del edge_count[e]

    rec(0, {}, 0)
    return out


def enumerate_diagrams(t, max_total, include_empty=True):
    """All valid stated diagrams with total edge weight <= max_total."""
    out = []
    for w in enumerate_weights(t, max_total):
        base = StatedDiagram(t, w, None, check=False)
        if not include_empty and base.is_empty():
            continue
        edges = [e for e in t.boundary_edges if base.count(e)]
        options = [["-" * i + "+" * (base.count(e) - i) for i in range(base.count(e) + 1)]
                   for e in edges]
        for words in product(*options):
            d = StatedDiagram(t, w, dict(zip(edges, words)), check=False)
            d._components = base.components()
            if not detect_bad_arcs(d):
                out.append(d)
    return out


def closed_multicurves(t, max_total):
    """Diagrams without arcs (all corner weights give closed components only)."""
    return [d for d in enumerate_diagrams(t, max_total)
            if not d.is_empty() and all(not c.is_arc for c in d.components())]


def connected_closed_curves(t, max_total):
    return [d for d in closed_multicurves(t, max_total) if len(d.components()) == 1]
