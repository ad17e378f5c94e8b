"""
Quantum traces of stated diagrams in the balanced torus.

Each face sees the diagram as a stack of stated corner arcs.  A corner arc
whose end on slot ``j+1`` has state ``a`` and whose end on slot ``j`` has
state ``b`` maps to ``Z^(b on slot j, a on slot j+1)`` in the face torus,
except the bad pattern ``(a, b) = (-, +)`` which maps to zero.  A face
contributes the ordered product of its arcs, top arc first, and the face
tori multiply into the balanced torus monomial ``Z^k``.

Arcs are stacked so that every arc descends along its traversal; arcs are
then moved to the basis height order on each boundary edge by height
exchanges, which are pure for increasing states.  Closed components use
Weyl-ordered monomials with unit coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple
from itertools import product

from .diagram import DEFAULT_BUDGET, StateOverflow, enumerate_admissible_states
from .lattice import LatticeError, check_odd, lex_key, vscale
from .qtorus import CyclotomicScalar, TorusElement

W = CyclotomicScalar.omega


# ----------------------------------------------------------------------
# skein constants

def _mat_mul(X, Y):
    n, m, p = len(X), len(Y), len(Y[0])
    return [[sum((X[i][k] * Y[k][j] for k in range(m)), CyclotomicScalar.zero())
             for j in range(p)] for i in range(n)]


@dataclass(frozen=True)
class SkeinConstants:
    """The matrices C, C^-1, R, R^-1 with generic coefficients; A = omega^-2."""
    A: CyclotomicScalar
    C: tuple
    C_inv: tuple
    R: tuple
    R_inv: tuple

    def check(self):
        one = CyclotomicScalar.one()
        zero = CyclotomicScalar.zero()
        eye2 = [[one, zero], [zero, one]]
        eye4 = [[one if i == j else zero for j in range(4)] for i in range(4)]
        assert _mat_mul(self.C, self.C_inv) == eye2
        assert _mat_mul(self.R, self.R_inv) == eye4
        minus_a3 = -(self.A ** 3)
        assert [[minus_a3 * x for x in row] for row in self.C] == [list(r) for r in self.C_inv]
        return True


@lru_cache(maxsize=None)
def skein_constants():
    z = CyclotomicScalar.zero()
    A, Ai = W(-2), W(2)
    C = ((z, W(1)), (W(5, coeff=-1), z))
    C_inv = ((z, W(-5, coeff=-1)), (W(-1), z))
    R = ((A, z, z, z), (z, z, Ai, z), (z, Ai, A - W(6), z), (z, z, z, A))
    R_inv = ((Ai, z, z, z), (z, Ai - W(-6), A, z), (z, A, z, z), (z, z, z, Ai))
    return SkeinConstants(A, C, C_inv, R, R_inv)


# face-local Weil-Petersson pairing on slot coordinates
_EPS = ((0, 1, -1), (-1, 0, 1), (1, -1, 0))


def face_pairing(a, b):
    return sum(a[i] * b[j] * _EPS[i][j] for i in range(3) for j in range(3) if a[i] and b[j])


def _corner_vector(j, upper, lower):
    v = [0, 0, 0]
    v[j] = lower
    v[(j + 1) % 3] = upper
    return tuple(v)


def _face_product(factors):
    """Exponent of omega in the ordered product of Weyl monomials Z^{a_1}...Z^{a_n}."""
    out = 0
    acc = (0, 0, 0)
    for a in factors:
        out -= face_pairing(acc, a)
        acc = tuple(x + y for x, y in zip(acc, a))
    return out, acc


@lru_cache(maxsize=None)
def mixed_corner_exponent():
    """
    The exponent m with (corner arc, upper +, lower -) -> omega^m Z^(...).

    Derived from the cutting arc relation in the triangle: the corner 0 arc
    equals sum_{i,j} (C^-1)^i_j (corner 1 arc, slot 2 state j) stacked over
    (corner 2 arc, slot 2 state i), the corner 1 end being earlier on slot 2.
    Exactly one m in a window satisfies all four state choices.
    """
    const = skein_constants()
    cinv = {}
    for r, i in enumerate((1, -1)):
        for c, j in enumerate((1, -1)):
            x = const.C_inv[r][c]
            if x:
                cinv[(i, j)] = x

    def image(j, upper, lower, m):
        if (upper, lower) == (-1, 1):
            return None
        e = m if (upper, lower) == (1, -1) else 0
        return e, _corner_vector(j, upper, lower)

    found = []
    for m in range(-12, 13):
        ok = True
        for a, b in product((1, -1), repeat=2):
            # corner 0: slot 1 end is upper with state b, slot 0 end lower with state a
            lhs = image(0, b, a, m)
            total = {}
            for (i, j), coeff in cinv.items():
                p1 = image(1, j, b, m)      # corner 1: upper on slot 2
                p2 = image(2, a, i, m)      # corner 2: lower on slot 2
                if p1 is None or p2 is None:
                    continue
                ex, vec = _face_product([p1[1], p2[1]])
                term = coeff.times_omega(ex + p1[0] + p2[0])
                total[vec] = total[vec] + term if vec in total else term
            total = {k: v for k, v in total.items() if v}
            want = {} if lhs is None else {lhs[1]: W(lhs[0])}
            if total != want:
                ok = False
                break
        if ok:
            found.append(m)
    if len(found) != 1:
        raise AssertionError(f"cutting arc relation pins {found}, expected a single exponent")
    return found[0]


def triangle_trace_monomial(j, upper, lower):
    """
    Image of a stated corner arc in the triangle torus.

    INPUT:

    - ``j`` -- corner index (between slots ``j`` and ``j+1``)
    - ``upper`` -- state of the end on slot ``j+1``
    - ``lower`` -- state of the end on slot ``j``

    OUTPUT: ``(m, vector)`` meaning ``omega^m Z^vector`` in slot coordinates,
    or ``None`` for the bad arc.
    """
    if (upper, lower) == (-1, 1):
        return None
    m = mixed_corner_exponent() if (upper, lower) == (1, -1) else 0
    return m, _corner_vector(j, upper, lower)


class TriangleImage(NamedTuple):
    element: TorusElement
    bad_arc: bool


def triangle_trace_element(t, j, upper, lower, N=None):
    """
    :func:`triangle_trace_monomial` as an element over a single-face triangulation.

    OUTPUT: ``TriangleImage(element, bad_arc)``; a bad arc gives the zero element.
    """
    if t.num_faces != 1:
        raise LatticeError("expected a single triangle")
    out = triangle_trace_monomial(j, upper, lower)
    if out is None:
        return TriangleImage(TorusElement(t, {}, N), True)
    m, vec = out
    idx = t.edge_index
    k = [0] * 3
    for s in range(3):
        e, _ = t.slot(0, s)
        k[idx[e]] = vec[s]
    return TriangleImage(TorusElement(t, {tuple(k): W(m).at(N) if N else W(m)}, N), False)


# ----------------------------------------------------------------------
# trace of a diagram

# Basis height order on a boundary edge: the earlier point along the
# counterclockwise direction is the higher one.
LATER_IS_HIGHER = False


def _exchange_terms(l_on_top, s_l, s_u):
    """
    Height exchange of two points adjacent in height on one edge of a face.

    INPUT: ``l_on_top`` -- whether the earlier point ``l`` is currently the
    higher one; ``s_l``, ``s_u`` -- the states at the earlier and later point.

    OUTPUT: list of ``(coefficient, s_l', s_u')`` expressing the current
    configuration through the one with heights swapped.
    """
    if s_l == s_u:
        return [(W(-2 if l_on_top else 2), s_l, s_u)]
    if (s_l, s_u) == (-1, 1):
        return [(W(2 if l_on_top else -2), s_l, s_u)]
    if l_on_top:
        return [(W(2), 1, -1), (W(-2) - W(6), -1, 1)]
    return [(W(-2), 1, -1), (W(2) - W(-6), -1, 1)]


class _Face:
    """
    Static data of one face: its strands in stacking order (index 0 on top),
    and for each slot the strand ends from highest to lowest.
    """
    __slots__ = ("corners", "orders", "positions", "stacked", "_memo")

    def __init__(self, corners, orders, positions):
        self.corners = tuple(corners)
        self.orders = tuple(tuple(o) for o in orders)
        self.positions = positions
        self.stacked = all(a[0] < b[0] for o in self.orders for a, b in zip(o, o[1:]))
        self._memo = {}

    def slot_of(self, end):
        k, which = end
        return (self.corners[k] + which) % 3

    def coefficient(self, states):
        """
        Face coefficient for ``states[k] = (state on slot j end, state on slot j+1 end)``.
        """
        key = (states, self.orders)
        if key not in self._memo:
            self._memo[key] = self._reduce(states, self.orders)
        return self._memo[key]

    def _reduce(self, states, orders):
        key = (states, orders)
        memo = self._memo
        if key in memo:
            return memo[key]
        for s, order in enumerate(orders):
            for i in range(len(order) - 1):
                a, b = order[i], order[i + 1]
                if a[0] < b[0]:
                    continue
                # a is on top but belongs to a lower strand: swap a below b
                pa, pb = self.positions[a], self.positions[b]
                l, u = (a, b) if pa < pb else (b, a)
                s_l, s_u = states[l[0]][l[1]], states[u[0]][u[1]]
                new_order = order[:i] + (b, a) + order[i + 2:]
                new_orders = orders[:s] + (new_order,) + orders[s + 1:]
                total = CyclotomicScalar.zero()
                for coeff, nl, nu in _exchange_terms(l == a, s_l, s_u):
                    st = [list(x) for x in states]
                    st[l[0]][l[1]] = nl
                    st[u[0]][u[1]] = nu
                    st = tuple(tuple(x) for x in st)
                    total = total + coeff * self._reduce(st, new_orders)
                memo[key] = total
                return total
        out = self._stacked_product(states)
        memo[key] = out
        return out

    def _stacked_product(self, states):
        mixed = mixed_corner_exponent()
        ex = 0
        vecs = []
        for j, (lo, hi) in zip(self.corners, states):
            if (hi, lo) == (-1, 1):
                return CyclotomicScalar.zero()
            if (hi, lo) == (1, -1):
                ex += mixed
            vecs.append(_corner_vector(j, hi, lo))
        e, _ = _face_product(vecs)
        return W(ex + e)


class TracePlan:
    """
    Height data and face structures used by the state sum of one diagram.

    Interior points get heights from the traversal: components are stacked
    in order, arcs descend along their traversal, and a closed component
    descends from its second point and climbs back inside its first strand.
    Boundary points follow ``boundary_order`` (a dict edge -> points from
    highest to lowest) or the basis order.
    """

    def __init__(self, d, boundary_order=None):
        t = d.t
        self.d = d
        comps = d.components()
        key = {}
        strands = []          # (face, corner, rank, slot j point, slot j+1 point, comp)
        for r, c in enumerate(comps):
            pts = c.points
            m = len(c.segments)
            for i, p in enumerate(pts):
                key[p] = (r, i)
            if not c.is_arc:
                key[pts[0]] = (r, m)
            for i, s in enumerate(c.segments):
                a, b = pts[i], pts[(i + 1) % len(pts)]
                lo, hi = (a, b) if s.forward else (b, a)
                strands.append((s.face, s.corner, (r, i), lo, hi, r, i))
        border = {}
        for e in t.boundary_edges:
            pts = [(e, q) for q in range(d.count(e))]
            if boundary_order and e in boundary_order:
                top_down = list(boundary_order[e])
                if sorted(top_down) != sorted(pts):
                    raise ValueError(f"boundary order on {e!r} does not list its points")
            else:
                top_down = sorted(pts, key=lambda p: d.slot_position(*p),
                                  reverse=LATER_IS_HIGHER)
            for h, p in enumerate(top_down):
                border[p] = (h,)
        height = dict(key)
        height.update(border)
        self.faces = {}
        self.face_strands = {}
        for f in range(t.num_faces):
            mine = sorted((s for s in strands if s[0] == f), key=lambda s: s[2])
            if not mine:
                continue
            corners = [s[1] for s in mine]
            slots = {0: [], 1: [], 2: []}
            positions = {}
            for k, (_, j, _, lo, hi, _, _) in enumerate(mine):
                for which, pt in ((0, lo), (1, hi)):
                    slot = (j + which) % 3
                    slots[slot].append(((k, which), pt))
                    e, sg = t.slot(f, slot)
                    n = d.count(e)
                    positions[(k, which)] = pt[1] if sg > 0 else n - 1 - pt[1]
            orders = [tuple(end for end, pt in sorted(slots[s], key=lambda x: height[x[1]]))
                      for s in range(3)]
            self.faces[f] = _Face(corners, orders, positions)
            self.face_strands[f] = [(s[3], s[4]) for s in mine]
        self.free = {(s[5], s[6]) for s in strands if not self.faces[s[0]].stacked}

    def component_states(self, comp_index, budget):
        """State sequences on one component; strands in unstacked faces allow every pair."""
        d = self.d
        comp = d.components()[comp_index]
        pts = comp.points
        m = len(comp.segments)

        def allowed(i, prev, nxt):
            if (comp_index, i) in self.free:
                return True
            seg = comp.segments[i]
            bad = (-1, 1) if not seg.forward else (1, -1)
            return (prev, nxt) != bad

        starts = [d.point_state(pts[0])] if comp.is_arc else [-1, 1]
        out = []
        for s0 in starts:
            partial = [(s0,)]
            for i in range(m):
                last = i == m - 1
                if comp.is_arc:
                    choices = (d.point_state(pts[-1]),) if last else (-1, 1)
                else:
                    choices = (s0,) if last else (-1, 1)
                partial = [seq + (c,) for seq in partial for c in choices
                           if allowed(i, seq[-1], c)]
                if len(partial) > budget:
                    raise StateOverflow(f"more than {budget} states on one component")
            out.extend(partial if comp.is_arc else [seq[:-1] for seq in partial])
        return out

    def state_sum(self, budget):
        d = self.d
        t = d.t
        idx = t.edge_index
        comps = d.components()
        per = [self.component_states(r, budget) for r in range(len(comps))]
        count = 1
        for seqs in per:
            count *= len(seqs)
            if count > budget:
                raise StateOverflow(f"more than {budget} full states")
        terms = {}
        for combo in product(*per):
            fs = {}
            for comp, seq in zip(comps, combo):
                fs.update(zip(comp.points, seq))
            coeff = CyclotomicScalar.one()
            for f, face in self.faces.items():
                st = tuple((fs[lo], fs[hi]) for lo, hi in self.face_strands[f])
                c = face.coefficient(st)
                if not c:
                    coeff = c
                    break
                coeff = coeff * c
            if not coeff:
                continue
            k = [0] * t.num_edges
            for (e, _), s in fs.items():
                k[idx[e]] += s
            k = tuple(k)
            terms[k] = terms[k] + coeff if k in terms else coeff
        return TorusElement(t, terms)


def trace_diagram(d, N=None, budget=DEFAULT_BUDGET, boundary_order=None):
    """
    The quantum trace of the stated diagram ``d``.

    INPUT:

    - ``d`` -- a stated diagram
    - ``N`` -- specialize coefficients at a primitive N-th root of unity
    - ``budget`` -- cap on the number of full states
    - ``boundary_order`` -- optional dict ``edge -> points`` (highest first)
      overriding the basis height order on boundary edges

    OUTPUT: a :class:`TorusElement`.
    """
    out = TracePlan(d, boundary_order).state_sum(budget)
    return out.at(N) if N is not None else out


def state_sum_terms(d, budget=DEFAULT_BUDGET):
    """(full state, weight) pairs of the admissible state sum."""
    from .diagram import state_weight
    return [(fs, state_weight(d, fs, check=False))
            for fs in enumerate_admissible_states(d, budget)]


# ----------------------------------------------------------------------
# leading terms and central elements

def leading_term(x, indexing=None):
    """The lexicographically largest exponent of ``x`` and its coefficient."""
    if x.is_zero():
        raise ValueError("the zero element has no leading term")
    k = max(x.terms, key=lambda v: lex_key(x.t, v, indexing))
    return x.terms[k], k


def puncture_vector(t, p):
    """k_p(e) = number of endpoints of e at the vertex p."""
    out = []
    for e in t.edges:
        a, b = t.endpoints(e)
        out.append(int(a == p) + int(b == p))
    return tuple(out)


def boundary_vector(t, comp_index):
    verts = set(t.component_vertices(comp_index))
    out = []
    for e in t.edges:
        a, b = t.endpoints(e)
        out.append(int(a in verts) + int(b in verts))
    return tuple(out)


@dataclass(frozen=True)
class CentralElements:
    N: int
    punctures: dict          # inner puncture -> H_p as TorusElement
    boundaries: dict         # boundary component index -> H_boundary
    frobenius: tuple         # Z^{N b} for a basis b of the balanced lattice
    puncture_vectors: dict
    boundary_vectors: dict


def central_elements(t, N):
    from .lattice import balanced_basis_cached
    check_odd(N)
    pv = {p: puncture_vector(t, p) for p in t.inner_punctures}
    bv = {i: boundary_vector(t, i) for i in range(t.num_boundary_components)}
    return CentralElements(
        N,
        {p: TorusElement.monomial(t, k, N) for p, k in pv.items()},
        {i: TorusElement.monomial(t, k, N) for i, k in bv.items()},
        tuple(TorusElement.monomial(t, vscale(N, g), N)
              for g in balanced_basis_cached(t).generators),
        pv, bv)


def monomial_inverse(x):
    """Inverse of c * Z^k for a unit coefficient c."""
    if len(x.terms) != 1:
        raise ValueError("only monomials are inverted")
    (k, c), = x.terms.items()
    return TorusElement(x.t, {vscale(-1, k): c.inverse()}, x.N)


# ----------------------------------------------------------------------
# Chebyshev polynomials

@lru_cache(maxsize=None)
def chebyshev(n):
    """Integer coefficients (constant first) of T_n with T_0 = 2, T_1 = X."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    a, b = (2,), (0, 1)
    if n == 0:
        return a
    for _ in range(n - 1):
        xb = (0,) + b
        a_pad = a + (0,) * (len(xb) - len(a))
        a, b = b, tuple(p - q for p, q in zip(xb, a_pad))
    return b


def chebyshev_apply(x, n):
    """T_n(x) evaluated in the torus."""
    coeffs = chebyshev(n)
    out = TorusElement(x.t, {}, x.N)
    power = TorusElement.scalar(x.t, 1, x.N)
    for i, c in enumerate(coeffs):
        if c:
            out = out + power.scale(c)
        if i + 1 < len(coeffs):
            power = power * x
    return out


__all__ = [
    "SkeinConstants", "skein_constants", "mixed_corner_exponent",
    "triangle_trace_monomial", "TriangleImage", "triangle_trace_element", "trace_diagram",
    "TracePlan", "leading_term", "puncture_vector", "boundary_vector",
    "CentralElements", "central_elements", "chebyshev", "chebyshev_apply", "monomial_inverse",
    "state_sum_terms",
]
