"""
Center analysis in the image of the quantum trace.

Central elements are handled through their images in the balanced quantum
torus.  A *basic element* is ``c [D^(N)] prod gamma_p^{n_p} prod alpha_b^{n_b}``
where ``D^(N)`` replaces every arc of ``D`` by N parallel copies and every
closed curve by ``T_N`` of it.  A central element is certified by peeling off
basic elements matching its leading term until nothing is left.
"""

from dataclasses import dataclass, field
from itertools import product
from math import gcd

from .diagram import (DEFAULT_BUDGET, StatedDiagram, boundary_element, decompose_mod_n,
                      enumerate_diagrams, from_train_track, peripheral_copies,
                      peripheral_curve, valuation)
from .lattice import (balanced_basis_cached, check_odd, in_kernel, lex_key,
                      pairing_kernel_mod_n, phi_to_train_track, vadd, vscale, vsub,
                      zero_vector)
from .qtorus import CyclotomicScalar, TorusElement, is_central
from .qtrace import (LATER_IS_HIGHER, boundary_vector, chebyshev_apply, leading_term,
                     monomial_inverse, puncture_vector, trace_diagram)


class CenterError(ValueError):
    """Raised when an element cannot be reduced by central moves."""


class ReductionOverflow(RuntimeError):
    """Raised when a reduction exceeds its iteration cap."""


# ----------------------------------------------------------------------
# minimal heights

def minimal_height(x, e):
    """
    m_e(x) = min { k(e) : x_k != 0 }.

    INPUT: ``x`` -- nonzero torus element; ``e`` -- edge id.
    """
    if x.is_zero():
        raise ValueError("the zero element has no minimal height")
    i = x.t.edge_index[e]
    return min(k[i] for k in x.terms)


def minimal_heights(x):
    return tuple(minimal_height(x, e) for e in x.t.edges)


# ----------------------------------------------------------------------
# basic elements

@dataclass(frozen=True)
class BasicElement:
    """
    ``scale * [base^(N)] * prod gamma_p^{punctures[p]} * prod alpha_b^{boundaries[b]}``.

    ``base`` is a basis diagram without peripheral components; puncture
    exponents are nonnegative, boundary exponents arbitrary integers.
    """
    scale: CyclotomicScalar
    base: StatedDiagram
    punctures: dict = field(default_factory=dict)
    boundaries: dict = field(default_factory=dict)

    @property
    def t(self):
        return self.base.t

    def valuation(self, N):
        """N v(base) + sum n_p k_p + sum n_b k_b."""
        t = self.t
        v = vscale(N, valuation(self.base))
        for p, n in self.punctures.items():
            v = vadd(v, vscale(n, puncture_vector(t, p)))
        for b, n in self.boundaries.items():
            v = vadd(v, vscale(n, boundary_vector(t, b)))
        return v

    def to_json(self):
        return {"scale": self.scale.to_json(), "base": self.base.to_json(),
                "punctures": {str(p): n for p, n in sorted(self.punctures.items()) if n},
                "boundaries": {str(b): n for b, n in sorted(self.boundaries.items()) if n}}


def cable(d, N, flip=False):
    """
    N parallel copies of every arc of ``d``, with the height order of pushed copies.

    OUTPUT: ``(cabled diagram, boundary order)``; the order lists, for each
    boundary edge, its points from highest to lowest.  Copy ``k`` sits at
    height ``h + k*eps`` above the original point of height ``h``; ``flip``
    numbers copies from the other side, which describes the same tangle.
    """
    t = d.t
    w = {key: N * x for key, x in d.weights.items()}
    states = {e: "".join(ch * N for ch in word) for e, word in d.states.items()}
    c = StatedDiagram(t, w, states, check=False)
    firsts = {comp.points[0] for comp in d.components() if comp.is_arc}
    copy = {}
    for comp in c.components():
        if not comp.is_arc:
            continue
        a, b = comp.points[0], comp.points[-1]
        ref = a if (a[0], a[1] // N) in firsts else b
        k = ref[1] % N
        if flip:
            k = N - 1 - k
        copy[a] = copy[b] = k
    order = {}
    for e in t.boundary_edges:
        pts = [(e, q) for q in range(c.count(e))]
        sign = -1 if LATER_IS_HIGHER else 1
        order[e] = sorted(pts, key=lambda p: (sign * d.slot_position(e, p[1] // N), -copy[p]))
    return c, order


def basic_trace(b, N, budget=DEFAULT_BUDGET, flip=False):
    """
    Trace image of a basic element at a primitive N-th root of unity.

    The arcs of the base are cabled and traced as one diagram, each closed
    component contributes ``T_N`` of its trace, and the peripheral and
    boundary factors are the traces of ``gamma_p`` and ``alpha_b``.
    """
    check_odd(N)
    t = b.t
    comps = b.base.components()
    arcs = [i for i, c in enumerate(comps) if c.is_arc]
    out = TorusElement.scalar(t, 1, N)
    if arcs:
        cabled, order = cable(b.base.subdiagram(arcs), N, flip)
        out = trace_diagram(cabled, N, budget, boundary_order=order)
    for i, c in enumerate(comps):
        if not c.is_arc:
            gamma = trace_diagram(b.base.subdiagram([i]), N, budget)
            out = out * chebyshev_apply(gamma, N)
    for p, n in sorted(b.punctures.items()):
        if n < 0:
            raise CenterError("puncture exponents are nonnegative")
        if n:
            out = out * trace_diagram(peripheral_curve(t, p), N) ** n
    for i, n in sorted(b.boundaries.items()):
        if n:
            alpha = trace_diagram(boundary_element(t, i), N)
            out = out * (alpha ** n if n > 0 else monomial_inverse(alpha) ** (-n))
    return out.scale(b.scale.at(N) if b.scale.N is None else b.scale)


def base_pool(t, max_weight):
    """Basis diagrams of weight <= max_weight without peripheral curves."""
    return [d for d in enumerate_diagrams(t, max_weight)
            if not any(peripheral_copies(d, p) for p in t.inner_punctures)]


def random_central_element(t, N, rng, pool):
    """
    A random sum of products of basic-element traces.

    INPUT: ``rng`` -- a ``random.Random``; ``pool`` -- candidate base diagrams.

    OUTPUT: a central torus element at the root of order ``N``.
    """
    x = None
    for _ in range(rng.randint(1, 2)):
        term = None
        for _ in range(rng.randint(1, 2)):
            b = BasicElement(CyclotomicScalar.omega(rng.randrange(N), N, rng.choice([1, -1])),
                             rng.choice(pool),
                             {p: rng.randint(0, 1) for p in t.inner_punctures},
                             {i: rng.randint(-1, 1) for i in range(t.num_boundary_components)})
            y = basic_trace(b, N)
            term = y if term is None else term * y
        x = term if x is None else x + term
    return x


# ----------------------------------------------------------------------
# central moves

def central_decomposition(t, v, N):
    """
    Split a central leading exponent along the train track.

    INPUT: ``v`` -- balanced vector in the pairing kernel mod N.

    OUTPUT: ``(m, n, k)`` with ``v = N k + sum m_p k_p + sum n_b k_b``, where
    ``m_p >= 0`` and ``n_b`` are the minimal train track weights of ``v``
    around p and along the boundary component b.  Then ``Phi(k) >= 0``, so
    ``k`` is the valuation of an all-``+`` diagram without peripheral curves.
    """
    phi = phi_to_train_track(t, v)
    m = {p: min(phi[c.key] for c in t.corners if c.vertex == p) for p in t.inner_punctures}
    if any(x < 0 for x in m.values()):
        raise CenterError("negative train track weight at an inner puncture")
    n = {}
    for i in range(t.num_boundary_components):
        verts = set(t.component_vertices(i))
        n[i] = min(phi[c.key] for c in t.corners if c.vertex in verts)
    rest = v
    for p, x in m.items():
        rest = vsub(rest, vscale(x, puncture_vector(t, p)))
    for i, x in n.items():
        rest = vsub(rest, vscale(x, boundary_vector(t, i)))
    if any(x % N for x in rest):
        raise CenterError(f"leading exponent {v} is not N k + sum m_p k_p + sum n_b k_b")
    k = tuple(x // N for x in rest)
    if any(x % N for x in phi_to_train_track(t, rest).values()):
        raise CenterError("train track weights of the remainder are not divisible by N")
    return m, n, k


def _valuation_index(t, max_weight):
    """Lightest basis diagram without peripheral curves for each valuation of weight <= max_weight."""
    cache = t.__dict__.setdefault("_vindex", {})
    if max_weight not in cache:
        index = {}
        for d in enumerate_diagrams(t, max_weight):
            if any(peripheral_copies(d, p) for p in t.inner_punctures):
                continue
            v = valuation(d)
            if v not in index or d.total_weight() < index[v].total_weight():
                index[v] = d
        cache[max_weight] = index
    return cache[max_weight]


def light_base(t, n, k, N, max_weight=8):
    """
    A light base diagram for the split ``v = N k + sum n_b k_b``.

    Trading ``k -> k - sum j_b k_b`` against ``n_b -> n_b + N j_b`` keeps the
    leading exponent.  ``j = 0`` is the all-``+`` diagram ``from_train_track(Phi(k))``;
    shifts ``j_b > 0`` introduce ``-`` states and are looked up among enumerated
    diagrams of weight <= max_weight.

    OUTPUT: ``(base, n')``.
    """
    best = from_train_track(t, phi_to_train_track(t, k))
    best_n = dict(n)
    index = _valuation_index(t, max_weight)
    comps = sorted(n)
    bvec = {i: boundary_vector(t, i) for i in comps}
    for js in product(range(max_weight + 1), repeat=len(comps)):
        if not any(js):
            continue
        kk = k
        for i, j in zip(comps, js):
            kk = vsub(kk, vscale(j, bvec[i]))
        d = index.get(kk)
        if d is not None and d.total_weight() < best.total_weight():
            best = d
            best_n = {i: n[i] + N * j for i, j in zip(comps, js)}
    return best, best_n


def basic_match(x, N, indexing=None, max_weight=8):
    """
    A basic element with the same leading term as the central element ``x``.

    OUTPUT: ``z`` with ``ld(basic_trace(z)) == ld(x)``.
    """
    t = x.t
    c, v = leading_term(x, indexing)
    if not in_kernel(t, v, N):
        raise CenterError("leading exponent is not in the pairing kernel")
    m, nb, k = central_decomposition(t, v, N)
    base, nb = light_base(t, nb, k, N, max_weight)
    z = BasicElement(CyclotomicScalar.one(), base, m, nb)
    cz, vz = leading_term(basic_trace(z, N), indexing)
    if vz != v:
        raise CenterError("basic element has a different leading exponent")
    return BasicElement(c * cz.inverse(), base, m, nb)


def reduction_cap(x, indexing=None):
    """
    Number of exponents k with k < v(x) lexicographically and m_e(x) <= k(e) <= M_e(x).

    Every central move stays inside this box, so it bounds the number of moves.
    """
    t = x.t
    _, v = leading_term(x, indexing)
    lo = minimal_heights(x)
    hi = tuple(max(k[i] for k in x.terms) for i in range(len(t.edges)))
    order = list(range(len(t.edges)))
    if indexing:
        order = [t.edge_index[e] for e in indexing]
    sizes = [hi[i] - lo[i] + 1 for i in order]
    total = 0
    for pos, i in enumerate(order):
        below = v[i] - lo[i]
        tail = 1
        for s in sizes[pos + 1:]:
            tail *= s
        total += below * tail
    return total + 1


@dataclass
class CentralCertificate:
    """Basic elements whose traces sum to the certified element."""
    N: int
    moves: list           # BasicElement per move
    leading: list         # leading exponent removed by each move
    residual_zero: bool

    @property
    def steps(self):
        return len(self.moves)

    def replay(self, x, budget=DEFAULT_BUDGET):
        """x minus the traces of all moves."""
        if x.N is None:
            x = x.at(self.N)
        for z in self.moves:
            x = x - basic_trace(z, self.N, budget)
        return x

    def to_json(self):
        t = self.moves[0].t if self.moves else None
        return {"moves": [{"basic": z.to_json(),
                           "leadingExponent": dict(zip(t.edges, v))}
                          for z, v in zip(self.moves, self.leading)],
                "residualZero": self.residual_zero, "steps": self.steps}


def central_reduce(x, N, indexing=None, max_weight=8, budget=DEFAULT_BUDGET):
    """
    Certify a central element as a sum of basic elements.

    INPUT: ``x`` -- torus element at the root of order ``N`` lying in the
    image of the center; ``indexing`` -- edge order for leading terms.

    OUTPUT: a :class:`CentralCertificate`.  Each move strictly lowers the
    leading exponent and never lowers a minimal height; both are asserted.
    """
    check_odd(N)
    if x.N is None:
        x = x.at(N)
    if not is_central(x, N):
        raise CenterError("element is not central")
    moves, leads = [], []
    if x.is_zero():
        return CentralCertificate(N, moves, leads, True)
    cap = reduction_cap(x, indexing)
    t = x.t
    while not x.is_zero():
        if len(moves) >= cap:
            raise ReductionOverflow(f"more than {cap} central moves")
        _, v = leading_term(x, indexing)
        heights = minimal_heights(x)
        z = basic_match(x, N, indexing, max_weight)
        x2 = x - basic_trace(z, N, budget)
        if not x2.is_zero():
            _, v2 = leading_term(x2, indexing)
            if not lex_key(t, v2, indexing) < lex_key(t, v, indexing):
                raise CenterError("central move did not lower the leading exponent")
            if any(a < b for a, b in zip(minimal_heights(x2), heights)):
                raise CenterError("central move lowered a minimal height")
        moves.append(z)
        leads.append(v)
        x = x2
    return CentralCertificate(N, moves, leads, True)


# ----------------------------------------------------------------------
# rank audit

@dataclass
class RankAudit:
    N: int
    exponent: int         # R = N ** exponent
    witnesses: list       # one basis diagram per class of K / K0
    distinct: bool

    @property
    def R(self):
        return self.N ** self.exponent

    @property
    def verdict(self):
        return "PASS" if self.distinct and len(self.witnesses) == self.R else "FAIL"

    def to_json(self):
        return {"R": f"{self.N}^{self.exponent}", "classes": len(self.witnesses),
                "witnesses": [w.to_json() for w in self.witnesses],
                "verdict": self.verdict}


def coset_representatives(t, N):
    """One balanced vector per class of K / K0."""
    pk = pairing_kernel_mod_n(balanced_basis_cached(t), N)
    basis = pk.basis
    n = basis.rank
    scale = [N // gcd(N, d) for d in pk.divisors]
    # K0 is spanned by the columns of V diag(scale); K by the columns of V
    cols = [tuple(c[i] // scale[j] for i in range(n)) for j, c in enumerate(pk.coords)]
    reps = []
    for a in product(*(range(s) for s in scale)):
        coords = [sum(a[j] * cols[j][i] for j in range(n)) for i in range(n)]
        v = zero_vector(t)
        for ci, g in zip(coords, basis.generators):
            v = vadd(v, vscale(ci, g))
        reps.append(v)
    return reps


def rank_audit(t, N, budget=DEFAULT_BUDGET):
    """
    Basis diagrams whose valuations meet every class of K / K0.

    Each representative k is written as ``v(d) + N k0`` with ``d`` all-``+``;
    since ``N K`` lies in K0 the valuation of ``d`` is in the class of k.
    """
    check_odd(N)
    reps = coset_representatives(t, N)
    if len(reps) > budget:
        raise ReductionOverflow(f"{len(reps)} classes exceed the budget {budget}")
    witnesses = [decompose_mod_n(t, k, N)[0] for k in reps]
    vals = [valuation(d) for d in witnesses]
    distinct = all(not in_kernel(t, vsub(a, b), N)
                   for i, a in enumerate(vals) for b in vals[i + 1:])
    pk = pairing_kernel_mod_n(balanced_basis_cached(t), N)
    return RankAudit(N, pk.exponent, witnesses, distinct)


__all__ = [
    "CenterError", "ReductionOverflow", "minimal_height", "minimal_heights",
    "BasicElement", "cable", "basic_trace", "base_pool", "random_central_element", "central_decomposition", "light_base", "basic_match",
    "reduction_cap", "CentralCertificate", "central_reduce", "RankAudit",
    "coset_representatives", "rank_audit",
]
