"""
Balanced lattices, the Weil-Petersson pairing and integer linear algebra.

Balanced vectors are tuples of Python ints indexed like ``t.edges``.  Train
track weights are dicts keyed by corner ``(face index, slot)``.

The Smith normal form below is a plain pivot-and-gcd elimination on
arbitrary precision integers, returning the unimodular transforms so every
result can be re-verified by multiplication.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd


class LatticeError(ValueError):
    pass


# ----------------------------------------------------------------------
# small integer matrix helpers (lists of lists of ints)

def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][k] * B[k][j] for k in range(inner)) for j in range(cols)]
            for i in range(len(A))]


def transpose(A):
    return [list(r) for r in zip(*A)] if A else []


def _xgcd(a, b):
    """(g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def smith_normal_form(M):
    """
    Smith normal form over the integers.

    INPUT: ``M`` -- an ``m x n`` integer matrix (list of rows).

    OUTPUT: ``(U, D, V)`` with ``U*M*V == D``, ``U`` and ``V`` unimodular and
    ``D`` diagonal with nonnegative entries ``d_1 | d_2 | ...``.

    >>> smith_normal_form([[0, 1], [-1, 0]])[1]
    [[1, 0], [0, 1]]
    """
    m = len(M)
    n = len(M[0]) if m else 0
    D = [list(map(int, row)) for row in M]
    U = identity(m)
    V = identity(n)

    def row_comb(A, i, j, a, b, c, d):
        # (row i, row j) <- (a*ri + b*rj, c*ri + d*rj)
        ri, rj = A[i], A[j]
        A[i] = [a * x + b * y for x, y in zip(ri, rj)]
        A[j] = [c * x + d * y for x, y in zip(ri, rj)]

    def col_comb(A, i, j, a, b, c, d):
        for row in A:
            x, y = row[i], row[j]
            row[i], row[j] = a * x + b * y, c * x + d * y

    def swap_rows(A, i, j):
        A[i], A[j] = A[j], A[i]

    def swap_cols(A, i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(m, n):
        # choose pivot of least absolute value in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if D[i][j] and (best is None or abs(D[i][j]) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != t:
            swap_rows(D, t, i)
            swap_rows(U, t, i)
        if j != t:
            swap_cols(D, t, j)
            swap_cols(V, t, j)
        while True:
            changed = False
            for i in range(t + 1, m):
                if D[i][t]:
                    a, b = D[t][t], D[i][t]
                    if b % a == 0:
                        q = b // a
                        row_comb(D, t, i, 1, 0, -q, 1)
                        row_comb(U, t, i, 1, 0, -q, 1)
                        changed = True
                        continue
                    g, x, y = _xgcd(a, b)
                    c, d = -b // g, a // g
                    row_comb(D, t, i, x, y, c, d)
                    row_comb(U, t, i, x, y, c, d)
                    changed = True
            for j in range(t + 1, n):
                if D[t][j]:
                    a, b = D[t][t], D[t][j]
                    if b % a == 0:
                        q = b // a
                        col_comb(D, t, j, 1, 0, -q, 1)
                        col_comb(V, t, j, 1, 0, -q, 1)
                        changed = True
                        continue
                    g, x, y = _xgcd(a, b)
                    c, d = -b // g, a // g
                    col_comb(D, t, j, x, y, c, d)
                    col_comb(V, t, j, x, y, c, d)
                    changed = True
            if changed:
                continue
            # divisibility: fold an offending row into the pivot row
            p = D[t][t]
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if D[i][j] % p), None)
            if bad is None:
                break
            i = bad[0]
            row_comb(D, t, i, 1, 1, 0, 1)
            row_comb(U, t, i, 1, 1, 0, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
        t += 1
    return U, D, V


def elementary_divisors(M):
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def determinant_sign_free(M):
    """|det M| for square M via its elementary divisors."""
    out = 1
    for d in elementary_divisors(M):
        out *= d
    return out


def hermite_rows(gens, n):
    """A Z-basis (as rows) of the row lattice spanned by ``gens`` in Z^n."""
    rows = [list(map(int, g)) for g in gens if any(g)]
    basis = []
    col = 0
    while rows and col < n:
        nz = [r for r in rows if r[col]]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            piv = nz[0]
            rest = []
            for r in nz[1:]:
                q = r[col] // piv[col]
                r2 = [x - q * y for x, y in zip(r, piv)]
                if any(r2):
                    rest.append(r2)
            zero = [r for r in rows if not r[col]]
            rows = zero + [piv] + [r for r in rest if not r[col]] + [r for r in rest if r[col]]
            nz = [piv] + [r for r in rest if r[col]]
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        basis.append(piv)
        rows = [r for r in rows if not r[col] and any(r)]
        col += 1
    return basis


def sublattice_index(sub_gens, full_basis):
    """
    Index of the lattice spanned by ``sub_gens`` inside the lattice with basis
    ``full_basis`` (rows, same ambient coordinates).  Returns 0 if infinite.
    """
    coords = [solve_in_basis(full_basis, g) for g in sub_gens]
    divs = elementary_divisors(coords) if coords else []
    n = len(full_basis)
    if sum(1 for d in divs if d) < n:
        return 0
    out = 1
    for d in divs:
        if d:
            out *= d
    return out


def solve_in_basis(basis, v):
    """Integer coordinates c with sum c_i basis_i = v; raises if v is not in the span."""
    n = len(basis)
    # solve basis^T c = v via SNF of basis^T
    A = transpose(basis)
    U, D, V = smith_normal_form(A)
    b = [sum(U[i][k] * v[k] for k in range(len(v))) for i in range(len(U))]
    y = [0] * n
    for i in range(len(b)):
        d = D[i][i] if i < n else 0
        if d == 0:
            if b[i]:
                raise LatticeError("vector not in the span")
        else:
            if b[i] % d:
                raise LatticeError("vector not in the lattice")
            y[i] = b[i] // d
    return [sum(V[i][k] * y[k] for k in range(n)) for i in range(n)]


# ----------------------------------------------------------------------
# balanced vectors

def zero_vector(t):
    return (0,) * t.num_edges


def vector_from_dict(t, d):
    extra = set(d) - set(t.edges)
    if extra:
        raise LatticeError(f"unknown edges {sorted(extra)}")
    return tuple(int(d.get(e, 0)) for e in t.edges)


def vector_to_dict(t, k):
    return {e: int(x) for e, x in zip(t.edges, k)}


def is_balanced(t, k):
    idx = t.edge_index
    return len(k) == t.num_edges and all(
        sum(k[idx[e]] for e, _ in sides) % 2 == 0 for _, sides in t.faces)


def check_balanced(t, k):
    if len(k) != t.num_edges:
        raise LatticeError("vector indexed over the wrong edge set")
    if not is_balanced(t, k):
        raise LatticeError("vector is not balanced")
    return tuple(k)


def vadd(a, b):
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a):
    return tuple(c * x for x in a)


def lex_key(t, k, indexing=None):
    """Sort key realizing the lexicographic order along ``indexing`` (edge ids)."""
    if indexing is None:
        return tuple(k)
    idx = t.edge_index
    return tuple(k[idx[e]] for e in indexing)


def wp_matrix(t):
    a = t.adjacency
    n = t.num_edges
    return [[a[i][j] - a[j][i] for j in range(n)] for i in range(n)]


def wp_form(t, k1, k2):
    """
    Weil-Petersson pairing sum_{e,e'} k1(e) k2(e') (a[e][e'] - a[e'][e]).

    >>> from skeintorus.surface import fixture
    >>> wp_form(fixture("triangle"), (0, 1, 1), (1, 0, 1))
    1
    """
    if len(k1) != t.num_edges or len(k2) != t.num_edges:
        raise LatticeError("vectors indexed over the wrong edge set")
    W = _wp_cache(t)
    return sum(x * sum(w * y for w, y in zip(row, k2)) for x, row in zip(k1, W) if x)


def _wp_cache(t):
    W = t.__dict__.get("_wp")
    if W is None:
        W = wp_matrix(t)
        t.__dict__["_wp"] = W
    return W


@dataclass(frozen=True)
class LatticeBasis:
    generators: tuple   # tuple of balanced vectors (edge coordinates)
    gram: tuple         # gram[i][j] = wp(generators[i], generators[j])

    @property
    def rank(self):
        return len(self.generators)


def make_basis(t, gens):
    gens = tuple(tuple(g) for g in gens)
    gram = tuple(tuple(wp_form(t, a, b) for b in gens) for a in gens)
    return LatticeBasis(gens, gram)


def _gf2_nullspace(rows, n):
    """Basis of {x in F_2^n : rows . x = 0}."""
    R = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(R)) if R[i][c] % 2), None)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        for i in range(len(R)):
            if i != r and R[i][c] % 2:
                R[i] = [(x + y) % 2 for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    out = []
    for fcol in free:
        x = [0] * n
        x[fcol] = 1
        for i, pc in enumerate(pivots):
            x[pc] = R[i][fcol] % 2
        out.append(x)
    return out


def balanced_basis(t):
    """A Z-basis of the balanced lattice, in edge coordinates."""
    n = t.num_edges
    idx = t.edge_index
    parity = []
    for _, sides in t.faces:
        row = [0] * n
        for e, _ in sides:
            row[idx[e]] += 1
        parity.append(row)
    gens = _gf2_nullspace(parity, n)
    gens += [[2 * int(i == j) for j in range(n)] for i in range(n)]
    rows = hermite_rows(gens, n)
    return make_basis(t, rows)


def triangle_basis(t):
    """The basis k_i (0 on one edge, 1 on the others) for a single-face surface."""
    if t.num_faces != 1:
        raise LatticeError("triangle basis needs a single face")
    gens = []
    for i in range(3):
        gens.append(tuple(0 if j == i else 1 for j in range(3)))
    return make_basis(t, gens)


def is_power_of(n, base):
    m = 0
    while n > 1 and n % base == 0:
        n //= base
        m += 1
    return m if n == 1 else None


@dataclass(frozen=True)
class PairingKernel:
    basis: LatticeBasis
    N: int
    coords: tuple        # generators of K0 in basis coordinates
    vectors: tuple       # same generators in edge coordinates
    index: int
    exponent: int        # index == N ** exponent
    divisors: tuple      # elementary divisors of the Gram matrix

    @property
    def index_str(self):
        return f"{self.N}^{self.exponent}"


def check_odd(N):
    if not isinstance(N, int) or N <= 1 or N % 2 == 0:
        raise LatticeError(f"N must be an odd integer > 1, got {N!r}")


def pairing_kernel_mod_n(basis, N):
    """
    Sublattice K0 = {k : (k, K) = 0 mod N} of the span of ``basis``.

    OUTPUT: :class:`PairingKernel` whose ``index`` is the product of
    ``N / gcd(N, d_i)`` over the elementary divisors of the Gram matrix.
    """
    check_odd(N)
    n = basis.rank
    G = [list(r) for r in basis.gram]
    U, D, V = smith_normal_form(G)
    divs = tuple(D[i][i] for i in range(n))
    scale = [N // gcd(N, d) for d in divs]
    coords = tuple(tuple(V[i][j] * scale[j] for i in range(n)) for j in range(n))
    vectors = tuple(
        tuple(sum(c[i] * basis.generators[i][e] for i in range(n))
              for e in range(len(basis.generators[0])))
        for c in coords)
    index = 1
    for s in scale:
        index *= s
    m = is_power_of(index, N)
    if m is None:
        raise LatticeError("index is not a power of N")
    return PairingKernel(basis, N, coords, vectors, index, m, divs)


def in_kernel(t, k, N):
    """True iff k pairs to 0 mod N with every balanced vector."""
    basis = balanced_basis_cached(t)
    return all(wp_form(t, k, b) % N == 0 for b in basis.generators)


def balanced_basis_cached(t):
    B = t.__dict__.get("_bbasis")
    if B is None:
        B = balanced_basis(t)
        t.__dict__["_bbasis"] = B
    return B


# ----------------------------------------------------------------------
# train tracks

def phi_to_train_track(t, k):
    """
    Corner weights Phi(k)(c) = (k(e_a) + k(e_b) - k(e_c)) / 2.

    OUTPUT: dict ``(face, slot) -> int`` for corner ``slot`` of ``face``.
    """
    check_balanced(t, k)
    idx = t.edge_index
    out = {}
    for c in t.corners:
        a, b = (k[idx[e]] for e in c.edges)
        out[(c.face, c.slot)] = (a + b - k[idx[c.opposite]]) // 2
    return out


def edge_weight_from_corners(t, w, f, j):
    """Sum of the two corner weights meeting slot j of face f."""
    return w[(f, (j - 1) % 3)] + w[(f, j)]


def check_switch(t, w):
    for e, occ in t.occurrences.items():
        vals = {edge_weight_from_corners(t, w, f, j) for f, j, _ in occ}
        if len(vals) > 1:
            raise LatticeError(f"switch condition violated at edge {e!r}")


def phi_from_train_track(t, w):
    """Inverse of :func:`phi_to_train_track`; checks the switch condition."""
    w = {c.key: int(w.get(c.key, 0)) for c in t.corners}
    check_switch(t, w)
    out = []
    for e in t.edges:
        f, j, _ = t.occurrences[e][0]
        out.append(edge_weight_from_corners(t, w, f, j))
    return tuple(out)


def constant_weights(t, n):
    """phi_[n]: weight n on every corner."""
    return {c.key: n for c in t.corners}


def weights_to_json(t, w):
    return {f"{t.faces[f][0]}/{j}": int(x) for (f, j), x in sorted(w.items())}


def weights_from_json(t, d):
    out = {}
    for key, x in d.items():
        fid, j = key.rsplit("/", 1)
        out[(t.face_index[fid], int(j))] = int(x)
    return out
