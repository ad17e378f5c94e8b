"""
Balanced quantum tori at roots of unity.

Coefficients live in ``Z[omega, omega^-1]`` (generic mode) or in the
cyclotomic ring ``Z[x]/(Phi_N)`` with ``x = omega`` a primitive N-th root of
unity (N mode).  Monomials multiply by

    Z^a Z^b = omega^{-(a, b)} Z^{a+b}

with ``( , )`` the Weil-Petersson pairing.
"""
from __future__ import annotations

import cmath
from itertools import product
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from .lattice import (LatticeError, balanced_basis_cached, check_balanced,
                      check_odd, pairing_kernel_mod_n, solve_in_basis,
                      vadd, vscale, wp_form, zero_vector)


# ----------------------------------------------------------------------
# cyclotomic arithmetic

def _poly_divexact(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Coefficients (constant term first) of the n-th cyclotomic polynomial."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(N):
    """x^j mod Phi_N for j = 0..N-1, as coefficient tuples of length phi(N)."""
    phi = cyclotomic_polynomial(N)
    deg = len(phi) - 1
    table = []
    cur = [1] + [0] * (deg - 1)
    for _ in range(N):
        table.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            cur = [c - top * p for c, p in zip(cur, phi[:-1])]
    return tuple(table)


def totient_degree(N):
    return len(cyclotomic_polynomial(N)) - 1


class CyclotomicScalar:
    """
    An element of ``Z[omega^{+-1}]`` (``N is None``) or of ``Z[omega]/(Phi_N)``.

    Mixing the two modes, or two different N, raises ``TypeError``.
    """
    __slots__ = ("N", "data")

    def __init__(self, data, N=None):
        self.N = N
        if N is None:
            self.data = {int(k): int(v) for k, v in dict(data).items() if v}
        else:
            self.data = tuple(int(v) for v in data)

    # constructors
    @classmethod
    def omega(cls, j=1, N=None, coeff=1):
        if N is None:
            return cls({j: coeff})
        return cls(tuple(coeff * c for c in _power_table(N)[j % N]), N)

    @classmethod
    def integer(cls, c, N=None):
        return cls.omega(0, N, c)

    @classmethod
    def zero(cls, N=None):
        return cls.integer(0, N)

    @classmethod
    def one(cls, N=None):
        return cls.integer(1, N)

    @classmethod
    def from_laurent(cls, terms, N=None):
        """Scalar from an iterable of (exponent, coefficient) pairs."""
        acc = {}
        for j, c in terms:
            acc[j] = acc.get(j, 0) + c
        return cls(acc).at(N) if N is not None else cls(acc)

    def _coerce(self, other):
        if isinstance(other, int):
            return CyclotomicScalar.integer(other, self.N)
        if not isinstance(other, CyclotomicScalar):
            return NotImplemented
        if other.N != self.N:
            raise TypeError(f"cannot mix scalar modes N={self.N} and N={other.N}")
        return other

    # arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.N is None:
            d = dict(self.data)
            for k, v in other.data.items():
                d[k] = d.get(k, 0) + v
            return CyclotomicScalar(d)
        return CyclotomicScalar(tuple(a + b for a, b in zip(self.data, other.data)), self.N)

    __radd__ = __add__

    def __neg__(self):
        if self.N is None:
            return CyclotomicScalar({k: -v for k, v in self.data.items()})
        return CyclotomicScalar(tuple(-a for a in self.data), self.N)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.N is None:
            d = {}
            for i, a in self.data.items():
                for j, b in other.data.items():
                    d[i + j] = d.get(i + j, 0) + a * b
            return CyclotomicScalar(d)
        N = self.N
        table = _power_table(N)
        acc = [0] * len(self.data)
        for i, a in enumerate(self.data):
            if not a:
                continue
            for j, b in enumerate(other.data):
                if b:
                    for k, c in enumerate(table[(i + j) % N]):
                        if c:
                            acc[k] += a * b * c
        return CyclotomicScalar(tuple(acc), N)

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        out = CyclotomicScalar.one(self.N)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def times_omega(self, j):
        """self * omega^j."""
        if self.N is None:
            return CyclotomicScalar({k + j: v for k, v in self.data.items()})
        return self * CyclotomicScalar.omega(j, self.N)

    def is_zero(self):
        return not any(self.data.values()) if self.N is None else not any(self.data)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, int):
            other = CyclotomicScalar.integer(other, self.N)
        if not isinstance(other, CyclotomicScalar):
            return NotImplemented
        if other.N != self.N:
            raise TypeError(f"cannot compare scalar modes N={self.N} and N={other.N}")
        return self.data == other.data

    def __hash__(self):
        if self.N is None:
            return hash(tuple(sorted(self.data.items())))
        return hash((self.N, self.data))

    def at(self, N):
        """Specialize a generic scalar at a primitive N-th root of unity."""
        if self.N is not None:
            if self.N != N:
                raise TypeError(f"scalar already specialized at N={self.N}")
            return self
        check_odd(N)
        out = CyclotomicScalar.zero(N)
        acc = list(out.data)
        table = _power_table(N)
        for j, c in self.data.items():
            for k, v in enumerate(table[j % N]):
                acc[k] += c * v
        return CyclotomicScalar(tuple(acc), N)

    def as_monomial(self):
        """(c, j) with self == c*omega^j for c in {1, -1}, else None."""
        if self.N is None:
            if len(self.data) == 1:
                (j, c), = self.data.items()
                if c in (1, -1):
                    return c, j
            return None
        table = _power_table(self.N)
        for j, row in enumerate(table):
            if row == self.data:
                return 1, j
            if all(a == -b for a, b in zip(row, self.data)):
                return -1, j
        return None

    def inverse(self):
        m = self.as_monomial()
        if m is None:
            raise ZeroDivisionError("only signed powers of omega are inverted")
        c, j = m
        return CyclotomicScalar.omega(-j, self.N, c)

    def to_complex(self, N=None):
        N = self.N if self.N is not None else N
        if N is None:
            raise ValueError("generic scalar needs N for numerical evaluation")
        z = cmath.exp(2j * cmath.pi / N)
        items = self.data.items() if self.N is None else enumerate(self.data)
        return sum(c * z ** (k % N) for k, c in items)

    def to_json(self):
        if self.N is None:
            return {str(k): v for k, v in sorted(self.data.items())}
        return list(self.data)

    def __repr__(self):
        items = sorted(self.data.items()) if self.N is None else \
            [(k, c) for k, c in enumerate(self.data) if c]
        if not items:
            return "0"
        parts = []
        for k, c in items:
            mon = "" if k == 0 else ("w" if k == 1 else f"w^{k}")
            if not mon:
                parts.append(str(c))
            elif c == 1:
                parts.append(mon)
            elif c == -1:
                parts.append("-" + mon)
            else:
                parts.append(f"{c}*{mon}")
        return " + ".join(parts).replace("+ -", "- ")


# ----------------------------------------------------------------------
# torus elements

class TorusElement:
    """
    Finite sum ``sum_k c_k Z^k`` over the balanced lattice of ``t``.

    ``N`` selects the coefficient mode; ``None`` means generic omega.
    """
    __slots__ = ("t", "N", "terms")

    def __init__(self, t, terms=None, N=None):
        self.t = t
        self.N = N
        clean = {}
        for k, c in (terms or {}).items():
            if isinstance(c, int):
                c = CyclotomicScalar.integer(c, N)
            elif c.N != N:
                raise TypeError("coefficient mode does not match the element")
            if c:
                clean[tuple(k)] = c
        self.terms = clean

    @classmethod
    def monomial(cls, t, k, N=None, coeff=1):
        check_balanced(t, k)
        return cls(t, {tuple(k): coeff}, N)

    @classmethod
    def scalar(cls, t, c, N=None):
        return cls(t, {zero_vector(t): c}, N)

    def _check(self, other):
        if not isinstance(other, TorusElement):
            raise TypeError("expected a TorusElement")
        if other.t is not self.t and other.t != self.t:
            raise ValueError("elements over different triangulations")
        if other.N != self.N:
            raise TypeError(f"cannot mix coefficient modes N={self.N} and N={other.N}")

    def __add__(self, other):
        if isinstance(other, (int, CyclotomicScalar)):
            other = TorusElement.scalar(self.t, other, self.N)
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            terms[k] = terms[k] + c if k in terms else c
        return TorusElement(self.t, terms, self.N)

    __radd__ = __add__

    def __neg__(self):
        return TorusElement(self.t, {k: -c for k, c in self.terms.items()}, self.N)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        if isinstance(c, int):
            c = CyclotomicScalar.integer(c, self.N)
        return TorusElement(self.t, {k: v * c for k, v in self.terms.items()}, self.N)

    def __mul__(self, other):
        if isinstance(other, (int, CyclotomicScalar)):
            return self.scale(other)
        self._check(other)
        terms = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                k = vadd(k1, k2)
                c = (c1 * c2).times_omega(-wp_form(self.t, k1, k2))
                terms[k] = terms[k] + c if k in terms else c
        return TorusElement(self.t, terms, self.N)

    def __rmul__(self, other):
        if isinstance(other, (int, CyclotomicScalar)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative powers are only defined for monomials")
        out = TorusElement.scalar(self.t, 1, self.N)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, int):
            other = TorusElement.scalar(self.t, other, self.N)
        if not isinstance(other, TorusElement):
            return NotImplemented
        self._check(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms))

    def is_zero(self):
        return not self.terms

    def at(self, N):
        return TorusElement(self.t, {k: c.at(N) for k, c in self.terms.items()}, N)

    def support(self):
        return sorted(self.terms)

    def commutator(self, other):
        return self * other - other * self

    def to_json(self):
        return [{"exponent": {e: int(x) for e, x in zip(self.t.edges, k)},
                 "coeff": c.to_json()} for k, c in sorted(self.terms.items())]

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({c})Z^{list(k)}" for k, c in sorted(self.terms.items()))


def torus_multiply(a, b):
    return a * b


def is_central(x, N):
    """
    True iff every exponent of ``x`` pairs to 0 mod N with the whole balanced lattice.
    """
    check_odd(N)
    gens = balanced_basis_cached(x.t).generators
    return all(wp_form(x.t, k, g) % N == 0 for k in x.terms for g in gens)


def commutes_with_basis(x):
    """Independent centrality test: [x, Z^b] == 0 for every basis vector b."""
    if x.N is None:
        raise TypeError("commutation test needs a root-of-unity element")
    for g in balanced_basis_cached(x.t).generators:
        zb = TorusElement.monomial(x.t, g, x.N)
        if not x.commutator(zb).is_zero():
            return False
    return True


@dataclass(frozen=True)
class TorusRank:
    N: int
    exponent: int

    @property
    def value(self):
        return self.N ** self.exponent

    @property
    def sqrt_exponent(self):
        return self.exponent // 2

    def __str__(self):
        return f"{self.N}^{self.exponent}"


def torus_rank(t, N):
    """Rank [K : K0] of the balanced torus over its centre, as a power of N."""
    K = pairing_kernel_mod_n(balanced_basis_cached(t), N)
    return TorusRank(N, K.exponent)


# ----------------------------------------------------------------------
# symplectic reduction and explicit irreducible representations

def skew_normal_form(G):
    """
    INPUT: a skew-symmetric integer matrix ``G``.

    OUTPUT: ``(P, pairs, radical)`` with ``P`` unimodular such that
    ``P G P^T`` is block diagonal: rows ``(i, i+1)`` for each entry
    ``(i, d)`` of ``pairs`` carry ``[[0, d], [-d, 0]]`` with ``d > 0``, and
    the rows listed in ``radical`` pair to zero with everything.
    """
    n = len(G)
    P = [[int(i == j) for j in range(n)] for i in range(n)]

    def gram():
        PG = [[sum(P[i][k] * G[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        return [[sum(PG[i][k] * P[j][k] for k in range(n)) for j in range(n)] for i in range(n)]

    pairs = []
    pos = 0
    while pos < n - 1:
        H = gram()
        best = None
        for i in range(pos, n):
            for j in range(pos, n):
                if H[i][j] and (best is None or abs(H[i][j]) < abs(H[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if H[i][j] < 0:
            i, j = j, i
        # bring i to pos and j to pos+1
        P[pos], P[i] = P[i], P[pos]
        if j == pos:
            j = i
        P[pos + 1], P[j] = P[j], P[pos + 1]
        H = gram()
        d = H[pos][pos + 1]
        for k in range(pos + 2, n):
            q = H[pos][k] // d
            if q:
                P[k] = [a - q * b for a, b in zip(P[k], P[pos + 1])]
            q2 = H[pos + 1][k] // (-d)
            if q2:
                P[k] = [a - q2 * b for a, b in zip(P[k], P[pos])]
        H = gram()
        if any(H[pos][k] or H[pos + 1][k] for k in range(pos + 2, n)):
            continue
        pairs.append((pos, d))
        pos += 2
    radical = [i for i in range(pos, n)]
    H = gram()
    assert all(H[i][j] == 0 for i in radical for j in range(n))
    return P, pairs, radical


def _clock(n, q):
    return np.diag([q ** k for k in range(n)])


def _shift(n):
    S = np.zeros((n, n), dtype=complex)
    for k in range(n):
        S[(k + 1) % n, k] = 1
    return S


@dataclass
class Representation:
    """
    Finite-dimensional representation of the balanced torus at
    ``omega = exp(2 pi i / N)``.
    """
    t: object
    N: int
    dimension: int
    symplectic: tuple        # symplectic basis vectors (edge coordinates)
    gen_images: tuple        # image of Z^{symplectic[i]}
    central_generators: tuple
    character: dict
    images: dict = field(default_factory=dict)   # balanced basis vector -> matrix

    def omega_power(self, j):
        return cmath.exp(2j * cmath.pi * (j % self.N) / self.N)

    def image(self, k):
        """Matrix of Z^k for an arbitrary balanced k."""
        coords = solve_in_basis([list(v) for v in self.symplectic], list(k))
        M = np.eye(self.dimension, dtype=complex)
        parts = []
        for c, v in zip(coords, self.symplectic):
            if c:
                parts.append(vscale(c, v))
                M = M @ np.linalg.matrix_power(self._gen(v), c) if c > 0 else \
                    M @ np.linalg.matrix_power(np.linalg.inv(self._gen(v)), -c)
        # Weyl normalization: Z^{x1+...+xm} = omega^{sum_{s<t}(x_s,x_t)} Z^{x1}...Z^{xm}
        j = sum(wp_form(self.t, parts[s], parts[u])
                for s in range(len(parts)) for u in range(s + 1, len(parts)))
        return self.omega_power(j) * M

    def _gen(self, v):
        return self.gen_images[self.symplectic.index(v)]

    def relation_residual(self):
        """max |Z^a Z^b - omega^{-2(a,b)} Z^b Z^a| over the balanced basis."""
        gens = balanced_basis_cached(self.t).generators
        worst = 0.0
        for a in gens:
            for b in gens:
                A, B = self.image(a), self.image(b)
                lhs = A @ B
                rhs = self.omega_power(-2 * wp_form(self.t, a, b)) * (B @ A)
                worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return worst

    def weyl_residual(self, pairs):
        """max |Z^a Z^b - omega^{-(a,b)} Z^{a+b}| over the given pairs."""
        worst = 0.0
        for a, b in pairs:
            lhs = self.image(a) @ self.image(b)
            rhs = self.omega_power(-wp_form(self.t, a, b)) * self.image(vadd(a, b))
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
        return worst

    def center_residual(self):
        """Max deviation of the central generator images from the declared scalars."""
        worst = 0.0
        eye = np.eye(self.dimension)
        for g in self.central_generators:
            M = self.image(g)
            worst = max(worst, float(np.max(np.abs(M - self.character[g] * eye))))
        return worst

    def span_dimension(self, tol=1e-8):
        """Dimension of the linear span of the monomial images Z^k, k in a box mod K0."""
        n = len(self.symplectic)
        ranges = []
        for i in range(n):
            # order of each symplectic generator modulo the centre
            order = 1
            v = self.symplectic[i]
            while not _in_center(self.t, vscale(order, v), self.N):
                order += 1
            ranges.append(order)
        rows = []
        for cs in product(*[range(r) for r in ranges]):
            k = zero_vector(self.t)
            for c, v in zip(cs, self.symplectic):
                k = vadd(k, vscale(c, v))
            rows.append(self.image(k).reshape(-1))
        return int(np.linalg.matrix_rank(np.array(rows), tol=tol))

    def to_json(self):
        def mat(M):
            return [[[float(z.real), float(z.imag)] for z in row] for row in M]
        return {"dimension": self.dimension, "N": self.N,
                "generators": [{"exponent": {e: int(x) for e, x in zip(self.t.edges, g)},
                                "matrix": mat(M)} for g, M in self.images.items()]}


def _in_center(t, k, N):
    return all(wp_form(t, k, g) % N == 0 for g in balanced_basis_cached(t).generators)


def center_generators(t, N):
    """
    Z-basis of K0 adapted to a symplectic basis of the balanced lattice.

    OUTPUT: ``(symplectic, orders, central)`` where ``central[i]`` equals
    ``orders[i] * symplectic[i]``.
    """
    check_odd(N)
    B = balanced_basis_cached(t)
    P, pairs, radical = skew_normal_form([list(r) for r in B.gram])
    n = B.rank
    symp = [tuple(sum(P[i][r] * B.generators[r][e] for r in range(n))
                  for e in range(t.num_edges)) for i in range(n)]
    orders = [1] * n
    for pos, d in pairs:
        m = N // gcd(N, d)
        orders[pos] = orders[pos + 1] = m
    central = [vscale(o, v) for o, v in zip(orders, symp)]
    return tuple(symp), tuple(orders), tuple(central), pairs


def build_irrep(t, N, character=None):
    """
    Irreducible representation of the balanced torus with prescribed central character.

    INPUT:

    - ``t`` -- triangulation
    - ``N`` -- odd order of omega
    - ``character`` -- dict from central generator vectors (see
      :func:`center_generators`) to nonzero complex numbers; missing entries
      default to 1

    OUTPUT: :class:`Representation` of dimension ``sqrt(rank)``.
    """
    check_odd(N)
    symp, orders, central, pairs = center_generators(t, N)
    character = dict(character or {})
    unknown = set(character) - set(central)
    if unknown:
        raise LatticeError(f"character given on non-generators {sorted(unknown)}")
    chi = {}
    for g in central:
        val = complex(character.get(g, 1))
        if abs(val) < 1e-12:
            raise LatticeError("character value must be nonzero on invertible generators")
        chi[g] = val
    omega = cmath.exp(2j * cmath.pi / N)
    factors = []
    for pos, d in pairs:
        m = orders[pos]
        if m > 1:
            factors.append((pos, m, omega ** ((-2 * d) % N)))
    dim = 1
    for _, m, _ in factors:
        dim *= m
    images = [None] * len(symp)
    for i in range(len(symp)):
        images[i] = np.eye(dim, dtype=complex)

    def embed(mat, slot):
        out = np.eye(1, dtype=complex)
        for s, (_, m, _) in enumerate(factors):
            out = np.kron(out, mat if s == slot else np.eye(m))
        return out

    for s, (pos, m, q) in enumerate(factors):
        images[pos] = embed(_clock(m, q), s)
        images[pos + 1] = embed(_shift(m), s)
    # scale so that Z^{o v} acts by the declared character value
    for i, (o, g) in enumerate(zip(orders, central)):
        root = chi[g] ** (1.0 / o)
        images[i] = root * images[i]
    rep = Representation(t, N, dim, symp, tuple(images), central, chi)
    basis = balanced_basis_cached(t).generators
    rep.images = {g: rep.image(g) for g in basis}
    expected = torus_rank(t, N)
    if dim * dim != expected.value:
        raise AssertionError("representation dimension does not match the rank")
    return rep


def irrep_dimension(t, N):
    r = torus_rank(t, N)
    return isqrt(r.value)
