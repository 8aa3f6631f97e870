"""Linear isometric actions on (P^m, omega_FS) in an exact matrix model.

A hamiltonian Killing field of the Fubini-Study metric is represented by a
Hermitian matrix ``A`` (the generator of ``z -> exp(iAt) z``). Its mean-zero
potential is

    f_A([z]) = z*Az / |z|^2 - tr(A) / (m + 1),

and the L^2 pairing of two potentials, divided by Vol(P^m), is

    (tr A tr B + tr AB) / ((m+1)(m+2)) - tr A tr B / (m+1)^2.

Both identities come from the first and second moments of the uniform
measure on the unit sphere of C^{m+1}; :mod:`kaehler_blowup_lab.oracles`
checks them by Monte Carlo.

Everything else (invariant subalgebras, the splitting h = h' + h'', the three
blow-up conditions) is exact linear algebra over Q on the real vector space of
Hermitian matrices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import isqrt
from typing import Sequence

import sympy

from ._exact import (
    GaussianRational,
    as_fraction,
    det,
    format_fraction,
    parse_gaussian,
    nullspace,
    primitive_integer_vector,
    rank,
    rref,
    solve_unique,
)

__all__ = [
    "HermitianGenerator",
    "ProjectivePoint",
    "GroupSpec",
    "LieSplit",
    "MomentVector",
    "ConditionI",
    "RankCertificate",
    "CSCPrediction",
    "LiftZeros",
    "TorusDim",
    "fs_potential",
    "l2_pairing",
    "invariant_algebra",
    "split_algebra",
    "moment_at",
    "check_condition_i",
    "check_condition_ii",
    "check_condition_iii",
    "csc_predictor",
    "lift_zero_on_divisor",
    "torus_dim_at_fixed_point",
    "point_orbits",
    "is_fixed",
    "points_from_json",
]

G = GaussianRational
ZERO = G(0, 0)


class HermitianGenerator:
    """(m+1) x (m+1) Hermitian matrix over Q(i)."""

    __slots__ = ("entries", "n")

    def __init__(self, rows):
        ent = tuple(tuple(G.coerce(x) for x in row) for row in rows)
        n = len(ent)
        if n == 0 or any(len(r) != n for r in ent):
            raise ValueError("generator must be a non-empty square matrix")
        for j in range(n):
            for k in range(n):
                if ent[j][k] != ent[k][j].conjugate():
                    raise ValueError(f"matrix is not Hermitian at ({j}, {k})")
        self.entries = ent
        self.n = n

    # constructors ---------------------------------------------------------

    @classmethod
    def diag(cls, values):
        values = [as_fraction(v) for v in values]
        n = len(values)
        return cls([[values[j] if j == k else 0 for k in range(n)] for j in range(n)])

    @classmethod
    def identity(cls, n):
        return cls.diag([1] * n)

    @classmethod
    def sym(cls, n, j, k):
        """E_jk + E_kj (0-based), the generator of Re(z^j d_k + z^k d_j)."""
        rows = [[0] * n for _ in range(n)]
        rows[j][k] = rows[k][j] = 1
        if j == k:
            rows[j][j] = 2
        return cls(rows)

    @classmethod
    def antisym(cls, n, j, k):
        """-i E_jk + i E_kj (0-based)."""
        rows = [[ZERO] * n for _ in range(n)]
        rows[j][k] = G(0, -1)
        rows[k][j] = G(0, 1)
        return cls(rows)

    @classmethod
    def from_real_vector(cls, v, n):
        v = [as_fraction(x) for x in v]
        rows = [[ZERO] * n for _ in range(n)]
        it = iter(v)
        for j in range(n):
            rows[j][j] = G(next(it), 0)
        for j in range(n):
            for k in range(j + 1, n):
                re, im = next(it), next(it)
                rows[j][k] = G(re, im)
                rows[k][j] = G(re, -im)
        return cls(rows)

    # structure -------------------------------------------------------------

    def real_vector(self) -> list[Fraction]:
        """Coordinates in the real basis: diagonal, then (Re, Im) of the upper triangle."""
        e = self.entries
        out = [e[j][j].real for j in range(self.n)]
        for j in range(self.n):
            for k in range(j + 1, self.n):
                out += [e[j][k].real, e[j][k].imag]
        return out

    def trace(self) -> Fraction:
        return sum((self.entries[j][j].real for j in range(self.n)), Fraction(0))

    def apply(self, z: Sequence[GaussianRational]) -> list[GaussianRational]:
        return [sum((a * x for a, x in zip(row, z)), ZERO) for row in self.entries]

    def quadratic_form(self, z) -> Fraction:
        """z* A z (real for Hermitian A)."""
        az = self.apply(z)
        return sum((x.conjugate() * y for x, y in zip(z, az)), ZERO).real

    def __add__(self, other):
        return HermitianGenerator([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other):
        return HermitianGenerator([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def scale(self, c):
        c = as_fraction(c)
        return HermitianGenerator([[a * c for a in r] for r in self.entries])

    def conjugate_by(self, U):
        """U A U* for a square matrix U over Q(i) (list of rows)."""
        U = [[G.coerce(x) for x in row] for row in U]
        n = self.n
        UA = [[sum((U[i][k] * self.entries[k][j] for k in range(n)), ZERO) for j in range(n)] for i in range(n)]
        return HermitianGenerator(
            [[sum((UA[i][k] * U[j][k].conjugate() for k in range(n)), ZERO) for j in range(n)] for i in range(n)]
        )

    def __eq__(self, other):
        return isinstance(other, HermitianGenerator) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        def fmt(x):
            return str(x.real) if x.imag == 0 else f"{x.real}{'+' if x.imag >= 0 else '-'}{abs(x.imag)}i"

        body = "; ".join(" ".join(fmt(x) for x in row) for row in self.entries)
        return f"HermitianGenerator([{body}])"

    def to_json(self):
        return [[x.to_json() for x in row] for row in self.entries]


def _trace_product(A: HermitianGenerator, B: HermitianGenerator) -> Fraction:
    # tr(AB) = sum_jk A_jk B_kj = sum_jk A_jk conj(B_jk), real for Hermitian A, B
    total = Fraction(0)
    for ra, rb in zip(A.entries, B.entries):
        for a, b in zip(ra, rb):
            total += (a * b.conjugate()).real
    return total


@dataclass(frozen=True)
class ProjectivePoint:
    """Point of P^m; stored with its first nonzero coordinate equal to 1."""

    homogeneous: tuple

    def __init__(self, coords):
        z = [G.coerce(x) for x in coords]
        lead = next((x for x in z if x), None)
        if lead is None:
            raise ValueError("the zero vector is not a projective point")
        object.__setattr__(self, "homogeneous", tuple(x / lead for x in z))

    @property
    def m(self) -> int:
        return len(self.homogeneous) - 1

    def norm2(self) -> Fraction:
        return sum((x.norm2() for x in self.homogeneous), Fraction(0))

    def permuted(self, perm: Sequence[int]) -> "ProjectivePoint":
        z = [ZERO] * len(self.homogeneous)
        for j, x in enumerate(self.homogeneous):
            z[perm[j]] = x
        return ProjectivePoint(z)

    def to_json(self):
        return [x.to_json() for x in self.homogeneous]


def fs_potential(A: HermitianGenerator, p: ProjectivePoint) -> Fraction:
    """Mean-zero Fubini-Study potential of ``A`` at ``p``."""
    if A.n != len(p.homogeneous):
        raise ValueError("dimension mismatch between generator and point")
    return A.quadratic_form(p.homogeneous) / p.norm2() - A.trace() / A.n


def l2_pairing(A: HermitianGenerator, B: HermitianGenerator) -> Fraction:
    """L^2 pairing of the mean-zero potentials, normalized by Vol(P^m)."""
    if A.n != B.n:
        raise ValueError("dimension mismatch")
    n = A.n
    ta, tb = A.trace(), B.trace()
    return (ta * tb + _trace_product(A, B)) / (n * (n + 1)) - ta * tb / (n * n)


# ---------------------------------------------------------------------------
# groups


@dataclass(frozen=True)
class GroupSpec:
    """Torus weights (connected part) plus coordinate permutations (discrete part).

    Weight vectors act by ``z_j -> exp(i w_j t) z_j`` and are stored with the
    mean subtracted. Permutations are 0-based image tuples: coordinate ``j`` is
    sent to position ``perm[j]``.
    """

    circle_weights: tuple = ()
    permutations: tuple = ()

    def __init__(self, circle_weights=(), permutations=()):
        ws = []
        for w in circle_weights:
            w = [as_fraction(x) for x in w]
            mean = sum(w, Fraction(0)) / len(w)
            ws.append(tuple(x - mean for x in w))
        perms = []
        for p in permutations:
            p = tuple(int(x) for x in p)
            if sorted(p) != list(range(len(p))):
                raise ValueError(f"{p} is not a permutation")
            perms.append(p)
        object.__setattr__(self, "circle_weights", tuple(ws))
        object.__setattr__(self, "permutations", tuple(perms))

    @classmethod
    def full_torus(cls, m):
        return cls([[int(i == j) for i in range(m + 1)] for j in range(m)])

    def group_closure(self, n) -> list[tuple[int, ...]]:
        ident = tuple(range(n))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for g in frontier:
                for s in self.permutations:
                    h = tuple(s[g[j]] for j in range(n))
                    if h not in seen:
                        seen.add(h)
                        nxt.append(h)
            frontier = nxt
        return sorted(seen)

    def to_json(self):
        return {
            "circle_weights": [[format_fraction(x) for x in w] for w in self.circle_weights],
            "permutations": [list(p) for p in self.permutations],
        }


def is_fixed(p: ProjectivePoint, group: GroupSpec) -> bool:
    """p is fixed by K_0 iff its support lies in one weight space of every circle."""
    support = [j for j, x in enumerate(p.homogeneous) if x]
    return all(len({w[j] for j in support}) == 1 for w in group.circle_weights)


def point_orbits(points: Sequence[ProjectivePoint], group: GroupSpec) -> list[list[int]]:
    """Partition point indices into K-orbits (permutation part; points are K_0-fixed)."""
    n = len(points[0].homogeneous) if points else 0
    elems = group.group_closure(n)
    orbit_of = list(range(len(points)))
    for i, p in enumerate(points):
        images = {p.permuted(g) for g in elems}
        for j in range(i):
            if points[j] in images:
                orbit_of[i] = orbit_of[j]
                break
    out: dict[int, list[int]] = {}
    for i, o in enumerate(orbit_of):
        out.setdefault(o, []).append(i)
    return list(out.values())


def _perm_action_matrix(perm, n) -> list[list[Fraction]]:
    """Matrix of A -> P A P^T on real coordinates (columns = images of basis vectors)."""
    dim = n * n
    cols = []
    for i in range(dim):
        e = [Fraction(int(i == j)) for j in range(dim)]
        A = HermitianGenerator.from_real_vector(e, n)
        rows = [[ZERO] * n for _ in range(n)]
        for j in range(n):
            for k in range(n):
                rows[perm[j]][perm[k]] = A.entries[j][k]
        cols.append(HermitianGenerator(rows).real_vector())
    return [list(r) for r in zip(*cols)]


def _primitive(v):
    if all(x == 0 for x in v):
        return v
    return [Fraction(x) for x in primitive_integer_vector(v)]


def invariant_algebra(G_: GroupSpec, m: int) -> list[HermitianGenerator]:
    """Basis of h: traceless Hermitian matrices commuting with K_0 and fixed by the permutations."""
    n = m + 1
    dim = n * n
    constraints = [[Fraction(1) if i < n else Fraction(0) for i in range(dim)]]  # trace
    # index of (Re, Im) coordinates for the entry (j, k), j < k
    pos = {}
    c = n
    for j in range(n):
        for k in range(j + 1, n):
            pos[(j, k)] = c
            c += 2
    for w in G_.circle_weights:
        if len(w) != n:
            raise ValueError("circle weight length must be m + 1")
        for (j, k), i in pos.items():
            if w[j] != w[k]:
                for off in (0, 1):
                    constraints.append([Fraction(int(t == i + off)) for t in range(dim)])
    for perm in G_.permutations:
        if len(perm) != n:
            raise ValueError("permutation length must be m + 1")
        T = _perm_action_matrix(perm, n)
        for r in range(dim):
            constraints.append([T[r][t] - (1 if r == t else 0) for t in range(dim)])
    basis = [_primitive(v) for v in nullspace(constraints, dim)]
    return [HermitianGenerator.from_real_vector(v, n) for v in basis]


# ---------------------------------------------------------------------------
# splitting


@dataclass
class LieSplit:
    h_basis: list
    h_prime_basis: list
    h_doubleprime_basis: list
    gram: list
    group: GroupSpec = field(default_factory=GroupSpec)
    # coordinates of h' and h'' basis elements in terms of h_basis
    prime_coords: list = field(default_factory=list)
    doubleprime_coords: list = field(default_factory=list)

    @property
    def m(self) -> int:
        return self.h_basis[0].n - 1 if self.h_basis else -1

    def projectors(self):
        """Matrices (in h-coordinates) of the G-orthogonal projections onto h' and h''."""
        d = len(self.h_basis)

        def proj(Y):
            if not Y:
                return [[Fraction(0)] * d for _ in range(d)]
            # P = Y (Y^T G Y)^{-1} Y^T G
            GY = [[sum(self.gram[i][k] * y[k] for k in range(d)) for y in Y] for i in range(d)]
            YtGY = [[sum(Y[a][i] * GY[i][b] for i in range(d)) for b in range(len(Y))] for a in range(len(Y))]
            cols = []
            for e in range(d):
                rhs = [GY[e][a] for a in range(len(Y))]  # (Y^T G)_{a,e}
                cols.append(solve_unique(YtGY, rhs))
            return [[sum(Y[a][i] * cols[e][a] for a in range(len(Y))) for e in range(d)] for i in range(d)]

        return proj(self.prime_coords), proj(self.doubleprime_coords)


def _combine(basis, coords):
    out = basis[0].scale(0)
    for b, c in zip(basis, coords):
        if c:
            out = out + b.scale(c)
    return out


def gram_matrix(basis) -> list[list[Fraction]]:
    return [[l2_pairing(a, b) for b in basis] for a in basis]


def split_algebra(h_basis, G_: GroupSpec) -> LieSplit:
    """Split h into h' = h ∩ k and its L^2-orthogonal complement h''."""
    h_basis = list(h_basis)
    gram = gram_matrix(h_basis)
    d = len(h_basis)
    if d == 0:
        return LieSplit([], [], [], [], G_)
    if rank(gram) != d:
        raise RuntimeError("Gram matrix of h is singular")
    n = h_basis[0].n
    k_vecs = [HermitianGenerator.diag(w).real_vector() for w in G_.circle_weights]
    hv = [A.real_vector() for A in h_basis]
    # solve sum x_i h_i - sum y_c k_c = 0
    cols = hv + [[-x for x in kv] for kv in k_vecs]
    system = [list(r) for r in zip(*cols)]
    sol = nullspace(system, len(cols))
    xs = [s[:d] for s in sol if any(s[:d])]
    prime = []
    if xs:
        r, piv = rref(xs)
        prime = [_primitive(row) for row in r[: len(piv)]]
    if prime:
        rows = [[sum(y[i] * gram[i][j] for i in range(d)) for j in range(d)] for y in prime]
        dprime = [_primitive(v) for v in nullspace(rows, d)]
    else:
        dprime = [[Fraction(int(i == j)) for i in range(d)] for j in range(d)]
    return LieSplit(
        h_basis=h_basis,
        h_prime_basis=[_combine(h_basis, c) for c in prime],
        h_doubleprime_basis=[_combine(h_basis, c) for c in dprime],
        gram=gram,
        group=G_,
        prime_coords=prime,
        doubleprime_coords=dprime,
    )


@dataclass(frozen=True)
class MomentVector:
    values: tuple
    fixed: bool = True


def moment_at(p: ProjectivePoint, split: LieSplit) -> MomentVector:
    """Pairings <xi(p), X> against the h basis; ``fixed`` flags K_0-fixedness of p."""
    return MomentVector(tuple(fs_potential(X, p) for X in split.h_basis), is_fixed(p, split.group))


# ---------------------------------------------------------------------------
# conditions (i)-(iii)


def _moment_matrix(points, basis):
    return [[fs_potential(X, p) for X in basis] for p in points]


@dataclass
class ConditionI:
    """Outcome of the relative moment condition.

    ``status`` is ``"vacuous"`` (h'' = 0), ``"feasible"``, ``"degenerate-feasible"``
    (nonnegative solutions exist but some weight is forced to zero) or
    ``"infeasible"``. ``weights`` is a strictly positive witness normalized to
    sum 1; ``kernel`` spans the solutions of the linear system in orbit
    variables; ``certificate`` holds coordinates (in the h'' basis) of a field
    whose potential is >= 0 on every orbit and > 0 on one.
    """

    status: str
    weights: list | None
    kernel: list
    vertices: list
    orbits: list
    certificate: list | None = None

    @property
    def feasible(self) -> bool:
        return self.status in ("vacuous", "feasible")

    def __bool__(self):
        return self.feasible

    def integer_weights(self) -> list[int] | None:
        return None if self.weights is None else primitive_integer_vector(self.weights)

    def contains(self, weights) -> bool:
        """Is the given weight vector (per point) in the positive solution cone?"""
        w = [as_fraction(x) for x in weights]
        if any(x <= 0 for x in w):
            return False
        for orb in self.orbits:
            if len({w[j] for j in orb}) != 1:
                return False
        b = [w[orb[0]] for orb in self.orbits]
        if not self.kernel:
            return self.status == "vacuous"
        return rank(self.kernel + [b]) == rank(self.kernel)


def _nonneg_vertices(cols: list[list[Fraction]]) -> list[list[Fraction]]:
    """Vertices of {b >= 0, sum b = 1, sum_o b_o cols[o] = 0}."""
    r = len(cols)
    d = len(cols[0]) if cols else 0
    out = []
    for size in range(1, r + 1):
        for S in combinations(range(r), size):
            rows = [[cols[o][i] for o in S] for i in range(d)] + [[Fraction(1)] * size]
            if rank(rows) < size:
                continue
            sol = solve_unique(rows, [Fraction(0)] * d + [Fraction(1)])
            if sol is None or any(x < 0 for x in sol):
                continue
            b = [Fraction(0)] * r
            for o, x in zip(S, sol):
                b[o] = x
            if b not in out:
                out.append(b)
    return out


def _separating_functional(cols: list[list[Fraction]]) -> list[Fraction] | None:
    """y with y.c_o >= 0 for all o and sum_o y.c_o = 1, or None."""
    d = len(cols[0])
    r_, piv = rref(cols)
    V = [row for row in r_[: len(piv)]]  # basis of span(cols)
    rho = len(V)
    if rho == 0:
        return None
    Gm = [[sum(v[i] * c[i] for i in range(d)) for v in V] for c in cols]  # r x rho
    total = [sum(Gm[o][t] for o in range(len(cols))) for t in range(rho)]
    for S in combinations(range(len(cols)), rho - 1):
        rows = [Gm[o] for o in S] + [total]
        t = solve_unique(rows, [Fraction(0)] * (rho - 1) + [Fraction(1)])
        if t is None:
            continue
        if all(sum(g[i] * t[i] for i in range(rho)) >= 0 for g in Gm):
            return [sum(t[i] * V[i][k] for i in range(rho)) for k in range(d)]
    return None


def check_condition_i(points: Sequence[ProjectivePoint], split: LieSplit) -> ConditionI:
    """Find a_j > 0 (equal along K-orbits) with sum_j a_j xi(p_j) vanishing on h''."""
    orbits = point_orbits(points, split.group)
    if not split.h_doubleprime_basis:
        w = [Fraction(1, len(points))] * len(points)
        return ConditionI("vacuous", w, [], [], orbits)
    M = _moment_matrix(points, split.h_doubleprime_basis)
    d = len(split.h_doubleprime_basis)
    cols = [[sum(M[j][b] for j in orb) for b in range(d)] for orb in orbits]
    system = [[cols[o][b] for o in range(len(orbits))] for b in range(d)]
    kernel = nullspace(system, len(orbits))
    verts = _nonneg_vertices(cols)
    if verts:
        avg = [sum(v[o] for v in verts) / len(verts) for o in range(len(orbits))]
        if all(x > 0 for x in avg):
            w = [Fraction(0)] * len(points)
            for orb, x in zip(orbits, avg):
                for j in orb:
                    w[j] = x
            s = sum(w)
            w = [x / s for x in w]
            return ConditionI("feasible", w, kernel, verts, orbits)
        status = "degenerate-feasible"
    else:
        status = "infeasible"
    cert = _separating_functional(cols)
    return ConditionI(status, None, kernel, verts, orbits, cert)


@dataclass
class RankCertificate:
    """Result of a rank test; ``minor`` witnesses success, ``kernel`` failure."""

    holds: bool
    rank: int
    expected: int
    minor_rows: list | None = None
    minor: Fraction | None = None
    kernel: list | None = None

    def __bool__(self):
        return self.holds


def _rank_certificate(rows: list[list[Fraction]], d: int) -> RankCertificate:
    if d == 0:
        return RankCertificate(True, 0, 0, [], Fraction(1))
    r = rank(rows) if rows else 0
    if r == d:
        _, piv = rref([list(c) for c in zip(*rows)])
        sub = [rows[i] for i in piv[:d]]
        return RankCertificate(True, r, d, list(piv[:d]), det(sub))
    ker = nullspace(rows, d) if rows else nullspace([], d)
    return RankCertificate(False, r, d, kernel=ker[0])


def check_condition_ii(points: Sequence[ProjectivePoint], split: LieSplit) -> RankCertificate:
    """Do the projections of xi(p_j) span (h'')*?"""
    d = len(split.h_doubleprime_basis)
    M = _moment_matrix(points, split.h_doubleprime_basis)
    return _rank_certificate(M, d)


def _field_at(A: HermitianGenerator, p: ProjectivePoint) -> list[GaussianRational]:
    # A p |p|^2 - (p* A p) p: zero iff p is an eigenvector of A
    z = p.homogeneous
    az = A.apply(z)
    q = A.quadratic_form(z)
    n2 = p.norm2()
    return [x * n2 - y * q for x, y in zip(az, z)]


def check_condition_iii(points: Sequence[ProjectivePoint], split: LieSplit) -> RankCertificate:
    """Is there no nonzero element of h'' vanishing at every point?"""
    basis = split.h_doubleprime_basis
    d = len(basis)
    rows = []
    for p in points:
        vals = [_field_at(X, p) for X in basis]
        for i in range(len(p.homogeneous)):
            rows.append([v[i].real for v in vals])
            rows.append([v[i].imag for v in vals])
    return _rank_certificate(rows, d)


@dataclass(frozen=True)
class CSCPrediction:
    nonconstant: bool
    moment_sum: tuple

    def __bool__(self):
        return self.nonconstant


def csc_predictor(points, weights, split: LieSplit) -> CSCPrediction:
    """Nonconstant scalar curvature is forced when sum_j a_j xi(p_j) != 0 on h."""
    weights = [as_fraction(a) for a in weights]
    if len(weights) != len(points):
        raise ValueError("one weight per point is required")
    total = [Fraction(0)] * len(split.h_basis)
    for a, p in zip(weights, points):
        for b, X in enumerate(split.h_basis):
            total[b] += a * fs_potential(X, p)
    return CSCPrediction(any(total), tuple(total))


# ---------------------------------------------------------------------------
# lifting lemmas


@dataclass(frozen=True)
class LiftZeros:
    """Zeros on the exceptional divisor of the lift of a linear 2-jet.

    ``roots`` are finite slopes ``lambda`` (line ``z1 = lambda z2``), either
    :class:`GaussianRational` or sympy expressions for irrational roots.
    """

    roots: tuple
    at_infinity: bool = False
    every_direction: bool = False


def _rational_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    n, d = x.numerator, x.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def _gaussian_sqrt(z: GaussianRational) -> GaussianRational | None:
    modulus = _rational_sqrt(z.norm2())
    if modulus is None:
        return None
    x = _rational_sqrt((modulus + z.real) / 2)
    y = _rational_sqrt((modulus - z.real) / 2)
    if x is None or y is None:
        return None
    if z.imag < 0:
        y = -y
    return G(x, y)


def _to_sympy(z: GaussianRational):
    return sympy.Rational(z.real.numerator, z.real.denominator) + sympy.I * sympy.Rational(
        z.imag.numerator, z.imag.denominator
    )


def lift_zero_on_divisor(a, b, c, d) -> LiftZeros:
    """Roots of -c l^2 + (a - d) l + b for the jet X1 = a z1 + b z2, X2 = c z1 + d z2."""
    a, b, c, d = (G.coerce(x) for x in (a, b, c, d))
    if not (a or b or c or d):
        raise ValueError("zero_jet: the linear part vanishes identically")
    lin = a - d
    if not c:
        if lin:
            return LiftZeros((-b / lin,))
        if b:
            return LiftZeros((), at_infinity=True)
        return LiftZeros((), every_direction=True)
    disc = lin * lin + 4 * c * b
    root = _gaussian_sqrt(disc)
    if root is not None:
        r1 = (lin + root) / (2 * c)
        r2 = (lin - root) / (2 * c)
        return LiftZeros((r1,) if r1 == r2 else (r1, r2))
    s = sympy.sqrt(_to_sympy(disc))
    den = 2 * _to_sympy(c)
    L = _to_sympy(lin)
    return LiftZeros((sympy.simplify((L + s) / den), sympy.simplify((L - s) / den)))


@dataclass(frozen=True)
class TorusDim:
    dim: int
    forces_h_pp_zero: bool
    induced_weights: tuple


def torus_dim_at_fixed_point(G_: GroupSpec, p: ProjectivePoint, m: int) -> TorusDim:
    """Dimension of the image of K_0 in GL(T_p P^m) from the induced weights."""
    if len(p.homogeneous) != m + 1:
        raise ValueError("point dimension mismatch")
    if not is_fixed(p, G_):
        raise ValueError("point is not fixed by K_0")
    support = [j for j, x in enumerate(p.homogeneous) if x]
    at_p = [w[support[0]] for w in G_.circle_weights]
    skip = support[0]  # the line through p itself
    induced = []
    for k in range(m + 1):
        if k == skip:
            continue
        induced.append(tuple(w[k] - wp for w, wp in zip(G_.circle_weights, at_p)))
    r = rank([list(v) for v in induced]) if G_.circle_weights else 0
    return TorusDim(r, r == m, tuple(induced))


def points_from_json(data) -> list[ProjectivePoint]:
    if isinstance(data, str):
        data = json.loads(data)
    pts = []
    for p in data:
        pts.append(ProjectivePoint([_coord_from_json(x) for x in p]))
    return pts


def _coord_from_json(x):
    # "a/b+c/di" strings, [re, im] pairs or plain rationals
    if isinstance(x, list):
        return G(*(as_fraction(t) for t in x))
    if isinstance(x, str):
        return parse_gaussian(x)
    return G(as_fraction(x))
