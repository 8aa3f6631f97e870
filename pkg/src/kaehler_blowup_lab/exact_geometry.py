"""Exact-rational toric polytopes: volume, barycenter, corner chops and the
toric Futaki functional.

A polytope is stored twice, as its vertices and as facet inequalities
``<normal, x> <= offset`` with primitive integer normals; the two are
cross-checked when the object is built. All integrals are computed from a
deterministic triangulation (a fan from the vertex centroid of every face,
recursively), so results are exact :class:`~fractions.Fraction` values.

The Futaki functional is Donaldson's boundary-minus-interior form

    F_i = int_{dP} x_i dsigma - (sigma(dP) / Vol(P)) int_P x_i dx,

where on each facet ``dsigma`` is Lebesgue measure divided by the length of
the primitive facet normal. It is translation invariant and vanishes exactly
when the Futaki character of the corresponding toric Kähler class does.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from math import factorial
from typing import Iterable, Sequence

from ._exact import as_fraction, det, format_fraction, nullspace, primitive_integer_vector, rank, solve_unique

__all__ = [
    "GeometryError",
    "Facet",
    "ChopSpec",
    "DelzantPolytope",
    "polytope_volume",
    "polytope_barycenter",
    "corner_chop",
    "futaki_linear_functional",
    "blown_up_projective_polytope",
    "blown_up_projective_futaki",
    "standard_simplex",
    "HEXAGON",
    "KE_TRIANGLE",
]

Point = tuple  # tuple of Fractions


class GeometryError(ValueError):
    """Raised for invalid polytopes and inadmissible operations.

    ``code`` is a short machine-readable tag such as ``"degenerate"`` or
    ``"weight_exceeds_polytope"``.
    """

    def __init__(self, code: str, message: str = ""):
        super().__init__(f"{code}: {message}" if message else code)
        self.code = code


@dataclass(frozen=True)
class Facet:
    normal: tuple[int, ...]
    offset: Fraction

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return sum((n * xi for n, xi in zip(self.normal, x)), Fraction(0))

    def contains(self, x) -> bool:
        return self.value(x) == self.offset


@dataclass(frozen=True)
class ChopSpec:
    vertex_index: int
    weight: Fraction

    def __post_init__(self):
        w = as_fraction(self.weight)
        if w <= 0:
            raise GeometryError("nonpositive_weight", f"chop weight must be > 0, got {w}")
        object.__setattr__(self, "weight", w)


def _point(p) -> Point:
    return tuple(as_fraction(x) for x in p)


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _dot(a, b) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _centroid(points) -> Point:
    k = len(points)
    return tuple(sum(c, Fraction(0)) / k for c in zip(*points))


def _affine_dim(points) -> int:
    if len(points) <= 1:
        return 0
    base = points[0]
    return rank([_sub(p, base) for p in points[1:]])


def _hull(points: Sequence[Point], dim: int):
    """Facets and vertex indices of conv(points) by brute force over dim-subsets."""
    facets: dict[tuple, Facet] = {}
    n = len(points)
    for idx in combinations(range(n), dim):
        sub = [points[i] for i in idx]
        diffs = [_sub(p, sub[0]) for p in sub[1:]]
        ns = nullspace(diffs, dim) if diffs else nullspace([], dim)
        if len(ns) != 1:
            continue
        normal = primitive_integer_vector(ns[0])
        offset = _dot(normal, sub[0])
        pos = neg = False
        for q in points:
            v = _dot(normal, q) - offset
            pos, neg = pos or v > 0, neg or v < 0
            if pos and neg:
                break
        if pos and neg:
            continue
        if pos:
            normal = [-x for x in normal]
            offset = -offset
        key = (tuple(normal), offset)
        facets.setdefault(key, Facet(tuple(normal), offset))
    facet_list = sorted(facets.values(), key=lambda f: (f.normal, f.offset))
    return facet_list, _vertex_indices(points, facet_list, dim)


def _vertex_indices(points, facet_list, dim):
    vertex_idx = []
    for i, p in enumerate(points):
        tight = [f.normal for f in facet_list if f.contains(p)]
        if len(tight) >= dim and rank(tight) == dim:
            vertex_idx.append(i)
    return vertex_idx


class DelzantPolytope:
    """Exact convex polytope given by its vertices.

    Parameters
    ----------
    vertices : iterable of points
        Rational coordinates (ints, ``"p/q"`` strings or Fractions). Every
        point must be a vertex of the convex hull.
    require_delzant : bool
        When True (default) the corners must be unimodular: the primitive
        edge directions at each vertex form a basis of Z^m. When False only
        simplicity is required ("rational_simple" mode), which is what chopped
        polytopes with arbitrary weights and non-smooth reference data need.
    """

    def __init__(self, vertices: Iterable[Sequence], *, require_delzant: bool = True, _facets=None):
        pts: list[Point] = []
        for v in vertices:
            p = _point(v)
            if p not in pts:
                pts.append(p)
        if not pts:
            raise GeometryError("degenerate", "no vertices")
        dim = len(pts[0])
        if dim == 0 or any(len(p) != dim for p in pts):
            raise GeometryError("degenerate", "inconsistent or zero ambient dimension")
        if len(pts) < dim + 1 or _affine_dim(pts) < dim:
            raise GeometryError("degenerate", "vertices do not span the ambient space")
        if _facets is None:
            facets, vidx = _hull(pts, dim)
        else:
            # facets known by construction (corner chops): only check consistency
            facets = sorted(_facets, key=lambda f: (f.normal, f.offset))
            if any(f.value(p) > f.offset for f in facets for p in pts):
                raise GeometryError("degenerate", "vertex outside a supplied facet")
            vidx = _vertex_indices(pts, facets, dim)
        if len(vidx) != len(pts):
            extra = [pts[i] for i in range(len(pts)) if i not in vidx]
            raise GeometryError("not_a_vertex", f"points {extra} are not vertices of the hull")
        self.dim = dim
        self.vertices: tuple[Point, ...] = tuple(pts)
        self.facets: tuple[Facet, ...] = tuple(facets)
        self.require_delzant = require_delzant
        self._validate()

    @classmethod
    def from_points(cls, points: Iterable[Sequence], *, require_delzant: bool = False):
        """Convex hull of arbitrary points (non-vertices are dropped)."""
        pts: list[Point] = []
        for v in points:
            p = _point(v)
            if p not in pts:
                pts.append(p)
        dim = len(pts[0])
        if _affine_dim(pts) < dim:
            raise GeometryError("degenerate", "points do not span the ambient space")
        _, vidx = _hull(pts, dim)
        return cls([pts[i] for i in vidx], require_delzant=require_delzant)

    # -- validation ------------------------------------------------------

    def _validate(self):
        m = self.dim
        for v in self.vertices:
            for f in self.facets:
                if f.value(v) > f.offset:
                    raise GeometryError("invalid", f"vertex {v} violates facet {f}")
            tight = self.tight_facets(v)
            if len(tight) != m:
                raise GeometryError("not_simple", f"vertex {v} lies on {len(tight)} facets, expected {m}")
        # H -> V round trip
        if sorted(self._vertices_from_facets()) != sorted(self.vertices):
            raise GeometryError("invalid", "vertex and facet descriptions disagree")
        if self.require_delzant and not self.is_delzant:
            raise GeometryError("not_delzant", "some corner is not unimodular")

    def _vertices_from_facets(self) -> list[Point]:
        out = []
        for combo in combinations(self.facets, self.dim):
            x = solve_unique([f.normal for f in combo], [f.offset for f in combo])
            if x is None:
                continue
            x = tuple(x)
            if all(f.value(x) <= f.offset for f in self.facets) and x not in out:
                out.append(x)
        return out

    def tight_facets(self, v) -> list[int]:
        return [i for i, f in enumerate(self.facets) if f.contains(v)]

    def neighbors(self, index: int) -> list[int]:
        """Indices of the vertices joined to ``vertices[index]`` by an edge."""
        m = self.dim
        tv = set(self.tight_facets(self.vertices[index]))
        out = []
        for j, w in enumerate(self.vertices):
            if j != index and len(tv & set(self.tight_facets(w))) == m - 1:
                out.append(j)
        return out

    def edge_directions(self, index: int) -> list[list[int]]:
        p = self.vertices[index]
        return [primitive_integer_vector(_sub(self.vertices[j], p)) for j in self.neighbors(index)]

    @cached_property
    def is_delzant(self) -> bool:
        for i in range(len(self.vertices)):
            dirs = self.edge_directions(i)
            if len(dirs) != self.dim or abs(det(dirs)) != 1:
                return False
        return True

    def index_of(self, point) -> int:
        return self.vertices.index(_point(point))

    def contains(self, x) -> bool:
        x = _point(x)
        return all(f.value(x) <= f.offset for f in self.facets)

    def strictly_contains(self, x) -> bool:
        x = _point(x)
        return all(f.value(x) < f.offset for f in self.facets)

    # -- triangulation ---------------------------------------------------

    def _face_vertices(self, facet_index: int) -> frozenset[int]:
        f = self.facets[facet_index]
        return frozenset(i for i, v in enumerate(self.vertices) if f.contains(v))

    @cached_property
    def _facet_vertex_sets(self) -> list[frozenset[int]]:
        return [self._face_vertices(i) for i in range(len(self.facets))]

    def _face_dim(self, face: frozenset[int]) -> int:
        return _affine_dim([self.vertices[i] for i in sorted(face)])

    def _sort_key(self, face: frozenset[int]):
        return tuple(sorted(self.vertices[i] for i in face))

    def _triangulate(self, face: frozenset[int], k: int) -> list[list[Point]]:
        if k == 0:
            (i,) = tuple(face)
            return [[self.vertices[i]]]
        if k == 1:
            a, b = sorted(self.vertices[i] for i in face)
            return [[a, b]]
        apex = _centroid([self.vertices[i] for i in face])
        subfaces = set()
        for g in self._facet_vertex_sets:
            s = face & g
            if s != face and len(s) >= k and self._face_dim(s) == k - 1:
                subfaces.add(s)
        out = []
        for s in sorted(subfaces, key=self._sort_key):
            for simplex in self._triangulate(s, k - 1):
                out.append(simplex + [apex])
        return out

    @cached_property
    def triangulation(self) -> list[list[Point]]:
        """Full-dimensional simplices covering the polytope without overlap."""
        return self._triangulate(frozenset(range(len(self.vertices))), self.dim)

    def facet_triangulation(self, facet_index: int) -> list[list[Point]]:
        return self._triangulate(self._facet_vertex_sets[facet_index], self.dim - 1)

    # -- integrals -------------------------------------------------------

    @cached_property
    def _moments(self):
        m = self.dim
        vol = Fraction(0)
        first = [Fraction(0)] * m
        for s in self.triangulation:
            v = abs(det([_sub(p, s[0]) for p in s[1:]])) / factorial(m)
            c = _centroid(s)
            vol += v
            first = [a + v * b for a, b in zip(first, c)]
        return vol, first

    @cached_property
    def _boundary_moments(self):
        m = self.dim
        area = Fraction(0)
        first = [Fraction(0)] * m
        for fi, f in enumerate(self.facets):
            n2 = sum(x * x for x in f.normal)
            for s in self.facet_triangulation(fi):
                rows = [_sub(p, s[0]) for p in s[1:]] + [list(f.normal)]
                sigma = abs(det(rows)) / (n2 * factorial(m - 1))
                c = _centroid(s)
                area += sigma
                first = [a + sigma * b for a, b in zip(first, c)]
        return area, first

    def volume(self) -> Fraction:
        return self._moments[0]

    def barycenter(self) -> Point:
        vol, first = self._moments
        return tuple(x / vol for x in first)

    def boundary_measure(self) -> Fraction:
        """sigma(dP): total facet measure with primitive-normal normalization."""
        return self._boundary_moments[0]

    def futaki(self) -> tuple[Fraction, ...]:
        vol, interior = self._moments
        area, boundary = self._boundary_moments
        return tuple(b - area / vol * i for b, i in zip(boundary, interior))

    # -- misc ------------------------------------------------------------

    def transformed(self, matrix: Sequence[Sequence[int]], shift: Sequence = None):
        """Image under ``x -> matrix @ x + shift``."""
        shift = _point(shift) if shift is not None else (Fraction(0),) * self.dim
        verts = [
            tuple(_dot(row, v) + t for row, t in zip(matrix, shift))
            for v in self.vertices
        ]
        return DelzantPolytope(verts, require_delzant=False)

    def to_json(self) -> dict:
        return {"dim": self.dim, "vertices": [[format_fraction(x) for x in v] for v in self.vertices]}

    @classmethod
    def from_json(cls, data, *, require_delzant: bool = False):
        if isinstance(data, str):
            data = json.loads(data)
        verts = [[as_fraction(x) for x in v] for v in data["vertices"]]
        if any(len(v) != data["dim"] for v in verts):
            raise GeometryError("invalid", "vertex length does not match 'dim'")
        return cls(verts, require_delzant=require_delzant)

    def __eq__(self, other):
        if not isinstance(other, DelzantPolytope):
            return NotImplemented
        return sorted(self.vertices) == sorted(other.vertices)

    def __hash__(self):
        return hash(tuple(sorted(self.vertices)))

    def __repr__(self):
        verts = ", ".join("(" + ", ".join(str(x) for x in v) + ")" for v in self.vertices)
        return f"DelzantPolytope(dim={self.dim}, vertices=[{verts}])"


def polytope_volume(P: DelzantPolytope) -> Fraction:
    return P.volume()


def polytope_barycenter(P: DelzantPolytope) -> Point:
    return P.barycenter()


def futaki_linear_functional(P: DelzantPolytope) -> tuple[Fraction, ...]:
    return P.futaki()


def corner_chop(P: DelzantPolytope, c: ChopSpec, *, convention: str = "inward") -> DelzantPolytope:
    """Truncate the corner ``P.vertices[c.vertex_index]``.

    With ``convention="inward"`` the vertex ``p`` is replaced by the points
    ``p + weight * u`` for each primitive edge direction ``u`` leaving ``p``,
    so a simplex of lattice size ``weight`` is cut off. ``convention="outward"``
    uses ``p + weight * (p - p_k)`` with ``p_k`` the neighbouring vertices and
    returns the convex hull of the result; it is kept for comparison only.
    """
    if not 0 <= c.vertex_index < len(P.vertices):
        raise GeometryError("bad_index", f"vertex index {c.vertex_index} out of range")
    p = P.vertices[c.vertex_index]
    nbrs = P.neighbors(c.vertex_index)
    rest = [v for i, v in enumerate(P.vertices) if i != c.vertex_index]
    if convention == "outward":
        new = [tuple(pi + c.weight * (pi - qi) for pi, qi in zip(p, P.vertices[j])) for j in nbrs]
        return DelzantPolytope.from_points(rest + new, require_delzant=False)
    if convention != "inward":
        raise ValueError(f"unknown chop convention {convention!r}")

    new = []
    for j in nbrs:
        u = primitive_integer_vector(_sub(P.vertices[j], p))
        new.append(tuple(pi + c.weight * ui for pi, ui in zip(p, u)))
    # hyperplane through the new points, oriented so p is on the removed side
    if P.dim == 1:
        normal = [1]
    else:
        ns = nullspace([_sub(q, new[0]) for q in new[1:]], P.dim)
        if len(ns) != 1:
            raise GeometryError("not_simple", "corner is not simple")
        normal = primitive_integer_vector(ns[0])
    level = _dot(normal, new[0])
    if _dot(normal, p) < level:
        normal = [-x for x in normal]
        level = -level
    for v in rest:
        if _dot(normal, v) >= level:
            raise GeometryError(
                "weight_exceeds_polytope",
                f"chop of weight {c.weight} at {p} reaches the non-incident vertex {v}",
            )
    verts = list(P.vertices[: c.vertex_index]) + new + list(P.vertices[c.vertex_index + 1:])
    facets = list(P.facets) + [Facet(tuple(normal), level)]
    return DelzantPolytope(verts, require_delzant=False, _facets=facets)


def standard_simplex(m: int, size=1) -> DelzantPolytope:
    """conv{0, size*e_1, ..., size*e_m}: the moment polytope of (P^m, size*H)."""
    size = as_fraction(size)
    verts = [tuple(Fraction(0) for _ in range(m))]
    for i in range(m):
        verts.append(tuple(size if j == i else Fraction(0) for j in range(m)))
    return DelzantPolytope(verts)


def _projective_vertex(m: int, j: int) -> Point:
    # 1..m -> e_j ; m+1 -> origin, mirroring p_1..p_{m+1} of the torus-fixed points
    if not 1 <= j <= m + 1:
        raise GeometryError("bad_index", f"vertex index {j} not in 1..{m + 1}")
    if j == m + 1:
        return tuple(Fraction(0) for _ in range(m))
    return tuple(Fraction(int(i == j - 1)) for i in range(m))


def blown_up_projective_polytope(m: int, chopped_vertices, weights) -> DelzantPolytope:
    """Moment polytope of Bl(P^m) in the class H - sum a_j E_j.

    ``chopped_vertices`` uses 1-based labels of the torus-fixed points; a set
    is taken in increasing order and matched with ``weights``.
    """
    if isinstance(chopped_vertices, (set, frozenset)):
        chopped_vertices = sorted(chopped_vertices)
    chopped_vertices = list(chopped_vertices)
    weights = [as_fraction(w) for w in weights]
    if len(weights) != len(chopped_vertices):
        raise ValueError("one weight per chopped vertex is required")
    if len(set(chopped_vertices)) != len(chopped_vertices):
        raise ValueError("repeated vertex label")
    P = standard_simplex(m)
    for j, a in zip(chopped_vertices, weights):
        P = corner_chop(P, ChopSpec(P.index_of(_projective_vertex(m, j)), a))
    return P


def blown_up_projective_futaki(m: int, chopped_vertices, weights) -> bool:
    """True iff the Futaki functional of the blown-up P^m vanishes."""
    P = blown_up_projective_polytope(m, chopped_vertices, weights)
    return all(x == 0 for x in P.futaki())


HEXAGON = DelzantPolytope([(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)])
"""Moment polygon of Bl_3 P^2 in the anticanonical class 3H - E1 - E2 - E3."""

KE_TRIANGLE = DelzantPolytope([(1, 0), (0, 1), (-1, -1)], require_delzant=False)
"""The reference triangle conv{e1, e2, -(1,1)}; simple but not unimodular."""
