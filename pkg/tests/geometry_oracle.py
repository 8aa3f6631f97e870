"""Independent sympy oracle for chopped simplices.

Integrals over P = simplex minus disjoint corner simplices are obtained by
subtraction; facet measures come from Gram determinants divided by the
length of the primitive normal. Nothing here touches the package's
triangulation code.
"""

from itertools import combinations
from math import gcd, factorial

import sympy as sp


def _simplex(verts):
    v0 = sp.Matrix(verts[0])
    E = sp.Matrix.hstack(*[sp.Matrix(v) - v0 for v in verts[1:]])
    vol = abs(E.det()) / factorial(len(verts) - 1)
    centroid = sum((sp.Matrix(v) for v in verts), sp.zeros(len(verts[0]), 1)) / len(verts)
    return vol, vol * centroid


def _primitive_normal(verts):
    v0 = sp.Matrix(verts[0])
    E = sp.Matrix.hstack(*[sp.Matrix(v) - v0 for v in verts[1:]])
    n = E.T.nullspace()[0]
    den = sp.ilcm(*[sp.fraction(x)[1] for x in n])
    n = n * den
    g = 0
    for x in n:
        g = gcd(g, int(x))
    return n / g


def _facet(verts):
    m = len(verts[0])
    v0 = sp.Matrix(verts[0])
    E = sp.Matrix.hstack(*[sp.Matrix(v) - v0 for v in verts[1:]])
    euclid = sp.sqrt((E.T * E).det()) / factorial(m - 1)
    n = _primitive_normal(verts)
    sigma = sp.nsimplify(euclid / sp.sqrt(n.dot(n)))
    centroid = sum((sp.Matrix(v) for v in verts), sp.zeros(m, 1)) / len(verts)
    return sigma, sigma * centroid


def _boundary(verts):
    s, mom = 0, sp.zeros(len(verts[0]), 1)
    for face in combinations(verts, len(verts) - 1):
        a, b = _facet(list(face))
        s, mom = s + a, mom + b
    return s, mom


def chopped_simplex_futaki(simplex, corners):
    """Futaki vector of ``simplex`` with corner simplices removed.

    ``corners`` is a list of (apex, [other vertices]) with the corner simplices
    pairwise disjoint and each apex a vertex of ``simplex``.
    """
    simplex = [[sp.Rational(x) for x in v] for v in simplex]
    vol, mom = _simplex(simplex)
    bs, bmom = _boundary(simplex)
    for apex, others in corners:
        apex = [sp.Rational(x) for x in apex]
        others = [[sp.Rational(x) for x in v] for v in others]
        cv, cm = _simplex([apex] + others)
        vol, mom = vol - cv, mom - cm
        # faces through the apex lie on the old boundary; the opposite face is new
        for face in combinations(others, len(others) - 1):
            a, b = _facet([apex] + list(face))
            bs, bmom = bs - a, bmom - b
        a, b = _facet(others)
        bs, bmom = bs + a, bmom + b
    return [sp.nsimplify(x) for x in (bmom - bs / vol * mom)], vol


def projective_corners(m, labels, weights):
    """Corner data for conv{0, e_1..e_m} chopped at the given 1-based labels."""
    def vertex(j):
        return [int(i == j - 1) for i in range(m)] if j <= m else [0] * m

    verts = [vertex(j) for j in range(1, m + 2)]
    corners = []
    for j, a in zip(labels, weights):
        p = vertex(j)
        others = []
        for q in verts:
            if q == p:
                continue
            others.append([sp.Rational(pi) + sp.Rational(str(a)) * (qi - pi) for pi, qi in zip(p, q)])
        corners.append((p, others))
    return verts, corners
