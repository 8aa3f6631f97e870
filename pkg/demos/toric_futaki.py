"""Corner chops of the simplex and when the Futaki functional vanishes.

Blowing up torus-fixed points of P^m chops corners of the moment simplex.
The Futaki functional is the barycenter of the chopped polytope, up to
scale, so it vanishes exactly when the chops are balanced.
"""

from fractions import Fraction as F

from kaehler_blowup_lab.exact_geometry import HEXAGON, blown_up_projective_polytope

# all three corners of P^2 with equal small weights: balanced
P = blown_up_projective_polytope(2, [1, 2, 3], [F(1, 8)] * 3)
print("P^2, three equal chops  futaki =", [str(x) for x in P.futaki()])

# one corner only: the barycenter moves away from the chopped vertex
P = blown_up_projective_polytope(2, [1], [F(1, 8)])
print("P^2, one chop           futaki =", [str(x) for x in P.futaki()])

# unequal weights on every corner: still unbalanced while weights stay small
P = blown_up_projective_polytope(2, [1, 2, 3], [F(1, 8), F(1, 8), F(1, 6)])
print("P^2, unequal chops      futaki =", [str(x) for x in P.futaki()])

# large weights can balance off the diagonal
P = blown_up_projective_polytope(2, [1, 2, 3], [F(2, 5), F(2, 5), F(1, 5)])
print("P^2, (2/5, 2/5, 1/5)    futaki =", [str(x) for x in P.futaki()])

# P^3 with all four corners chopped equally
P = blown_up_projective_polytope(3, [1, 2, 3, 4], [F(1, 10)] * 4)
print("P^3, four equal chops   futaki =", [str(x) for x in P.futaki()], " volume =", P.volume())

# the anticanonical hexagon of the degree-6 del Pezzo surface
print("hexagon volume", HEXAGON.volume(), "barycenter", [str(x) for x in HEXAGON.barycenter()])
