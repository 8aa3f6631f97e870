"""Balancing conditions for points on P^2 with a symmetry group.

The first example uses three points on a line, acted on by a circle and a
swap. Condition (i) asks for positive weights whose moment images cancel on
the part of the algebra not fixed by the group; it is feasible exactly when
Re(alpha conj(beta)) < 0.
"""

from kaehler_blowup_lab._exact import GaussianRational as G, format_gaussian
from kaehler_blowup_lab.projective_actions import (
    GroupSpec,
    ProjectivePoint,
    check_condition_i,
    check_condition_ii,
    check_condition_iii,
    invariant_algebra,
    split_algebra,
)

g = GroupSpec([[-2, 1, 1]], [[0, 2, 1]])
split = split_algebra(invariant_algebra(g, 2), g)
for alpha, beta in [(G(1, 0), G(-1, 2)), (G(1, 0), G(1, 2)), (G(2, 1), G(-1, 3))]:
    pts = [ProjectivePoint([0, 1, 1]), ProjectivePoint([0, alpha, beta]), ProjectivePoint([0, beta, alpha])]
    c1 = check_condition_i(pts, split)
    re = (alpha * beta.conjugate()).real
    line = f"alpha={format_gaussian(alpha)} beta={format_gaussian(beta)}  Re={re}  (i) {c1.status}"
    if c1.feasible:
        w = c1.weights
        line += f"  weights {[str(x) for x in w]}  kappa {-(w[0] / w[1]) * (alpha.norm2() + beta.norm2()) / re}"
    else:
        line += f"  separating element {[str(x) for x in c1.certificate]}"
    print(line, " (ii)", check_condition_ii(pts, split).holds)

# four points on a line with a single circle: the cone is one ray
g = GroupSpec([[1, 0, 0]])
split = split_algebra(invariant_algebra(g, 2), g)
pts = [ProjectivePoint([0, 1, 0]), ProjectivePoint([0, 1, G(1, 1)]),
       ProjectivePoint([0, 1, G(-2, -1)]), ProjectivePoint([0, 1, 1])]
c1 = check_condition_i(pts, split)
print("four points: weight ray", c1.integer_weights(), " contains (1,3,5,2):", c1.contains([1, 3, 5, 2]))
print("             (ii)", check_condition_ii(pts, split).holds, " (iii)", check_condition_iii(pts, split).holds)
