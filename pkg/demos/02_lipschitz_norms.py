"""Lipschitz norms with complete strong-attainment witness sets, rebasing,
and McShane extension.

On a finite space the Lipschitz norm is a maximum over pairs, so every
nonzero functional attains it strongly; the library returns all attaining
pairs in canonical order.
"""

from lipcert.lipschitz import functional, lip_norm, mcshane_extend, rebase
from lipcert.metric import PointedMetricSpace, restrict

eq4 = PointedMetricSpace.from_matrix([[int(i != j) for j in range(4)] for i in range(4)])

f = functional(eq4, [0, 1, 0, 1])
norm, witnesses = lip_norm(f)
print("f = (0,1,0,1):  norm =", norm)
print("  attaining pairs:", [(w.x, w.y) for w in witnesses])

# Rebasing shifts values so the new base reads 0; distances, the norm, and
# the witness pairs are untouched (the choice of base point is immaterial).
g = rebase(f, 1)
print("rebased at point 1:", [str(v) for v in g.values])
assert lip_norm(g)[0] == norm

# McShane extension: extend from the subset {0, 2} to all four points with
# the same Lipschitz constant, via the inf-convolution formula.
sub = restrict(eq4, [0, 2])
h = functional(sub, [0, 1])
extended = mcshane_extend(h, eq4, 1)
print("McShane extension of {0 -> 0, 2 -> 1}:", [str(v) for v in extended.values])
assert lip_norm(extended)[0] == 1
