"""The explicit l1^2 basis on any 4-point space.

Labeling the points so that rho(x1,x4) + rho(x2,x3) is minimal over the
three pair-partitions (x1 the base) makes two closed-form functionals span
an isometric l1^2 inside SNA.  The certificate carries the cube check and an
exact witness pair per sign class.
"""

from lipcert.construct import four_point_basis
from lipcert.certify import combo_norm, l1_isometry_corner
from lipcert.metric import PointedMetricSpace, random_space

eq4 = PointedMetricSpace.from_matrix([[int(i != j) for j in range(4)] for i in range(4)])
f1, f2, cert = four_point_basis(eq4)
print("equilateral:  f1 =", [str(v) for v in f1.values], " f2 =", [str(v) for v in f2.values])
for w in cert.sign_witnesses:
    print(f"  sign class {w.epsilon} attained at pair ({w.x},{w.y})")

# ||a f1 + b f2|| = |a| + |b| exactly, for any rationals.
print("||2 f1 - 3 f2|| =", combo_norm([f1, f2], [2, -3]))

# The independent corner criterion must agree.
assert l1_isometry_corner([f1, f2]).valid

# The construction is guaranteed on every 4-point space; spot-check a batch.
valid = 0
for seed in range(200):
    space = random_space(4, seed, "euclidean")
    _, _, c = four_point_basis(space)
    valid += c.valid
print(f"random euclidean spaces: {valid}/200 valid certificates")
