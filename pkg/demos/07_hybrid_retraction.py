"""Hybrid spaces: [0,1] plus extra points, the 1-Lipschitz retraction, and
the exact norm-preserving transfer T(f) = f o F.

Extra points are described by piecewise-linear distance profiles d_z(t), so
all metric axioms and all suprema reduce to finitely many breakpoint
evaluations.
"""

from fractions import Fraction

from lipcert.interval import (
    compose_embed,
    hybrid_norm,
    hybrid_space,
    hybrid_validate,
    profile,
    pwl,
    pwl_norm,
    retraction,
)

F = Fraction

# One extra point hovering above t = 1/4 at height 1/2.
z_profile = profile([0, F(1, 4), 1], [F(3, 4), F(1, 2), F(5, 4)])
h = hybrid_space([z_profile])
assert hybrid_validate(h) == []
print("hybrid with d_z(t) = 1/2 + |t - 1/4| is a valid metric description")

# The retraction sends z to the minimizer of t + d_z(t), clamped to [0,1].
print("F(z) =", retraction(h)[0])

# Transfer a functional: it agrees with f on the interval, takes f(F(z)) at z,
# and the norm is exactly preserved with an interval witness.
f = pwl([0, F(1, 2), 1], [0, F(1, 2), F(1, 4)])
u = compose_embed(f, h)
print("T(f)(z) =", u.extra_values[0])
interval_norm, pieces = pwl_norm(f)
hybrid_value, witness = hybrid_norm(u, h)
print(f"pwl norm = {interval_norm}, hybrid norm = {hybrid_value}, witness = {witness.kind}")
assert interval_norm == hybrid_value

# A functional that overshoots the McShane bounds picks up norm at the extra.
from lipcert.interval import HybridFunctional, zero_pwl

far = hybrid_space([profile([0, 1], [F(3, 2), F(3, 2)])])
bad = HybridFunctional(zero_pwl(), (F(2),))
value, where = hybrid_norm(bad, far)
print("overshooting extra value: norm =", value, "witnessed", where.kind, where.data)
