"""The [0,1] model: piecewise-linear functionals, the derivative view, and
the truncated c0 block basis realizing l-infinity^N inside SNA([0,1]).

Functionals on the interval are kept symbolic (breakpoints + values), so
norms are computed exactly as maxima of slopes, never by sampling.
"""

from fractions import Fraction

from lipcert.interval import (
    c0_block,
    derivative_view,
    integrate,
    mcshane_pwl,
    pwl,
    pwl_combination,
    pwl_norm,
)

F = Fraction

f = pwl([0, F(1, 2), 1], [0, F(1, 2), F(1, 4)])
norm, pieces = pwl_norm(f)
print("two-piece functional: norm =", norm, " attained on", pieces)

# The derivative view is the isometry onto step functions inside L-infinity.
sd = derivative_view(f)
print("slopes:", [str(s) for s in sd.slopes])
assert integrate(sd) == f

# Block functionals: slope a_k on [1 - 1/k, 1 - 1/(k+1)), then flat.
g = c0_block([1, F(-1, 2)])
print("c0 block (1, -1/2): breakpoints", [str(b) for b in g.breakpoints])
print("                    values     ", [str(v) for v in g.values])

# The N-block basis is exactly l-infinity^N: the norm of a combination is the
# max coefficient, attained on the first maximizing block.
N = 6
basis = [c0_block([F(i == k) for i in range(N)]) for k in range(N)]
coeffs = [F(3, 4), F(-1), F(1, 2), F(1), F(0), F(-1, 4)]
combo = pwl_combination(basis, coeffs)
norm, pieces = pwl_norm(combo)
print(f"||sum a_k G_k|| = {norm} = max|a_k|; first attaining block {pieces[0]}")
assert norm == max(abs(c) for c in coeffs)

# McShane envelope through samples: the tent through (0,0), (1,0).
tent = mcshane_pwl([(0, 0), (1, 0)], 1)
print("McShane envelope of {(0,0),(1,0)} at L=1:", [str(v) for v in tent.values])
