"""Shared test utilities: independent oracles and seeded generators.

The oracles here deliberately avoid the library's computation paths: the
free-norm oracle enumerates polytope vertices instead of running the simplex,
and the operator-norm oracle enumerates signed molecules directly.
"""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from lipcert import interval
from lipcert.lipschitz import LipFunctional
from lipcert.metric import PointedMetricSpace


def equilateral(n: int) -> PointedMetricSpace:
    return PointedMetricSpace.from_matrix(
        [[int(i != j) for j in range(n)] for i in range(n)]
    )


def random_functional(space, seed, denominator=8, span=16) -> LipFunctional:
    rng = random.Random(f"func:{seed}")
    values = [Fraction(0)] + [
        Fraction(rng.randint(-span, span), rng.randint(1, denominator))
        for _ in range(space.n - 1)
    ]
    return LipFunctional(space, tuple(values))


def random_coeffs(seed, n, denominator=8, span=16):
    rng = random.Random(f"coeffs:{seed}")
    return [Fraction(rng.randint(-span, span), rng.randint(1, denominator)) for _ in range(n)]


def _solve_square(rows, rhs):
    """Unique solution of a square exact system, or None (singular)."""
    n = len(rows)
    aug = [list(r) + [rhs[i]] for i, r in enumerate(rows)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if pivot is None:
            return None
        aug[c], aug[pivot] = aug[pivot], aug[c]
        inv = Fraction(1) / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return [aug[i][n] for i in range(n)]


def free_norm_vertex_oracle(space, coeffs) -> Fraction:
    """Brute-force free norm: enumerate the vertices of the dual Lipschitz
    polytope {f: |f(x) - f(y)| <= rho(x,y), f(0) = 0} over all constraint
    subsets and maximize the pairing.  Exact; intended for n <= 4."""
    n = space.n
    dim = n - 1
    rows = []
    rhs = []
    for x in range(n):
        for y in range(x + 1, n):
            coeff = [Fraction(0)] * dim
            if x != 0:
                coeff[x - 1] += 1
            if y != 0:
                coeff[y - 1] -= 1
            for s in (1, -1):
                rows.append([s * c for c in coeff])
                rhs.append(space.rho(x, y))
    best = Fraction(0)
    for subset in combinations(range(len(rows)), dim):
        point = _solve_square([rows[i] for i in subset], [rhs[i] for i in subset])
        if point is None:
            continue
        if any(
            sum(a * b for a, b in zip(rows[i], point)) > rhs[i] for i in range(len(rows))
        ):
            continue
        value = abs(sum(a * b for a, b in zip(coeffs, point)))
        if value > best:
            best = value
    return best


def random_pwl(seed, max_breaks=6, denominator=8, span=8) -> interval.PwlFunctional:
    rng = random.Random(f"pwl:{seed}")
    cuts = sorted(
        {Fraction(rng.randint(1, 31), 32) for _ in range(rng.randint(0, max_breaks))}
    )
    breakpoints = [Fraction(0)] + cuts + [Fraction(1)]
    values = [Fraction(0)]
    for _ in range(len(breakpoints) - 1):
        values.append(Fraction(rng.randint(-span, span), rng.randint(1, denominator)))
    return interval.PwlFunctional(tuple(breakpoints), tuple(values))


def random_hybrid(seed, max_extras=3, max_breaks=8) -> interval.HybridSpace:
    """Random valid hybrid space.

    Profiles are arbitrary positive 1-Lipschitz piecewise-linear curves
    (random slopes in [-1,1], shifted up to clear positivity and the endpoint
    pair inequality); extra-extra distances route through the interval,
    d(z,w) = min_t (d_z(t) + d_w(t)), which satisfies every triangle
    inequality by construction.
    """
    rng = random.Random(f"hybrid:{seed}")
    extras = rng.randint(1, max_extras)
    profiles = []
    for _ in range(extras):
        cuts = sorted(
            {Fraction(rng.randint(1, 63), 64) for _ in range(rng.randint(0, max_breaks - 2))}
        )
        breakpoints = [Fraction(0)] + cuts + [Fraction(1)]
        values = [Fraction(rng.randint(8, 64), 32)]
        for i in range(len(breakpoints) - 1):
            slope = Fraction(rng.randint(-8, 8), 8)
            values.append(values[-1] + slope * (breakpoints[i + 1] - breakpoints[i]))
        lowest = min(values)
        if lowest <= 0:
            shift = -lowest + Fraction(1, 4)
            values = [v + shift for v in values]
        if values[0] + values[-1] < 1:
            shift = (1 - values[0] - values[-1]) / 2
            values = [v + shift for v in values]
        profiles.append(interval.DistanceProfile(tuple(breakpoints), tuple(values)))
    dist = [[Fraction(0)] * extras for _ in range(extras)]
    for z in range(extras):
        for w in range(z + 1, extras):
            grid = sorted(set(profiles[z].breakpoints) | set(profiles[w].breakpoints))
            through = min(profiles[z].evaluate(t) + profiles[w].evaluate(t) for t in grid)
            dist[z][w] = dist[w][z] = through
    return interval.HybridSpace(tuple(profiles), tuple(tuple(r) for r in dist))
