"""Constructions of certified isometric subspaces.

* explicit 4-point l1^2 basis from the minimal-pairing labeling,
* Rademacher sign matrix embedding l1^n into l-infinity^(2^(n-1)),
* duality lift of a 1-complemented l1^m of the free space to an
  l-infinity^m of Lipschitz functionals,
* the end-to-end pipeline: subset selection, complementation search,
  duality lift, Rademacher composition, norm-preserving extension,
* an independent direct LP search for certified l1^k bases,
* evaluation embeddings of l1^d / l-infinity^d over their dual balls.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from . import certify, freespace, linalg, lp
from .certify import L1IsometryCertificate, LinfIsometryCertificate
from .lipschitz import LipFunctional, combine, functional, extend_basis
from .metric import PointedMetricSpace, restrict

_ZERO = Fraction(0)
_ONE = Fraction(1)


class ConstructionError(AssertionError):
    """A construction the theory guarantees has failed; carries a space dump."""


class SearchExhausted(RuntimeError):
    """A search ran out of candidates; carries the search statistics."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats


_PAIRINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


def four_point_basis(space: PointedMetricSpace):
    """Explicit l1^2 basis on a 4-point space.

    Labels the points x1..x4 with x1 the base and rho(x1,x4) + rho(x2,x3)
    minimal among the three pair-partitions (ties broken lexicographically),
    evaluates the closed-form functionals, and certifies.  Falls back to the
    remaining labelings of a minimizing partition, then to the other
    minimizing partitions; running out of labelings is a hard error since the
    construction is guaranteed.
    """
    if space.n != 4:
        raise ValueError(f"four_point_basis needs exactly 4 points, got {space.n}")
    if space.base != 0:
        raise ValueError("four_point_basis expects the base point at index 0")
    cost = {
        pairing: space.rho(*pairing[0]) + space.rho(*pairing[1]) for pairing in _PAIRINGS
    }
    best = min(cost.values())
    for pairing in _PAIRINGS:
        if cost[pairing] != best:
            continue
        zero_pair, other_pair = pairing
        x4 = zero_pair[1]  # partner of the base in the minimizing pair
        for x2, x3 in (other_pair, other_pair[::-1]):
            f1, f2 = _four_point_formulas(space, x2, x3, x4)
            cert = certify.l1_isometry_lip([f1, f2])
            if cert.valid:
                return f1, f2, cert
    raise ConstructionError(
        "4-point construction exhausted all labelings; space dump: "
        + repr([[str(x) for x in row] for row in space.dist])
    )


def _four_point_formulas(space, x2, x3, x4):
    rho = space.rho
    values1 = [_ZERO] * 4
    values2 = [_ZERO] * 4
    values1[x2] = rho(0, x4) - rho(x2, x4)
    values1[x3] = rho(0, x4) - rho(x2, x4) + rho(x2, x3)
    values1[x4] = rho(0, x4)
    values2[x2] = rho(0, x2)
    values2[x3] = rho(0, x2) - rho(x2, x3)
    values2[x4] = rho(0, x4)
    return functional(space, values1), functional(space, values2)


def rademacher_embedding(n: int):
    """Sign matrix (2^(n-1) rows, n columns) with max_row |<a, row>| = ||a||_1.

    Rows are indexed by sign patterns; the first column is all ones, column
    k >= 2 carries the (k-1)-th pattern entry, mirroring the Rademacher
    functions.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    return tuple((1,) + bits for bits in product((1, -1), repeat=n - 1))


def duality_lift(certificate: freespace.ComplementationCertificate):
    """l-infinity^m basis dual to a 1-complemented l1^m of the free space.

    g_j(x) is the j-th coefficient of P(delta_x) in the basis (u_1..u_m);
    this is the coordinate functional composed with the projection, so it is
    biorthogonal to the basis and the span is an isometric l-infinity^m.
    """
    if not certificate.valid:
        raise ValueError("input complementation certificate is invalid")
    space = certificate.space
    basis = certificate.basis
    projection = certificate.projection
    m = len(basis)
    nb = space.n - 1
    u_matrix = [[basis[j].coeffs[p] for j in range(m)] for p in range(nb)]
    g_values = [[_ZERO] for _ in range(m)]  # value at the base point
    for x in range(1, space.n):
        image = projection.apply(freespace.delta(space, x))
        coeffs = linalg.solve_exact(u_matrix, list(image.coeffs))
        if coeffs is None:
            raise AssertionError("projection image left the basis span")
        for j in range(m):
            g_values[j].append(coeffs[j])
    g = tuple(LipFunctional(space, tuple(vals)) for vals in g_values)
    for i in range(m):
        for j in range(m):
            expected = _ONE if i == j else _ZERO
            if freespace.pairing(g[j], basis[i]) != expected:
                raise AssertionError(f"biorthogonality <g_{j}, u_{i}> != {expected}")
    cert = certify.linf_isometry_lip(g)
    if not cert.valid:
        raise AssertionError("duality lift lost the l-infinity certificate")
    return g, cert


def compose_l1_in_linf(basis, linf_certificate: LinfIsometryCertificate, sign_matrix):
    """f_k = sum_j R[j][k] g_j turns a certified l-infinity^m basis into a
    certified l1^n basis, n = 1 + log2(m)."""
    if not linf_certificate.valid:
        raise ValueError("input l-infinity certificate is invalid")
    if tuple(linf_certificate.basis) != tuple(basis):
        raise ValueError("certificate does not belong to the given basis")
    m = len(basis)
    if len(sign_matrix) != m:
        raise ValueError(f"sign matrix has {len(sign_matrix)} rows for {m} basis elements")
    n = len(sign_matrix[0])
    if m != 2 ** (n - 1):
        raise ValueError(f"sign matrix of {m} rows cannot target l1^{n}")
    f = tuple(
        combine(basis, [sign_matrix[j][k] for j in range(m)])
        for k in range(n)
    )
    cert = certify.l1_isometry_lip(f)
    if not cert.valid:
        raise AssertionError("Rademacher composition lost the l1 certificate")
    return f, cert


def select_subset(space: PointedMetricSpace, size: int):
    """Deterministic farthest-point sweep from the base; returns sorted indices
    (base first) of a spread-out subset."""
    chosen = [space.base]
    rest = [p for p in range(space.n) if p != space.base]
    while len(chosen) < size:
        best = max(rest, key=lambda p: (min(space.rho(p, q) for q in chosen), -p))
        chosen.append(best)
        rest.remove(best)
    return [space.base] + sorted(p for p in chosen if p != space.base)


@dataclass(frozen=True)
class PipelineResult:
    """Everything the main-theorem pipeline produced, stage by stage."""

    space: PointedMetricSpace
    k: int
    subset_indices: tuple[int, ...]
    subset: PointedMetricSpace
    complementation: freespace.ComplementationSearch
    linf_basis: tuple[LipFunctional, ...]
    linf_certificate: LinfIsometryCertificate
    subset_basis: tuple[LipFunctional, ...]
    subset_certificate: L1IsometryCertificate
    basis: tuple[LipFunctional, ...]
    certificate: L1IsometryCertificate


def theorem_pipeline(
    space: PointedMetricSpace, k: int, tuple_budget=None, candidates="molecules"
) -> PipelineResult:
    """Certified l1^k inside SNA of any space with at least 2^k points.

    Chain: restrict to a spread-out 2^k-point subset K, find a 1-complemented
    l1^(2^(k-1)) with molecule basis in the free space of K, lift by duality
    to an l-infinity basis, compose with the Rademacher matrix, and extend to
    the whole space with the witnesses kept inside K.  Exhaustion of the
    complementation search raises SearchExhausted with its statistics;
    ``candidates='grid'`` retries over a coefficient-grid pool instead of
    molecules (heuristic fallback).
    """
    if k < 1:
        raise ValueError("need k >= 1")
    if space.n < 2 ** k:
        raise ValueError(f"need at least {2 ** k} points for k = {k}, got {space.n}")
    if space.base != 0:
        raise ValueError("theorem_pipeline expects the base point at index 0")
    indices = select_subset(space, 2 ** k)
    subset = restrict(space, indices)
    search = freespace.search_one_complemented(
        subset, 2 ** (k - 1), tuple_budget, candidates=candidates
    )
    if not search.found:
        raise SearchExhausted(
            f"complementation search exhausted after {search.tuples_tried} tuples "
            f"({search.tuples_l1_valid} passed the l1 filter)",
            stats=search,
        )
    g, linf_cert = duality_lift(search.certificate)
    subset_basis, subset_cert = compose_l1_in_linf(g, linf_cert, rademacher_embedding(k))
    basis, cert = extend_basis(subset_basis, subset_cert, space)
    return PipelineResult(
        space=space,
        k=k,
        subset_indices=tuple(indices),
        subset=subset,
        complementation=search,
        linf_basis=g,
        linf_certificate=linf_cert,
        subset_basis=subset_basis,
        subset_certificate=subset_cert,
        basis=basis,
        certificate=cert,
    )


@dataclass(frozen=True)
class DirectSearchResult:
    space: PointedMetricSpace
    k: int
    found: bool
    basis: tuple[LipFunctional, ...] | None
    certificate: L1IsometryCertificate | None
    assignments_tried: int
    budget_exhausted: bool


def direct_search_l1(space: PointedMetricSpace, k: int, node_budget=None) -> DirectSearchResult:
    """Independent oracle: assign witness pairs to sign classes and solve for
    the functional values by LP feasibility.

    Depth-first over assignments of ordered pairs (sorted by decreasing
    distance, then lexicographically) to the 2^(k-1) sign classes.  Partial
    assignments are pruned by an exact shortest-path feasibility test of the
    difference-constraint system of each basis coordinate; a surviving full
    assignment is handed to the LP, whose witness values give the certified
    basis with the assignment as its sign witnesses.
    """
    from math import lcm

    if k < 1:
        raise ValueError("need k >= 1")
    if space.base != 0:
        raise ValueError("direct_search_l1 expects the base point at index 0")
    reps = certify.sign_class_representatives(k)
    # integer-scaled distances keep the feasibility pruning in int arithmetic
    denom = 1
    for i, j in space.pairs():
        denom = lcm(denom, space.rho(i, j).denominator)
    dist_int = [
        [int(space.rho(i, j) * denom) for j in range(space.n)] for i in range(space.n)
    ]
    candidates = sorted(
        ((x, y) for x in range(space.n) for y in range(space.n) if x != y),
        key=lambda p: (-dist_int[p[0]][p[1]], p),
    )
    # The all-ones class may fix its pair orientation: negating the basis
    # swaps both orientations, so nothing is lost modulo global sign.
    first_candidates = [p for p in candidates if p[0] < p[1]]
    tried = 0
    assignment: list[tuple[int, int]] = []
    used_pairs: set[frozenset] = set()

    def quick_conflict(x, y, depth):
        # negative 2-cycles through the new equality edge and one earlier one
        c_new = dist_int[x][y]
        for level in range(depth):
            px, py = assignment[level]
            c_old = dist_int[px][py]
            for kappa in range(k):
                a = reps[depth][kappa] * c_new
                b = reps[level][kappa] * c_old
                for sa in (a, -a):
                    ha, ta = (x, y) if sa == a else (y, x)
                    for sb in (b, -b):
                        hb, tb = (px, py) if sb == b else (py, px)
                        if sa + dist_int[ha][tb] + sb + dist_int[hb][ta] < 0:
                            return True
        return False

    def feasible_coordinate(kappa):
        # Bellman-Ford on the condensed endpoint graph; the cube edges are
        # transitively closed (metric shortest path = distance), so direct
        # metric arcs between witness endpoints suffice.
        nodes = sorted({p for pair in assignment for p in pair})
        index = {p: i for i, p in enumerate(nodes)}
        edges = [
            (i, j, dist_int[nodes[j]][nodes[i]])
            for i in range(len(nodes))
            for j in range(len(nodes))
            if i != j
        ]
        for eps, (x, y) in zip(reps, assignment):
            c = eps[kappa] * dist_int[x][y]
            edges.append((index[y], index[x], c))
            edges.append((index[x], index[y], -c))
        dist = [0] * len(nodes)
        for _ in range(len(nodes)):
            changed = False
            for b, a, w in edges:
                alt = dist[b] + w
                if alt < dist[a]:
                    dist[a] = alt
                    changed = True
            if not changed:
                return True
        return not any(dist[b] + w < dist[a] for b, a, w in edges)

    def dfs():
        nonlocal tried
        depth = len(assignment)
        if depth == len(reps):
            return _direct_search_solve(space, k, reps, assignment)
        for pair in first_candidates if depth == 0 else candidates:
            key = frozenset(pair)
            if key in used_pairs:
                continue
            if node_budget is not None and tried >= node_budget:
                return "budget"
            tried += 1
            if quick_conflict(pair[0], pair[1], depth):
                continue
            assignment.append(pair)
            used_pairs.add(key)
            if all(feasible_coordinate(kappa) for kappa in range(k)):
                outcome = dfs()
                if outcome is not None:
                    return outcome
            assignment.pop()
            used_pairs.discard(key)
        return None

    outcome = dfs()
    if outcome == "budget":
        return DirectSearchResult(space, k, False, None, None, tried, True)
    if outcome is None:
        return DirectSearchResult(space, k, False, None, None, tried, False)
    basis, cert = outcome
    return DirectSearchResult(space, k, True, basis, cert, tried, False)


def _direct_search_solve(space, k, reps, assignment):
    """Joint LP for the functional values of a fully assigned witness map."""
    n = space.n
    nb = n - 1
    width = k * nb

    def col(kappa, p):
        return kappa * nb + (p - 1)

    rows = []
    for kappa in range(k):
        for x, y in space.pairs():
            coeffs = [_ZERO] * width
            if x != 0:
                coeffs[col(kappa, x)] += _ONE
            if y != 0:
                coeffs[col(kappa, y)] -= _ONE
            rho = space.rho(x, y)
            rows.append((list(coeffs), lp.LE, rho))
            rows.append(([-c for c in coeffs], lp.LE, rho))
    for eps, (x, y) in zip(reps, assignment):
        for kappa in range(k):
            coeffs = [_ZERO] * width
            if x != 0:
                coeffs[col(kappa, x)] += _ONE
            if y != 0:
                coeffs[col(kappa, y)] -= _ONE
            rows.append((coeffs, lp.EQ, Fraction(eps[kappa]) * space.rho(x, y)))
    outcome = lp.feasible(rows, n_vars=width)
    if outcome.status != "optimal":
        return None
    basis = tuple(
        LipFunctional(
            space,
            tuple([_ZERO] + [outcome.primal[col(kappa, p)] for p in range(1, n)]),
        )
        for kappa in range(k)
    )
    cert = certify.l1_isometry_lip(basis, pinned_pairs=list(assignment))
    if not cert.valid:
        raise AssertionError("feasible witness assignment must certify")
    return basis, cert


@dataclass(frozen=True)
class EvaluationEmbedding:
    kind: str
    dimension: int
    space: PointedMetricSpace
    basis: tuple[LipFunctional, ...]
    certificate: L1IsometryCertificate | LinfIsometryCertificate


def evaluation_embedding(kind: str, d: int) -> EvaluationEmbedding:
    """Coordinate evaluation functionals over the dual unit ball.

    For Y = l1^d the dual ball is the l-infinity cube: the space is the origin
    plus the cube's vertices under the l-infinity metric, and the evaluations
    of e_1..e_d span a certified l1^d.  For Y = l-infinity^d the dual ball is
    the cross-polytope: origin plus +-e_j under the l1 metric, certified
    l-infinity^d.  Each combination attains at a pair involving the origin.
    """
    if d < 1:
        raise ValueError("need d >= 1")
    if d > 6:
        raise ValueError("evaluation embeddings are limited to d <= 6")
    if kind == "l1":
        points = [tuple([0] * d)] + [bits for bits in product((1, -1), repeat=d)]
        metric_fn = lambda p, q: max(abs(a - b) for a, b in zip(p, q))
    elif kind == "linf":
        points = [tuple([0] * d)]
        for j in range(d):
            plus = [0] * d
            plus[j] = 1
            minus = [0] * d
            minus[j] = -1
            points.append(tuple(plus))
            points.append(tuple(minus))
        metric_fn = lambda p, q: sum(abs(a - b) for a, b in zip(p, q))
    else:
        raise ValueError(f"kind must be 'l1' or 'linf', got {kind!r}")
    labels = [",".join(str(c) for c in p) or "0" for p in points]
    labels[0] = "0"
    rows = [[Fraction(metric_fn(p, q)) for q in points] for p in points]
    space = PointedMetricSpace.from_matrix(rows, labels=labels)
    basis = tuple(
        functional(space, [p[i] for p in points]) for i in range(d)
    )
    if kind == "l1":
        cert = certify.l1_isometry_lip(basis)
    else:
        cert = certify.linf_isometry_lip(basis)
    if not cert.valid:
        raise AssertionError("evaluation embedding must certify")
    return EvaluationEmbedding(kind, d, space, basis, cert)
