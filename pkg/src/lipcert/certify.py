"""Exact isometry certificates for spans of Lipschitz functionals.

Two independent, equivalent criteria are implemented for l1:

* cube + sign (``l1_isometry_lip``): every pair's difference-quotient vector
  lies in [-1,1]^n, and every sign vector (mod global sign) is realized
  exactly by some pair.  The witnesses double as strong-attainment pairs for
  the corresponding sign combinations.
* corner (``l1_isometry_corner``): the combination norm equals n at every
  sign vector and 1 at every unit vector.  A norm dominated by the l1 norm
  that matches it on all sign vertices equals it everywhere (pinch along the
  cube's edges), so the two verdicts agree on every input; the artifact
  cross-checks them.

The dual l∞ criterion replaces the cube by the l1 ball and sign vectors by
the vertices ±e_j.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product

from .lipschitz import LipFunctional

_ZERO = Fraction(0)
_ONE = Fraction(1)


def sign_class_representatives(n: int):
    """All epsilon in {-1,1}^n modulo global sign: first coordinate fixed +1."""
    return [(1,) + bits for bits in product((1, -1), repeat=n - 1)]


def quotient_vector(basis, x: int, y: int) -> tuple[Fraction, ...]:
    """w_{xy} = ((f_k(x) - f_k(y)) / rho(x, y))_k."""
    rho = basis[0].space.rho(x, y)
    return tuple((f.values[x] - f.values[y]) / rho for f in basis)


def _check_common_space(basis):
    if not basis:
        raise ValueError("empty basis")
    space = basis[0].space
    for f in basis[1:]:
        if f.space != space:
            raise ValueError("basis functionals live on different spaces")
    return space


def combo_norm(basis, coeffs) -> Fraction:
    """lip_norm(sum_k coeffs[k] f_k), computed as max |<coeffs, w_xy>|."""
    space = _check_common_space(basis)
    coeffs = [Fraction(c) for c in coeffs]
    if len(coeffs) != len(basis):
        raise ValueError(f"{len(coeffs)} coefficients for {len(basis)} basis elements")
    best = _ZERO
    for x, y in space.pairs():
        v = abs(sum(a * q for a, q in zip(coeffs, quotient_vector(basis, x, y))))
        if v > best:
            best = v
    return best


@dataclass(frozen=True)
class CubeViolation:
    x: int
    y: int
    coordinate: int
    quotient: Fraction


@dataclass(frozen=True)
class SignWitness:
    epsilon: tuple[int, ...]
    x: int
    y: int


@dataclass(frozen=True)
class L1IsometryCertificate:
    """Exact evidence that span(basis) is isometric l1^n inside SNA.

    Valid iff the cube check holds and every sign class has an exact witness
    pair; each witness is then a strong-attainment pair for its combination.
    """

    basis: tuple[LipFunctional, ...]
    valid: bool
    cube_ok: bool
    cube_violation: CubeViolation | None
    sign_witnesses: tuple[SignWitness, ...]
    missing_epsilon: tuple[int, ...] | None

    @property
    def status(self) -> str:
        return "valid" if self.valid else "invalid"


def l1_isometry_lip(basis, pinned_pairs=None) -> L1IsometryCertificate:
    """Cube + sign certificate for an l1^n isometry.

    ``pinned_pairs`` optionally supplies one ordered pair per sign class (in
    class order); they are verified instead of searched, which lets a caller
    pin witnesses inside a subspace.  Without pinning, each class gets the
    lexicographically smallest ordered pair realizing it.
    """
    space = _check_common_space(basis)
    n = len(basis)
    basis = tuple(basis)

    cube_violation = None
    sign_pairs: dict[tuple, tuple[int, int]] = {}
    for x in range(space.n):
        for y in range(space.n):
            if x == y:
                continue
            w = quotient_vector(basis, x, y)
            for k, q in enumerate(w):
                if abs(q) > 1:
                    if cube_violation is None:
                        cube_violation = CubeViolation(x, y, k, q)
                    break
            else:
                if all(abs(q) == 1 for q in w):
                    key = tuple(int(q) for q in w)
                    if key not in sign_pairs:
                        sign_pairs[key] = (x, y)
    cube_ok = cube_violation is None

    reps = sign_class_representatives(n)
    witnesses = []
    missing = None
    if pinned_pairs is not None:
        if len(pinned_pairs) != len(reps):
            raise ValueError(f"{len(pinned_pairs)} pinned pairs for {len(reps)} sign classes")
        for eps, (x, y) in zip(reps, pinned_pairs):
            w = quotient_vector(basis, x, y)
            if tuple(w) == tuple(Fraction(e) for e in eps):
                witnesses.append(SignWitness(eps, x, y))
            elif missing is None:
                missing = eps
    else:
        for eps in reps:
            pair = sign_pairs.get(eps)
            if pair is None:
                if missing is None:
                    missing = eps
            else:
                witnesses.append(SignWitness(eps, *pair))
    valid = cube_ok and missing is None
    return L1IsometryCertificate(
        basis=basis,
        valid=valid,
        cube_ok=cube_ok,
        cube_violation=cube_violation,
        sign_witnesses=tuple(witnesses),
        missing_epsilon=missing,
    )


@dataclass(frozen=True)
class CornerReport:
    """Corner-criterion verdict: independent cross-oracle for l1 isometry."""

    valid: bool
    unit_norms: tuple[Fraction, ...]
    corner_values: tuple[tuple[tuple[int, ...], Fraction], ...]
    failing_coeffs: tuple[Fraction, ...] | None
    failing_value: Fraction | None


def l1_isometry_corner(basis) -> CornerReport:
    """Valid iff combo_norm(e_k) = 1 for all k and combo_norm(eps) = n for all
    sign vectors eps modulo global sign."""
    _check_common_space(basis)
    n = len(basis)
    unit_norms = []
    failing = None
    fail_value = None
    for k in range(n):
        e = [_ZERO] * n
        e[k] = _ONE
        v = combo_norm(basis, e)
        unit_norms.append(v)
        if v != 1 and failing is None:
            failing = tuple(e)
            fail_value = v
    corners = []
    for eps in sign_class_representatives(n):
        v = combo_norm(basis, eps)
        corners.append((eps, v))
        if v != n and failing is None:
            failing = tuple(Fraction(e) for e in eps)
            fail_value = v
    return CornerReport(
        valid=failing is None,
        unit_norms=tuple(unit_norms),
        corner_values=tuple(corners),
        failing_coeffs=failing,
        failing_value=fail_value,
    )


@dataclass(frozen=True)
class FreeL1Report:
    """l1^m isometry check inside the free space, via exact transport norms."""

    valid: bool
    unit_norms: tuple[Fraction, ...]
    combo_norms: tuple[tuple[tuple[int, ...], Fraction], ...]
    failure: str | None


def l1_isometry_free(vectors, precomputed_unit_norms=None) -> FreeL1Report:
    """Valid iff every vector has free norm 1 and every sign combination
    (mod global sign) has free norm m.  Sufficiency is the corner argument:
    the triangle inequality gives domination by the l1 norm for free.
    Stops at the first failing combination.

    ``precomputed_unit_norms`` lets a caller that has already computed the
    individual norms (e.g. a search over molecules, which all have norm 1)
    skip recomputing them; they are recorded as given.
    """
    from .freespace import free_norm_primal

    vectors = tuple(vectors)
    if not vectors:
        raise ValueError("empty vector tuple")
    space = vectors[0].space
    for u in vectors[1:]:
        if u.space != space:
            raise ValueError("vectors live on different spaces")
    m = len(vectors)
    unit_norms = []
    for idx, u in enumerate(vectors):
        if precomputed_unit_norms is not None:
            value = Fraction(precomputed_unit_norms[idx])
        else:
            value, _ = free_norm_primal(u)
        unit_norms.append(value)
        if value != 1:
            return FreeL1Report(
                valid=False,
                unit_norms=tuple(unit_norms),
                combo_norms=(),
                failure=f"basis vector {len(unit_norms) - 1} has free norm {value}, not 1",
            )
    combos = []
    for eps in sign_class_representatives(m):
        w = vectors[0].scale(eps[0])
        for e, u in zip(eps[1:], vectors[1:]):
            w = w + u.scale(e)
        value, _ = free_norm_primal(w)
        combos.append((eps, value))
        if value != m:
            return FreeL1Report(
                valid=False,
                unit_norms=tuple(unit_norms),
                combo_norms=tuple(combos),
                failure=f"sign combination {eps} has free norm {value}, not {m}",
            )
    return FreeL1Report(True, tuple(unit_norms), tuple(combos), None)


@dataclass(frozen=True)
class BallViolation:
    x: int
    y: int
    l1_norm: Fraction


@dataclass(frozen=True)
class VertexWitness:
    coordinate: int
    x: int
    y: int


@dataclass(frozen=True)
class LinfIsometryCertificate:
    """Exact evidence that span(basis) is isometric l-infinity^m inside SNA."""

    basis: tuple[LipFunctional, ...]
    valid: bool
    ball_ok: bool
    ball_violation: BallViolation | None
    vertex_witnesses: tuple[VertexWitness, ...]
    missing_coordinate: int | None

    @property
    def status(self) -> str:
        return "valid" if self.valid else "invalid"


def linf_isometry_lip(basis) -> LinfIsometryCertificate:
    """Ball + vertex certificate for an l-infinity^m isometry.

    Valid iff every pair's quotient vector has l1 norm at most 1 and each
    basis vertex +e_j is realized exactly by some ordered pair (the pair
    reversed realizes -e_j).
    """
    space = _check_common_space(basis)
    m = len(basis)
    basis = tuple(basis)
    ball_violation = None
    vertex_pair: dict[int, tuple[int, int]] = {}
    for x in range(space.n):
        for y in range(space.n):
            if x == y:
                continue
            w = quotient_vector(basis, x, y)
            total = sum(abs(q) for q in w)
            if total > 1:
                if ball_violation is None:
                    ball_violation = BallViolation(x, y, total)
                continue
            for j, q in enumerate(w):
                if q == 1 and j not in vertex_pair:
                    vertex_pair[j] = (x, y)
    ball_ok = ball_violation is None
    witnesses = []
    missing = None
    for j in range(m):
        pair = vertex_pair.get(j)
        if pair is None:
            if missing is None:
                missing = j
        else:
            witnesses.append(VertexWitness(j, *pair))
    valid = ball_ok and missing is None
    return LinfIsometryCertificate(
        basis=basis,
        valid=valid,
        ball_ok=ball_ok,
        ball_violation=ball_violation,
        vertex_witnesses=tuple(witnesses),
        missing_coordinate=missing,
    )
