"""Lipschitz functionals on finite pointed spaces.

Norm with complete strong-attainment witness sets, rebasing, McShane
extension, and norm-preserving extension of certified l1 bases.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .metric import PointedMetricSpace

_ZERO = Fraction(0)


@dataclass(frozen=True)
class LipFunctional:
    """Element of Lip_0: rational values per point, zero at the base point."""

    space: PointedMetricSpace
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != self.space.n:
            raise ValueError(f"{len(self.values)} values for {self.space.n} points")
        if self.values[self.space.base] != 0:
            raise ValueError(f"value at base point is {self.values[self.space.base]}, not 0")

    def __call__(self, i: int) -> Fraction:
        return self.values[i]

    def __add__(self, other: "LipFunctional") -> "LipFunctional":
        _same_space(self, other)
        return LipFunctional(self.space, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "LipFunctional") -> "LipFunctional":
        _same_space(self, other)
        return LipFunctional(self.space, tuple(a - b for a, b in zip(self.values, other.values)))

    def scale(self, c) -> "LipFunctional":
        c = Fraction(c)
        return LipFunctional(self.space, tuple(c * v for v in self.values))


def functional(space: PointedMetricSpace, values) -> LipFunctional:
    return LipFunctional(space, tuple(Fraction(v) for v in values))


def zero_functional(space: PointedMetricSpace) -> LipFunctional:
    return LipFunctional(space, tuple(_ZERO for _ in range(space.n)))


def combine(basis, coeffs) -> LipFunctional:
    """Linear combination sum_k coeffs[k] * basis[k]."""
    if not basis:
        raise ValueError("empty basis")
    space = basis[0].space
    values = [_ZERO] * space.n
    for f, a in zip(basis, coeffs):
        _same_space(basis[0], f)
        a = Fraction(a)
        if a:
            values = [v + a * w for v, w in zip(values, f.values)]
    return LipFunctional(space, tuple(values))


def _same_space(f: LipFunctional, g: LipFunctional):
    if f.space != g.space:
        raise ValueError("functionals live on different spaces")


@dataclass(frozen=True)
class WitnessPair:
    """Attaining pair, oriented so the quotient is positive: x != y and
    (f(x) - f(y)) / rho(x, y) = +norm."""

    x: int
    y: int
    quotient: Fraction


def lip_norm(f: LipFunctional) -> tuple[Fraction, tuple[WitnessPair, ...]]:
    """Best Lipschitz constant and the complete set of attaining pairs.

    On a finite space the sup over pairs is a max, so every nonzero
    functional attains strongly; the zero functional returns (0, ()) by
    convention.  Witnesses are oriented to positive quotient and sorted
    lexicographically.
    """
    space = f.space
    norm = _ZERO
    quotients = []
    for i, j in space.pairs():
        q = (f.values[i] - f.values[j]) / space.rho(i, j)
        quotients.append((i, j, q))
        if abs(q) > norm:
            norm = abs(q)
    if norm == 0:
        return _ZERO, ()
    witnesses = []
    for i, j, q in quotients:
        if q == norm:
            witnesses.append(WitnessPair(i, j, q))
        elif -q == norm:
            witnesses.append(WitnessPair(j, i, -q))
    witnesses.sort(key=lambda w: (w.x, w.y))
    return norm, tuple(witnesses)


def rebase(f: LipFunctional, new_base: int) -> LipFunctional:
    """Shift values by -f(new_base); an isometry onto Lip_0 of the rebased space.

    Point order and distances are untouched, so the norm and the witness-pair
    set are exactly preserved.
    """
    space = f.space
    if not 0 <= new_base < space.n:
        raise ValueError(f"base index {new_base} out of range")
    if new_base == space.base:
        return f
    shifted_space = replace(space, base=new_base)
    shift = f.values[new_base]
    return LipFunctional(shifted_space, tuple(v - shift for v in f.values))


def mcshane_extend(
    f: LipFunctional, parent: PointedMetricSpace, lip_bound
) -> LipFunctional:
    """McShane inf-convolution extension of f from a restricted subspace.

    ``f.space`` must have been produced by ``restrict(parent, indices)``.
    Computes g(x) = min_{y in K} (f(y) + L * rho(x, y)), then shifts so the
    parent's base gets value 0 (a norm- and witness-preserving rebase, needed
    when the base of the parent is not in K).  With L = lip_norm(f) the
    restriction of g to K equals f up to that shift and the norm is exactly L.
    """
    lip_bound = Fraction(lip_bound)
    space = f.space
    if space.parent_map is None:
        raise ValueError("functional's space does not record a parent index map")
    idx = space.parent_map
    if len(idx) != space.n or any(not 0 <= i < parent.n for i in idx):
        raise ValueError("index map does not match the parent space")
    norm, _ = lip_norm(f)
    if lip_bound < norm:
        raise ValueError(f"extension bound {lip_bound} below the Lipschitz norm {norm}")
    raw = [
        min(f.values[k] + lip_bound * parent.rho(x, idx[k]) for k in range(space.n))
        for x in range(parent.n)
    ]
    shift = raw[parent.base]
    return LipFunctional(parent, tuple(v - shift for v in raw))


def extend_basis(basis, certificate, parent: PointedMetricSpace):
    """Norm-preserving extension of a certified l1 basis to a parent space.

    Each basis element is extended by McShane with L = 1; the returned
    certificate on the parent is rebuilt with the original witness pairs
    mapped through the index map, so every witness stays inside K.
    Raises on an invalid input certificate.
    """
    from . import certify

    if not certificate.valid:
        raise ValueError("input l1 certificate is invalid")
    if tuple(certificate.basis) != tuple(basis):
        raise ValueError("certificate does not belong to the given basis")
    space = basis[0].space
    if space.parent_map is None:
        raise ValueError("basis space does not record a parent index map")
    idx = space.parent_map
    extended = tuple(mcshane_extend(f, parent, 1) for f in basis)
    witness_pairs = [(idx[w.x], idx[w.y]) for w in certificate.sign_witnesses]
    parent_cert = certify.l1_isometry_lip(extended, pinned_pairs=witness_pairs)
    if not parent_cert.valid:
        raise AssertionError("extension lemma failed: extended basis lost its certificate")
    return extended, parent_cert
