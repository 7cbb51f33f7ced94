"""The finest grading of R(g) by K = Z^n / Im L^T, its weight cone, and
exact cone membership.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Mapping, Sequence

from .abelian import (
    DimensionError,
    FgAbelianGroup,
    GroupElement,
    IntMatrix,
    Projection,
    induced_isomorphism,
    quotient_group,
)
from .trinomial import TrinomialSpec, VarIndex, exponent_matrix


@dataclass(frozen=True)
class KGrading:
    spec: TrinomialSpec
    group: FgAbelianGroup
    projection: Projection
    degrees: tuple[GroupElement, ...]
    mu: GroupElement
    # coordinate change applied on top of the canonical SNF basis, if any
    basis_change: IntMatrix | None = field(default=None, compare=False)

    def degree(self, v: VarIndex | tuple[int, int]) -> GroupElement:
        return self.degrees[self.spec.position(v)]

    def degree_of_exponents(self, exps: Sequence[int]) -> GroupElement:
        return self.projection(exps)

    def degree_map(self) -> dict[str, GroupElement]:
        return dict(zip(self.spec.names, self.degrees))

    def in_basis(self, target: Mapping[str, Sequence[int]] | Sequence[Sequence[int]]) -> KGrading:
        """Re-express the grading so that ``deg T_v`` has the given coordinates.

        ``target`` maps variable names (or positions) to concatenated
        (free, torsion) coordinates. Raises ``ValueError`` unless the
        assignment differs from this one by an automorphism of K.
        """
        if isinstance(target, Mapping):
            missing = set(self.spec.names) - set(target)
            if missing:
                raise ValueError(f"target basis lacks degrees for {sorted(missing)}")
            images = [target[name] for name in self.spec.names]
        else:
            images = list(target)
        relations = exponent_matrix(self.spec).transpose()
        phi = induced_isomorphism(self.projection, relations, self.group, images)
        proj = self.projection.compose(phi)
        n = self.spec.n
        degrees = tuple(proj([int(k == v) for k in range(n)]) for v in range(n))
        return KGrading(self.spec, self.group, proj, degrees,
                        proj(self.spec.monomial_exponents(0)), phi)


@lru_cache(maxsize=4096)
def compute_grading(s: TrinomialSpec) -> KGrading:
    """deg T_ij = Q(e_ij) in the canonical basis produced by Smith form."""
    group, proj = quotient_group(exponent_matrix(s).transpose())
    n = s.n
    degrees = tuple(proj([int(k == v) for k in range(n)]) for v in range(n))
    mus = [proj(s.monomial_exponents(i)) for i in range(3)]
    if not (mus[0] == mus[1] == mus[2]):
        raise AssertionError(f"g is not homogeneous for {s}: {mus}")
    return KGrading(s, group, proj, degrees, mus[0])


def coarsen_degree(d: GroupElement) -> tuple[Fraction, ...]:
    """Degree with respect to the coarser grading by the free part of K."""
    return d.free_part()


# weight cone -------------------------------------------------------------


@dataclass(frozen=True)
class WeightCone:
    ambient_dim: int
    generators: tuple[tuple[Fraction, ...], ...]

    def __contains__(self, v) -> bool:
        return cone_contains(self, v)


def weight_cone(g: KGrading) -> WeightCone:
    """The cone in K_Q spanned by the free parts of all generator degrees."""
    return WeightCone(g.group.free_rank, tuple(d.free_part() for d in g.degrees))


def cone_contains(cone: WeightCone, v: Sequence) -> bool:
    """Decide exactly whether ``v`` is a nonnegative combination of the
    cone generators.

    Phase one of the simplex method on ``A x = v, x >= 0`` with Bland's
    rule, in exact rational arithmetic.
    """
    if len(v) != cone.ambient_dim:
        raise DimensionError(f"vector of length {len(v)} in a cone of dimension {cone.ambient_dim}")
    b = [Fraction(x) for x in v]
    gens = cone.generators
    m, n = cone.ambient_dim, len(gens)
    if not any(b):
        return True
    if n == 0:
        return False
    # rows: A x + a = b with b >= 0; artificials a_i are the starting basis
    tab = []
    for i in range(m):
        sign = -1 if b[i] < 0 else 1
        row = [sign * gens[j][i] for j in range(n)]
        row += [Fraction(int(k == i)) for k in range(m)]
        row.append(sign * b[i])
        tab.append(row)
    basis = [n + i for i in range(m)]
    width = n + m
    obj = [-sum(tab[i][j] for i in range(m)) for j in range(n)] + [Fraction(0)] * m
    obj.append(-sum(tab[i][-1] for i in range(m)))
    while True:
        enter = next((j for j in range(width) if obj[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:  # cannot happen: phase one is bounded below by zero
            raise AssertionError("unbounded phase-one problem")
        piv = tab[leave][enter]
        tab[leave] = [x / piv for x in tab[leave]]
        for i in range(m):
            if i != leave and tab[i][enter]:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[leave])]
        f = obj[enter]
        obj = [x - f * y for x, y in zip(obj, tab[leave])]
        basis[leave] = enter
    return obj[-1] == 0


def is_primitive_degree(g: KGrading, d: GroupElement) -> bool:
    """A degree is primitive when its free part lies outside the weight cone."""
    return not cone_contains(weight_cone(g), d.free_part())


def cone_inequalities_2d(cone: WeightCone) -> list[tuple[Fraction, Fraction]] | None:
    """Inward normals ``a`` with ``a . x >= 0`` cutting out a pointed,
    full-dimensional 2-D cone; ``None`` if the cone is not of that kind.
    """
    if cone.ambient_dim != 2:
        return None
    rays = [g for g in cone.generators if any(g)]
    if not rays:
        return None

    def cross(a, b):
        return a[0] * b[1] - a[1] * b[0]

    right = next((a for a in rays if all(cross(a, r) >= 0 for r in rays)), None)
    left = next((a for a in rays if all(cross(a, r) <= 0 for r in rays)), None)
    if right is None or left is None or cross(right, left) <= 0:
        return None
    # normals pointing into the cone, scaled to primitive integer vectors
    return [_primitive((-right[1], right[0])), _primitive((left[1], -left[0]))]


def _primitive(a: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    den = lcm(*(Fraction(x).denominator for x in a))
    ints = [int(x * den) for x in a]
    g = gcd(*ints)
    return tuple(Fraction(x // g) for x in ints)
