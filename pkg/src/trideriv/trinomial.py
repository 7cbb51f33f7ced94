"""Trinomials T0^l0 + T1^l1 + T2^l2: data model, input grammars and
structural predicates.

Two input grammars are accepted::

    l0=1,3; l1=3; l2=2
    T01*T02^3 + T11^3 + T21^2

Both are whitespace-insensitive. Variables are ``T`` followed by the
monomial index (one digit, 0-2) and the position within the monomial
(1-based, contiguous).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, reduce
from math import gcd

from .abelian import IntMatrix


class TrinomialParseError(ValueError):
    pass


class MonomialCountError(TrinomialParseError):
    pass


class VariableIndexError(TrinomialParseError, IndexError):
    pass


class ExponentError(TrinomialParseError):
    pass


class TrinomialSyntaxError(TrinomialParseError):
    pass


class LinearTermError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class VarIndex:
    i: int
    j: int

    @property
    def name(self) -> str:
        return f"T{self.i}{self.j}"

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class TrinomialSpec:
    """Exponent tuples ``l = (l_0, l_1, l_2)``; ``l[i][j-1]`` is the exponent of T_ij."""

    l: tuple[tuple[int, ...], tuple[int, ...], tuple[int, ...]]

    def __post_init__(self):
        if len(self.l) != 3:
            raise MonomialCountError(f"a trinomial has exactly three monomials, got {len(self.l)}")
        l = tuple(tuple(int(e) for e in li) for li in self.l)
        for i, li in enumerate(l):
            if not li:
                raise VariableIndexError(f"monomial {i} has no variables")
            if any(e < 1 for e in li):
                raise ExponentError(f"exponents must be >= 1, got {li} in monomial {i}")
        object.__setattr__(self, "l", l)

    @classmethod
    def of(cls, *tuples) -> TrinomialSpec:
        """``TrinomialSpec.of((1, 3), 3, 2)``; bare ints stand for 1-tuples."""
        return cls(tuple((t,) if isinstance(t, int) else tuple(t) for t in tuples))

    @property
    def sizes(self) -> tuple[int, int, int]:
        return tuple(len(li) for li in self.l)

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @cached_property
    def variables(self) -> tuple[VarIndex, ...]:
        return tuple(VarIndex(i, j + 1) for i, li in enumerate(self.l) for j in range(len(li)))

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def position(self, v: VarIndex | tuple[int, int]) -> int:
        """Global index of T_ij in the ordering T01 < T02 < ... < T2n2."""
        i, j = (v.i, v.j) if isinstance(v, VarIndex) else v
        if i not in (0, 1, 2) or not 1 <= j <= len(self.l[i]):
            raise VariableIndexError(f"T{i}{j} is not a variable of {self}")
        return sum(len(self.l[k]) for k in range(i)) + j - 1

    def exponent(self, i: int, j: int) -> int:
        return self.l[i][j - 1]

    def monomial_exponents(self, i: int) -> tuple[int, ...]:
        """Exponent vector (length n) of the monomial T_i^{l_i}."""
        out = [0] * self.n
        for j, e in enumerate(self.l[i], start=1):
            out[self.position((i, j))] = e
        return tuple(out)

    def structured(self) -> str:
        return "; ".join(f"l{i}=" + ",".join(map(str, li)) for i, li in enumerate(self.l))

    def polynomial(self) -> str:
        def mono(i, li):
            return "*".join(f"T{i}{j}" + (f"^{e}" if e != 1 else "") for j, e in enumerate(li, 1))

        return " + ".join(mono(i, li) for i, li in enumerate(self.l))

    def __str__(self) -> str:
        return self.polynomial()


_STRUCT_RE = re.compile(r"l([0-9]+)=([0-9]+(?:,[0-9]+)*)")
_VAR_RE = re.compile(r"T([0-9])([0-9]+)(?:\^([0-9]+))?")


def parse_trinomial(text: str) -> TrinomialSpec:
    """Parse either input grammar into a :class:`TrinomialSpec`."""
    compact = re.sub(r"\s+", "", text)
    if not compact:
        raise TrinomialSyntaxError("empty input")
    if compact.startswith("l"):
        return _parse_structured(compact)
    return _parse_polynomial(compact)


def _parse_structured(text: str) -> TrinomialSpec:
    parts = [p for p in text.split(";") if p]
    found: dict[int, tuple[int, ...]] = {}
    for part in parts:
        m = _STRUCT_RE.fullmatch(part)
        if m is None:
            raise TrinomialSyntaxError(f"cannot parse {part!r}; expected e.g. 'l0=1,3'")
        i = int(m.group(1))
        if i not in (0, 1, 2):
            raise VariableIndexError(f"monomial index {i} is not in 0..2")
        if i in found:
            raise TrinomialSyntaxError(f"l{i} given twice")
        exps = tuple(int(x) for x in m.group(2).split(","))
        if any(e < 1 for e in exps):
            raise ExponentError(f"exponents must be >= 1 in l{i}")
        found[i] = exps
    if len(found) != 3:
        raise MonomialCountError(f"expected l0, l1 and l2, got {sorted(found)}")
    return TrinomialSpec((found[0], found[1], found[2]))


def _parse_polynomial(text: str) -> TrinomialSpec:
    if "-" in text:
        raise TrinomialSyntaxError("coefficients other than 1 are not allowed")
    monomials = text.split("+")
    if any(not m for m in monomials):
        raise TrinomialSyntaxError("empty monomial")
    if len(monomials) != 3:
        raise MonomialCountError(f"a trinomial has exactly three monomials, got {len(monomials)}")
    tuples = []
    for pos, mono in enumerate(monomials):
        exps: dict[int, int] = {}
        for factor in mono.split("*"):
            m = _VAR_RE.fullmatch(factor)
            if m is None:
                raise TrinomialSyntaxError(f"cannot parse factor {factor!r}")
            i, j = int(m.group(1)), int(m.group(2))
            e = int(m.group(3)) if m.group(3) is not None else 1
            if i != pos:
                raise VariableIndexError(f"T{i}{j} appears in monomial {pos}; expected T{pos}j")
            if e < 1:
                raise ExponentError(f"exponent of T{i}{j} must be >= 1")
            if j in exps:
                raise TrinomialSyntaxError(f"T{i}{j} repeated in monomial {pos}")
            exps[j] = e
        if sorted(exps) != list(range(1, len(exps) + 1)):
            raise VariableIndexError(f"monomial {pos} uses positions {sorted(exps)}; must be 1..{len(exps)}")
        tuples.append(tuple(exps[j] for j in range(1, len(exps) + 1)))
    return TrinomialSpec(tuple(tuples))


def exponent_matrix(s: TrinomialSpec) -> IntMatrix:
    """The 2 x n matrix with rows (-l_0, l_1, 0) and (-l_0, 0, l_2)."""
    l0, l1, l2 = s.l
    neg0 = [-e for e in l0]
    return IntMatrix.from_rows([
        neg0 + list(l1) + [0] * len(l2),
        neg0 + [0] * len(l1) + list(l2),
    ])


def monomial_gcds(s: TrinomialSpec) -> tuple[int, int, int]:
    return tuple(reduce(gcd, li) for li in s.l)


def has_linear_term(s: TrinomialSpec) -> bool:
    return any(len(li) == 1 and li[0] == 1 for li in s.l)


def is_factorial(s: TrinomialSpec) -> bool:
    """R(g) is factorial iff the monomial gcds d_0, d_1, d_2 are pairwise coprime.

    Only meaningful without a linear term; otherwise R(g) is a polynomial
    ring and ``LinearTermError`` is raised.
    """
    if has_linear_term(s):
        raise LinearTermError(f"{s} has a linear term; R(g) is a polynomial ring")
    d0, d1, d2 = monomial_gcds(s)
    return gcd(d0, d1) == 1 and gcd(d0, d2) == 1 and gcd(d1, d2) == 1


def theorem_hypothesis(s: TrinomialSpec) -> bool:
    """At most one monomial contains a variable with exponent 1."""
    return sum(1 for li in s.l if 1 in li) <= 1


def existence_criterion(s: TrinomialSpec) -> bool:
    """Some exponent equals 1, i.e. a nonzero homogeneous LND exists."""
    return any(1 in li for li in s.l)


def rigidity_criterion(s: TrinomialSpec) -> bool:
    return all(e >= 2 for li in s.l for e in li)
