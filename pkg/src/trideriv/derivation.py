"""Derivations of R(g) given by their values on the generators T_ij.

Includes the elementary building blocks delta_{C,beta} (Types I and II),
their enumeration, and a set of exact checks: well-definedness,
homogeneity, bounded local nilpotency, kernel membership and the
one-moving-variable-per-monomial structure.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .abelian import GroupElement
from .grading import KGrading, compute_grading, is_primitive_degree
from .poly import (
    GaussianRational,
    Poly,
    ZeroPolynomialError,
    divides,
    k_degree_of,
    monomial_poly,
    normal_form,
    parse_poly,
    trinomial_poly,
    variable,
)
from .trinomial import TrinomialSpec, VarIndex


class BetaPatternError(ValueError):
    pass


class FamilyConditionError(ValueError):
    pass


class ZeroDerivationError(ValueError):
    pass


class IllDefinedDerivationError(ValueError):
    pass


class NotInKernelError(ValueError):
    pass


class NotHomogeneousScalarError(ValueError):
    pass


class PreconditionNotVerifiedError(ValueError):
    pass


@dataclass(frozen=True)
class Derivation:
    """``images[k]`` is the value of the derivation on the k-th variable."""

    spec: TrinomialSpec
    images: tuple[Poly, ...]

    def __post_init__(self):
        if len(self.images) != self.spec.n:
            raise ValueError(f"need {self.spec.n} images, got {len(self.images)}")
        for p in self.images:
            if p.names != self.spec.names:
                raise ValueError(f"image {p} is not over the variables of {self.spec}")

    @classmethod
    def from_images(cls, spec: TrinomialSpec, images: Mapping[str, Poly | str]) -> Derivation:
        """Build from ``{"T01": poly_or_string, ...}``; missing variables map to 0."""
        unknown = set(images) - set(spec.names)
        if unknown:
            raise ValueError(f"unknown variables {sorted(unknown)} for {spec}")
        out = []
        for name in spec.names:
            p = images.get(name, Poly.zero(spec.names))
            out.append(parse_poly(p, spec) if isinstance(p, str) else p)
        return cls(spec, tuple(out))

    def image(self, v: VarIndex | tuple[int, int] | str) -> Poly:
        if isinstance(v, str):
            return self.images[self.spec.names.index(v)]
        return self.images[self.spec.position(v)]

    def reduced(self) -> Derivation:
        return Derivation(self.spec, tuple(normal_form(p, self.spec) for p in self.images))

    def is_zero(self) -> bool:
        return all(normal_form(p, self.spec).is_zero for p in self.images)

    def scaled(self, h: Poly) -> Derivation:
        return Derivation(self.spec, tuple(normal_form(h * p, self.spec) for p in self.images))

    def __call__(self, p: Poly) -> Poly:
        return apply_derivation(self, p)

    def to_json(self) -> dict:
        return {"images": {name: str(p) for name, p in zip(self.spec.names, self.images)}}

    def __str__(self) -> str:
        parts = [f"({p})*d/d{name}" for name, p in zip(self.spec.names, self.images) if p]
        return " + ".join(parts) or "0"


def apply_raw(d: Derivation, p: Poly) -> Poly:
    """delta(p) in the polynomial ring, before reduction mod g."""
    out = Poly.zero(p.names)
    for k, img in enumerate(d.images):
        if img:
            dp = p.partial(k)
            if dp:
                out = out + dp * img
    return out


def apply_derivation(d: Derivation, p: Poly) -> Poly:
    return normal_form(apply_raw(d, p), d.spec)


def is_well_defined(d: Derivation) -> bool:
    """True iff g divides delta(g), so that delta descends to R(g)."""
    return normal_form(apply_raw(d, trinomial_poly(d.spec)), d.spec).is_zero


def homogeneity_degree(d: Derivation, grading: KGrading | None = None) -> GroupElement | None:
    """The common value of deg delta(T_v) - deg T_v over all nonzero
    images, or ``None`` when the images do not agree on one.
    """
    g = grading or compute_grading(d.spec)
    degree = None
    for k, img in enumerate(d.images):
        r = normal_form(img, d.spec)
        if r.is_zero:
            continue
        w = k_degree_of(r, g, reduce=False)
        if w is None:
            return None
        w = w - g.degrees[k]
        if degree is None:
            degree = w
        elif w != degree:
            return None
    if degree is None:
        raise ZeroDerivationError("the zero derivation has no degree")
    return degree


# local nilpotency --------------------------------------------------------


@dataclass(frozen=True)
class NilpotencyVerdict:
    status: str  # "nilpotent" | "not_within_bound" | "non_nilpotent"
    indices: dict[str, int] = field(default_factory=dict)
    bound: int | None = None
    witness: str | None = None
    witness_step: int | None = None

    @property
    def is_nilpotent(self) -> bool:
        return self.status == "nilpotent"

    @property
    def max_index(self) -> int | None:
        return max(self.indices.values()) if self.is_nilpotent and self.indices else None

    def to_json(self) -> dict:
        out: dict = {"status": self.status}
        if self.is_nilpotent:
            out["indices"] = dict(self.indices)
        elif self.status == "non_nilpotent":
            out.update(witness=self.witness, step=self.witness_step)
        else:
            out["bound"] = self.bound
        return out


def default_bound(spec: TrinomialSpec) -> int:
    return 4 * max(e for li in spec.l for e in li) * spec.n


def bounded_nilpotency(d: Derivation, bound: int | None = None) -> NilpotencyVerdict:
    """Iterate delta on each generator, reducing mod g.

    Elements killed by some power of delta form a subalgebra, so it
    suffices to look at the generators. If some nonzero delta^m(T) is
    divisible by delta^(m-1)(T) the derivation cannot be locally
    nilpotent (an LND of a domain never has f | delta(f) with
    delta(f) != 0).
    """
    if not is_well_defined(d):
        raise IllDefinedDerivationError(f"g does not divide delta(g) for {d}")
    if bound is None:
        bound = default_bound(d.spec)
    if bound < 1:
        raise ValueError("bound must be >= 1")
    indices: dict[str, int] = {}
    for k, name in enumerate(d.spec.names):
        f = variable(d.spec, d.spec.variables[k])
        for m in range(1, bound + 1):
            nxt = apply_derivation(d, f)
            if nxt.is_zero:
                indices[name] = m
                break
            if divides(f, nxt):
                return NilpotencyVerdict("non_nilpotent", bound=bound, witness=name, witness_step=m)
            f = nxt
        else:
            return NilpotencyVerdict("not_within_bound", bound=bound, witness=name)
    return NilpotencyVerdict("nilpotent", indices, bound)


def kernel_membership(d: Derivation, h: Poly) -> bool:
    return apply_derivation(d, h).is_zero


def scale_by_kernel(d: Derivation, h: Poly, grading: KGrading | None = None) -> Derivation:
    """h * delta for a homogeneous kernel element h; again an LND."""
    g = grading or compute_grading(d.spec)
    try:
        w = k_degree_of(h, g)
    except ZeroPolynomialError:
        raise NotHomogeneousScalarError("h must be nonzero") from None
    if w is None:
        raise NotHomogeneousScalarError(f"{h} is not homogeneous")
    if not kernel_membership(d, h):
        raise NotInKernelError(f"{h} is not in the kernel of {d}")
    return d.scaled(h)


def moving_variables(d: Derivation) -> dict[int, list[int]]:
    """For each monomial i, the positions j with delta(T_ij) != 0 in R(g)."""
    out: dict[int, list[int]] = {0: [], 1: [], 2: []}
    for v, img in zip(d.spec.variables, d.images):
        if not normal_form(img, d.spec).is_zero:
            out[v.i].append(v.j)
    return out


def structural_check(d: Derivation, verify: bool = True, bound: int | None = None) -> bool:
    """At most one variable per monomial is moved by a homogeneous LND.

    With ``verify`` the derivation must first pass the well-definedness,
    homogeneity and nilpotency checks, otherwise
    ``PreconditionNotVerifiedError`` is raised.
    """
    if verify:
        if not is_well_defined(d):
            raise PreconditionNotVerifiedError("derivation is not well defined")
        try:
            deg = homogeneity_degree(d)
        except ZeroDerivationError:
            deg = None
        if deg is None:
            raise PreconditionNotVerifiedError("derivation is not homogeneous")
        if not bounded_nilpotency(d, bound).is_nilpotent:
            raise PreconditionNotVerifiedError("derivation is not verified nilpotent")
    return all(len(js) <= 1 for js in moving_variables(d).values())


# elementary derivations --------------------------------------------------


@dataclass(frozen=True)
class ElementaryFamily:
    """A choice of type, column sequence C and (Type II) the index i0
    with beta_{i0} = 0.

    ``c[i0]`` is ``None`` for Type II: that column never enters the
    formulas, so all completions give the same derivation.
    """

    type: str
    c: tuple[int | None, int | None, int | None]
    i0: int | None = None

    def __post_init__(self):
        if self.type not in ("I", "II"):
            raise ValueError(f"type must be 'I' or 'II', got {self.type!r}")
        if self.type == "I" and (self.i0 is not None or None in self.c):
            raise ValueError("a Type I family has no i0 and a full sequence C")
        if self.type == "II":
            if self.i0 not in (0, 1, 2):
                raise ValueError("a Type II family needs i0 in {0, 1, 2}")
            if any(c is None for k, c in enumerate(self.c) if k != self.i0):
                raise ValueError("only c[i0] may be left open")

    @property
    def immaterial(self) -> tuple[int, ...]:
        return (self.i0,) if self.type == "II" else ()

    @property
    def active(self) -> tuple[int, ...]:
        return tuple(i for i in range(3) if i != self.i0)

    def label(self) -> str:
        cs = ",".join("." if c is None else str(c) for c in self.c)
        return f"{self.type}(C=({cs})" + (f", i0={self.i0})" if self.type == "II" else ")")

    def to_json(self) -> dict:
        return {"type": self.type, "C": list(self.c), "i0": self.i0, "immaterial": list(self.immaterial)}

    @classmethod
    def from_json(cls, data: Mapping) -> ElementaryFamily:
        return cls(data["type"], tuple(data["C"]), data.get("i0"))


def is_type_ii(fam: ElementaryFamily) -> bool:
    return fam.type == "II"


def family_condition_holds(s: TrinomialSpec, fam: ElementaryFamily) -> bool:
    for i, c in enumerate(fam.c):
        if c is not None and not 1 <= c <= s.sizes[i]:
            return False
    return sum(1 for i in fam.active if s.exponent(i, fam.c[i]) > 1) <= 1


def enumerate_elementary_families(s: TrinomialSpec) -> list[ElementaryFamily]:
    """All Type I and Type II families admissible for ``s``, Type I first."""
    out = []
    ranges = [range(1, k + 1) for k in s.sizes]
    for c in itertools.product(*ranges):
        fam = ElementaryFamily("I", c)
        if family_condition_holds(s, fam):
            out.append(fam)
    for i0 in range(3):
        others = [i for i in range(3) if i != i0]
        for ca, cb in itertools.product(ranges[others[0]], ranges[others[1]]):
            c = [None, None, None]
            c[others[0]], c[others[1]] = ca, cb
            fam = ElementaryFamily("II", tuple(c), i0)
            if family_condition_holds(s, fam):
                out.append(fam)
    return out


def check_beta(fam: ElementaryFamily, beta: Sequence) -> tuple[GaussianRational, ...]:
    b = tuple(GaussianRational.coerce(x) for x in beta)
    if len(b) != 3:
        raise BetaPatternError("beta has three entries")
    if b[0] + b[1] + b[2]:
        raise BetaPatternError(f"beta entries must sum to 0, got {', '.join(map(str, b))}")
    zeros = [i for i in range(3) if not b[i]]
    if fam.type == "I" and zeros:
        raise BetaPatternError("Type I needs every beta_i nonzero")
    if fam.type == "II" and zeros != [fam.i0]:
        raise BetaPatternError(f"Type II with i0={fam.i0} needs beta_i = 0 exactly for i = i0")
    return b


def default_beta(fam: ElementaryFamily) -> tuple[Fraction, Fraction, Fraction]:
    if fam.type == "I":
        return (Fraction(1), Fraction(1), Fraction(-2))
    a, b = fam.active
    beta = [Fraction(0)] * 3
    beta[a], beta[b] = Fraction(1), Fraction(-1)
    return tuple(beta)


def random_beta(fam: ElementaryFamily, rng: random.Random) -> tuple[Fraction, ...]:
    """A generic rational beta with the family's zero pattern."""

    def nonzero():
        while True:
            x = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
            if x:
                return x

    if fam.type == "I":
        while True:
            b0, b1 = nonzero(), nonzero()
            if b0 + b1:
                return (b0, b1, -b0 - b1)
    a, b = fam.active
    x = nonzero()
    beta = [Fraction(0)] * 3
    beta[a], beta[b] = x, -x
    return tuple(beta)


def _factor(s: TrinomialSpec, k: int, c: int) -> Poly:
    """The partial derivative of T_k^{l_k} with respect to T_{k c}."""
    return monomial_poly(s, k).partial(s.position((k, c)))


def make_elementary(s: TrinomialSpec, fam: ElementaryFamily, beta: Sequence | None = None) -> Derivation:
    """The derivation delta_{C,beta} for a family admissible on ``s``."""
    if not family_condition_holds(s, fam):
        raise FamilyConditionError(f"{fam.label()} is not admissible for {s}")
    b = check_beta(fam, default_beta(fam) if beta is None else beta)
    images = [Poly.zero(s.names) for _ in range(s.n)]
    for i in fam.active:
        img = Poly.constant(s.names, b[i])
        for k in fam.active:
            if k != i:
                img = img * _factor(s, k, fam.c[k])
        images[s.position((i, fam.c[i]))] = img
    return Derivation(s, tuple(images))


# verification of a family ------------------------------------------------


@dataclass(frozen=True)
class FamilyVerdict:
    family: ElementaryFamily
    beta: tuple
    derivation: Derivation
    well_defined: bool
    degree: GroupElement | None
    nilpotency: NilpotencyVerdict
    primitive: bool
    structural: bool
    second_beta: tuple
    second_ok: bool

    @property
    def ok(self) -> bool:
        return (self.well_defined and self.degree is not None and self.nilpotency.is_nilpotent
                and self.primitive and self.structural and self.second_ok)

    def to_json(self) -> dict:
        return {
            "family": self.family.to_json(),
            "label": self.family.label(),
            "beta": [str(x) for x in self.beta],
            "derivation": self.derivation.to_json(),
            "well_defined": self.well_defined,
            "degree": self.degree.to_json() if self.degree is not None else None,
            "homogeneous": self.degree is not None,
            "nilpotency": self.nilpotency.to_json(),
            "primitive": self.primitive,
            "structural": self.structural,
            "second_beta": [str(x) for x in self.second_beta],
            "second_instance_ok": self.second_ok,
            "ok": self.ok,
        }


def _quick_verdict(d: Derivation, g: KGrading, bound: int | None):
    wd = is_well_defined(d)
    deg = homogeneity_degree(d, g) if wd else None
    nil = bounded_nilpotency(d, bound) if wd else NilpotencyVerdict("not_within_bound", bound=bound)
    prim = deg is not None and is_primitive_degree(g, deg)
    return wd, deg, nil, prim


def verify_family(
    s: TrinomialSpec,
    fam: ElementaryFamily,
    grading: KGrading | None = None,
    bound: int | None = None,
    rng: random.Random | None = None,
) -> FamilyVerdict:
    """Instantiate a family at the default beta and at a random one and run
    every check on both."""
    g = grading or compute_grading(s)
    rng = rng or random.Random(f"{s.structured()}|{fam.label()}")
    beta = default_beta(fam)
    d = make_elementary(s, fam, beta)
    wd, deg, nil, prim = _quick_verdict(d, g, bound)
    struct = all(len(js) <= 1 for js in moving_variables(d).values())
    beta2 = random_beta(fam, rng)
    d2 = make_elementary(s, fam, beta2)
    wd2, deg2, nil2, prim2 = _quick_verdict(d2, g, bound)
    second_ok = wd2 and deg2 is not None and deg2 == deg and nil2.is_nilpotent and prim2
    return FamilyVerdict(fam, beta, d, wd, deg, nil, prim, struct, beta2, second_ok)


def kernel_variables(d: Derivation) -> list[int]:
    """Positions of variables with delta(T) = 0; monomials in them lie in the kernel."""
    return [k for k, img in enumerate(d.images) if normal_form(img, d.spec).is_zero]
