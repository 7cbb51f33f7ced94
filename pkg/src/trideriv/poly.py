"""Sparse multivariate polynomials over Q(i) in the variables T_ij.

Terms are stored as ``{exponent_tuple: GaussianRational}`` with dense
exponent tuples; n is small so nothing cleverer is needed. Monomials are
compared in graded lex order with T01 < T02 < ... < T2n2.
"""

from __future__ import annotations

import re
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from .trinomial import TrinomialSpec, VarIndex


class VariableSetError(ValueError):
    pass


class PolySyntaxError(ValueError):
    pass


class ZeroPolynomialError(ValueError):
    pass


class GaussianRational:
    """re + im*i with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussianRational):
            re, im = re.re, re.im + Fraction(im)
        elif isinstance(re, complex):
            re, im = re.real, re.imag + im
        self.re = Fraction(re)
        self.im = Fraction(im)

    @classmethod
    def coerce(cls, x) -> GaussianRational:
        return x if isinstance(x, GaussianRational) else cls(x)

    def __add__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conjugate(self) -> GaussianRational:
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(i)")
        p = self * o.conjugate()
        return GaussianRational(p.re / n, p.im / n)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        o = _coerce(other)
        if o is None:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __repr__(self):
        return f"GaussianRational({self})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if self.im.denominator != 1:
            im = f"{self.im}*i"  # "1/2i" would read back as 1/(2i)
        else:
            im = "i" if self.im == 1 else "-i" if self.im == -1 else f"{self.im}i"
        if not self.re:
            return im
        sign = "" if im.startswith("-") else "+"
        return f"{self.re}{sign}{im}"


I = GaussianRational(0, 1)


def _coerce(x) -> GaussianRational | None:
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    if isinstance(x, complex):
        return GaussianRational(x)
    return None


def order_key(exps: Sequence[int]) -> tuple:
    """Graded lex with the last variable largest."""
    return (sum(exps), tuple(reversed(exps)))


Exps = tuple[int, ...]


class Poly:
    """An immutable polynomial in a fixed, named set of variables."""

    __slots__ = ("names", "_terms")

    def __init__(self, names: Sequence[str], terms: Mapping[Exps, object] | None = None):
        self.names = tuple(names)
        n = len(self.names)
        clean: dict[Exps, GaussianRational] = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != n or any(x < 0 for x in e):
                raise ValueError(f"bad exponent vector {e} for {n} variables")
            c = GaussianRational.coerce(c)
            if c:
                clean[e] = c
        self._terms = clean

    @classmethod
    def _raw(cls, names: tuple[str, ...], terms: dict[Exps, GaussianRational]) -> Poly:
        p = object.__new__(cls)
        p.names = names
        p._terms = terms
        return p

    # constructors ------------------------------------------------------

    @classmethod
    def zero(cls, names: Sequence[str]) -> Poly:
        return cls(names)

    @classmethod
    def constant(cls, names: Sequence[str], c) -> Poly:
        return cls(names, {(0,) * len(names): c})

    @classmethod
    def one(cls, names: Sequence[str]) -> Poly:
        return cls.constant(names, 1)

    @classmethod
    def var(cls, names: Sequence[str], k: int | str) -> Poly:
        names = tuple(names)
        if isinstance(k, str):
            k = names.index(k)
        return cls(names, {tuple(int(i == k) for i in range(len(names))): 1})

    @classmethod
    def monomial(cls, names: Sequence[str], exps: Sequence[int], c=1) -> Poly:
        return cls(names, {tuple(exps): c})

    # accessors ---------------------------------------------------------

    @property
    def nvars(self) -> int:
        return len(self.names)

    @property
    def terms(self) -> Mapping[Exps, GaussianRational]:
        return dict(self._terms)

    def items(self) -> Iterator[tuple[Exps, GaussianRational]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    is_zero = property(lambda self: not self._terms)

    def coefficient(self, exps: Sequence[int]) -> GaussianRational:
        return self._terms.get(tuple(exps), GaussianRational(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def leading_term(self) -> tuple[Exps, GaussianRational]:
        if not self._terms:
            raise ZeroPolynomialError("zero polynomial has no leading term")
        e = max(self._terms, key=order_key)
        return e, self._terms[e]

    def sorted_terms(self) -> list[tuple[Exps, GaussianRational]]:
        return sorted(self._terms.items(), key=lambda t: order_key(t[0]), reverse=True)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    # arithmetic --------------------------------------------------------

    def _same(self, other: Poly) -> None:
        if self.names != other.names:
            raise VariableSetError(f"variable sets differ: {self.names} vs {other.names}")

    def _lift(self, other) -> Poly | None:
        if isinstance(other, Poly):
            self._same(other)
            return other
        c = _coerce(other)
        if c is None:
            return None
        return Poly.constant(self.names, c)

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in o._terms.items():
            s = out.get(e)
            s = c if s is None else s + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly._raw(self.names, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.names, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Poly):
            c = _coerce(other)
            if c is None:
                return NotImplemented
            if not c:
                return Poly._raw(self.names, {})
            return Poly._raw(self.names, {e: c * v for e, v in self._terms.items()})
        self._same(other)
        out: dict[Exps, GaussianRational] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return Poly._raw(self.names, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Poly:
        if k < 0:
            raise ValueError("negative powers are not polynomials")
        result = Poly.one(self.names)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.names == other.names and self._terms == other._terms
        c = _coerce(other)
        if c is None:
            return NotImplemented
        return self == Poly.constant(self.names, c)

    def __hash__(self):
        return hash((self.names, frozenset(self._terms.items())))

    def partial(self, k: int | str | VarIndex) -> Poly:
        """Formal partial derivative with respect to variable ``k``."""
        if isinstance(k, VarIndex):
            k = k.name
        if isinstance(k, str):
            k = self.names.index(k)
        out = {}
        for e, c in self._terms.items():
            if e[k]:
                d = list(e)
                d[k] -= 1
                out[tuple(d)] = c * e[k]
        return Poly._raw(self.names, out)

    def shift(self, exps: Sequence[int], c=1) -> Poly:
        """Multiply by the monomial ``c * T^exps``."""
        c = GaussianRational.coerce(c)
        return Poly._raw(
            self.names,
            {tuple(a + b for a, b in zip(e, exps)): v * c for e, v in self._terms.items()} if c else {},
        )

    def __repr__(self):
        return f"Poly({str(self)!r})"

    def __str__(self):
        return render_poly(self)


# rendering and parsing ---------------------------------------------------


def _render_monomial(names: Sequence[str], e: Exps) -> str:
    parts = [n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k]
    return "*".join(parts)


def render_poly(p: Poly) -> str:
    """Render with terms in decreasing monomial order, e.g. ``2*T21 - (1/2+i)*T02^3``."""
    if not p:
        return "0"
    out = []
    for e, c in p.sorted_terms():
        mono = _render_monomial(p.names, e)
        negative = c.is_real and c.re < 0
        a = -c if negative else c
        if not mono:
            body = str(a) if a.is_real and a.re.denominator == 1 else f"({a})"
        elif a == 1:
            body = mono
        elif a.is_real and a.re.denominator == 1:
            body = f"{a.re}*{mono}"
        else:
            body = f"({a})*{mono}"
        if not out:
            out.append(("-" if negative else "") + body)
        else:
            out.append((" - " if negative else " + ") + body)
    return "".join(out)


_TOKEN_RE = re.compile(r"\s*(?:(?P<num>\d+)(?P<imag>i)?|(?P<var>T\d+)|(?P<i>i)|(?P<op>[-+*/^()]))")


def _tokenize(text: str) -> list[tuple[str, object]]:
    toks, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            raise PolySyntaxError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        pos = m.end()
        if m.group("num") is not None:
            v = int(m.group("num"))
            toks.append(("num", GaussianRational(0, v) if m.group("imag") else GaussianRational(v)))
        elif m.group("var") is not None:
            toks.append(("var", m.group("var")))
        elif m.group("i") is not None:
            toks.append(("num", I))
        else:
            toks.append((m.group("op"), None))
    toks.append(("end", None))
    return toks


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.toks = _tokenize(text)
        self.pos = 0
        self.names = tuple(names)

    def peek(self):
        return self.toks[self.pos][0]

    def take(self, kind=None):
        tok = self.toks[self.pos]
        if kind is not None and tok[0] != kind:
            raise PolySyntaxError(f"expected {kind!r}, found {tok[0]!r}")
        self.pos += 1
        return tok

    def parse(self) -> Poly:
        p = self.expr()
        self.take("end")
        return p

    def expr(self) -> Poly:
        p = self.term()
        while self.peek() in "+-":
            op = self.take()[0]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self) -> Poly:
        p = self.unary()
        while self.peek() in ("*", "/"):
            op = self.take()[0]
            q = self.unary()
            if op == "*":
                p = p * q
            else:
                if not q.is_constant() or not q:
                    raise PolySyntaxError("can only divide by a nonzero constant")
                p = p * (1 / q.coefficient((0,) * len(self.names)))
        return p

    def unary(self) -> Poly:
        if self.peek() in "+-":
            op = self.take()[0]
            p = self.unary()
            return -p if op == "-" else p
        return self.power()

    def power(self) -> Poly:
        p = self.atom()
        if self.peek() == "^":
            self.take()
            kind, v = self.take("num")
            if not v.is_real or v.re.denominator != 1:
                raise PolySyntaxError("exponents must be nonnegative integers")
            p = p ** int(v.re)
        return p

    def atom(self) -> Poly:
        kind, v = self.take()
        if kind == "num":
            return Poly.constant(self.names, v)
        if kind == "var":
            if v not in self.names:
                raise PolySyntaxError(f"unknown variable {v}; expected one of {', '.join(self.names)}")
            return Poly.var(self.names, v)
        if kind == "(":
            p = self.expr()
            self.take(")")
            return p
        raise PolySyntaxError(f"unexpected token {kind!r}")


def parse_poly(text: str, names: Sequence[str] | TrinomialSpec) -> Poly:
    """Parse a polynomial expression such as ``(-1/2+3i)*T01^2 - T11``."""
    if isinstance(names, TrinomialSpec):
        names = names.names
    return _Parser(text, names).parse()


# the relation g and division by it --------------------------------------


@lru_cache(maxsize=None)
def trinomial_poly(s: TrinomialSpec) -> Poly:
    return Poly(s.names, {s.monomial_exponents(i): 1 for i in range(3)})


@lru_cache(maxsize=None)
def monomial_poly(s: TrinomialSpec, i: int) -> Poly:
    """The monomial T_i^{l_i}."""
    return Poly(s.names, {s.monomial_exponents(i): 1})


def variable(s: TrinomialSpec, v: VarIndex | tuple[int, int]) -> Poly:
    return Poly.var(s.names, s.position(v))


def divmod_poly(p: Poly, d: Poly) -> tuple[Poly, Poly]:
    """Multivariate division by a single divisor: ``p == q*d + r`` with no
    term of ``r`` divisible by the leading monomial of ``d``.

    With a single divisor the remainder is zero exactly when ``d`` divides
    ``p``.
    """
    p._same(d)
    lm, lc = d.leading_term()
    tail = [(e, c) for e, c in d._terms.items() if e != lm]
    work = dict(p._terms)
    quot: dict[Exps, GaussianRational] = {}
    rem: dict[Exps, GaussianRational] = {}
    while work:
        m = max(work, key=order_key)
        c = work.pop(m)
        if all(a >= b for a, b in zip(m, lm)):
            shift = tuple(a - b for a, b in zip(m, lm))
            f = c / lc
            quot[shift] = quot.get(shift, GaussianRational(0)) + f
            for e, ce in tail:
                t = tuple(a + b for a, b in zip(e, shift))
                s = work.get(t, GaussianRational(0)) - f * ce
                if s:
                    work[t] = s
                else:
                    work.pop(t, None)
        else:
            rem[m] = c
    return (
        Poly._raw(p.names, {e: c for e, c in quot.items() if c}),
        Poly._raw(p.names, rem),
    )


def divides(d: Poly, p: Poly) -> bool:
    return divmod_poly(p, d)[1].is_zero


def normal_form(p: Poly, s: TrinomialSpec) -> Poly:
    """Canonical representative of ``p`` in R(g) = K[T]/(g)."""
    g = trinomial_poly(s)
    if p.names != g.names:
        raise VariableSetError(f"polynomial variables {p.names} do not match {s}")
    return divmod_poly(p, g)[1]


# grading-aware helpers ---------------------------------------------------


def homogeneous_components(p: Poly, grading) -> dict:
    """Split ``p`` by the K-degree of its monomials (no reduction mod g)."""
    out: dict = {}
    for e, c in p._terms.items():
        out.setdefault(grading.degree_of_exponents(e), {})[e] = c
    return {w: Poly._raw(p.names, t) for w, t in out.items()}


def k_degree_of(p: Poly, grading, reduce: bool = True):
    """K-degree of the class of ``p``, or ``None`` if it is not homogeneous.

    Homogeneity is decided on the normal form mod g, which is legitimate
    because (g) is a homogeneous ideal.
    """
    q = normal_form(p, grading.spec) if reduce else p
    if q.is_zero:
        raise ZeroPolynomialError("the zero class has no degree")
    comps = homogeneous_components(q, grading)
    if len(comps) != 1:
        return None
    return next(iter(comps))
