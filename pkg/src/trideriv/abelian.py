"""Exact integer linear algebra: Smith normal form and finitely generated
abelian groups of the form Z^n / Im(M).

Everything here uses Python integers, so entries may grow without bound
during pivoting.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class DimensionError(ValueError):
    pass


class GroupMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class IntMatrix:
    """A rows x cols matrix of Python integers, stored row-major."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise DimensionError(f"entries do not form a {self.rows}x{self.cols} matrix")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        entries = tuple(tuple(int(x) for x in r) for r in rows)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        return cls(len(entries), cols, entries)

    @classmethod
    def identity(cls, size: int) -> IntMatrix:
        return cls(size, size, tuple(tuple(int(i == j) for j in range(size)) for i in range(size)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(self.column(j) for j in range(self.cols)))

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        cols = [other.column(j) for j in range(other.cols)]
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self.entries),
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise DimensionError(f"vector of length {len(v)} does not match {self.cols} columns")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.entries)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise DimensionError("determinant of a non-square matrix")
        n = self.rows
        a = [list(r) for r in self.entries]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def inverse(self) -> IntMatrix:
        """Inverse of a unimodular matrix (exact Gauss-Jordan)."""
        n = self.rows
        if n != self.cols:
            raise DimensionError("inverse of a non-square matrix")
        a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
             for i, r in enumerate(self.entries)]
        for col in range(n):
            piv = next((i for i in range(col, n) if a[i][col] != 0), None)
            if piv is None:
                raise ValueError("matrix is singular")
            a[col], a[piv] = a[piv], a[col]
            p = a[col][col]
            a[col] = [x / p for x in a[col]]
            for i in range(n):
                if i != col and a[i][col] != 0:
                    f = a[i][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
        out = [r[n:] for r in a]
        if any(x.denominator != 1 for r in out for x in r):
            raise ValueError("matrix is not unimodular")
        return IntMatrix.from_rows([[int(x) for x in r] for r in out], n)


@dataclass(frozen=True)
class SnfResult:
    """``u @ m @ v == d`` with ``u``, ``v`` unimodular and ``d`` in Smith form."""

    d: IntMatrix
    u: IntMatrix
    v: IntMatrix

    @property
    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.d[k, k] for k in range(min(self.d.rows, self.d.cols)))

    @property
    def rank(self) -> int:
        return sum(1 for x in self.diagonal if x != 0)


def smith_normal_form(m: IntMatrix | Sequence[Sequence[int]]) -> SnfResult:
    """Diagonalize ``m`` by unimodular row and column operations.

    The diagonal is nonnegative and each entry divides the next. The
    transforms are deterministic for a given input.
    """
    if not isinstance(m, IntMatrix):
        m = IntMatrix.from_rows(m)
    rows, cols = m.rows, m.cols
    a = [list(r) for r in m.entries]
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def add_row(dst, src, c):
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for r in a:
            r[dst] += c * r[src]
        for r in v:
            r[dst] += c * r[src]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in a:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = a[t][t]
            for i in range(t + 1, rows):
                q = a[i][t] // p
                if q:
                    add_row(i, t, -q)
            for j in range(t + 1, cols):
                q = a[t][j] // p
                if q:
                    add_col(j, t, -q)
            leftovers = [(abs(a[i][t]), 0, i) for i in range(t + 1, rows) if a[i][t]]
            leftovers += [(abs(a[t][j]), 1, j) for j in range(t + 1, cols) if a[t][j]]
            if leftovers:
                _, kind, k = min(leftovers)
                if kind == 0:
                    swap_rows(t, k)
                else:
                    swap_cols(t, k)
                continue
            bad = next(
                (i for i in range(t + 1, rows) for j in range(t + 1, cols) if a[i][j] % p),
                None,
            )
            if bad is not None:
                add_row(t, bad, 1)
                continue
            break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    return SnfResult(
        IntMatrix.from_rows(a, cols),
        IntMatrix.from_rows(u, rows),
        IntMatrix.from_rows(v, cols),
    )


@dataclass(frozen=True)
class FgAbelianGroup:
    """Z^free_rank + Z_{d_1} + ... + Z_{d_s} with d_1 | d_2 | ... and every d_k >= 2."""

    free_rank: int
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "torsion_orders", tuple(int(d) for d in self.torsion_orders))
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        if any(d < 2 for d in self.torsion_orders):
            raise ValueError(f"torsion orders must be >= 2, got {self.torsion_orders}")
        for a, b in zip(self.torsion_orders, self.torsion_orders[1:]):
            if b % a:
                raise ValueError(f"torsion orders {self.torsion_orders} do not form a divisibility chain")

    @property
    def is_torsion_free(self) -> bool:
        return not self.torsion_orders

    @property
    def ngens(self) -> int:
        return self.free_rank + len(self.torsion_orders)

    def identity(self) -> GroupElement:
        return GroupElement(self, (0,) * self.free_rank, (0,) * len(self.torsion_orders))

    def element(self, coords: Sequence[int]) -> GroupElement:
        """Build an element from concatenated (free, torsion) coordinates."""
        if len(coords) != self.ngens:
            raise DimensionError(f"expected {self.ngens} coordinates, got {len(coords)}")
        r = self.free_rank
        return GroupElement(self, tuple(coords[:r]), tuple(coords[r:]))

    def generators(self) -> list[GroupElement]:
        return [self.element([int(i == k) for i in range(self.ngens)]) for k in range(self.ngens)]

    def describe(self) -> str:
        parts = (["Z"] if self.free_rank == 1 else [f"Z^{self.free_rank}"] if self.free_rank else [])
        parts += [f"Z_{d}" for d in self.torsion_orders]
        return " + ".join(parts) or "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion_orders": list(self.torsion_orders)}


@dataclass(frozen=True)
class GroupElement:
    group: FgAbelianGroup
    free: tuple[int, ...]
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        g = self.group
        if len(self.free) != g.free_rank or len(self.torsion) != len(g.torsion_orders):
            raise DimensionError(f"element shape does not match group {g.describe()}")
        object.__setattr__(self, "free", tuple(int(x) for x in self.free))
        object.__setattr__(
            self, "torsion", tuple(int(x) % d for x, d in zip(self.torsion, g.torsion_orders))
        )

    def _check(self, other: GroupElement) -> None:
        if not isinstance(other, GroupElement):
            raise TypeError(f"expected a GroupElement, got {type(other).__name__}")
        if other.group != self.group:
            raise GroupMismatchError(f"{self.group.describe()} vs {other.group.describe()}")

    def __add__(self, other: GroupElement) -> GroupElement:
        self._check(other)
        return GroupElement(
            self.group,
            tuple(a + b for a, b in zip(self.free, other.free)),
            tuple(a + b for a, b in zip(self.torsion, other.torsion)),
        )

    def __neg__(self) -> GroupElement:
        return GroupElement(self.group, tuple(-a for a in self.free), tuple(-a for a in self.torsion))

    def __sub__(self, other: GroupElement) -> GroupElement:
        return self + (-other)

    def __mul__(self, k: int) -> GroupElement:
        if not isinstance(k, int):
            return NotImplemented
        return GroupElement(self.group, tuple(k * a for a in self.free), tuple(k * a for a in self.torsion))

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GroupElement):
            return NotImplemented
        self._check(other)
        return self.free == other.free and self.torsion == other.torsion

    def __hash__(self) -> int:
        return hash((self.group, self.free, self.torsion))

    @property
    def is_identity(self) -> bool:
        return not any(self.free) and not any(self.torsion)

    @property
    def coords(self) -> tuple[int, ...]:
        return self.free + self.torsion

    def free_part(self) -> tuple[Fraction, ...]:
        """Image in K tensor Q: the torsion coordinates are discarded."""
        return tuple(Fraction(x) for x in self.free)

    def __str__(self) -> str:
        parts = [str(x) for x in self.free]
        parts += [f"[{x}]_{d}" for x, d in zip(self.torsion, self.group.torsion_orders)]
        return "(" + ", ".join(parts) + ")"

    def to_json(self) -> dict:
        return {"free": list(self.free), "torsion": list(self.torsion)}


def free_part_image(a: GroupElement) -> tuple[Fraction, ...]:
    return a.free_part()


@dataclass(frozen=True)
class Projection:
    """The quotient map Z^n -> K, given by an integer matrix whose rows are
    the coordinates of K (free rows first, then torsion rows reduced mod
    their orders).

    ``preimages[k]`` is a vector in Z^n mapping to the k-th canonical
    generator of K.
    """

    group: FgAbelianGroup
    matrix: IntMatrix
    preimages: tuple[tuple[int, ...], ...]

    @property
    def source_dim(self) -> int:
        return self.matrix.cols

    def __call__(self, v: Sequence[int]) -> GroupElement:
        if len(v) != self.matrix.cols:
            raise DimensionError(f"expected a vector of length {self.matrix.cols}, got {len(v)}")
        return self.group.element(self.matrix.apply(v))

    def compose(self, phi: IntMatrix) -> Projection:
        """Post-compose with an automorphism of K given on coordinates."""
        return Projection(self.group, phi @ self.matrix, self.preimages)


def project(p: Projection, v: Sequence[int]) -> GroupElement:
    return p(v)


def quotient_group(l_star: IntMatrix | Sequence[Sequence[int]]) -> tuple[FgAbelianGroup, Projection]:
    """K = Z^n / (column span of ``l_star``) together with the projection.

    With ``u @ l_star @ v = d`` the coordinates ``u @ x`` identify K with
    the direct sum of Z / d_k; coordinates with d_k = 1 are dropped.
    """
    if not isinstance(l_star, IntMatrix):
        l_star = IntMatrix.from_rows(l_star)
    n = l_star.rows
    snf = smith_normal_form(l_star)
    diag = list(snf.diagonal) + [0] * (n - min(n, l_star.cols))
    free_rows = [k for k in range(n) if diag[k] == 0]
    tors_rows = [k for k in range(n) if diag[k] > 1]
    group = FgAbelianGroup(len(free_rows), tuple(diag[k] for k in tors_rows))
    keep = free_rows + tors_rows
    u_inv = snf.u.inverse()
    matrix = IntMatrix.from_rows([snf.u.row(k) for k in keep], n)
    preimages = tuple(u_inv.column(k) for k in keep)
    return group, Projection(group, matrix, preimages)


def _reduce_torsion(group: FgAbelianGroup, coords: Iterable[int]) -> tuple[int, ...]:
    return group.element(list(coords)).coords


def induced_isomorphism(
    proj: Projection, relations: IntMatrix, target_group: FgAbelianGroup,
    target_images: Sequence[Sequence[int]],
) -> IntMatrix:
    """Find the automorphism of K sending ``proj(e_v)`` to ``target_images[v]``.

    ``relations`` is the matrix whose columns span the kernel of ``proj``.
    Returns the coordinate matrix ``phi`` (columns are images of the
    canonical generators). Raises ``ValueError`` if the target assignment
    is not the image of an automorphism.
    """
    n = proj.source_dim
    group = proj.group
    if target_group != group:
        raise ValueError(f"target group {target_group.describe()} is not {group.describe()}")
    if len(target_images) != n:
        raise DimensionError(f"expected {n} target vectors, got {len(target_images)}")
    target = IntMatrix.from_rows([list(t) for t in target_images], group.ngens).transpose()

    def to_target(x):
        return _reduce_torsion(group, target.apply(x))

    for j in range(relations.cols):
        if any(to_target(relations.column(j))):
            raise ValueError("target degrees do not satisfy the defining relations")
    # surjectivity: columns of target plus torsion relations must span Z^m
    m = group.ngens
    r = group.free_rank
    tors_cols = [[int(i == r + k) * d for i in range(m)] for k, d in enumerate(group.torsion_orders)]
    span = IntMatrix.from_rows([list(target.row(i)) + [c[i] for c in tors_cols] for i in range(m)])
    diag = smith_normal_form(span).diagonal
    if len(diag) < m or any(x != 1 for x in diag):
        raise ValueError("target degrees do not generate the group")
    phi_cols = [to_target(pre) for pre in proj.preimages]
    phi = IntMatrix.from_rows([[c[i] for c in phi_cols] for i in range(m)], m)
    for v in range(n):
        e = [int(i == v) for i in range(n)]
        mapped = _reduce_torsion(group, phi.apply(proj(e).coords))
        if mapped != to_target(e):
            raise AssertionError("induced map does not reproduce the target degrees")
    return phi
