"""Bounded corpora of trinomials, optionally up to symmetry.

The symmetries are permutations of the three monomials and of the
variables inside each monomial. Sorting each exponent tuple and then the
three tuples gives a representative of every orbit.
"""

from __future__ import annotations

import itertools
from typing import Iterator

from .trinomial import TrinomialSpec


def canonical_form(s: TrinomialSpec) -> TrinomialSpec:
    return TrinomialSpec(tuple(sorted(tuple(sorted(li)) for li in s.l)))


def _tuples(max_ni: int, max_l: int, sorted_only: bool) -> list[tuple[int, ...]]:
    out = []
    for k in range(1, max_ni + 1):
        if sorted_only:
            out.extend(itertools.combinations_with_replacement(range(1, max_l + 1), k))
        else:
            out.extend(itertools.product(range(1, max_l + 1), repeat=k))
    return sorted(out)


def enumerate_specs(max_ni: int, max_l: int, dedupe: bool = False) -> Iterator[TrinomialSpec]:
    """All trinomials with every n_i <= max_ni and every l_ij <= max_l."""
    if max_ni < 1 or max_l < 1:
        raise ValueError("bounds must be >= 1")
    tuples = _tuples(max_ni, max_l, dedupe)
    triples = (itertools.combinations_with_replacement(tuples, 3) if dedupe
               else itertools.product(tuples, repeat=3))
    for triple in triples:
        yield TrinomialSpec(triple)


def corpus_size(max_ni: int, max_l: int, dedupe: bool = False) -> int:
    t = len(_tuples(max_ni, max_l, dedupe))
    return t * (t + 1) * (t + 2) // 6 if dedupe else t ** 3


def sort_key(s: TrinomialSpec) -> tuple:
    return (s.n, s.sizes, s.l)
