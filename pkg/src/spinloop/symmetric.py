"""Symmetric polynomials in k variables, stored in the orbit-sum basis.

A polynomial invariant under permutations of x_1..x_k is determined by its
coefficients on monomials whose exponents are sorted in descending order,
one per orbit.  Storing just those (as partitions padded to length k)
keeps degree-17 computations in eight variables small: a few hundred
partitions instead of hundreds of thousands of monomials.
"""

from __future__ import annotations

import itertools
from typing import Dict, FrozenSet, List, Sequence, Tuple

from ._memo import cached_method
from .errors import ContractError
from .polyalg import Element, GradedPolyAlgebra

Partition = Tuple[int, ...]


def partitions(d: int, k: int, largest: int | None = None) -> List[Partition]:
    """Partitions of d into at most k parts, padded to length k, descending lex order."""
    if largest is None:
        largest = d
    if k == 0:
        return [()] if d == 0 else []
    out = []
    for first in range(min(d, largest), -1, -1):
        if first * k < d:
            break
        for rest in partitions(d - first, k - 1, first):
            out.append((first,) + rest)
    return out


class SymmetricCoordinates:
    """Orbit-sum coordinates for S_k acting on F2[x_1, ..., x_k] (all of degree 1)."""

    def __init__(self, algebra: GradedPolyAlgebra) -> None:
        if any(d != 1 for d in algebra.degrees):
            raise ContractError("symmetric coordinates need degree-1 generators")
        self.algebra = algebra
        self.k = algebra.ngens

    @cached_method
    def basis(self, d: int) -> Tuple[Partition, ...]:
        return tuple(partitions(d, self.k))

    @cached_method
    def basis_index(self, d: int) -> Dict[Partition, int]:
        return {p: i for i, p in enumerate(self.basis(d))}

    def is_symmetric(self, e: Element) -> bool:
        terms = e.terms
        unpack, pack = self.algebra.unpack, self.algebra.pack
        for i in range(self.k - 1):
            for key in terms:
                v = list(unpack(key))
                if v[i] != v[i + 1]:
                    v[i], v[i + 1] = v[i + 1], v[i]
                    if pack(v) not in terms:
                        return False
        return True

    def project(self, e: Element) -> FrozenSet[Partition]:
        """Coefficients on sorted monomials; faithful only for symmetric input."""
        out = []
        for key in e.terms:
            v = self.algebra.unpack(key)
            if all(v[i] >= v[i + 1] for i in range(len(v) - 1)):
                out.append(v)
        return frozenset(out)

    def expand(self, f: FrozenSet[Partition]) -> Element:
        """Sum of the full orbits; inverse of ``project`` on symmetric elements."""
        keys = set()
        pack = self.algebra.pack
        for lam in f:
            keys.update(pack(p) for p in set(itertools.permutations(lam)))
        return Element(self.algebra, frozenset(keys))

    @cached_method
    def _subsets(self, j: int) -> Tuple[Tuple[int, ...], ...]:
        return tuple(itertools.combinations(range(self.k), j))

    def mul_elementary(self, f: FrozenSet[Partition], j: int) -> FrozenSet[Partition]:
        """f * e_j(x_1, ..., x_k)."""
        if j == 0:
            return f
        if j > self.k or not f:
            return frozenset()
        subsets = self._subsets(j)
        candidates = set()
        for lam in f:
            for S in subsets:
                v = list(lam)
                for s in S:
                    v[s] += 1
                candidates.add(tuple(sorted(v, reverse=True)))
        out = []
        for mu in candidates:
            c = 0
            for S in subsets:
                v = list(mu)
                ok = True
                for s in S:
                    v[s] -= 1
                    if v[s] < 0:
                        ok = False
                        break
                if ok and tuple(sorted(v, reverse=True)) in f:
                    c ^= 1
            if c:
                out.append(mu)
        return frozenset(out)

    def vector(self, f: FrozenSet[Partition], d: int) -> int:
        index = self.basis_index(d)
        bits = 0
        for lam in f:
            try:
                bits |= 1 << index[lam]
            except KeyError:
                raise ContractError(f"partition {lam} is not of degree {d}") from None
        return bits


def one(k: int) -> FrozenSet[Partition]:
    return frozenset({(0,) * k})


def combine(coords: SymmetricCoordinates, factors: Sequence[Sequence[int]], start: FrozenSet[Partition]):
    """Multiply ``start`` by a sum of products of elementary symmetric functions.

    ``factors`` lists index tuples: [(2,), (1, 1)] means e_2 + e_1 * e_1.
    """
    acc: FrozenSet[Partition] = frozenset()
    for prod in factors:
        cur = start
        for j in prod:
            cur = coords.mul_elementary(cur, j)
        acc = acc ^ cur
    return acc
