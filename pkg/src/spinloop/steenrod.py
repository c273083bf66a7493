"""Steenrod squares on GF(2) polynomial algebras.

The action is specified on generators only and extended to everything else
by the Cartan formula.  On the torus ring F2[x_1..x_{n-1}] the generator
data is the axiomatic Sq^0 x = x, Sq^1 x = x^2.  The action on
F2[w_2..w_n] is *derived*: Sq^i w_j is computed in the torus ring and
pulled back along the injective map alpha_n^*.  The Wu formula is kept
only as an independent check.
"""

from __future__ import annotations

import functools
from typing import Dict, List, Mapping, Tuple

from ._memo import cached_method
from .errors import ContractError, NotExpressibleError
from .f2core import F2Matrix, F2Vector, solve
from .polyalg import Element, GradedPolyAlgebra, alpha_map, bso_algebra, torus_algebra
from .symmetric import SymmetricCoordinates, combine, one


class SteenrodRule:
    """Sq^i on the generators of an algebra.

    ``generator_squares`` maps (generator index, i) to Sq^i(g) for
    0 < i < deg g.  Sq^0 g = g and Sq^{deg g} g = g^2 are filled in from the
    axioms; absent pairs are zero.
    """

    def __init__(self, algebra: GradedPolyAlgebra, generator_squares: Mapping[Tuple[int, int], Element]) -> None:
        self.algebra = algebra
        table: Dict[Tuple[int, int], Element] = {}
        for (g, i), value in generator_squares.items():
            deg = algebra.degrees[g]
            if i < 0 or i > deg:
                raise ContractError(f"Sq^{i} on a degree-{deg} generator violates instability")
            if value.algebra != algebra:
                raise ContractError("generator square lives in another algebra")
            if value and value.degree != deg + i:
                raise ContractError(f"Sq^{i}({algebra.names[g]}) has the wrong degree")
            table[(g, i)] = value
        for g in range(algebra.ngens):
            x = algebra.gen(g)
            for i, expected in ((0, x), (algebra.degrees[g], x * x)):
                if (g, i) in table and table[(g, i)] != expected:
                    raise ContractError(f"Sq^{i}({algebra.names[g]}) contradicts the axioms")
                table[(g, i)] = expected
        self._table = table

    def generator_square(self, g: int, i: int) -> Element:
        return self._table.get((g, i), self.algebra.zero())

    @cached_method
    def power_squares(self, g: int, k: int) -> Tuple[Element, ...]:
        """(Sq^0, Sq^1, ...)(g^k), by Cartan on g^k = g^(k-1) * g."""
        if k == 0:
            return (self.algebra.one(),)
        single = tuple(self.generator_square(g, i) for i in range(self.algebra.degrees[g] + 1))
        if k == 1:
            return single
        prev = self.power_squares(g, k - 1)
        zero = self.algebra.zero()
        out = [zero] * (len(prev) + len(single) - 1)
        for a, pa in enumerate(prev):
            if not pa:
                continue
            for b, pb in enumerate(single):
                if pb:
                    out[a + b] = out[a + b] + pa * pb
        return tuple(out)

    @cached_method
    def monomial_square(self, key: int, i: int) -> Element:
        alg = self.algebra
        one_ = alg.one()
        partial: Dict[int, Element] = {0: one_}
        for g, e in enumerate(alg.unpack(key)):
            if not e:
                continue
            lst = self.power_squares(g, e)
            nxt: Dict[int, Element] = {}
            for a, pa in partial.items():
                for b in range(min(len(lst), i - a + 1)):
                    pb = lst[b]
                    if pb:
                        prod = pa * pb
                        nxt[a + b] = nxt[a + b] + prod if a + b in nxt else prod
            partial = {a: v for a, v in nxt.items() if v}
            if not partial:
                break
        return partial.get(i, alg.zero())


def sq(rule: SteenrodRule, i: int, e: Element) -> Element:
    """Sq^i(e) for homogeneous ``e``."""
    if e.algebra != rule.algebra:
        raise ContractError("element is not in the rule's algebra")
    if i < 0:
        raise ContractError("negative Steenrod index")
    if not e:
        return e
    deg = e.degree
    if i > deg:
        return rule.algebra.zero()
    acc: set = set()
    for key in e.terms:
        acc.symmetric_difference_update(rule.monomial_square(key, i).terms)
    return Element(rule.algebra, frozenset(acc))


def phi(rule: SteenrodRule, e: Element) -> Element:
    """Sq^{deg e - 1}(e)."""
    deg = e.degree
    if deg is None or deg < 1:
        raise ContractError("phi needs a homogeneous element of degree >= 1")
    return sq(rule, deg - 1, e)


@functools.lru_cache(maxsize=None)
def torus_rule(n: int) -> SteenrodRule:
    """Sq^0 x = x, Sq^1 x = x^2 on each degree-1 generator of F2[x_1..x_{n-1}]."""
    return SteenrodRule(torus_algebra(n), {})


class _WExpresser:
    def __init__(self, n: int) -> None:
        self.n = n
        self.w_ring = bso_algebra(n)
        self.coords = SymmetricCoordinates(torus_algebra(n))

    @cached_method
    def image(self, exps: Tuple[int, ...]):
        """alpha_n^*(w^exps) in orbit-sum coordinates.

        Uses e_j(x_1..x_n) = e_j + e_1 e_{j-1} in the first n-1 variables,
        since x_n = e_1.
        """
        k = self.coords.k
        for idx, e in enumerate(exps):
            if e:
                j = idx + 2
                rest = list(exps)
                rest[idx] -= 1
                prev = self.image(tuple(rest))
                return combine(self.coords, [(j,), (1, j - 1)], prev)
        return one(k)

    @cached_method
    def system(self, d: int) -> F2Matrix:
        monos = self.w_ring.monomials_of_degree(d)
        cols = [self.coords.vector(self.image(m), d) for m in monos]
        return F2Matrix.from_columns(cols, len(self.coords.basis(d)))

    def express(self, e: Element) -> Element:
        if e.algebra != self.coords.algebra:
            raise ContractError("element is not in the torus ring for this n")
        if not e:
            return self.w_ring.zero()
        d = e.degree
        if not self.coords.is_symmetric(e):
            raise NotExpressibleError(f"{e} is not symmetric, hence not in the Stiefel-Whitney image")
        m = self.system(d)
        b = F2Vector(self.coords.vector(self.coords.project(e), d), m.rows)
        x = solve(m, b)
        if x is None:
            raise NotExpressibleError(f"{e} is not in the subalgebra generated by w_2..w_{self.n}")
        monos = self.w_ring.monomials_of_degree(d)
        return self.w_ring.from_monomials(monos[j] for j in x.support())


@functools.lru_cache(maxsize=None)
def _expresser(n: int) -> _WExpresser:
    return _WExpresser(n)


def express_in_w(n: int, e: Element) -> Element:
    """The unique w-polynomial whose alpha_n^* image is ``e``."""
    return _expresser(n).express(e)


def _binom_odd(a: int, t: int) -> bool:
    if t == 0:
        return True
    if a < 0:
        # only reachable with t == 0 inside the Wu sum
        raise ContractError("negative upper index")
    return (a & t) == t


def wu_formula(i: int, j: int, n: int) -> Element:
    """Sq^i w_j = sum_t C(j+t-i-1, t) w_{i-t} w_{j+t} in F2[w_2..w_n] (w_0 = 1, w_1 = 0)."""
    if not 1 <= i <= j <= n:
        raise ContractError("need 1 <= i <= j <= n")
    ring = bso_algebra(n)

    def w(k: int) -> Element:
        if k == 0:
            return ring.one()
        if k == 1 or k > n:
            return ring.zero()
        return ring.gen(f"w{k}")

    acc = ring.zero()
    for t in range(i + 1):
        if _binom_odd(j + t - i - 1, t):
            acc = acc + w(i - t) * w(j + t)
    return acc


@functools.lru_cache(maxsize=None)
def steenrod_table(n: int) -> Dict[Tuple[int, int], Element]:
    """{(i, j): Sq^i w_j} for 0 <= i <= j, 2 <= j <= n, computed through the torus ring."""
    alpha = alpha_map(n)
    rule = torus_rule(n)
    ring = bso_algebra(n)
    out = {}
    for j in range(2, n + 1):
        image = alpha(ring.gen(f"w{j}"))
        for i in range(j + 1):
            out[(i, j)] = express_in_w(n, sq(rule, i, image))
    return out


@functools.lru_cache(maxsize=None)
def bso_rule(n: int) -> SteenrodRule:
    """The Steenrod action on F2[w_2..w_n] pulled back from the torus ring."""
    table = steenrod_table(n)
    squares = {(j - 2, i): v for (i, j), v in table.items() if 0 < i < j}
    return SteenrodRule(bso_algebra(n), squares)


def steenrod_rows(n: int) -> List[dict]:
    """Table rows for reports: one per (i, j) with 1 <= i <= j."""
    table = steenrod_table(n)
    return [
        {"i": i, "j": j, "value": str(table[(i, j)])}
        for j in range(2, n + 1)
        for i in range(1, j + 1)
    ]
