"""S_n acting on H^*(BA_{n-1}) = F2[x_1..x_{n-1}], with x_n = x_1 + ... + x_{n-1}.

Two independent ways of counting invariants are provided:

* ``method="dense"`` builds the action matrix of every group generator on
  the degree-d monomial basis and intersects the fixed spaces.  Literal,
  but the degree-20 space for n = 7 already has 53130 monomials.
* ``method="symmetric"`` uses that the fixed points of S_{n-1} (permuting
  x_1..x_{n-1}) are the symmetric polynomials F2[e_1..e_{n-1}], and then
  imposes invariance under the transposition (n-1 n).  That transposition
  fixes x_1..x_{n-2}, so its action can be written in the ring
  F2[f_1..f_{n-2}, t] of polynomials symmetric in the first n-2 variables
  (t = x_{n-1}), where it is t -> t + f_1.
"""

from __future__ import annotations

import functools
import math
from collections import deque
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .errors import ContractError, UnsupportedSizeError
from .f2core import EchelonForm, F2Matrix
from .polyalg import (
    AlgebraMap,
    GradedPolyAlgebra,
    PowerSeries,
    alpha_map,
    bso_algebra,
    closed_form_series,
    coords_in_index,
    torus_algebra,
)
from .steenrod import _expresser

FAITHFULNESS_MAX_N = 9

Perm = Tuple[int, ...]


def _perm_matrix(n: int, perm: Perm) -> F2Matrix:
    """Matrix on span{x_1..x_{n-1}} of the permutation of letters 0..n-1.

    Column j is the image of x_{j+1}; letter n-1 stands for x_n, the sum.
    """
    k = n - 1
    full = (1 << k) - 1
    cols = [full if perm[j] == k else 1 << perm[j] for j in range(k)]
    return F2Matrix.from_columns(cols, k)


def _transposition(n: int, i: int) -> Perm:
    p = list(range(n))
    p[i], p[i + 1] = p[i + 1], p[i]
    return tuple(p)


def _cycle(n: int) -> Perm:
    return tuple((i + 1) % n for i in range(n))


class PermAction:
    """Generators of S_n acting linearly on degree 1 of F2[x_1..x_{n-1}].

    The generating set is the adjacent transpositions (i i+1), i < n-1,
    which permute x_1..x_{n-1}, together with the n-cycle sending
    x_i -> x_{i+1} and x_{n-1} -> x_n = x_1 + ... + x_{n-1}.
    """

    def __init__(self, n: int) -> None:
        if n < 2:
            raise ContractError("n must be >= 2")
        self.n = n
        self.algebra = torus_algebra(n)
        perms: Dict[str, Perm] = {}
        for i in range(n - 2):
            perms[f"({i + 1} {i + 2})"] = _transposition(n, i)
        perms["cycle"] = _cycle(n)
        self.generator_perms = perms
        self.generator_names = tuple(perms)
        self.degree1_matrices = {name: _perm_matrix(n, p) for name, p in perms.items()}
        self._check_relations()
        self._maps: Dict[str, AlgebraMap] = {}

    def _check_relations(self) -> None:
        n = self.n
        k = n - 1
        ident = F2Matrix.identity(k)
        mats = self.degree1_matrices

        def power(m: F2Matrix, e: int) -> F2Matrix:
            out = ident
            for _ in range(e):
                out = out @ m
            return out

        cyc = mats["cycle"]
        if power(cyc, n) != ident:
            raise ContractError("cycle does not have order dividing n")
        if n == 2:
            return
        # Coxeter generators s_1..s_{n-1}; the last is the cycle conjugate of s_{n-2}
        s = [mats[f"({i + 1} {i + 2})"] for i in range(n - 2)]
        s.append(cyc @ s[-1] @ power(cyc, n - 1))
        for a in range(n - 1):
            if s[a] @ s[a] != ident:
                raise ContractError(f"s_{a + 1} is not an involution")
            for b in range(a + 1, n - 1):
                order = 3 if b == a + 1 else 2
                if power(s[a] @ s[b], order) != ident:
                    raise ContractError(f"Coxeter relation fails for s_{a + 1}, s_{b + 1}")
        prod = ident
        for m in s:
            prod = prod @ m
        if prod != cyc:
            raise ContractError("cycle is not s_1 s_2 ... s_{n-1}")

    def substitution(self, name: str) -> AlgebraMap:
        if name not in self._maps:
            m = self.degree1_matrices[name]
            xs = self.algebra.gens()
            images = []
            for j in range(self.n - 1):
                col = m.column(j)
                img = self.algebra.zero()
                for i in range(self.n - 1):
                    if (col >> i) & 1:
                        img = img + xs[i]
                images.append(img)
            self._maps[name] = AlgebraMap(self.algebra, self.algebra, images, name=name)
        return self._maps[name]


@functools.lru_cache(maxsize=None)
def perm_action(n: int) -> PermAction:
    return PermAction(n)


def action_matrix(a: PermAction, g: str, d: int) -> F2Matrix:
    """Matrix of g^* on the degree-d monomial basis (column j = image of basis monomial j)."""
    if g not in a.degree1_matrices:
        raise ContractError(f"unknown generator {g!r}; have {a.generator_names}")
    alg = a.algebra
    keys = alg.keys_of_degree(d)
    index = alg.key_index(d)
    f = a.substitution(g)
    cols = [coords_in_index(f(alg.from_keys((key,))), index, len(keys)).bits for key in keys]
    return F2Matrix.from_columns(cols, len(keys))


def _dense_invariant_dim(a: PermAction, d: int) -> int:
    dim = a.algebra.dimension(d)
    ident = F2Matrix.identity(dim)
    ech = EchelonForm()
    for g in a.generator_names:
        diff = action_matrix(a, g, d) + ident
        for row in diff.data:
            ech.add(row)
    return dim - ech.rank


class _SymmetricInvariants:
    def __init__(self, n: int) -> None:
        k = n - 1
        self.n = n
        self.sym = GradedPolyAlgebra([(f"e{j}", j) for j in range(1, k + 1)])
        self.partial = GradedPolyAlgebra([(f"f{j}", j) for j in range(1, k)] + [("t", 1)])
        P = self.partial
        t = P.gen("t")

        def f(j: int):
            if j == 0:
                return P.one()
            if j >= k:
                return P.zero()
            return P.gen(f"f{j}")

        swapped_t = t + f(1)
        self.include = AlgebraMap(self.sym, P, [f(j) + t * f(j - 1) for j in range(1, k + 1)], name="include")
        self.swapped = AlgebraMap(self.sym, P, [f(j) + swapped_t * f(j - 1) for j in range(1, k + 1)], name="swap")

    def dim(self, d: int) -> int:
        keys = self.sym.keys_of_degree(d)
        index = self.partial.key_index(d)
        size = len(self.partial.keys_of_degree(d))
        ech = EchelonForm()
        for key in keys:
            m = self.sym.from_keys((key,))
            diff = self.swapped(m) + self.include(m)
            ech.add(coords_in_index(diff, index, size).bits)
        return len(keys) - ech.rank


@functools.lru_cache(maxsize=None)
def _symmetric_invariants(n: int) -> _SymmetricInvariants:
    return _SymmetricInvariants(n)


def invariant_dims(a: PermAction, D: int, method: str = "symmetric") -> PowerSeries:
    """dim of the S_n-fixed subspace of each degree d <= D."""
    if method == "dense":
        return PowerSeries(tuple(_dense_invariant_dim(a, d) for d in range(D + 1)))
    if method == "symmetric":
        s = _symmetric_invariants(a.n)
        return PowerSeries(tuple(s.dim(d) for d in range(D + 1)))
    raise ContractError(f"unknown method {method!r}")


def subalgebra_dims(n: int, D: int, method: str = "symmetric") -> PowerSeries:
    """Rank of the span of alpha_n^*(w-monomials) in each degree d <= D.

    ``symmetric`` reads the images in orbit-sum coordinates, which is
    faithful because they are symmetric in x_1..x_{n-1}; ``dense`` expands
    them in the full monomial basis.
    """
    if n < 2:
        raise ContractError("n must be >= 2")
    out = []
    if method == "symmetric":
        ex = _expresser(n)
        for d in range(D + 1):
            out.append(EchelonForm(ex.system(d).data).rank)
    elif method == "dense":
        alpha = alpha_map(n)
        w, x = bso_algebra(n), torus_algebra(n)
        for d in range(D + 1):
            index = x.key_index(d)
            size = len(x.keys_of_degree(d))
            ech = EchelonForm()
            for key in w.keys_of_degree(d):
                ech.add(coords_in_index(alpha(w.from_keys((key,))), index, size).bits)
            out.append(ech.rank)
    else:
        raise ContractError(f"unknown method {method!r}")
    return PowerSeries(tuple(out))


def expected_series(n: int, D: int) -> PowerSeries:
    return closed_form_series(range(2, n + 1), (), D)


def _mul_rows(a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
    out = []
    for row in a:
        acc = 0
        while row:
            low = row & -row
            acc ^= b[low.bit_length() - 1]
            row ^= low
        out.append(acc)
    return tuple(out)


def enumerate_image(n: int) -> Dict[Perm, Tuple[int, ...]]:
    """Matrix (packed rows) of every permutation, built as products of generator matrices.

    Walks S_n breadth-first from the identity; revisiting a permutation
    along another word must reproduce the same matrix, which checks that the
    generator assignment really is a homomorphism.
    """
    if not 2 <= n <= FAITHFULNESS_MAX_N:
        raise UnsupportedSizeError(f"faithfulness enumeration supports 2 <= n <= {FAITHFULNESS_MAX_N}")
    a = perm_action(n)
    gens = [(a.generator_perms[g], a.degree1_matrices[g].data) for g in a.generator_names]
    start = tuple(range(n))
    seen: Dict[Perm, Tuple[int, ...]] = {start: F2Matrix.identity(n - 1).data}
    queue = deque([start])
    while queue:
        p = queue.popleft()
        mp = seen[p]
        for gp, gm in gens:
            q = tuple(gp[i] for i in p)
            mq = _mul_rows(gm, mp)
            prev = seen.get(q)
            if prev is None:
                seen[q] = mq
                queue.append(q)
            elif prev != mq:
                raise ContractError(f"generator matrices do not define an action (at {q})")
    if len(seen) != math.factorial(n):
        raise ContractError("generators do not generate S_n")
    return seen


def faithfulness_check(n: int) -> Tuple[bool, int]:
    """(faithful, order of the image of S_n in GL_{n-1}(F2))."""
    mats = enumerate_image(n)
    distinct = len(set(mats.values()))
    return distinct == len(mats), distinct


def image_matrices(n: int) -> set:
    return {F2Matrix(n - 1, n - 1, m) for m in enumerate_image(n).values()}


@dataclass(frozen=True)
class SmithReport:
    n: int
    degree_product: int
    group_order: int
    finiteness_witness_degree: int
    faithful: bool

    @property
    def conclusion_applies(self) -> bool:
        """Faithful action and degree product = group order; finiteness itself is not checked here."""
        return self.faithful and self.degree_product == self.group_order


def _integral_relation_holds(n: int, i: int) -> bool:
    """x_i^n + w_2 x_i^{n-2} + ... + w_n = 0 in the torus ring."""
    x = torus_algebra(n)
    w = bso_algebra(n)
    alpha = alpha_map(n)
    xi = x.gen(i)
    acc = xi ** n
    for k in range(2, n + 1):
        acc = acc + alpha(w.gen(f"w{k}")) * xi ** (n - k)
    return not acc


def smith_criterion_report(n: int) -> SmithReport:
    """Numeric hypotheses of Smith's polynomiality criterion for w_2..w_n.

    The witness degree is n: each x_i is a root of the monic polynomial
    prod_j (T - x_j) = T^n + w_2 T^{n-2} + ... + w_n, which is checked.
    """
    if n < 2:
        raise ContractError("n must be >= 2")
    for i in range(n - 1):
        if not _integral_relation_holds(n, i):
            raise ContractError(f"x_{i + 1} fails its integral relation")
    faithful = faithfulness_check(n)[0] if n <= FAITHFULNESS_MAX_N else None
    return SmithReport(
        n=n,
        degree_product=math.prod(range(2, n + 1)),
        group_order=math.factorial(n),
        finiteness_witness_degree=n,
        faithful=bool(faithful),
    )


@dataclass(frozen=True)
class InvariantReport:
    n: int
    D: int
    invariant_dims: PowerSeries
    subalgebra_dims: PowerSeries
    expected: PowerSeries
    faithful: Optional[bool]
    image_order: Optional[int]

    @property
    def isomorphic(self) -> bool:
        return self.invariant_dims == self.subalgebra_dims

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "D": self.D,
            "invariant_dims": self.invariant_dims.to_list(),
            "subalgebra_dims": self.subalgebra_dims.to_list(),
            "expected": self.expected.to_list(),
            "faithful": self.faithful,
            "image_order": self.image_order,
            "status": "ISOMORPHIC" if self.isomorphic else "NOT-ISOMORPHIC",
        }


def invariant_report(n: int, D: int, method: str = "symmetric") -> InvariantReport:
    faithful: Optional[bool] = None
    order: Optional[int] = None
    if n <= FAITHFULNESS_MAX_N:
        faithful, order = faithfulness_check(n)
    return InvariantReport(
        n=n,
        D=D,
        invariant_dims=invariant_dims(perm_action(n), D, method),
        subalgebra_dims=subalgebra_dims(n, D),
        expected=expected_series(n, D),
        faithful=faithful,
        image_order=order,
    )
