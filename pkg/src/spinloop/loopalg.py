"""Free loop cohomology models H^*(X) (x) Delta(s(y_1), ..., s(y_k)).

A class is a GF(2) sum of terms (base monomial key, sigma mask): the mask
is a square-free product of the classes s(y_i), each of degree deg y_i - 1.
s extends to all of H^*(X) as a derivation, and squares of sigma classes
are rewritten with s(y)^2 = s(phi(y)), phi(y) = Sq^{deg y - 1} y.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from ._memo import cached_method
from .errors import ContractError
from .polyalg import (
    Element,
    GradedPolyAlgebra,
    PowerSeries,
    bso_algebra,
    closed_form_series,
    format_monomial,
)
from .steenrod import SteenrodRule, bso_rule, phi, sq

Term = Tuple[int, int]


def _bits(mask: int) -> Iterable[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class LoopModel:
    """H^*(LX) for X with polynomial cohomology ``base``.

    ``rule`` supplies phi on the generators.  A model without a rule (and
    without an explicit ``phi_table``) only knows its additive structure,
    which is all a degree-level comparison needs.
    """

    def __init__(
        self,
        base: GradedPolyAlgebra,
        rule: Optional[SteenrodRule] = None,
        phi_table: Optional[Sequence[Element]] = None,
    ) -> None:
        if rule is not None and rule.algebra != base:
            raise ContractError("Steenrod rule is for another algebra")
        if phi_table is None and rule is not None:
            phi_table = [phi(rule, g) for g in base.gens()]
        if phi_table is not None:
            phi_table = tuple(phi_table)
            if len(phi_table) != base.ngens:
                raise ContractError("need phi of every generator")
            for g, (value, d) in enumerate(zip(phi_table, base.degrees)):
                if value.algebra != base:
                    raise ContractError("phi value is in another algebra")
                if value and value.degree != 2 * d - 1:
                    raise ContractError(f"phi({base.names[g]}) must have degree {2 * d - 1}")
                if rule is not None and value != phi(rule, base.gen(g)):
                    raise ContractError(f"phi({base.names[g]}) disagrees with the Steenrod rule")
        self.base = base
        self.rule = rule
        self.phi_table = phi_table
        self.sigma_degrees = tuple(d - 1 for d in base.degrees)

    def __repr__(self) -> str:
        return f"LoopModel({self.base!r})"

    @property
    def ngens(self) -> int:
        return self.base.ngens

    def mask_degree(self, mask: int) -> int:
        return sum(self.sigma_degrees[i] for i in _bits(mask))

    def term_degree(self, term: Term) -> int:
        return self.base.key_degree(term[0]) + self.mask_degree(term[1])

    def element(self, terms: Iterable[Term]) -> "LoopElement":
        acc: set = set()
        for t in terms:
            acc ^= {t}
        return LoopElement(self, frozenset(acc))

    def zero(self) -> "LoopElement":
        return LoopElement(self, frozenset())

    def one(self) -> "LoopElement":
        return LoopElement(self, frozenset({(0, 0)}))

    def lift(self, e: Element) -> "LoopElement":
        """A base class viewed in the loop model."""
        if e.algebra != self.base:
            raise ContractError("element is not in the model's base algebra")
        return LoopElement(self, frozenset((k, 0) for k in e.terms))

    def sigma_gen(self, i: int) -> "LoopElement":
        return LoopElement(self, frozenset({(0, 1 << self.base.index(i))}))

    # products of pure sigma monomials, memoized

    @cached_method
    def _sigma_phi(self, i: int) -> FrozenSet[Term]:
        if self.phi_table is None:
            raise ContractError("this model has no phi data, so sigma squares are undefined")
        return sigma(self, self.phi_table[i]).terms

    @cached_method
    def mask_product(self, m1: int, m2: int) -> FrozenSet[Term]:
        """Normal form of s_{m1} * s_{m2}."""
        shared = m1 & m2
        if not shared:
            return frozenset({(0, m1 | m2)})
        low = shared & -shared
        i = low.bit_length() - 1
        rest = self.mask_product(m1 ^ low, m2 ^ low)
        acc: set = set()
        for k, mask in rest:
            for k2, m3 in self._sigma_phi(i):
                for k3, m4 in self.mask_product(mask, m3):
                    acc ^= {(k + k2 + k3, m4)}
        return frozenset(acc)

    @cached_method
    def basis(self, d: int) -> "LoopBasis":
        out: List[Term] = []
        for mask in range(1 << self.ngens):
            s = self.mask_degree(mask)
            if s <= d:
                out.extend((k, mask) for k in self.base.keys_of_degree(d - s))
        return LoopBasis(self, d, tuple(out))

    def format_term(self, term: Term) -> str:
        key, mask = term
        parts = []
        if key:
            parts.append(format_monomial(self.base, key))
        parts.extend(f"s({self.base.names[i]})" for i in _bits(mask))
        return "*".join(parts) if parts else "1"


class LoopElement:
    __slots__ = ("model", "terms")

    def __init__(self, model: LoopModel, terms: FrozenSet[Term]) -> None:
        self.model = model
        self.terms = terms

    def _check(self, other: "LoopElement") -> None:
        if self.model is not other.model:
            raise ContractError("loop elements from different models")

    def __add__(self, other: "LoopElement") -> "LoopElement":
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        return LoopElement(self.model, self.terms ^ other.terms)

    __radd__ = __add__
    __sub__ = __add__

    def __mul__(self, other: "LoopElement") -> "LoopElement":
        return loop_multiply(self.model, self, other)

    def __pow__(self, k: int) -> "LoopElement":
        out = self.model.one()
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, LoopElement):
            return NotImplemented
        return self.model is other.model and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def degree(self) -> Optional[int]:
        degs = {self.model.term_degree(t) for t in self.terms}
        if not degs:
            return None
        if len(degs) > 1:
            raise ContractError(f"loop element is not homogeneous: degrees {sorted(degs)}")
        return degs.pop()

    def sorted_terms(self) -> List[Term]:
        return sorted(self.terms, key=lambda t: (t[0], -t[1]), reverse=True)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(self.model.format_term(t) for t in self.sorted_terms())

    def __repr__(self) -> str:
        return f"LoopElement({str(self)!r})"


@dataclass(frozen=True)
class LoopBasis:
    model: LoopModel
    degree: int
    elements: Tuple[Term, ...]

    def __len__(self) -> int:
        return len(self.elements)

    @functools.cached_property
    def index(self) -> Dict[Term, int]:
        return {t: i for i, t in enumerate(self.elements)}

    def text(self) -> List[str]:
        return [self.model.format_term(t) for t in self.elements]


def sigma(m: LoopModel, e: Element) -> LoopElement:
    """Derivation extension of y_i -> s(y_i); lowers degree by one."""
    if e.algebra != m.base:
        raise ContractError("element is not in the model's base algebra")
    if not e:
        return m.zero()
    if e.degree < 1:
        raise ContractError("sigma needs positive degree")
    base = m.base
    acc: set = set()
    for key in e.terms:
        for i in range(base.ngens):
            if base.exponent(key, i) & 1:
                acc ^= {(key - base.generator_key(i), 1 << i)}
    return LoopElement(m, frozenset(acc))


def loop_multiply(m: LoopModel, a: LoopElement, b: LoopElement) -> LoopElement:
    if a.model is not m or b.model is not m:
        raise ContractError("loop elements are not in this model")
    acc: set = set()
    for k1, m1 in a.terms:
        for k2, m2 in b.terms:
            if m1 & m2:
                for k3, m3 in m.mask_product(m1, m2):
                    acc ^= {(k1 + k2 + k3, m3)}
            else:
                acc ^= {(k1 + k2, m1 | m2)}
    return LoopElement(m, frozenset(acc))


def loop_basis(m: LoopModel, d: int) -> LoopBasis:
    """Pairs (base monomial, sigma subset) of total degree d, grouped by subset."""
    if d < 0:
        raise ContractError("degree must be >= 0")
    return m.basis(d)


def loop_series(m: LoopModel, D: int) -> PowerSeries:
    """prod (1 + t^(d_i - 1)) / prod (1 - t^d_i), truncated at D."""
    return closed_form_series(m.base.degrees, m.sigma_degrees, D)


def loop_sq(m: LoopModel, i: int, a: LoopElement) -> LoopElement:
    """Sq^i on the loop model: Cartan formula plus Sq(s y) = s(Sq y)."""
    if m.rule is None:
        raise ContractError("this model has no Steenrod data")
    if a.model is not m:
        raise ContractError("loop element is not in this model")
    out = m.zero()
    for key, mask in a.terms:
        partial = {b: m.lift(m.rule.monomial_square(key, b)) for b in range(i + 1)}
        partial = {b: v for b, v in partial.items() if v}
        for g in _bits(mask):
            y = m.base.gen(g)
            pieces = [sigma(m, sq(m.rule, c, y)) for c in range(min(i, m.base.degrees[g] - 1) + 1)]
            nxt: Dict[int, LoopElement] = {}
            for b, v in partial.items():
                for c, p in enumerate(pieces):
                    if b + c <= i and p:
                        nxt[b + c] = nxt.get(b + c, m.zero()) + loop_multiply(m, v, p)
            partial = {b: v for b, v in nxt.items() if v}
        out = out + partial.get(i, m.zero())
    return out


@functools.lru_cache(maxsize=None)
def bso_loop_model(n: int) -> LoopModel:
    """Free loop model of BSO_n over F2[w_2..w_n] with its derived Steenrod action."""
    return LoopModel(bso_algebra(n), bso_rule(n))


def degree_model(degrees: Sequence[int], names: Optional[Sequence[str]] = None) -> LoopModel:
    """Additive-only model on polynomial generators of the given degrees."""
    if names is None:
        names = [f"y{j + 1}" for j in range(len(degrees))]
    return LoopModel(GradedPolyAlgebra(list(zip(names, degrees))))
