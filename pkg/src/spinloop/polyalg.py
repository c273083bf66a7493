"""Graded polynomial algebras over GF(2) with weighted generators.

Monomials are stored as packed integers: generator ``i`` occupies a 16-bit
field, with generator 0 in the most significant field.  Multiplying
monomials is integer addition, and comparing packed keys is the same as
comparing exponent tuples lexicographically.  An element is a frozenset of
keys (coefficient 1 each), so addition is symmetric difference.
"""

from __future__ import annotations

import functools
import re
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from ._memo import cached_method
from .errors import ContractError
from .f2core import F2Vector

FIELD_BITS = 16
_FIELD_MASK = (1 << FIELD_BITS) - 1

Monomial = Tuple[int, ...]


class GradedPolyAlgebra:
    """F2[g_1, ..., g_k] with deg g_i >= 1."""

    def __init__(self, generators: Sequence[Tuple[str, int]]) -> None:
        gens = tuple((str(name), int(deg)) for name, deg in generators)
        names = [g[0] for g in gens]
        if len(set(names)) != len(names):
            raise ContractError(f"generator names must be unique: {names}")
        for name, deg in gens:
            if deg < 1:
                raise ContractError(f"generator {name} has degree {deg} < 1")
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", name):
                raise ContractError(f"bad generator name {name!r}")
        self.generators = gens
        self.names = tuple(names)
        self.degrees = tuple(g[1] for g in gens)
        self.ngens = len(gens)
        self._shifts = tuple(FIELD_BITS * (self.ngens - 1 - i) for i in range(self.ngens))
        self._name_index = {name: i for i, name in enumerate(names)}

    def __repr__(self) -> str:
        inner = ", ".join(f"{n}:{d}" for n, d in self.generators)
        return f"GradedPolyAlgebra[{inner}]"

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        return isinstance(other, GradedPolyAlgebra) and self.generators == other.generators

    def __hash__(self) -> int:
        return hash(self.generators)

    # packed monomial keys

    def pack(self, exponents: Sequence[int]) -> int:
        if len(exponents) != self.ngens:
            raise ContractError(f"expected {self.ngens} exponents, got {len(exponents)}")
        key = 0
        for e, s in zip(exponents, self._shifts):
            if e < 0 or e > _FIELD_MASK:
                raise ContractError(f"exponent {e} out of range")
            key |= e << s
        return key

    def unpack(self, key: int) -> Monomial:
        return tuple((key >> s) & _FIELD_MASK for s in self._shifts)

    def generator_key(self, i: int) -> int:
        return 1 << self._shifts[i]

    def exponent(self, key: int, i: int) -> int:
        return (key >> self._shifts[i]) & _FIELD_MASK

    def key_degree(self, key: int) -> int:
        return sum(((key >> s) & _FIELD_MASK) * d for s, d in zip(self._shifts, self.degrees))

    def index(self, name_or_index: Union[str, int]) -> int:
        if isinstance(name_or_index, int):
            if not 0 <= name_or_index < self.ngens:
                raise ContractError(f"no generator with index {name_or_index}")
            return name_or_index
        try:
            return self._name_index[name_or_index]
        except KeyError:
            raise ContractError(f"no generator named {name_or_index!r}") from None

    # elements

    def zero(self) -> "Element":
        return Element(self, frozenset())

    def one(self) -> "Element":
        return Element(self, frozenset((0,)))

    def gen(self, name_or_index: Union[str, int]) -> "Element":
        return Element(self, frozenset((self.generator_key(self.index(name_or_index)),)))

    def gens(self) -> List["Element"]:
        return [self.gen(i) for i in range(self.ngens)]

    def monomial(self, exponents: Sequence[int]) -> "Element":
        return Element(self, frozenset((self.pack(exponents),)))

    def from_keys(self, keys: Iterable[int]) -> "Element":
        """Element from packed keys; repeated keys cancel in pairs."""
        acc: set = set()
        for k in keys:
            if k in acc:
                acc.remove(k)
            else:
                acc.add(k)
        return Element(self, frozenset(acc))

    def from_monomials(self, monomials: Iterable[Sequence[int]]) -> "Element":
        return self.from_keys(self.pack(m) for m in monomials)

    def parse(self, text: str) -> "Element":
        return parse_element(self, text)

    # degreewise bases

    @cached_method
    def monomials_of_degree(self, d: int) -> Tuple[Monomial, ...]:
        """All monomials of weighted degree ``d`` in descending lexicographic order."""
        if d < 0:
            return ()
        out: List[Monomial] = []
        degs = self.degrees
        k = self.ngens
        prefix = [0] * k

        def rec(i: int, remaining: int) -> None:
            if i == k:
                if remaining == 0:
                    out.append(tuple(prefix))
                return
            for e in range(remaining // degs[i], -1, -1):
                prefix[i] = e
                rec(i + 1, remaining - e * degs[i])
            prefix[i] = 0

        rec(0, d)
        return tuple(out)

    @cached_method
    def keys_of_degree(self, d: int) -> Tuple[int, ...]:
        return tuple(self.pack(m) for m in self.monomials_of_degree(d))

    @cached_method
    def key_index(self, d: int) -> Dict[int, int]:
        return {k: i for i, k in enumerate(self.keys_of_degree(d))}

    def dimension(self, d: int) -> int:
        return len(self.keys_of_degree(d))

    def series(self, D: int) -> "PowerSeries":
        return PowerSeries(tuple(self.dimension(d) for d in range(D + 1)))


class Element:
    """A GF(2) linear combination of monomials of one algebra."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: GradedPolyAlgebra, terms: frozenset) -> None:
        self.algebra = algebra
        self.terms = terms

    def _check(self, other: "Element") -> None:
        if self.algebra is not other.algebra and self.algebra != other.algebra:
            raise ContractError("elements belong to different algebras")

    def __add__(self, other: "Element") -> "Element":
        if isinstance(other, int) and other == 0:
            return self
        self._check(other)
        return Element(self.algebra, self.terms ^ other.terms)

    __radd__ = __add__
    __sub__ = __add__

    def __mul__(self, other: Union["Element", int]) -> "Element":
        if isinstance(other, int):
            return self if other & 1 else self.algebra.zero()
        return multiply(self, other)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Element":
        if k < 0:
            raise ContractError("negative power")
        result = self.algebra.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            if other == 0:
                return not self.terms
            if other == 1:
                return self.terms == frozenset((0,))
            return NotImplemented
        if not isinstance(other, Element):
            return NotImplemented
        return self.terms == other.terms and self.algebra == other.algebra

    def __hash__(self) -> int:
        return hash(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[Monomial]:
        return iter(self.monomials())

    def is_zero(self) -> bool:
        return not self.terms

    def monomials(self) -> List[Monomial]:
        return [self.algebra.unpack(k) for k in sorted(self.terms, reverse=True)]

    @property
    def degrees(self) -> set:
        return {self.algebra.key_degree(k) for k in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees) <= 1

    @property
    def degree(self) -> Optional[int]:
        """Homogeneous degree; None for the zero element."""
        degs = self.degrees
        if not degs:
            return None
        if len(degs) > 1:
            raise ContractError(f"element is not homogeneous: degrees {sorted(degs)}")
        return next(iter(degs))

    homogeneous_degree = degree

    def component(self, d: int) -> "Element":
        a = self.algebra
        return Element(a, frozenset(k for k in self.terms if a.key_degree(k) == d))

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"Element({format_element(self)!r})"


def multiply(a: Element, b: Element) -> Element:
    a._check(b)
    if len(a.terms) > len(b.terms):
        a, b = b, a
    bt = b.terms
    if len(a.terms) == 1:
        (k,) = a.terms
        return Element(a.algebra, frozenset(k + t for t in bt))
    acc: set = set()
    for k in a.terms:
        acc.symmetric_difference_update({k + t for t in bt})
    return Element(a.algebra, frozenset(acc))


def coords(e: Element, basis: Sequence[Monomial]) -> F2Vector:
    """Coordinate vector of ``e`` in a degreewise monomial basis."""
    index = {e.algebra.pack(m): i for i, m in enumerate(basis)}
    return coords_in_index(e, index, len(basis))


def coords_in_index(e: Element, index: Dict[int, int], length: int) -> F2Vector:
    bits = 0
    for k in e.terms:
        try:
            bits |= 1 << index[k]
        except KeyError:
            raise ContractError(
                f"monomial {format_monomial(e.algebra, k)} is not in the supplied basis"
            ) from None
    return F2Vector(bits, length)


def element_from_coords(algebra: GradedPolyAlgebra, d: int, bits: int) -> Element:
    keys = algebra.keys_of_degree(d)
    out = []
    j = 0
    while bits:
        if bits & 1:
            out.append(keys[j])
        bits >>= 1
        j += 1
    return Element(algebra, frozenset(out))


def monomials_of_degree(a: GradedPolyAlgebra, d: int) -> List[Monomial]:
    return list(a.monomials_of_degree(d))


# canonical text form


def format_monomial(algebra: GradedPolyAlgebra, key: int) -> str:
    parts = []
    for name, e in zip(algebra.names, algebra.unpack(key)):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"


def format_element(e: Element) -> str:
    if not e.terms:
        return "0"
    return " + ".join(format_monomial(e.algebra, k) for k in sorted(e.terms, reverse=True))


_FACTOR = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(\d+))?$")


def parse_element(algebra: GradedPolyAlgebra, text: str) -> Element:
    text = text.strip()
    if text == "0" or not text:
        return algebra.zero()
    keys = []
    for term in text.split("+"):
        term = term.strip()
        if not term:
            raise ContractError(f"empty term in {text!r}")
        exps = [0] * algebra.ngens
        if term != "1":
            for factor in term.split("*"):
                factor = factor.strip()
                m = _FACTOR.match(factor)
                if not m:
                    raise ContractError(f"cannot parse factor {factor!r}")
                i = algebra.index(m.group(1))
                exps[i] += int(m.group(2) or 1)
        keys.append(algebra.pack(exps))
    return algebra.from_keys(keys)


# algebra maps


class AlgebraMap:
    """Degree-preserving algebra homomorphism given on generators.

    ``reduce`` (optional) is applied to every image, e.g. a quotient normal
    form when the target is presented by relations.
    """

    def __init__(
        self,
        source: GradedPolyAlgebra,
        target: GradedPolyAlgebra,
        images: Sequence[Element],
        reduce=None,
        name: str = "",
    ) -> None:
        if len(images) != source.ngens:
            raise ContractError("need one image per source generator")
        for i, img in enumerate(images):
            if img.algebra != target:
                raise ContractError(f"image of {source.names[i]} is not in the target algebra")
            if img and img.degree != source.degrees[i]:
                raise ContractError(
                    f"image of {source.names[i]} has degree {img.degree}, expected {source.degrees[i]}"
                )
        self.source = source
        self.target = target
        self.images = tuple(images)
        self.reduce = reduce
        self.name = name

    def __repr__(self) -> str:
        return f"AlgebraMap({self.name or '?'}: {self.source!r} -> {self.target!r})"

    @cached_method
    def _power(self, i: int, k: int) -> Element:
        if k == 0:
            return self.target.one()
        if k == 1:
            return self.images[i]
        half = self._power(i, k // 2)
        sq = half * half
        return sq * self.images[i] if k & 1 else sq

    @cached_method
    def _monomial_image(self, key: int) -> Element:
        exps = self.source.unpack(key)
        result = self.target.one()
        for i, e in enumerate(exps):
            if e:
                result = result * self._power(i, e)
                if not result:
                    break
        return result

    def __call__(self, e: Element) -> Element:
        return apply_map(self, e)


def apply_map(f: AlgebraMap, e: Element) -> Element:
    if e.algebra != f.source:
        raise ContractError("element is not in the map's source algebra")
    acc: set = set()
    for key in e.terms:
        acc.symmetric_difference_update(f._monomial_image(key).terms)
    result = Element(f.target, frozenset(acc))
    if f.reduce is not None:
        result = f.reduce(result)
    return result


# power series


@dataclass(frozen=True)
class PowerSeries:
    """Truncated series sum_d coeffs[d] t^d, exact through degree len(coeffs) - 1."""

    coeffs: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def bound(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, d):
        return self.coeffs[d]

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self) -> Iterator[int]:
        return iter(self.coeffs)

    def to_list(self) -> List[int]:
        return list(self.coeffs)

    def truncate(self, D: int) -> "PowerSeries":
        return PowerSeries(self.coeffs[: D + 1])

    def __mul__(self, other: "PowerSeries") -> "PowerSeries":
        D = min(self.bound, other.bound)
        out = [0] * (D + 1)
        for i, a in enumerate(self.coeffs[: D + 1]):
            if a:
                for j in range(D + 1 - i):
                    out[i + j] += a * other.coeffs[j]
        return PowerSeries(tuple(out))

    def __add__(self, other: "PowerSeries") -> "PowerSeries":
        D = min(self.bound, other.bound)
        return PowerSeries(tuple(self.coeffs[d] + other.coeffs[d] for d in range(D + 1)))

    def dominated_by(self, other: "PowerSeries") -> bool:
        return all(a <= b for a, b in zip(self.coeffs, other.coeffs))


def closed_form_series(degrees: Sequence[int], numerator_shifts: Sequence[int], D: int) -> PowerSeries:
    """Truncation at ``D`` of prod_j (1 + t^s_j) / prod_i (1 - t^d_i)."""
    if D < 0:
        raise ContractError("truncation bound must be >= 0")
    c = [0] * (D + 1)
    c[0] = 1
    for s in numerator_shifts:
        if s < 0:
            raise ContractError("numerator shifts must be >= 0")
        c = [c[i] + (c[i - s] if i >= s else 0) for i in range(D + 1)]
    for d in degrees:
        if d < 1:
            raise ContractError("denominator degrees must be >= 1")
        for i in range(d, D + 1):
            c[i] += c[i - d]
    return PowerSeries(tuple(c))


def polynomial_generator_degrees(series: PowerSeries) -> List[int]:
    """Degrees d_i with series = prod 1/(1 - t^d_i) through its truncation bound.

    Raises ContractError when no such list exists (a negative multiplicity
    shows up while peeling off factors).
    """
    if not series.coeffs or series[0] != 1:
        raise ContractError("series must start with 1")
    rest = list(series.coeffs)
    D = len(rest) - 1
    found: List[int] = []
    for d in range(1, D + 1):
        mult = rest[d]
        if mult < 0:
            raise ContractError(f"series is not that of a polynomial algebra (degree {d})")
        for _ in range(mult):
            found.append(d)
            # multiply by (1 - t^d)
            for i in range(D, d - 1, -1):
                rest[i] -= rest[i - d]
    return found


# the algebras of the Stiefel-Whitney setting


@functools.lru_cache(maxsize=None)
def bso_algebra(n: int) -> GradedPolyAlgebra:
    """F2[w_2, ..., w_n]."""
    if n < 2:
        raise ContractError("n must be >= 2")
    return GradedPolyAlgebra([(f"w{i}", i) for i in range(2, n + 1)])


@functools.lru_cache(maxsize=None)
def torus_algebra(n: int) -> GradedPolyAlgebra:
    """F2[x_1, ..., x_{n-1}], the quotient F2[x_1..x_n]/(x_1 + ... + x_n) in free coordinates."""
    if n < 2:
        raise ContractError("n must be >= 2")
    return GradedPolyAlgebra([(f"x{i}", 1) for i in range(1, n)])


def torus_linear_forms(n: int) -> List[Element]:
    """x_1, ..., x_{n-1} and x_n = x_1 + ... + x_{n-1}."""
    xs = torus_algebra(n).gens()
    last = xs[0].algebra.zero()
    for x in xs:
        last = last + x
    return xs + [last]


def elementary_symmetric(forms: Sequence[Element], upto: int) -> List[Element]:
    """e_0, ..., e_upto of the given degree-1 elements, via prod (1 + v)."""
    alg = forms[0].algebra
    e = [alg.one()] + [alg.zero()] * upto
    for v in forms:
        for j in range(upto, 0, -1):
            e[j] = e[j] + v * e[j - 1]
    return e


@functools.lru_cache(maxsize=None)
def alpha_map(n: int) -> AlgebraMap:
    """alpha_n^*: w_i -> i-th elementary symmetric function of x_1, ..., x_n."""
    forms = torus_linear_forms(n)
    e = elementary_symmetric(forms, n)
    return AlgebraMap(bso_algebra(n), torus_algebra(n), e[2:], name=f"alpha_{n}")
