"""Spin presentations, the tensor product H^*(BSpin_n) (x)_{H^*(BSO_n)} H^*(LBSO_n),
multiplication by the degree-1 Euler class, and Gysin assembly.

H^*(BSpin_n) for n <= 9 is rebuilt as F2[w_2..w_n]/(theta_1..theta_h) (x) F2[z]
with theta_1 = w_2, theta_{k+1} = Sq^{2^(k-1)} theta_k, stopping at the first
theta that already lies in the ideal; z has degree 2^h.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ._memo import cached_method
from .errors import ContractError, UnsupportedSizeError
from .f2core import EchelonForm, F2Matrix, kernel_basis
from .loopalg import LoopModel, _bits, bso_loop_model, loop_multiply
from .polyalg import (
    AlgebraMap,
    Element,
    GradedPolyAlgebra,
    PowerSeries,
    bso_algebra,
    closed_form_series,
    format_monomial,
    polynomial_generator_degrees,
)
from .steenrod import bso_rule, sq

SPIN_MIN_N, SPIN_MAX_N = 3, 9

VALIDATION_DEGREES: Dict[int, Tuple[int, ...]] = {
    3: (4,),
    4: (4, 4),
    5: (4, 8),
    6: (4, 6, 8),
    7: (4, 6, 7, 8),
    8: (4, 6, 7, 8, 8),
    9: (4, 6, 7, 8, 16),
}

# Spin(3) = SU(2), Spin(4) = SU(2) x SU(2), Spin(5) = Sp(2), Spin(6) = SU(4)
EXCEPTIONAL_DEGREES: Dict[int, Tuple[int, ...]] = {
    3: (4,),
    4: (4, 4),
    5: (4, 8),
    6: (4, 6, 8),
}


class _IdealSlice:
    """Degree-d piece of an ideal, echelonized with lex-larger monomials on higher bits.

    Reduction therefore leaves only lex-smallest monomials, which serve as
    quotient representatives.
    """

    def __init__(self, ring: GradedPolyAlgebra, relations: Sequence[Element], d: int) -> None:
        keys = ring.keys_of_degree(d)  # descending lex
        size = len(keys)
        self.keys = keys
        self.bitpos = {k: size - 1 - i for i, k in enumerate(keys)}
        self.ech = EchelonForm()
        for rel in relations:
            if not rel:
                continue
            r = rel.degree
            if r > d:
                continue
            for mk in ring.keys_of_degree(d - r):
                self.ech.add(self.vector(rel.terms, shift=mk))

    def vector(self, terms: Iterable[int], shift: int = 0) -> int:
        bits = 0
        pos = self.bitpos
        for k in terms:
            bits ^= 1 << pos[k + shift]
        return bits

    @functools.cached_property
    def representatives(self) -> Tuple[int, ...]:
        """Non-pivot monomial keys, in descending lex order."""
        mask = self.ech.pivot_mask
        n = len(self.keys)
        return tuple(k for i, k in enumerate(self.keys) if not (mask >> (n - 1 - i)) & 1)

    def reduce_bits(self, bits: int) -> int:
        return self.ech.reduce(bits)

    def keys_of(self, bits: int) -> List[int]:
        n = len(self.keys)
        return [self.keys[n - 1 - b] for b in _bits(bits)]


@functools.lru_cache(maxsize=None)
def _slice(ring: GradedPolyAlgebra, relations: Tuple[Element, ...], d: int) -> _IdealSlice:
    return _IdealSlice(ring, relations, d)


def ideal_membership(rel: Sequence[Element], e: Element, d: int) -> bool:
    """Whether homogeneous ``e`` of degree d lies in the ideal generated by ``rel``."""
    if not e:
        return True
    if e.degree != d:
        raise ContractError(f"element has degree {e.degree}, not {d}")
    for r in rel:
        if r.algebra != e.algebra:
            raise ContractError("relation is in another algebra")
    s = _slice(e.algebra, tuple(rel), d)
    return s.reduce_bits(s.vector(e.terms)) == 0


class Presentation:
    """(ambient / (relations)) (x) F2[extra generators]."""

    def __init__(
        self,
        ambient: GradedPolyAlgebra,
        relations: Sequence[Element],
        extra_generators: Sequence[Tuple[str, int]] = (),
        z_steps: Sequence[Element] = (),
    ) -> None:
        for r in relations:
            if r.algebra != ambient:
                raise ContractError("relation is not in the ambient algebra")
            if not r.is_homogeneous():
                raise ContractError(f"relation {r} is not homogeneous")
        self.ambient = ambient
        self.relations = tuple(relations)
        self.extra_generators = tuple((str(a), int(b)) for a, b in extra_generators)
        self.full = GradedPolyAlgebra(list(ambient.generators) + list(self.extra_generators))
        self._namb = ambient.ngens
        self.z_steps = tuple(z_steps)

    def __repr__(self) -> str:
        rels = ", ".join(str(r) for r in self.relations)
        extra = ", ".join(f"{a}:{b}" for a, b in self.extra_generators)
        return f"Presentation({self.ambient!r} / ({rels}) [{extra}])"

    def slice(self, d: int) -> _IdealSlice:
        return _slice(self.ambient, self.relations, d)

    # conversion between ambient/extra exponents and full-algebra keys

    def split(self, key: int) -> Tuple[int, Tuple[int, ...]]:
        exps = self.full.unpack(key)
        return self.ambient.pack(exps[: self._namb]), exps[self._namb:]

    def join(self, amb_key: int, extra: Sequence[int]) -> int:
        return self.full.pack(tuple(self.ambient.unpack(amb_key)) + tuple(extra))

    def embed(self, e: Element) -> Element:
        if e.algebra != self.ambient:
            raise ContractError("element is not in the ambient algebra")
        zeros = (0,) * len(self.extra_generators)
        return self.full.from_keys(self.join(k, zeros) for k in e.terms)

    @cached_method
    def extra_monomials(self, d: int) -> Tuple[Tuple[int, ...], ...]:
        if not self.extra_generators:
            return ((),) if d == 0 else ()
        ring = GradedPolyAlgebra(self.extra_generators)
        return ring.monomials_of_degree(d)

    def normal_form(self, e: Element) -> Element:
        """Reduce an element of the full algebra modulo the ideal (the map p^*)."""
        if e.algebra != self.full:
            raise ContractError("element is not in the presentation's algebra")
        groups: Dict[Tuple[Tuple[int, ...], int], set] = {}
        for key in e.terms:
            amb, extra = self.split(key)
            groups.setdefault((extra, self.ambient.key_degree(amb)), set()).add(amb)
        out: set = set()
        for (extra, d), keys in groups.items():
            s = self.slice(d)
            for k in s.keys_of(s.reduce_bits(s.vector(keys))):
                out.add(self.join(k, extra))
        return Element(self.full, frozenset(out))

    def project(self, e: Element) -> Element:
        """p^*: ambient -> quotient, in normal form."""
        return self.normal_form(self.embed(e))

    @cached_method
    def ambient_quotient_dim(self, d: int) -> int:
        return len(self.slice(d).representatives)

    def ambient_quotient_series(self, D: int) -> PowerSeries:
        return PowerSeries(tuple(self.ambient_quotient_dim(d) for d in range(D + 1)))

    def quotient_series(self, D: int) -> PowerSeries:
        return self.ambient_quotient_series(D) * closed_form_series([d for _, d in self.extra_generators], (), D)

    @cached_method
    def quotient_basis(self, d: int) -> Tuple[int, ...]:
        """Full-algebra keys of the degree-d representatives, descending lex."""
        out = []
        for a, degz in self._extra_split(d):
            for extra in self.extra_monomials(degz):
                out.extend(self.join(k, extra) for k in self.slice(a).representatives)
        return tuple(sorted(out, reverse=True))

    def _extra_split(self, d: int) -> List[Tuple[int, int]]:
        return [(d - z, z) for z in range(d + 1)]

    def effective_degrees(self, D: int) -> List[int]:
        """Polynomial generator degrees of the ambient quotient (through D) plus the extras."""
        found = polynomial_generator_degrees(self.ambient_quotient_series(D))
        return sorted(found + [d for _, d in self.extra_generators])

    def to_json(self) -> str:
        doc = {
            "ambient_generators": [{"name": a, "degree": b} for a, b in self.ambient.generators],
            "relations": [str(r) for r in self.relations],
            "extra_generators": [{"name": a, "degree": b} for a, b in self.extra_generators],
        }
        return json.dumps(doc, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Presentation":
        try:
            doc = json.loads(text)
            ambient = GradedPolyAlgebra([(g["name"], g["degree"]) for g in doc["ambient_generators"]])
            rels = [ambient.parse(r) for r in doc.get("relations", [])]
            extra = [(g["name"], g["degree"]) for g in doc.get("extra_generators", [])]
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise ContractError(f"malformed presentation: {exc}") from None
        return cls(ambient, rels, extra)


def _check_spin_n(n: int) -> None:
    if not SPIN_MIN_N <= n <= SPIN_MAX_N:
        raise UnsupportedSizeError(f"spin presentations are supported for {SPIN_MIN_N} <= n <= {SPIN_MAX_N}")


@functools.lru_cache(maxsize=None)
def spin_presentation(n: int) -> Presentation:
    """Steenrod closure of w_2 in F2[w_2..w_n], with z of degree 2^h adjoined."""
    _check_spin_n(n)
    ring = bso_algebra(n)
    rule = bso_rule(n)
    theta = ring.gen("w2")
    relations: List[Element] = [theta]
    steps = [theta]
    k = 1
    while True:
        nxt = sq(rule, 1 << (k - 1), theta)
        steps.append(nxt)
        if not nxt or ideal_membership(relations, nxt, nxt.degree):
            break
        s = _slice(ring, tuple(relations), nxt.degree)
        reduced = ring.from_keys(s.keys_of(s.reduce_bits(s.vector(nxt.terms))))
        relations.append(reduced)
        theta = nxt
        k += 1
        if k > 8:
            raise ContractError("Steenrod closure did not stabilize")
    return Presentation(ring, relations, [("z", 1 << k)], z_steps=steps)


def projection_map(n: int) -> AlgebraMap:
    """p^*: F2[w_2..w_n] -> H^*(BSpin_n), landing in normal form."""
    p = spin_presentation(n)
    W = bso_algebra(n)
    images = [p.project(W.gen(i)) for i in range(W.ngens)]
    return AlgebraMap(W, p.full, images, reduce=p.normal_form, name=f"p_{n}")


# the tensor product over H^*(BSO_n)


@dataclass(frozen=True)
class _Block:
    """(B (x)_F2 W)_e modulo relators (w_i b) (x) m + b (x) (w_i m)."""

    columns: Tuple[Tuple[int, int], ...]  # (quotient key, W key), ordered by W-degree
    position: Dict[Tuple[int, int], int]
    echelon: EchelonForm
    relator_rows: Tuple[int, ...]

    @property
    def survivors(self) -> Tuple[Tuple[int, int], ...]:
        mask = self.echelon.pivot_mask
        return tuple(c for i, c in enumerate(self.columns) if not (mask >> i) & 1)


@dataclass(frozen=True)
class TensorBasis:
    degree: int
    basis: Tuple[Tuple[int, Tuple[int, int]], ...]  # (quotient key, loop term)
    pair_count: int
    relator_rank: int
    engine: "TensorProduct" = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.basis)

    @functools.cached_property
    def index(self) -> Dict[Tuple[int, Tuple[int, int]], int]:
        return {b: i for i, b in enumerate(self.basis)}

    @property
    def quotient_matrix(self) -> F2Matrix:
        """Relator span of the whole degree, block-diagonal in the sigma subset."""
        return self.engine.relator_matrix(self.degree)

    def text(self) -> List[str]:
        return [self.engine.format_pair(q, t) for q, t in self.basis]


class TensorProduct:
    """B (x)_W M for a presentation B, a free loop model M over W, and W -> ambient."""

    def __init__(self, p: Presentation, m: LoopModel, base_map: AlgebraMap) -> None:
        if base_map.source != m.base or base_map.target != p.ambient:
            raise ContractError("base map must go from the loop model's base to the presentation's ambient")
        self.p = p
        self.m = m
        self.base_map = base_map
        self._gen_images = [p.embed(img) for img in base_map.images]

    @cached_method
    def _act(self, i: int, qkey: int) -> Tuple[int, ...]:
        """w_i * (quotient monomial), in normal form."""
        p = self.p
        prod = self._gen_images[i] * p.full.from_keys((qkey,))
        return tuple(p.normal_form(prod).terms)

    @cached_method
    def block(self, e: int) -> _Block:
        W, p = self.m.base, self.p
        columns = []
        for wdeg in range(e + 1):
            for wk in W.keys_of_degree(wdeg):
                for q in p.quotient_basis(e - wdeg):
                    columns.append((q, wk))
        position = {c: i for i, c in enumerate(columns)}
        ech = EchelonForm()
        rows = []
        for i, gdeg in enumerate(W.degrees):
            gk = W.generator_key(i)
            for a in range(e - gdeg + 1):
                for q in p.quotient_basis(a):
                    acted = self._act(i, q)
                    for wk in W.keys_of_degree(e - gdeg - a):
                        row = 1 << position[(q, wk + gk)]
                        for q2 in acted:
                            row ^= 1 << position[(q2, wk)]
                        rows.append(row)
                        ech.add(row)
        return _Block(tuple(columns), position, ech, tuple(rows))

    def _masks_up_to(self, d: int) -> List[int]:
        return [s for s in range(1 << self.m.ngens) if self.m.mask_degree(s) <= d]

    @cached_method
    def basis(self, d: int) -> TensorBasis:
        out = []
        pairs = 0
        rank = 0
        for s in self._masks_up_to(d):
            blk = self.block(d - self.m.mask_degree(s))
            pairs += len(blk.columns)
            rank += blk.echelon.rank
            out.extend((q, (wk, s)) for q, wk in blk.survivors)
        return TensorBasis(d, tuple(out), pairs, rank, self)

    def relator_matrix(self, d: int) -> F2Matrix:
        rows = []
        offset = 0
        for s in self._masks_up_to(d):
            blk = self.block(d - self.m.mask_degree(s))
            rows.extend(r << offset for r in blk.relator_rows)
            offset += len(blk.columns)
        return F2Matrix.from_packed(rows, offset)

    def reduce(self, pairs: Iterable[Tuple[int, Tuple[int, int]]], d: int) -> int:
        """Coordinates (bitmask over basis(d)) of a sum of pairs q (x) (wkey, mask)."""
        by_mask: Dict[int, int] = {}
        for q, (wk, s) in pairs:
            blk = self.block(d - self.m.mask_degree(s))
            by_mask[s] = by_mask.get(s, 0) ^ (1 << blk.position[(q, wk)])
        target = self.basis(d).index
        out = 0
        for s, bits in by_mask.items():
            blk = self.block(d - self.m.mask_degree(s))
            rest = blk.echelon.reduce(bits)
            for b in _bits(rest):
                q, wk = blk.columns[b]
                out ^= 1 << target[(q, (wk, s))]
        return out

    def multiply_loop(self, left, d: int) -> F2Matrix:
        """Matrix of multiplication by 1 (x) ``left`` (a homogeneous LoopElement) from degree d."""
        k = left.degree
        src = self.basis(d)
        tgt = self.basis(d + k)
        cols = []
        for q, term in src.basis:
            prod = loop_multiply(self.m, left, self.m.element([term]))
            cols.append(self.reduce(((q, t) for t in prod.terms), d + k))
        return F2Matrix.from_columns(cols, len(tgt))

    def format_pair(self, q: int, term: Tuple[int, int]) -> str:
        left = format_monomial(self.p.full, q) if q else "1"
        return f"{left} (x) {self.m.format_term(term)}"


def tensor_over_base(p: Presentation, m: LoopModel, base_map: AlgebraMap, d: int) -> TensorBasis:
    return TensorProduct(p, m, base_map).basis(d)


def _identity_map(p: Presentation, m: LoopModel) -> AlgebraMap:
    W = m.base
    images = []
    for name in W.names:
        if name not in p.ambient.names:
            raise ContractError(f"presentation has no generator named {name}")
        images.append(p.ambient.gen(name))
    return AlgebraMap(W, p.ambient, images, name="p")


@functools.lru_cache(maxsize=None)
def spin_tensor(n: int) -> TensorProduct:
    p = spin_presentation(n)
    m = bso_loop_model(n)
    return TensorProduct(p, m, _identity_map(p, m))


def tensor_for_presentation(n: int, p: Presentation) -> TensorProduct:
    m = bso_loop_model(n)
    return TensorProduct(p, m, _identity_map(p, m))


@dataclass(frozen=True)
class EulerClass:
    """1 (x) s(w_2), the generator of degree 1."""

    engine: TensorProduct

    @property
    def loop_element(self):
        return self.engine.m.sigma_gen("w2")

    def check(self) -> None:
        tb = self.engine.basis(1)
        if len(tb) != 1:
            raise ContractError(f"degree 1 of the tensor product has dimension {len(tb)}, expected 1")
        if self.engine.reduce([(0, (0, 1))], 1) != 1:
            raise ContractError("1 (x) s(w2) does not span degree 1")


def euler_matrix(n: int, d: int, engine: Optional[TensorProduct] = None) -> F2Matrix:
    """Multiplication by the Euler class, TensorBasis(d) -> TensorBasis(d + 1)."""
    engine = engine or spin_tensor(n)
    return engine.multiply_loop(EulerClass(engine).loop_element, d)


@dataclass(frozen=True)
class GysinTable:
    n: int
    D: int
    tensor_dims: PowerSeries
    ranks: Tuple[int, ...]
    ker_dims: PowerSeries
    coker_dims: PowerSeries
    assembled_dims: PowerSeries
    direct_dims: PowerSeries
    effective_degrees: Tuple[int, ...]

    @property
    def agrees(self) -> bool:
        return self.assembled_dims == self.direct_dims

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "D": self.D,
            "effective_degrees": list(self.effective_degrees),
            "tensor_dims": self.tensor_dims.to_list(),
            "ranks": list(self.ranks),
            "ker_dims": self.ker_dims.to_list(),
            "coker_dims": self.coker_dims.to_list(),
            "assembled_dims": self.assembled_dims.to_list(),
            "direct_dims": self.direct_dims.to_list(),
            "agrees": self.agrees,
        }

    def rows(self) -> List[dict]:
        return [
            {
                "degree": d,
                "tensor": self.tensor_dims[d],
                "rank": self.ranks[d],
                "ker": self.ker_dims[d],
                "coker": self.coker_dims[d],
                "assembled": self.assembled_dims[d],
                "direct": self.direct_dims[d],
            }
            for d in range(self.D + 1)
        ]


def gysin_assemble(
    n: int,
    D: int,
    presentation: Optional[Presentation] = None,
    progress=None,
) -> GysinTable:
    """dim H^d = dim ker(gamma_d) + dim coker(gamma_{d-1}), gamma = Euler multiplication.

    Rank-nullity is asserted for every gamma_d, with the kernel computed
    separately from the rank.
    """
    if presentation is None:
        _check_spin_n(n)
        engine = spin_tensor(n)
        p = spin_presentation(n)
    else:
        p = presentation
        engine = tensor_for_presentation(n, p)
    EulerClass(engine).check()
    dims, ranks, kers = [], [], []
    for d in range(D + 1):
        g = euler_matrix(n, d, engine)
        r = EchelonForm(g.data).rank
        k = len(kernel_basis(g))
        if k + r != g.cols:
            raise ContractError(f"rank-nullity fails for gamma_{d}: {k} + {r} != {g.cols}")
        dims.append(g.cols)
        ranks.append(r)
        kers.append(k)
        if progress:
            progress(d)
    cokers = [dims[d] - (ranks[d - 1] if d else 0) for d in range(D + 1)]
    assembled = [k + c for k, c in zip(kers, cokers)]
    eff = p.effective_degrees(D)
    direct = closed_form_series(eff, [d - 1 for d in eff], D)
    return GysinTable(
        n=n,
        D=D,
        tensor_dims=PowerSeries(tuple(dims)),
        ranks=tuple(ranks),
        ker_dims=PowerSeries(tuple(kers)),
        coker_dims=PowerSeries(tuple(cokers)),
        assembled_dims=PowerSeries(tuple(assembled)),
        direct_dims=direct,
        effective_degrees=tuple(eff),
    )


def freeness_series(n: int, D: int) -> PowerSeries:
    """series(B) x prod (1 + t^(i-1)): what dim TensorBasis must be if M is free over W."""
    p = spin_presentation(n)
    return p.quotient_series(D) * closed_form_series((), range(1, n), D)
