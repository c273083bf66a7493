"""Named checks over the whole pipeline, for one n at a time."""

from __future__ import annotations

import itertools
import math
import random
import time
from dataclasses import dataclass
from typing import Callable, List, Optional

from .errors import ContractError
from .f2core import F2Matrix
from .fibersq import (
    EXCEPTIONAL_DEGREES,
    SPIN_MAX_N,
    SPIN_MIN_N,
    VALIDATION_DEGREES,
    gysin_assemble,
    spin_presentation,
    spin_tensor,
)
from .invariants import (
    FAITHFULNESS_MAX_N,
    expected_series,
    faithfulness_check,
    image_matrices,
    invariant_dims,
    perm_action,
    subalgebra_dims,
)
from .loopalg import LoopElement, LoopModel, bso_loop_model, loop_basis, loop_multiply, sigma
from .polyalg import alpha_map, bso_algebra, closed_form_series
from .steenrod import express_in_w, sq, torus_rule, wu_formula

DENSE_BUDGET = 1500


@dataclass(frozen=True)
class Check:
    name: str
    n: int
    passed: bool
    detail: str
    seconds: float

    def to_dict(self, timings: bool = False) -> dict:
        out = {"name": self.name, "n": self.n, "passed": self.passed, "detail": self.detail}
        if timings:
            out["seconds"] = round(self.seconds, 3)
        return out


def random_loop_element(m: LoopModel, rng: random.Random, max_degree: int = 8) -> LoopElement:
    d = rng.randint(0, max_degree)
    basis = loop_basis(m, d).elements
    picked = [t for t in basis if rng.random() < 0.5]
    return m.element(picked)


def association_orders(m: LoopModel, a: LoopElement, b: LoopElement, c: LoopElement) -> List[LoopElement]:
    """All products of a, b, c over every ordering and both bracketings."""
    out = []
    for x, y, z in itertools.permutations((a, b, c)):
        out.append(loop_multiply(m, loop_multiply(m, x, y), z))
        out.append(loop_multiply(m, x, loop_multiply(m, y, z)))
    return out


def gl2_f2() -> set:
    mats = set()
    for bits in itertools.product((0, 1), repeat=4):
        a, b, c, d = bits
        if (a * d + b * c) % 2:
            mats.add(F2Matrix.from_rows([[a, b], [c, d]]))
    return mats


def _invariants(n: int, D: int) -> str:
    a = perm_action(n)
    inv = invariant_dims(a, D)
    sub = subalgebra_dims(n, D)
    if n == 2:
        if inv == sub:
            raise AssertionError("n = 2 invariants unexpectedly match the w-subalgebra")
        return "n = 2: invariants strictly larger (expected)"
    exp = expected_series(n, D)
    if not inv == sub == exp:
        raise AssertionError(f"invariant {inv.to_list()} subalgebra {sub.to_list()} expected {exp.to_list()}")
    dense_top = max((d for d in range(D + 1) if a.algebra.dimension(d) <= DENSE_BUDGET), default=0)
    dense = invariant_dims(a, dense_top, method="dense")
    if dense != inv.truncate(dense_top):
        raise AssertionError(f"dense kernel route disagrees through degree {dense_top}")
    return f"through degree {D}; dense cross-check through {dense_top}"


def _faithful(n: int, D: int) -> str:
    got = faithfulness_check(n)
    want = (False, 1) if n == 2 else (True, math.factorial(n))
    if got != want:
        raise AssertionError(f"got {got}, expected {want}")
    return f"faithful={got[0]} image_order={got[1]}"


def _gl2(n: int, D: int) -> str:
    if image_matrices(3) != gl2_f2():
        raise AssertionError("image is not GL_2(F_2)")
    return "image = GL_2(F_2), 6 elements"


def _wu(n: int, D: int) -> str:
    alpha = alpha_map(n)
    rule = torus_rule(n)
    ring = bso_algebra(n)
    count = 0
    for j in range(2, n + 1):
        image = alpha(ring.gen(f"w{j}"))
        for i in range(1, j + 1):
            got = express_in_w(n, sq(rule, i, image))
            want = wu_formula(i, j, n)
            if got != want:
                raise AssertionError(f"Sq^{i} w{j}: {got} != {want}")
            count += 1
    return f"{count} squares"


def _loop_series(n: int, D: int) -> str:
    m = bso_loop_model(n)
    want = closed_form_series(range(2, n + 1), range(1, n), D)
    got = [len(loop_basis(m, d)) for d in range(D + 1)]
    if got != want.to_list():
        raise AssertionError(f"{got} != {want.to_list()}")
    return f"through degree {D}"


def _squaring(n: int, D: int, seed: int = 0, trials: int = 200) -> str:
    m3 = bso_loop_model(3)
    B = m3.base
    s2, s3 = m3.sigma_gen("w2"), m3.sigma_gen("w3")
    if s2 * s2 != sigma(m3, B.gen("w3")):
        raise AssertionError("s(w2)^2 != s(w3)")
    if s3 * s3 != m3.lift(B.gen("w2")) * s3 + m3.lift(B.gen("w3")) * s2:
        raise AssertionError("s(w3)^2 != w2 s(w3) + w3 s(w2)")
    m = bso_loop_model(n)
    rng = random.Random(seed)
    for _ in range(trials):
        a, b, c = (random_loop_element(m, rng) for _ in range(3))
        products = association_orders(m, a, b, c)
        if any(p != products[0] for p in products):
            raise AssertionError(f"association orders disagree for {a}, {b}, {c}")
    return f"{trials} random triples (seed {seed})"


def _presentation(n: int, D: int) -> str:
    degs = tuple(spin_presentation(n).effective_degrees(max(D, 16)))
    if degs != VALIDATION_DEGREES[n]:
        raise AssertionError(f"{degs} != {VALIDATION_DEGREES[n]}")
    if n in EXCEPTIONAL_DEGREES and degs != EXCEPTIONAL_DEGREES[n]:
        raise AssertionError("disagrees with the exceptional isomorphism")
    return f"degrees {list(degs)}"


def _degree_one(n: int, D: int) -> str:
    loop_dim = len(loop_basis(bso_loop_model(n), 1))
    tensor_dim = len(spin_tensor(n).basis(1))
    if loop_dim != 1 or tensor_dim != 1:
        raise AssertionError(f"loop H^1 {loop_dim}, tensor degree 1 {tensor_dim}")
    return "both one-dimensional"


def _gysin(n: int, D: int) -> str:
    g = gysin_assemble(n, D)
    if not g.agrees:
        raise AssertionError(f"assembled {g.assembled_dims.to_list()} direct {g.direct_dims.to_list()}")
    return f"{D + 1} coefficients; rank-nullity held for every gamma_d"


CHECKS = [
    ("invariants", _invariants, lambda n: n >= 2),
    ("faithfulness", _faithful, lambda n: 2 <= n <= FAITHFULNESS_MAX_N),
    ("gl2-image", _gl2, lambda n: n == 3),
    ("wu-formula", _wu, lambda n: n >= 2),
    ("loop-series", _loop_series, lambda n: n >= 2),
    ("squaring-rule", _squaring, lambda n: n >= 2),
    ("spin-presentation", _presentation, lambda n: SPIN_MIN_N <= n <= SPIN_MAX_N),
    ("degree-one", _degree_one, lambda n: SPIN_MIN_N <= n <= SPIN_MAX_N),
    ("gysin", _gysin, lambda n: SPIN_MIN_N <= n <= SPIN_MAX_N),
]


def run_checks(n: int, D: int, seed: int = 0, progress: Optional[Callable[[str], None]] = None) -> List[Check]:
    out = []
    for name, fn, applies in CHECKS:
        if not applies(n):
            continue
        if progress:
            progress(f"n={n} {name}")
        start = time.perf_counter()
        try:
            detail = fn(n, D, seed) if fn is _squaring else fn(n, D)
            passed = True
        except (AssertionError, ContractError) as exc:
            detail, passed = str(exc), False
        out.append(Check(name, n, passed, detail, time.perf_counter() - start))
    return out
