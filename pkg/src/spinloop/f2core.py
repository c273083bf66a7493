"""Exact linear algebra over GF(2) with rows packed into Python ints.

Bit ``j`` of a row is the entry in column ``j``.  Python integers give
word-level XOR for free, so elimination costs O(r * c * min(r, c) / w)
machine-word operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import ContractError


class DimensionError(ContractError):
    """Raised when operand shapes do not match."""


@dataclass(frozen=True)
class F2Vector:
    bits: int
    length: int

    def __post_init__(self) -> None:
        if self.length < 0:
            raise DimensionError("negative length")
        if self.bits >> self.length:
            raise DimensionError("padding bits beyond length must be zero")

    @classmethod
    def from_list(cls, entries: Sequence[int]) -> "F2Vector":
        bits = 0
        for j, v in enumerate(entries):
            if v & 1:
                bits |= 1 << j
        return cls(bits, len(entries))

    @classmethod
    def zeros(cls, length: int) -> "F2Vector":
        return cls(0, length)

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, j: int) -> int:
        if not 0 <= j < self.length:
            raise IndexError(j)
        return (self.bits >> j) & 1

    def __iter__(self) -> Iterator[int]:
        for j in range(self.length):
            yield (self.bits >> j) & 1

    def __add__(self, other: "F2Vector") -> "F2Vector":
        if self.length != other.length:
            raise DimensionError("vector lengths differ")
        return F2Vector(self.bits ^ other.bits, self.length)

    def to_list(self) -> List[int]:
        return list(self)

    def support(self) -> List[int]:
        return [j for j in range(self.length) if (self.bits >> j) & 1]

    def is_zero(self) -> bool:
        return self.bits == 0


@dataclass(frozen=True)
class F2Matrix:
    rows: int
    cols: int
    data: Tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.data) != self.rows:
            raise DimensionError("row count does not match data")
        for r in self.data:
            if r < 0 or r >> self.cols:
                raise DimensionError("row wider than cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "F2Matrix":
        if cols is None:
            cols = len(rows[0]) if rows else 0
        packed = []
        for row in rows:
            if len(row) != cols:
                raise DimensionError("ragged rows")
            packed.append(F2Vector.from_list(row).bits)
        return cls(len(rows), cols, tuple(packed))

    @classmethod
    def from_packed(cls, rows: Iterable[int], cols: int) -> "F2Matrix":
        data = tuple(rows)
        return cls(len(data), cols, data)

    @classmethod
    def from_columns(cls, columns: Sequence[int], rows: int) -> "F2Matrix":
        """Build from packed columns (bit ``i`` of a column is row ``i``)."""
        data = [0] * rows
        for j, col in enumerate(columns):
            while col:
                low = col & -col
                data[low.bit_length() - 1] |= 1 << j
                col ^= low
        return cls(rows, len(columns), tuple(data))

    @classmethod
    def identity(cls, k: int) -> "F2Matrix":
        return cls(k, k, tuple(1 << i for i in range(k)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "F2Matrix":
        return cls(rows, cols, (0,) * rows)

    def __getitem__(self, idx: Tuple[int, int]) -> int:
        r, c = idx
        return (self.data[r] >> c) & 1

    def to_lists(self) -> List[List[int]]:
        return [[(row >> j) & 1 for j in range(self.cols)] for row in self.data]

    def column(self, j: int) -> int:
        col = 0
        for i, row in enumerate(self.data):
            if (row >> j) & 1:
                col |= 1 << i
        return col

    def transpose(self) -> "F2Matrix":
        return F2Matrix(self.cols, self.rows, tuple(self.column(j) for j in range(self.cols)))

    def matvec(self, v: F2Vector) -> F2Vector:
        if v.length != self.cols:
            raise DimensionError(f"expected vector of length {self.cols}, got {v.length}")
        out = 0
        for i, row in enumerate(self.data):
            if (row & v.bits).bit_count() & 1:
                out |= 1 << i
        return F2Vector(out, self.rows)

    def __matmul__(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.rows:
            raise DimensionError("inner dimensions differ")
        out = []
        for row in self.data:
            acc = 0
            while row:
                low = row & -row
                acc ^= other.data[low.bit_length() - 1]
                row ^= low
            out.append(acc)
        return F2Matrix(self.rows, other.cols, tuple(out))

    def __add__(self, other: "F2Matrix") -> "F2Matrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionError("shapes differ")
        return F2Matrix(self.rows, self.cols, tuple(a ^ b for a, b in zip(self.data, other.data)))

    def vstack(self, other: "F2Matrix") -> "F2Matrix":
        if self.cols != other.cols:
            raise DimensionError("column counts differ")
        return F2Matrix(self.rows + other.rows, self.cols, self.data + other.data)

    def permute(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "F2Matrix":
        """Row ``i`` of the result is row ``row_perm[i]``; likewise for columns."""
        rows = [self.data[i] for i in row_perm]
        out = []
        for row in rows:
            acc = 0
            for new_j, old_j in enumerate(col_perm):
                if (row >> old_j) & 1:
                    acc |= 1 << new_j
            out.append(acc)
        return F2Matrix(self.rows, self.cols, tuple(out))


class EchelonForm:
    """Incrementally built row echelon form keyed by each row's highest set bit.

    Cheap for the sparse, nearly triangular relator systems that show up in
    the tensor-product computations: a new row is reduced only by the pivots
    it actually meets, starting from its top bit.
    """

    __slots__ = ("pivots", "_mask")

    def __init__(self, rows: Iterable[int] = ()) -> None:
        self.pivots: dict = {}
        self._mask = 0
        for r in rows:
            self.add(r)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def pivot_mask(self) -> int:
        return self._mask

    def add(self, row: int) -> bool:
        """Insert a row; return True when it was independent of the current span."""
        pivots = self.pivots
        while row:
            lead = row.bit_length() - 1
            p = pivots.get(lead)
            if p is None:
                pivots[lead] = row
                self._mask |= 1 << lead
                return True
            row ^= p
        return False

    def reduce(self, vec: int) -> int:
        """Fully reduce ``vec``: the result has no bits on pivot columns."""
        pivots = self.pivots
        mask = self._mask
        hit = vec & mask
        while hit:
            lead = hit.bit_length() - 1
            vec ^= pivots[lead]
            hit = vec & mask
        return vec

    def contains(self, vec: int) -> bool:
        return self.reduce(vec) == 0


def rank(m: F2Matrix) -> int:
    return EchelonForm(m.data).rank


def _rref(data: Sequence[int], cols: int) -> Tuple[List[int], List[int]]:
    """Reduced row echelon form, pivots scanned from column 0 upwards."""
    work = [r for r in data if r]
    pivot_cols: List[int] = []
    top = 0
    for c in range(cols):
        bit = 1 << c
        sel = None
        for r in range(top, len(work)):
            if work[r] & bit:
                sel = r
                break
        if sel is None:
            continue
        work[top], work[sel] = work[sel], work[top]
        prow = work[top]
        for r in range(len(work)):
            if r != top and work[r] & bit:
                work[r] ^= prow
        pivot_cols.append(c)
        top += 1
        if top == len(work):
            break
    return work[:top], pivot_cols


def kernel_basis(m: F2Matrix) -> List[F2Vector]:
    """Basis of {v : m v = 0}, one vector per free column of the RREF."""
    rows, pivot_cols = _rref(m.data, m.cols)
    pivot_set = set(pivot_cols)
    basis = []
    for f in range(m.cols):
        if f in pivot_set:
            continue
        v = 1 << f
        fbit = 1 << f
        for row, pc in zip(rows, pivot_cols):
            if row & fbit:
                v |= 1 << pc
        basis.append(F2Vector(v, m.cols))
    return basis


def image_and_cokernel_dims(m: F2Matrix) -> Tuple[int, int]:
    """Columns are inputs, rows are the target coordinates."""
    r = rank(m)
    return r, m.rows - r


def solve(m: F2Matrix, b: F2Vector) -> Optional[F2Vector]:
    """Some ``x`` with ``m x = b``, or None when ``b`` is outside the column space."""
    if b.length != m.rows:
        raise DimensionError(f"right-hand side has length {b.length}, matrix has {m.rows} rows")
    cols = m.cols
    aug_bit = 1 << cols
    augmented = [row | (aug_bit if (b.bits >> i) & 1 else 0) for i, row in enumerate(m.data)]
    rows, pivot_cols = _rref(augmented, cols + 1)
    if pivot_cols and pivot_cols[-1] == cols:
        return None
    x = 0
    for row, pc in zip(rows, pivot_cols):
        if row & aug_bit:
            x |= 1 << pc
    return F2Vector(x, cols)
