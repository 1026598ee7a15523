"""Dense linear algebra over GF(2) on bit-packed Python integers.

A row or vector is a single ``int`` used as a bitset (bit ``i`` = entry
``i``).  Desk-scale matrices (a few thousand columns) never need anything
sparser, and ``int.bit_count`` keeps weight computations cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import BudgetExceededError, InvalidParameterError

DEFAULT_ENUM_DIM = 24


@dataclass(frozen=True)
class BitVector:
    """A vector in GF(2)^length, packed into one integer."""

    length: int
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0 or self.bits >> self.length:
            raise InvalidParameterError("bits outside of vector length")

    @classmethod
    def from_support(cls, length: int, support: Iterable[int]) -> "BitVector":
        bits = 0
        for i in support:
            if not 0 <= i < length:
                raise InvalidParameterError(f"index {i} outside length {length}")
            bits |= 1 << i
        return cls(length, bits)

    @classmethod
    def from_entries(cls, entries: Sequence[int]) -> "BitVector":
        bits = 0
        for i, e in enumerate(entries):
            if e & 1:
                bits |= 1 << i
        return cls(len(entries), bits)

    def weight(self) -> int:
        return self.bits.bit_count()

    def support(self) -> list[int]:
        return [i for i in range(self.length) if (self.bits >> i) & 1]

    def __getitem__(self, i: int) -> int:
        return (self.bits >> i) & 1

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self.length != other.length:
            raise InvalidParameterError("length mismatch in xor")
        return BitVector(self.length, self.bits ^ other.bits)

    def entries(self) -> list[int]:
        return [(self.bits >> i) & 1 for i in range(self.length)]

    def __repr__(self) -> str:
        return "BitVector(%s)" % "".join(str(b) for b in self.entries())


class BitMatrix:
    """A rows x cols matrix over GF(2); each row is a packed integer."""

    __slots__ = ("rows", "cols", "row_bits")

    def __init__(self, rows: int, cols: int, row_bits: Sequence[int] | None = None):
        if rows < 0 or cols < 0:
            raise InvalidParameterError("negative matrix dimension")
        self.rows = rows
        self.cols = cols
        if row_bits is None:
            self.row_bits = [0] * rows
        else:
            if len(row_bits) != rows:
                raise InvalidParameterError("row count mismatch")
            for r in row_bits:
                if r < 0 or (cols < r.bit_length()):
                    raise InvalidParameterError("row exceeds column count")
            self.row_bits = list(row_bits)

    @classmethod
    def from_entries(cls, entries: Sequence[Sequence[int]]) -> "BitMatrix":
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        bits = []
        for row in entries:
            if len(row) != cols:
                raise InvalidParameterError("ragged matrix")
            b = 0
            for j, e in enumerate(row):
                if e & 1:
                    b |= 1 << j
            bits.append(b)
        return cls(rows, cols, bits)

    @classmethod
    def identity(cls, n: int) -> "BitMatrix":
        return cls(n, n, [1 << i for i in range(n)])

    def set(self, i: int, j: int, value: int) -> None:
        if value & 1:
            self.row_bits[i] |= 1 << j
        else:
            self.row_bits[i] &= ~(1 << j)

    def get(self, i: int, j: int) -> int:
        return (self.row_bits[i] >> j) & 1

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.row_bits[i])

    def column(self, j: int) -> BitVector:
        bits = 0
        mask = 1 << j
        for i, r in enumerate(self.row_bits):
            if r & mask:
                bits |= 1 << i
        return BitVector(self.rows, bits)

    def columns(self) -> list[BitVector]:
        return [self.column(j) for j in range(self.cols)]

    def mul_vec(self, v: BitVector) -> BitVector:
        """Matrix-vector product over GF(2)."""
        if v.length != self.cols:
            raise InvalidParameterError(
                f"dimension mismatch: {self.rows}x{self.cols} times {v.length}"
            )
        bits = 0
        vb = v.bits
        for i, r in enumerate(self.row_bits):
            if (r & vb).bit_count() & 1:
                bits |= 1 << i
        return BitVector(self.rows, bits)

    def matmul(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.rows:
            raise InvalidParameterError("inner dimension mismatch")
        # (self @ other)[i] = xor of other rows selected by self row i
        out = []
        for r in self.row_bits:
            acc = 0
            rr = r
            while rr:
                j = (rr & -rr).bit_length() - 1
                acc ^= other.row_bits[j]
                rr &= rr - 1
            out.append(acc)
        return BitMatrix(self.rows, other.cols, out)

    def transpose(self) -> "BitMatrix":
        out = [0] * self.cols
        for i, r in enumerate(self.row_bits):
            rr = r
            while rr:
                j = (rr & -rr).bit_length() - 1
                out[j] |= 1 << i
                rr &= rr - 1
        return BitMatrix(self.cols, self.rows, out)

    def vstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.cols != other.cols:
            raise InvalidParameterError("column mismatch in vstack")
        return BitMatrix(
            self.rows + other.rows, self.cols, self.row_bits + other.row_bits
        )

    def hstack(self, other: "BitMatrix") -> "BitMatrix":
        if self.rows != other.rows:
            raise InvalidParameterError("row mismatch in hstack")
        bits = [
            a | (b << self.cols) for a, b in zip(self.row_bits, other.row_bits)
        ]
        return BitMatrix(self.rows, self.cols + other.cols, bits)

    def is_zero(self) -> bool:
        return all(r == 0 for r in self.row_bits)

    def nonzero_entries(self) -> list[tuple[int, int]]:
        out = []
        for i, r in enumerate(self.row_bits):
            rr = r
            while rr:
                j = (rr & -rr).bit_length() - 1
                out.append((i, j))
                rr &= rr - 1
        return out

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.rows, self.cols, list(self.row_bits))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, BitMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.row_bits == other.row_bits
        )

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


def _row_echelon(row_bits: list[int], cols: int) -> tuple[list[int], list[int]]:
    """Return echelon rows and their pivot columns (lowest column first)."""
    rows = list(row_bits)
    pivots: list[int] = []
    echelon: list[int] = []
    for col in range(cols):
        mask = 1 << col
        pivot_row = None
        for idx, r in enumerate(rows):
            if r & mask:
                pivot_row = idx
                break
        if pivot_row is None:
            continue
        pr = rows.pop(pivot_row)
        rows = [r ^ pr if r & mask else r for r in rows]
        echelon.append(pr)
        pivots.append(col)
    return echelon, pivots


def rank(m: BitMatrix) -> int:
    return len(_row_echelon(m.row_bits, m.cols)[1])


def kernel_basis(m: BitMatrix) -> list[BitVector]:
    """A basis of ``{v : m v = 0}``; ``rank + len(basis) == cols``."""
    echelon, pivots = _row_echelon(m.row_bits, m.cols)
    pivot_set = set(pivots)
    free_cols = [j for j in range(m.cols) if j not in pivot_set]
    basis = []
    for fc in free_cols:
        v = 1 << fc
        # back-substitute from the highest pivot down
        for r, p in zip(reversed(echelon), reversed(pivots)):
            if (r & v).bit_count() & 1:
                v ^= 1 << p
        basis.append(BitVector(m.cols, v))
    return basis


def solve(m: BitMatrix, b: BitVector) -> BitVector | None:
    """Any ``x`` with ``m x = b``, or ``None`` if the system is inconsistent."""
    if b.length != m.rows:
        raise InvalidParameterError("right-hand side has wrong length")
    # eliminate on [m | b] columns-first, tracking b as an extra column
    aug = [r | (((b.bits >> i) & 1) << m.cols) for i, r in enumerate(m.row_bits)]
    echelon, pivots = _row_echelon(aug, m.cols + 1)
    if m.cols in pivots:
        return None
    x = 0
    col_mask = (1 << m.cols) - 1
    for r, p in zip(reversed(echelon), reversed(pivots)):
        rhs = (r >> m.cols) & 1
        rhs ^= ((r & col_mask) & x).bit_count() & 1
        if rhs:
            x |= 1 << p
    return BitVector(m.cols, x)


def gray_code_combinations(basis: Sequence[BitVector]) -> Iterator[tuple[int, BitVector]]:
    """Yield all 2^k - 1 nonzero combinations, one basis toggle per step.

    Yields ``(index, vector)`` where ``index`` enumerates the Gray sequence.
    """
    if not basis:
        return
    n = basis[0].length
    cur = 0
    for i in range(1, 1 << len(basis)):
        j = (i & -i).bit_length() - 1
        cur ^= basis[j].bits
        yield i, BitVector(n, cur)


def min_weight_nonzero(
    basis: Sequence[BitVector], budget: int = 1 << DEFAULT_ENUM_DIM
) -> tuple[int, BitVector] | None:
    """Exact minimum weight over all nonzero combinations of ``basis``.

    Returns ``None`` when the basis is empty (zero-dimensional code).  Ties
    break toward the lexicographically smallest packed representation so the
    witness is deterministic.
    """
    if not basis:
        return None
    count = 1 << len(basis)
    if count > budget:
        raise BudgetExceededError(
            f"2^{len(basis)} combinations exceed budget", count, budget
        )
    best_w = None
    best = None
    for _, v in gray_code_combinations(basis):
        w = v.weight()
        if best_w is None or w < best_w or (w == best_w and v.bits < best.bits):
            best_w, best = w, v
    return best_w, best


def nearest_codeword_distance(
    h: BitMatrix, x: BitVector, budget: int = 1 << DEFAULT_ENUM_DIM
) -> int:
    """Exact ``d(x, C(h))`` by enumerating the kernel of ``h``."""
    if x.length != h.cols:
        raise InvalidParameterError("vector length does not match code length")
    basis = kernel_basis(h)
    count = 1 << len(basis)
    if count > budget:
        raise BudgetExceededError(
            f"2^{len(basis)} codewords exceed budget", count, budget
        )
    best = x.weight()
    cur = x.bits
    for i in range(1, count):
        j = (i & -i).bit_length() - 1
        cur ^= basis[j].bits
        w = cur.bit_count()
        if w < best:
            best = w
    return best
