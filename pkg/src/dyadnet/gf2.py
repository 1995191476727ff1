"""Exact linear algebra over GF(2) with integer-packed bit vectors.

Vectors and matrices are immutable and use 1-based indexing at the API
boundary: element ``i`` of a vector is the coefficient of ``2**(i-1)`` in
the integer the vector encodes, so index 1 is the least significant binary
digit.  Internally everything is packed into Python integers, which keeps
all arithmetic exact at any size and makes XOR of whole columns a single
machine operation per word.

All objects here are immutable, so they can be shared freely across
threads.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable, Iterator

__all__ = [
    "BitVector",
    "BitMatrix",
    "binary_expand",
    "pascal_entry",
    "pascal_matrix",
    "pascal_times_ones",
    "matvec",
    "is_nonsingular",
    "pascal_structure_failures",
]


class BitVector:
    """Immutable vector over GF(2), packed into a single int."""

    __slots__ = ("_n", "_word")

    def __init__(self, length: int, word: int) -> None:
        if length < 1:
            raise ValueError(f"vector length must be positive, got {length}")
        if not 0 <= word < (1 << length):
            raise ValueError(f"word {word} does not fit in {length} bits")
        self._n = length
        self._word = word

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitVector":
        word = 0
        n = 0
        for b in bits:
            if b not in (0, 1):
                raise ValueError(f"bit values must be 0 or 1, got {b!r}")
            word |= b << n
            n += 1
        return cls(n, word)

    @classmethod
    def zeros(cls, length: int) -> "BitVector":
        return cls(length, 0)

    @classmethod
    def ones(cls, length: int) -> "BitVector":
        return cls(length, (1 << length) - 1)

    def __len__(self) -> int:
        return self._n

    def bit(self, i: int) -> int:
        """Element ``i`` with 1-based indexing (index 1 = 2**0 digit)."""
        if not 1 <= i <= self._n:
            raise IndexError(f"index {i} out of range 1..{self._n}")
        return (self._word >> (i - 1)) & 1

    def bits(self) -> tuple[int, ...]:
        return tuple((self._word >> i) & 1 for i in range(self._n))

    def to_int(self) -> int:
        return self._word

    def slice(self, i: int, j: int) -> "BitVector":
        """Elements ``i..j`` inclusive, preserving order (1-based)."""
        if not 1 <= i <= j <= self._n:
            raise ValueError(f"invalid slice {i}..{j} of length-{self._n} vector")
        width = j - i + 1
        return BitVector(width, (self._word >> (i - 1)) & ((1 << width) - 1))

    def concat(self, other: "BitVector") -> "BitVector":
        return BitVector(self._n + other._n, self._word | (other._word << self._n))

    def weight(self) -> int:
        return self._word.bit_count()

    def __xor__(self, other: "BitVector") -> "BitVector":
        if self._n != other._n:
            raise ValueError(f"length mismatch: {self._n} vs {other._n}")
        return BitVector(self._n, self._word ^ other._word)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self._n == other._n and self._word == other._word

    def __hash__(self) -> int:
        return hash((self._n, self._word))

    def __iter__(self) -> Iterator[int]:
        return iter(self.bits())

    def __repr__(self) -> str:
        return f"BitVector({self._n}, 0b{self._word:0{self._n}b})"


def binary_expand(n: int, m: int) -> BitVector:
    """Digit vector of ``n`` in base 2: element i is the 2**(i-1) digit."""
    if m < 1:
        raise ValueError(f"width must be positive, got {m}")
    if not 0 <= n < (1 << m):
        raise ValueError(f"{n} is not representable in {m} binary digits")
    return BitVector(m, n)


class BitMatrix:
    """Immutable matrix over GF(2), stored as packed column words.

    Entry ``(i, j)`` is 1-based; bit ``i-1`` of column word ``j-1`` holds it.
    Column-major packing makes matrix-vector products a fold of XORs over
    the columns selected by the vector.
    """

    __slots__ = ("_rows", "_cols", "_colwords")

    def __init__(self, rows: int, cols: int, colwords: Iterable[int]) -> None:
        if rows < 1 or cols < 1:
            raise ValueError(f"matrix dimensions must be positive, got {rows}x{cols}")
        words = tuple(colwords)
        if len(words) != cols:
            raise ValueError(f"expected {cols} column words, got {len(words)}")
        limit = 1 << rows
        for w in words:
            if not 0 <= w < limit:
                raise ValueError(f"column word {w} does not fit in {rows} rows")
        self._rows = rows
        self._cols = cols
        self._colwords = words

    @classmethod
    def identity(cls, m: int) -> "BitMatrix":
        return cls(m, m, (1 << i for i in range(m)))

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]]) -> "BitMatrix":
        grid = [list(r) for r in rows]
        if not grid:
            raise ValueError("matrix needs at least one row")
        ncols = len(grid[0])
        if any(len(r) != ncols for r in grid):
            raise ValueError("ragged rows")
        words = [0] * ncols
        for i, row in enumerate(grid):
            for j, b in enumerate(row):
                if b not in (0, 1):
                    raise ValueError(f"entries must be 0 or 1, got {b!r}")
                words[j] |= b << i
        return cls(len(grid), ncols, words)

    @property
    def rows(self) -> int:
        return self._rows

    @property
    def cols(self) -> int:
        return self._cols

    def entry(self, i: int, j: int) -> int:
        if not (1 <= i <= self._rows and 1 <= j <= self._cols):
            raise IndexError(f"entry ({i}, {j}) outside {self._rows}x{self._cols}")
        return (self._colwords[j - 1] >> (i - 1)) & 1

    def column(self, j: int) -> BitVector:
        if not 1 <= j <= self._cols:
            raise IndexError(f"column {j} outside 1..{self._cols}")
        return BitVector(self._rows, self._colwords[j - 1])

    def row(self, i: int) -> BitVector:
        if not 1 <= i <= self._rows:
            raise IndexError(f"row {i} outside 1..{self._rows}")
        word = 0
        for j in range(self._cols):
            word |= ((self._colwords[j] >> (i - 1)) & 1) << j
        return BitVector(self._cols, word)

    def submatrix(self, r1: int, r2: int, c1: int, c2: int) -> "BitMatrix":
        """Rows ``r1..r2`` by columns ``c1..c2``, all bounds inclusive."""
        if not (1 <= r1 <= r2 <= self._rows and 1 <= c1 <= c2 <= self._cols):
            raise ValueError(f"invalid submatrix bounds ({r1}..{r2}, {c1}..{c2})")
        h = r2 - r1 + 1
        mask = (1 << h) - 1
        return BitMatrix(
            h,
            c2 - c1 + 1,
            ((self._colwords[j] >> (r1 - 1)) & mask for j in range(c1 - 1, c2)),
        )

    def column_words(self) -> tuple[int, ...]:
        return self._colwords

    def row_strings(self) -> list[str]:
        return [
            "".join(str((self._colwords[j] >> i) & 1) for j in range(self._cols))
            for i in range(self._rows)
        ]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (
            self._rows == other._rows
            and self._cols == other._cols
            and self._colwords == other._colwords
        )

    def __hash__(self) -> int:
        return hash((self._rows, self._cols, self._colwords))

    def __repr__(self) -> str:
        return f"BitMatrix({self._rows}x{self._cols})"


def matvec(matrix: BitMatrix, vec: BitVector) -> BitVector:
    """Product over GF(2): XOR of the columns selected by ``vec``."""
    if len(vec) != matrix.cols:
        raise ValueError(f"dimension mismatch: {matrix.cols} columns vs length {len(vec)}")
    acc = 0
    w = vec.to_int()
    words = matrix.column_words()
    while w:
        low = w & -w
        acc ^= words[low.bit_length() - 1]
        w ^= low
    return BitVector(matrix.rows, acc)


def pascal_entry(i: int, j: int) -> int:
    """Binomial coefficient C(j-1, i-1) reduced mod 2.

    By Lucas's theorem this is 1 exactly when the binary digits of i-1
    are a subset of the digits of j-1.
    """
    if i < 1 or j < 1:
        raise ValueError(f"indices must be positive, got ({i}, {j})")
    return 1 if ((i - 1) & ~(j - 1)) == 0 else 0


@lru_cache(maxsize=None)
def pascal_matrix(m: int) -> BitMatrix:
    """Upper-triangular Pascal matrix mod 2 of size m x m.

    Column j has ones in the rows i whose digit set of i-1 is contained
    in the digit set of j-1, which enumerates exactly the submasks of j-1.
    """
    if m < 1:
        raise ValueError(f"size must be positive, got {m}")
    words = []
    for j in range(m):
        word = 0
        s = j
        while True:
            word |= 1 << s
            if s == 0:
                break
            s = (s - 1) & j
        words.append(word)
    return BitMatrix(m, m, words)


def pascal_times_ones(m: int) -> BitVector:
    """Image of the all-ones vector under the size-m Pascal matrix.

    Component i equals C(m, i) mod 2, i.e. 1 exactly when the digits of i
    are a subset of the digits of m (the hockey-stick sum collapses by
    Lucas's theorem).
    """
    if m < 1:
        raise ValueError(f"size must be positive, got {m}")
    word = 0
    s = m
    while s:
        word |= 1 << (s - 1)
        s = (s - 1) & m
    return BitVector(m, word)


def is_nonsingular(matrix: BitMatrix) -> bool:
    """Full-rank test for a square matrix via column elimination."""
    if matrix.rows != matrix.cols:
        raise ValueError("non-singularity is defined for square matrices only")
    basis: dict[int, int] = {}
    for w in matrix.column_words():
        while w:
            top = w.bit_length()
            pivot = basis.get(top)
            if pivot is None:
                basis[top] = w
                break
            w ^= pivot
        else:
            return False
    return True


def pascal_structure_failures(v: int, w: int, rng, samples: int = 1000) -> list[str]:
    """Exercise the structured identities of the binary Pascal matrix.

    For V = 2**v and W = 2**w with 0 <= w < v, checks the column supports
    at W and V+W, the persistence of components V (widths up to 2V-1),
    V+W (widths up to V+2W-1) and V-1 under the product with random
    vectors together with the sharpness of those windows, the
    self-similar submatrix blocks, and the support of the image of the
    all-ones vector.  Returns a list of human-readable failure
    descriptions, empty when everything holds.
    """
    if not 0 <= w < v:
        raise ValueError(f"need 0 <= w < v, got v={v}, w={w}")
    V = 1 << v
    W = 1 << w
    failures: list[str] = []

    big = pascal_matrix(2 * V)

    expect_w = (1 << W) - 1
    if pascal_matrix(2 * W).column(W).to_int() != expect_w:
        failures.append(f"column {W}: support is not rows 1..{W}")

    expect_vw = ((1 << W) - 1) | (((1 << W) - 1) << V)
    if big.column(V + W).to_int() != expect_vw:
        failures.append(f"column {V + W}: support is not rows 1..{W} and {V + 1}..{V + W}")

    # Row V stays diagonal-only up to width 2V-1, row V+W only up to width
    # V+2W-1: its next off-diagonal one sits in column V+2W, whose digit
    # set picks up the digits of V+W-1 again.  Each claim gets sampled
    # over its own exact window.
    for _ in range(samples):
        m = rng.randint(V, 2 * V - 1)
        p = BitVector(m, rng.randrange(1 << m))
        if matvec(pascal_matrix(m), p).bit(V) != p.bit(V):
            failures.append(f"component {V} not fixed at m={m}, p={p.to_int()}")
            break
    for _ in range(samples):
        m = rng.randint(V + W, V + 2 * W - 1)
        p = BitVector(m, rng.randrange(1 << m))
        if matvec(pascal_matrix(m), p).bit(V + W) != p.bit(V + W):
            failures.append(f"component {V + W} not fixed at m={m}, p={p.to_int()}")
            break

    # Sharpness: one column past each window the row picks up an
    # off-diagonal one, so a unit vector there flips the component.
    edge_v = BitVector(2 * V, 1 << (2 * V - 1))
    if matvec(pascal_matrix(2 * V), edge_v).bit(V) != 1:
        failures.append(f"component {V} window unexpectedly extends past m={2 * V - 1}")
    edge_vw = BitVector(V + 2 * W, 1 << (V + 2 * W - 1))
    if matvec(pascal_matrix(V + 2 * W), edge_vw).bit(V + W) != 1:
        failures.append(
            f"component {V + W} window unexpectedly extends past m={V + 2 * W - 1}"
        )

    for _ in range(samples):
        m = rng.randint(V, 2 * V - 2)
        p = BitVector(m, rng.randrange(1 << m))
        image = matvec(pascal_matrix(m), p)
        want = p.bit(V - 1) ^ p.bit(V)
        if image.bit(V - 1) != want:
            failures.append(f"component {V - 1} mixing rule broken at m={m}, p={p.to_int()}")
            break

    block_top = big.submatrix(1, V, V + 1, 2 * V)
    block_bottom = big.submatrix(V + 1, 2 * V, V + 1, 2 * V)
    small = pascal_matrix(V)
    if block_top != small:
        failures.append(f"top-right {V}x{V} block differs from the size-{V} matrix")
    if block_bottom != small:
        failures.append(f"bottom-right {V}x{V} block differs from the size-{V} matrix")

    if pascal_times_ones(W).to_int() != 1 << (W - 1):
        failures.append(f"ones image at size {W}: support is not exactly component {W}")
    expect_ones_vw = (1 << (W - 1)) | (1 << (V - 1)) | (1 << (V + W - 1))
    if pascal_times_ones(V + W).to_int() != expect_ones_vw:
        failures.append(
            f"ones image at size {V + W}: support is not components {W}, {V}, {V + W}"
        )
    for size in (W, V + W):
        direct = matvec(pascal_matrix(size), BitVector.ones(size))
        if direct != pascal_times_ones(size):
            failures.append(f"ones image mismatch with direct product at size {size}")

    return failures
