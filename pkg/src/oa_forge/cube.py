"""Bit-level hypercube primitives and the exact integer Walsh-Hadamard transform.

Vertices of the n-cube Q_n are integers below 2**n.  Coordinate i (1-based)
is bit i-1, so "first coordinate" tests are a single mask against bit 0.
Dense tables over the cube are numpy int64 arrays of length 2**n; all
spectral arithmetic is exact integer (a transform stores 2**n times the
dyadic coefficients, no division ever happens).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np

MAX_N = 31
MAX_DENSE_N = 25


def weight(bits: int) -> int:
    """Hamming weight of a vertex."""
    return bits.bit_count()


def distance(x: int, y: int) -> int:
    """Hamming distance between two vertices."""
    return (x ^ y).bit_count()


def all_ones(n: int) -> int:
    return (1 << n) - 1


def concat(u: int, nu: int, v: int) -> int:
    """Concatenation u|v where u has nu coordinates (v occupies the higher bits)."""
    return u | (v << nu)


def support(bits: int) -> tuple[int, ...]:
    """1-based coordinates where the word is nonzero, in increasing order."""
    out = []
    i = 1
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A vertex of Q_n: an n-bit value together with its dimension."""

    bits: int
    n: int

    def __post_init__(self) -> None:
        if not 1 <= self.n <= MAX_N:
            raise ValueError(f"dimension {self.n} out of range 1..{MAX_N}")
        if not 0 <= self.bits < (1 << self.n):
            raise ValueError(f"bits {self.bits:#x} do not fit {self.n} coordinates")

    @property
    def weight(self) -> int:
        return self.bits.bit_count()

    def coord(self, i: int) -> int:
        """Value of 1-based coordinate i."""
        if not 1 <= i <= self.n:
            raise ValueError(f"coordinate {i} out of range 1..{self.n}")
        return (self.bits >> (i - 1)) & 1

    def __str__(self) -> str:
        return format_word(self.bits, self.n)


def format_word(bits: int, n: int) -> str:
    """Render coordinates 1..n left to right (least significant bit first)."""
    return "".join("1" if bits >> j & 1 else "0" for j in range(n))


def parse_word(text: str) -> int:
    """Inverse of :func:`format_word`; accepts embedded spaces."""
    bits = 0
    j = 0
    for ch in text:
        if ch in " _|":
            continue
        if ch == "1":
            bits |= 1 << j
        elif ch != "0":
            raise ValueError(f"bad symbol {ch!r} in word {text!r}")
        j += 1
    return bits


def neighbors(w: Word) -> list[Word]:
    """The n neighbors of w, flipping coordinates 1..n in order."""
    return [Word(w.bits ^ (1 << i), w.n) for i in range(w.n)]


def neighbor_ints(bits: int, n: int) -> list[int]:
    return [bits ^ (1 << i) for i in range(n)]


@lru_cache(maxsize=None)
def weight_table(n: int) -> np.ndarray:
    """Vertex weights as an int64 array of length 2**n."""
    arr = np.arange(1 << n, dtype=np.uint32)
    return np.bitwise_count(arr).astype(np.int64)


@lru_cache(maxsize=None)
def flip_index(n: int, i: int) -> np.ndarray:
    """Index array x -> x ^ (1 << i); gathers along it move data across direction i+1."""
    return np.arange(1 << n, dtype=np.intp) ^ (1 << i)


def neighbor_sum(table: np.ndarray, n: int) -> np.ndarray:
    """For every vertex, the sum of a dense table over its n neighbors."""
    acc = np.zeros_like(table)
    for i in range(n):
        acc += table[flip_index(n, i)]
    return acc


class VertexSet:
    """A multiplicity-aware set of vertices of Q_n backed by a dense table.

    The table stores one nonnegative multiplicity per vertex; ``size`` is kept
    incrementally in sync with the table.  Dense storage is refused above
    n = 25.
    """

    __slots__ = ("n", "mult", "_size")

    def __init__(self, n: int, mult: np.ndarray | None = None):
        if not 1 <= n <= MAX_DENSE_N:
            raise ValueError(f"dense VertexSet supports 1 <= n <= {MAX_DENSE_N}, got {n}")
        self.n = n
        if mult is None:
            self.mult = np.zeros(1 << n, dtype=np.int64)
        else:
            mult = np.asarray(mult, dtype=np.int64)
            if mult.shape != (1 << n,):
                raise ValueError(f"multiplicity table must have length {1 << n}")
            if (mult < 0).any():
                raise ValueError("multiplicities must be nonnegative")
            self.mult = mult.copy()
        self._size = int(self.mult.sum())

    @classmethod
    def from_words(cls, n: int, words: Iterable[int]) -> "VertexSet":
        s = cls(n)
        for w in words:
            s.add(w)
        return s

    @classmethod
    def full_cube(cls, n: int) -> "VertexSet":
        return cls(n, np.ones(1 << n, dtype=np.int64))

    @property
    def size(self) -> int:
        return self._size

    @property
    def simple(self) -> bool:
        return bool((self.mult <= 1).all())

    def add(self, w: int, count: int = 1) -> None:
        if count < 0:
            raise ValueError("count must be nonnegative")
        self.mult[w] += count
        self._size += count

    def discard(self, w: int) -> None:
        if self.mult[w] == 0:
            raise KeyError(f"word {w} not present")
        self.mult[w] -= 1
        self._size -= 1

    def __contains__(self, w: int) -> bool:
        return bool(self.mult[w] > 0)

    def __len__(self) -> int:
        return self._size

    def __iter__(self) -> Iterator[int]:
        """Distinct member words in increasing order (ignores multiplicity)."""
        return iter(np.flatnonzero(self.mult).tolist())

    def words(self) -> list[int]:
        return np.flatnonzero(self.mult).tolist()

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, VertexSet)
            and self.n == other.n
            and bool((self.mult == other.mult).all())
        )

    def __repr__(self) -> str:
        return f"VertexSet(n={self.n}, size={self._size})"

    def copy(self) -> "VertexSet":
        return VertexSet(self.n, self.mult)

    def complement(self) -> "VertexSet":
        if not self.simple:
            raise ValueError("complement is defined only for simple sets")
        return VertexSet(self.n, 1 - self.mult)

    def translate(self, v: int) -> "VertexSet":
        """The set { w + v : w in S } (bitwise XOR translation)."""
        return VertexSet(self.n, self.mult[np.arange(1 << self.n, dtype=np.intp) ^ v])

    def permute_coords(self, perm: Sequence[int]) -> "VertexSet":
        """Apply a coordinate permutation; perm[i] is the image of coordinate i+1 (1-based)."""
        return VertexSet(self.n, self.mult[permutation_index(self.n, tuple(perm))])

    def recount(self) -> int:
        return int(self.mult.sum())


@lru_cache(maxsize=None)
def permutation_index(n: int, perm: tuple[int, ...]) -> np.ndarray:
    """Index array inverting the coordinate permutation, so table[idx] permutes a set.

    perm maps 1-based coordinate i to perm[i-1]; the returned idx satisfies
    idx[sigma(x)] = x, hence mult[idx] is the table of the permuted set.
    """
    if sorted(perm) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {perm}")
    arr = np.arange(1 << n, dtype=np.intp)
    out = np.zeros(1 << n, dtype=np.intp)
    for i, pi in enumerate(perm):
        out |= ((arr >> i) & 1) << (pi - 1)
    # out[x] = sigma(x); invert it
    inv = np.empty(1 << n, dtype=np.intp)
    inv[out] = arr
    return inv


def apply_coord_perm(bits: int, perm: Sequence[int]) -> int:
    """Image of a single word under a coordinate permutation (1-based perm)."""
    out = 0
    for i, pi in enumerate(perm):
        if bits >> i & 1:
            out |= 1 << (pi - 1)
    return out


class SpectrumVector:
    """Exact Walsh-Hadamard spectrum: coef[y] = sum_x f(x) (-1)^<y,x> = 2**n * fhat(y)."""

    __slots__ = ("n", "coef")

    def __init__(self, n: int, coef: np.ndarray):
        self.n = n
        self.coef = np.asarray(coef, dtype=np.int64)
        if self.coef.shape != (1 << n,):
            raise ValueError("coefficient table has wrong length")

    def nonzero_support(self) -> np.ndarray:
        return np.flatnonzero(self.coef)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, SpectrumVector)
            and self.n == other.n
            and bool((self.coef == other.coef).all())
        )


def walsh_hadamard(table: Sequence[int] | np.ndarray) -> SpectrumVector:
    """Fast in-place butterfly transform of an integer table of length 2**n.

    Exact over int64; applying it twice returns the original scaled by 2**n.
    """
    arr = np.asarray(table, dtype=np.int64).copy()
    size = arr.shape[0]
    if size == 0 or size & (size - 1):
        raise ValueError(f"table length {size} is not a power of two")
    n = size.bit_length() - 1
    h = 1
    while h < size:
        view = arr.reshape(-1, 2 * h)
        a = view[:, :h].copy()
        b = view[:, h:].copy()
        view[:, :h] = a + b
        view[:, h:] = a - b
        h *= 2
    return SpectrumVector(n, arr)


def xor_convolve(f: np.ndarray, g: np.ndarray) -> np.ndarray:
    """Dyadic (XOR) convolution h(u) = sum_x f(x) g(u ^ x), exact integers."""
    if f.shape != g.shape:
        raise ValueError("tables must have equal length")
    n = f.shape[0].bit_length() - 1
    fh = walsh_hadamard(f).coef
    gh = walsh_hadamard(g).coef
    prod = fh * gh
    out = walsh_hadamard(prod).coef
    if (out % (1 << n)).any():
        raise AssertionError("convolution not divisible by 2**n; overflow?")
    return out >> n


def subcube_count(s: VertexSet, fixed_coords: Iterable[int], fixed_values: int) -> int:
    """Total multiplicity of members agreeing with fixed_values on fixed_coords.

    fixed_coords are 1-based; only the bits of fixed_values at those
    coordinates matter.
    """
    mask = 0
    for i in fixed_coords:
        if not 1 <= i <= s.n:
            raise ValueError(f"coordinate {i} out of range 1..{s.n}")
        mask |= 1 << (i - 1)
    pattern = fixed_values & mask
    arr = np.arange(1 << s.n, dtype=np.int64)
    sel = (arr & mask) == pattern
    return int(s.mult[sel].sum())


def pattern_counts(s: VertexSet, coords: Sequence[int]) -> np.ndarray:
    """Counts of members for every pattern on the given 1-based coordinates.

    Entry k corresponds to the pattern whose bit j is the value at coords[j].
    """
    idx = np.zeros(1 << s.n, dtype=np.int64)
    arr = np.arange(1 << s.n, dtype=np.int64)
    for j, i in enumerate(coords):
        idx |= ((arr >> (i - 1)) & 1) << j
    return np.bincount(idx, weights=s.mult, minlength=1 << len(coords)).astype(np.int64)
