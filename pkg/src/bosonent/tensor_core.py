"""
Multi-index combinatorics and the compact representation of symmetric tensors.

A symmetric tensor in S^m(C^n) is stored by its coordinates ``z_i`` in the
orthonormal symmetric basis ``ê_i = sqrt(c(i)) e_⊙i``, where ``i`` runs over
the nondecreasing multi-indices of length ``m`` with entries in ``1..n``,
ranked lexicographically.  With this choice the Hilbert--Schmidt inner product
is the plain coordinate inner product and the Haar measure on unit tensors is
the uniform measure on the coefficient sphere.

Multi-indices are 1-based everywhere they are visible to users (the
``MultiIndex`` type and the tensor file format).  Arrays returned by
``index_table`` and ``expand_full`` use numpy's 0-based axis positions.
"""
from __future__ import annotations

import functools
import itertools
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "UINT64_MAX",
    "EXPANSION_CAP",
    "MultiIndex",
    "Multiplicity",
    "SymmetricTensor",
    "BosonState",
    "TensorFileError",
    "dim_sym",
    "multiplicity",
    "rank",
    "unrank",
    "ascending_of",
    "multi_indices",
    "index_table",
    "hs_inner",
    "expand_full",
    "symmetrize",
    "boson_distance",
    "basis_tensor",
    "product_tensor",
    "read_tensor",
    "write_tensor",
    "format_tensor",
    "parse_tensor",
]

UINT64_MAX = 2**64 - 1
EXPANSION_CAP = 2**20


def _check_uint64(value: int, what: str) -> int:
    if value > UINT64_MAX:
        raise OverflowError(f"{what} = {value} does not fit in 64 bits")
    return value


def dim_sym(n: int, m: int) -> int:
    """Dimension ``binomial(n+m-1, m)`` of the symmetric power S^m(C^n).

    Raises OverflowError when the result exceeds the unsigned 64-bit range.
    """
    if n < 1 or m < 1:
        raise ValueError(f"dim_sym needs n >= 1 and m >= 1, got n={n}, m={m}")
    return _check_uint64(math.comb(n + m - 1, m), f"dim_sym({n}, {m})")


@dataclass(frozen=True)
class MultiIndex:
    """A nondecreasing tuple in [n]^{↑m}, entries 1-based."""

    entries: tuple[int, ...]
    n: int

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)
        if not entries:
            raise ValueError("a multi-index needs at least one entry")
        if self.n < 1:
            raise ValueError(f"n must be positive, got {self.n}")
        for a, b in zip(entries, entries[1:]):
            if a > b:
                raise ValueError(f"multi-index {entries} is not nondecreasing")
        if entries[0] < 1 or entries[-1] > self.n:
            raise ValueError(f"multi-index {entries} has entries outside 1..{self.n}")

    @property
    def m(self) -> int:
        return len(self.entries)

    def block_sizes(self) -> list[int]:
        """Sizes of the blocks of equal entries, in order of first appearance."""
        return [len(list(g)) for _, g in itertools.groupby(self.entries)]

    def counts(self) -> list[int]:
        """Occupation numbers: how often each value 1..n occurs."""
        out = [0] * self.n
        for e in self.entries:
            out[e - 1] += 1
        return out


@dataclass(frozen=True)
class Multiplicity:
    """The multinomial c(i) = m!/(m_1!...m_b!) together with its block sizes.

    ``exact`` is False only when the value exceeded 64 bits and was returned
    as a floating point approximation on request.
    """

    value: int | float
    block_sizes: tuple[int, ...]
    exact: bool = True


def _multinomial(block_sizes: Sequence[int]) -> int:
    # product of binomials keeps every intermediate an exact integer
    total = 0
    value = 1
    for b in block_sizes:
        total += b
        value *= math.comb(total, b)
    return value


def _log_multinomial(block_sizes: Sequence[int]) -> float:
    m = sum(block_sizes)
    return math.lgamma(m + 1) - sum(math.lgamma(b + 1) for b in block_sizes)


def multiplicity(i: MultiIndex, allow_inexact: bool = False) -> Multiplicity:
    """Number of full indices j in [n]^m with ↑(j) = i.

    Values beyond the unsigned 64-bit range raise OverflowError unless
    ``allow_inexact`` is set, in which case a float computed through
    log-gamma is returned with ``exact=False``.
    """
    blocks = tuple(i.block_sizes())
    value = _multinomial(blocks)
    if value > UINT64_MAX:
        if not allow_inexact:
            raise OverflowError(f"c({i.entries}) exceeds 64 bits")
        return Multiplicity(math.exp(_log_multinomial(blocks)), blocks, exact=False)
    return Multiplicity(value, blocks)


def _completions(n_values: int, length: int) -> int:
    # nondecreasing sequences of given length drawn from n_values symbols
    if length == 0:
        return 1
    return math.comb(n_values + length - 1, length)


def rank(i: MultiIndex) -> int:
    """Lexicographic position of ``i`` among all of [n]^{↑m}, starting at 0."""
    n, m = i.n, i.m
    r = 0
    low = 1
    for k, e in enumerate(i.entries):
        remaining = m - k - 1
        for x in range(low, e):
            r += _completions(n - x + 1, remaining)
        low = e
    return r


def unrank(r: int, n: int, m: int) -> MultiIndex:
    """Inverse of :func:`rank`."""
    d = dim_sym(n, m)
    if not 0 <= r < d:
        raise IndexError(f"rank {r} outside 0..{d - 1} for n={n}, m={m}")
    entries = []
    low = 1
    for k in range(m):
        remaining = m - k - 1
        x = low
        while True:
            block = _completions(n - x + 1, remaining)
            if r < block:
                break
            r -= block
            x += 1
        entries.append(x)
        low = x
    return MultiIndex(tuple(entries), n)


def ascending_of(j: Sequence[int], n: int) -> MultiIndex:
    """The sorted multi-index ↑(j) of a full index ``j`` in [n]^m."""
    j = tuple(int(x) for x in j)
    if any(x < 1 or x > n for x in j):
        raise ValueError(f"index {j} has entries outside 1..{n}")
    return MultiIndex(tuple(sorted(j)), n)


def multi_indices(n: int, m: int) -> Iterable[MultiIndex]:
    """All of [n]^{↑m} in rank order."""
    for combo in itertools.combinations_with_replacement(range(1, n + 1), m):
        yield MultiIndex(combo, n)


@dataclass(frozen=True)
class IndexTable:
    """Cached per-(n, m) arrays used by the vectorized tensor operations.

    entries : (d, m) int array, 1-based nondecreasing multi-indices in rank order
    counts  : (d, n) int array of occupation numbers
    log_c   : (d,) log of the multiplicities c(i)
    sqrt_c  : (d,) sqrt(c(i)) as floats (may be inf for astronomically large c)
    """

    n: int
    m: int
    entries: np.ndarray
    counts: np.ndarray
    log_c: np.ndarray
    sqrt_c: np.ndarray


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@functools.lru_cache(maxsize=64)
def index_table(n: int, m: int) -> IndexTable:
    d = dim_sym(n, m)
    entries = np.fromiter(
        itertools.chain.from_iterable(
            itertools.combinations_with_replacement(range(1, n + 1), m)
        ),
        dtype=np.int64,
        count=d * m,
    ).reshape(d, m)
    counts = np.zeros((d, n), dtype=np.int64)
    for p in range(n):
        counts[:, p] = (entries == p + 1).sum(axis=1)
    lg = np.array([math.lgamma(k + 1) for k in range(m + 1)])
    log_c = math.lgamma(m + 1) - lg[counts].sum(axis=1)
    if m <= 170:
        # exact integers rounded once are more accurate than exp(lgamma)
        sqrt_c = np.sqrt(np.array([float(_multinomial([c for c in row if c])) for row in counts]))
    else:
        sqrt_c = np.exp(0.5 * log_c)
    return IndexTable(n, m, _freeze(entries), _freeze(counts), _freeze(log_c), _freeze(sqrt_c))


@dataclass(frozen=True, eq=False)
class SymmetricTensor:
    """Symmetric tensor in S^m(C^n), stored in the orthonormal basis ê_⊙i.

    ``coeffs[r]`` is the coordinate of the basis vector whose multi-index has
    rank ``r``.  The array is copied and made read-only on construction.
    """

    n: int
    m: int
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.n < 1 or self.m < 1:
            raise ValueError(f"need n >= 1 and m >= 1, got n={self.n}, m={self.m}")
        c = np.array(self.coeffs, dtype=np.complex128).reshape(-1)
        d = dim_sym(self.n, self.m)
        if c.shape != (d,):
            raise ValueError(f"expected {d} coefficients for n={self.n}, m={self.m}, got {c.size}")
        object.__setattr__(self, "coeffs", _freeze(c))

    @property
    def dim(self) -> int:
        return self.coeffs.size

    def norm(self) -> float:
        """Hilbert--Schmidt norm."""
        return float(np.linalg.norm(self.coeffs))

    def normalized(self) -> SymmetricTensor:
        nrm = self.norm()
        if nrm == 0:
            raise ValueError("cannot normalize the zero tensor")
        return SymmetricTensor(self.n, self.m, self.coeffs / nrm)

    def scaled(self, factor: complex) -> SymmetricTensor:
        return SymmetricTensor(self.n, self.m, self.coeffs * factor)

    def coefficient(self, i: MultiIndex) -> complex:
        if (i.n, i.m) != (self.n, self.m):
            raise ValueError("multi-index shape does not match tensor")
        return complex(self.coeffs[rank(i)])

    def symmetric_coefficients(self) -> np.ndarray:
        """Coefficients T'_i in the unnormalized basis e_⊙i, i.e. sqrt(c(i)) z_i."""
        return index_table(self.n, self.m).sqrt_c * self.coeffs

    def allclose(self, other: SymmetricTensor, atol: float = 1e-12) -> bool:
        return (self.n, self.m) == (other.n, other.m) and bool(
            np.allclose(self.coeffs, other.coeffs, rtol=0, atol=atol)
        )


class BosonState(SymmetricTensor):
    """A unit-norm symmetric tensor, understood up to a global phase."""

    NORM_TOL = 1e-12

    def __post_init__(self):
        super().__post_init__()
        nrm = self.norm()
        if abs(nrm - 1.0) > self.NORM_TOL:
            raise ValueError(f"Boson state must have unit norm, got {nrm!r}")

    @classmethod
    def from_tensor(cls, tensor: SymmetricTensor, normalize: bool = False) -> BosonState:
        t = tensor.normalized() if normalize else tensor
        return cls(t.n, t.m, t.coeffs)


def _same_shape(S: SymmetricTensor, T: SymmetricTensor) -> None:
    if (S.n, S.m) != (T.n, T.m):
        raise ValueError(f"shape mismatch: (n, m) = {(S.n, S.m)} vs {(T.n, T.m)}")


def hs_inner(S: SymmetricTensor, T: SymmetricTensor) -> complex:
    """Hilbert--Schmidt inner product, conjugate-linear in the first argument."""
    _same_shape(S, T)
    return complex(np.vdot(S.coeffs, T.coeffs))


def boson_distance(psi: SymmetricTensor, phi: SymmetricTensor) -> float:
    """Phase-quotient distance min_ζ ||S - ζT|| = sqrt(2 - 2|<S, T>|)."""
    _same_shape(psi, phi)
    overlap = abs(np.vdot(psi.coeffs, phi.coeffs))
    return math.sqrt(max(0.0, 2.0 - 2.0 * overlap))


def _check_cap(n: int, m: int, cap: int) -> None:
    size = n**m
    if size > cap:
        raise MemoryError(f"full expansion needs n^m = {size} entries, above cap {cap}")


@functools.lru_cache(maxsize=16)
def _orbit_ranks(n: int, m: int) -> np.ndarray:
    # rank of ↑(j) for every full index j, in C order of the n^m array
    full = np.array(list(itertools.product(range(n), repeat=m)), dtype=np.int64).reshape(-1, m)
    full.sort(axis=1)
    counts = np.zeros((full.shape[0], n), dtype=np.int64)
    for p in range(n):
        counts[:, p] = (full == p).sum(axis=1)
    table = index_table(n, m)
    lookup = {tuple(row): r for r, row in enumerate(table.counts.tolist())}
    return _freeze(np.array([lookup[tuple(row)] for row in counts.tolist()], dtype=np.int64))


def expand_full(T: SymmetricTensor, cap: int = EXPANSION_CAP) -> np.ndarray:
    """Dense coefficients T_j = z_{↑j}/sqrt(c(↑j)) as an array of shape (n,)*m."""
    _check_cap(T.n, T.m, cap)
    table = index_table(T.n, T.m)
    scaled = T.coeffs / table.sqrt_c
    return scaled[_orbit_ranks(T.n, T.m)].reshape((T.n,) * T.m)


def symmetrize(full: np.ndarray, cap: int = EXPANSION_CAP) -> SymmetricTensor:
    """Symmetric projection P_m of a dense tensor, returned in ê coordinates."""
    full = np.asarray(full, dtype=np.complex128)
    m = full.ndim
    n = full.shape[0]
    if m < 1 or any(s != n for s in full.shape):
        raise ValueError(f"expected a cubical array, got shape {full.shape}")
    _check_cap(n, m, cap)
    orbits = _orbit_ranks(n, m)
    d = dim_sym(n, m)
    flat = full.reshape(-1)
    sums = np.bincount(orbits, weights=flat.real, minlength=d) + 1j * np.bincount(
        orbits, weights=flat.imag, minlength=d
    )
    # z_i = sqrt(c) * (orbit mean) = (orbit sum) / sqrt(c)
    return SymmetricTensor(n, m, sums / index_table(n, m).sqrt_c)


def basis_tensor(i: MultiIndex) -> BosonState:
    """The orthonormal basis state ê_⊙i."""
    z = np.zeros(dim_sym(i.n, i.m), dtype=np.complex128)
    z[rank(i)] = 1.0
    return BosonState(i.n, i.m, z)


def product_tensor(v: Sequence[complex], m: int) -> SymmetricTensor:
    """The rank-one tensor v^{⊗m} in ê coordinates: z_i = sqrt(c(i)) prod_k v_{i_k}."""
    v = np.asarray(v, dtype=np.complex128)
    table = index_table(v.size, m)
    mono = np.prod(v[None, :] ** table.counts, axis=1)
    return SymmetricTensor(v.size, m, table.sqrt_c * mono)


# --- file format -----------------------------------------------------------

_HEADER = re.compile(r"^symtensor\s+n=(\d+)\s+m=(\d+)\s+basis=orthonormal\s*$")


class TensorFileError(ValueError):
    """Malformed tensor file; ``lineno`` is 1-based."""

    def __init__(self, message: str, lineno: int):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


def format_tensor(T: SymmetricTensor) -> str:
    table = index_table(T.n, T.m)
    lines = [f"symtensor n={T.n} m={T.m} basis=orthonormal"]
    for r in np.flatnonzero(T.coeffs):
        z = T.coeffs[r]
        idx = " ".join(str(e) for e in table.entries[r])
        lines.append(f"{idx} {z.real:.16e} {z.imag:.16e}")
    return "\n".join(lines) + "\n"


def parse_tensor(text: str) -> SymmetricTensor:
    lines = text.splitlines()
    if not lines:
        raise TensorFileError("empty file", 1)
    header = _HEADER.match(lines[0].strip())
    if header is None:
        raise TensorFileError(f"bad header {lines[0]!r}", 1)
    n, m = int(header.group(1)), int(header.group(2))
    if n < 1 or m < 1:
        raise TensorFileError("n and m must be positive", 1)
    coeffs = np.zeros(dim_sym(n, m), dtype=np.complex128)
    seen: set[int] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != m + 2:
            raise TensorFileError(f"expected {m} indices and 2 numbers, got {len(parts)} fields", lineno)
        try:
            idx = tuple(int(p) for p in parts[:m])
            re_, im_ = float(parts[m]), float(parts[m + 1])
        except ValueError as exc:
            raise TensorFileError(str(exc), lineno) from None
        try:
            mi = MultiIndex(idx, n)
        except ValueError as exc:
            raise TensorFileError(str(exc), lineno) from None
        r = rank(mi)
        if r in seen:
            raise TensorFileError(f"duplicate index {idx}", lineno)
        seen.add(r)
        coeffs[r] = complex(re_, im_)
    return SymmetricTensor(n, m, coeffs)


def read_tensor(path: str | Path) -> SymmetricTensor:
    return parse_tensor(Path(path).read_text())


def write_tensor(T: SymmetricTensor, path: str | Path) -> None:
    Path(path).write_text(format_tensor(T))
