"""Dense exact linear algebra over the prime field Z/pZ.

Matrices are stored as read-only numpy int64 arrays with every entry reduced
to [0, p).  For p < 2**31 a single product of two residues fits in an int64,
so Gaussian elimination runs vectorised without ever leaving exact integer
arithmetic.  Matrix products guard against accumulator overflow and fall back
to Python-int (object dtype) arithmetic when p is large enough that a dot
product could wrap.

Rank computation has a dedicated GF(2) fast path (rows packed into Python
integers, eliminated with xor); it is observationally identical to the generic
elimination and both are cross-checked in the test-suite.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    InvalidShapeError,
    NotPrimeError,
    SingularBlockError,
)

_MAX_PRIME = 2**31


def is_prime(n: int) -> bool:
    """Deterministic primality test by trial division (fine for n < 2**31)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _check_prime(p: int) -> None:
    if not isinstance(p, int) or isinstance(p, bool):
        raise NotPrimeError(f"modulus must be an int, got {type(p).__name__}")
    if p >= _MAX_PRIME:
        raise NotPrimeError(f"modulus must be < 2**31, got {p}")
    if not is_prime(p):
        raise NotPrimeError(f"modulus must be prime, got {p}")


class PrimeFieldMatrix:
    """An immutable matrix over Z/pZ with entries stored in [0, p).

    The constructor validates the modulus (prime, < 2**31) and reduces the
    given entries; the backing array is marked read-only so the many pure
    functions in this module cannot mutate a shared value by accident.
    """

    __slots__ = ("p", "entries")

    def __init__(self, p: int, entries) -> None:
        _check_prime(p)
        raw = np.asarray(entries)
        if raw.dtype.kind not in ("i", "u"):
            raise InvalidShapeError(
                f"entries must be integers, got dtype {raw.dtype}"
            )
        arr = raw.astype(np.int64)
        if arr.ndim != 2:
            raise InvalidShapeError(f"entries must be 2-d, got shape {arr.shape}")
        arr = np.mod(arr, p)
        arr.flags.writeable = False
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "entries", arr)

    def __setattr__(self, name, value):  # pragma: no cover - guard rail
        raise AttributeError("PrimeFieldMatrix is immutable")

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, PrimeFieldMatrix):
            return NotImplemented
        return self.p == other.p and np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash((self.p, self.entries.shape, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"PrimeFieldMatrix(p={self.p}, shape={self.rows}x{self.cols})"

    def render(self) -> str:
        """Small debugging aid: residues as aligned rows of text."""
        width = len(str(self.p - 1))
        return "\n".join(
            " ".join(f"{int(e):>{width}}" for e in row) for row in self.entries
        )


@dataclass(frozen=True)
class IndexSet:
    """A strictly increasing tuple of row/column indices below a fixed bound.

    Used to name the block eliminated by a Schur complement; the complementary
    indices (the block that survives) are available via :meth:`complement`.
    """

    indices: tuple[int, ...]
    bound: int

    def __post_init__(self):
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if self.bound < 0:
            raise InvalidShapeError(f"bound must be >= 0, got {self.bound}")
        prev = -1
        for i in self.indices:
            if i <= prev:
                raise InvalidShapeError(
                    f"indices must be strictly increasing, got {self.indices}"
                )
            prev = i
        if self.indices and self.indices[-1] >= self.bound:
            raise InvalidShapeError(
                f"index {self.indices[-1]} out of range for bound {self.bound}"
            )

    def complement(self) -> "IndexSet":
        inside = set(self.indices)
        rest = tuple(i for i in range(self.bound) if i not in inside)
        return IndexSet(rest, self.bound)

    def __len__(self) -> int:
        return len(self.indices)


def submatrix(m: PrimeFieldMatrix, rows, cols) -> PrimeFieldMatrix:
    """Extract the submatrix on the given row and column indices (in order)."""
    rows = tuple(rows)
    cols = tuple(cols)
    for r in rows:
        if not 0 <= r < m.rows:
            raise DimensionMismatchError(f"row index {r} out of range for {m!r}")
    for c in cols:
        if not 0 <= c < m.cols:
            raise DimensionMismatchError(f"column index {c} out of range for {m!r}")
    block = m.entries[np.ix_(rows, cols)] if rows and cols else np.zeros(
        (len(rows), len(cols)), dtype=np.int64
    )
    return PrimeFieldMatrix(m.p, block)


def _eliminate(a: np.ndarray, p: int, limit_cols: int | None = None):
    """In-place Gauss-Jordan elimination mod p; returns the pivot columns.

    Pivoting is deterministic (first nonzero entry at or below the current
    row), so every result downstream of this routine is bit-for-bit
    reproducible.  Only the first ``limit_cols`` columns are searched for
    pivots; trailing columns (e.g. an augmented identity) are just carried
    along by the row operations.
    """
    rows, cols = a.shape
    if limit_cols is None:
        limit_cols = cols
    pivot_cols: list[int] = []
    r = 0
    for c in range(limit_cols):
        if r == rows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        pr = r + int(hits[0])
        if pr != r:
            a[[r, pr]] = a[[pr, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        nz = np.nonzero(col)[0]
        if nz.size:
            a[nz] = (a[nz] - np.outer(col[nz], a[r])) % p
        pivot_cols.append(c)
        r += 1
    return pivot_cols


def _pack_gf2_rows(bits: np.ndarray) -> list[int]:
    """Pack a 0/1 int matrix into one Python integer per row (bit j = col j)."""
    packed = np.packbits(bits.astype(np.uint8), axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def _rank_gf2(bits: np.ndarray) -> int:
    """Rank over GF(2) by xor-elimination on bit-packed rows."""
    pivots: dict[int, int] = {}
    rank = 0
    for row in _pack_gf2_rows(bits):
        while row:
            low = (row & -row).bit_length() - 1
            piv = pivots.get(low)
            if piv is None:
                pivots[low] = row
                rank += 1
                break
            row ^= piv
    return rank


def _rank_generic(m: PrimeFieldMatrix) -> int:
    work = m.entries.copy()
    return len(_eliminate(work, m.p))


def rank_mod_p(m: PrimeFieldMatrix) -> int:
    """Rank of ``m`` over Z/pZ."""
    if m.p == 2:
        return _rank_gf2(m.entries)
    return _rank_generic(m)


def corank_mod_p(m: PrimeFieldMatrix) -> int:
    """min(rows, cols) minus the rank; for square matrices the nullity."""
    return min(m.rows, m.cols) - rank_mod_p(m)


def invert_mod_p(m: PrimeFieldMatrix) -> PrimeFieldMatrix:
    """Inverse of a square matrix over Z/pZ.

    Raises :class:`SingularBlockError` when no inverse exists.
    """
    if m.rows != m.cols:
        raise DimensionMismatchError(f"cannot invert non-square {m!r}")
    n = m.rows
    aug = np.concatenate(
        [m.entries.copy(), np.eye(n, dtype=np.int64)], axis=1
    )
    pivots = _eliminate(aug, m.p, limit_cols=n)
    if len(pivots) != n:
        raise SingularBlockError(f"matrix of rank {len(pivots)} < {n} is singular")
    return PrimeFieldMatrix(m.p, aug[:, n:])


def _matmul_mod(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Exact ``(a @ b) % p`` for residue matrices.

    int64 accumulators hold k products of size < p**2, so the fast path is
    valid only while k * (p-1)**2 < 2**63; beyond that we compute with Python
    ints (numpy object dtype), which never overflow.
    """
    inner = a.shape[1]
    if inner == 0:
        return np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    if inner * (p - 1) ** 2 < 2**63:
        return (a @ b) % p
    prod = a.astype(object) @ b.astype(object)
    return (prod % p).astype(np.int64)


def schur_complement(m: PrimeFieldMatrix, s: IndexSet) -> PrimeFieldMatrix:
    """Schur complement of ``m`` with respect to the index block ``s``.

    With T the complement of S, the result is
    ``A[T,T] - A[T,S] @ inverse(A[S,S]) @ A[S,T]``, a |T| x |T| matrix over the
    same field.  When ``A[S,S]`` is invertible, block elimination shows the
    complement has the same corank as ``m`` -- this is what makes it useful
    for collapsing a large matrix onto a small interesting block.

    Raises :class:`SingularBlockError` if ``A[S,S]`` is singular and
    :class:`DimensionMismatchError` if ``m`` is not square of size
    ``s.bound``.
    """
    if m.rows != m.cols:
        raise DimensionMismatchError(f"Schur complement needs a square matrix, got {m!r}")
    if s.bound != m.rows:
        raise DimensionMismatchError(
            f"index bound {s.bound} does not match matrix size {m.rows}"
        )
    t = s.complement()
    if len(s) == 0:
        return PrimeFieldMatrix(m.p, m.entries)
    a_ss = submatrix(m, s.indices, s.indices)
    inv_ss = invert_mod_p(a_ss)
    a_tt = submatrix(m, t.indices, t.indices).entries
    a_ts = submatrix(m, t.indices, s.indices).entries
    a_st = submatrix(m, s.indices, t.indices).entries
    cross = _matmul_mod(_matmul_mod(a_ts, inv_ss.entries, m.p), a_st, m.p)
    return PrimeFieldMatrix(m.p, (a_tt - cross) % m.p)
