"""Exact linear algebra over prime fields, organized by bidegree.

Everything downstream (cohomology of endomorphism complexes, homotopy
transfer, Massey powers) reduces to dense elimination on small blocks
indexed by a bidegree (homological degree, internal degree).  Matrices are
numpy int64 arrays with entries in [0, p); pivoting is greedy in the given
basis order, so every choice made here is deterministic and reproducible.

Conventions:
  * matrices act on column vectors: out = M @ v (shape target x source);
  * a basis is a 2-D array whose *rows* are the basis vectors;
  * differentials lower homological degree s by one and preserve the
    internal degree w.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, NamedTuple

import numpy as np

__all__ = [
    "TruncationExceeded",
    "Bidegree",
    "GradedVectorSpace",
    "GradedMap",
    "inverse_table",
    "is_prime",
    "row_reduce",
    "rank_nullspace",
    "solve",
    "invert",
    "greedy_extend",
    "choose_complement",
    "PivotData",
]


class TruncationExceeded(Exception):
    """A computation left the degree window.

    Out-of-window values are unknown, never zero; the caller must enlarge
    the window instead of treating this as a vanishing result.
    """


# ---------------------------------------------------------------------------
# scalars
# ---------------------------------------------------------------------------

def is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@lru_cache(maxsize=None)
def inverse_table(p: int) -> np.ndarray:
    """Multiplicative inverses mod p as an int64 array; index 0 holds 0."""
    if not is_prime(p):
        raise ValueError(f"modulus must be prime, got {p}")
    inv = np.zeros(p, dtype=np.int64)
    for a in range(1, p):
        inv[a] = pow(a, p - 2, p)
    return inv


def _as_matrix(M, p: int) -> np.ndarray:
    A = np.array(M, dtype=np.int64, copy=True)
    if A.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={A.ndim}")
    return A % p


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PivotData:
    """Row-reduction certificate: transform @ matrix == rref (mod p)."""

    rref: np.ndarray
    transform: np.ndarray
    pivot_cols: tuple[int, ...]
    prime: int

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)


def row_reduce(M, p: int) -> PivotData:
    """Reduced row echelon form with greedy left-to-right pivoting.

    Returns the rref R, an invertible transform T with T @ M == R mod p,
    and the pivot columns.  The pivot rule (first nonzero entry in the
    first unused column) is what keeps splittings deterministic.
    """
    A = _as_matrix(M, p)
    rows, cols = A.shape
    T = np.eye(rows, dtype=np.int64)
    inv = inverse_table(p)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(A[r:, c])[0]
        if nz.size == 0:
            continue
        pr = r + int(nz[0])
        if pr != r:
            A[[r, pr]] = A[[pr, r]]
            T[[r, pr]] = T[[pr, r]]
        scale = inv[A[r, c]]
        A[r] = (A[r] * scale) % p
        T[r] = (T[r] * scale) % p
        other = np.nonzero(A[:, c])[0]
        other = other[other != r]
        if other.size:
            factors = A[other, c][:, None]
            A[other] = (A[other] - factors * A[r]) % p
            T[other] = (T[other] - factors * T[r]) % p
        pivots.append(c)
        r += 1
    return PivotData(rref=A, transform=T, pivot_cols=tuple(pivots), prime=p)


def rank_nullspace(M, p: int) -> tuple[int, np.ndarray, PivotData]:
    """Rank and nullspace basis of M over F_p, plus solve data.

    The nullspace basis rows are in the standard echelon form: one row per
    free column, with a 1 in that column and pivot-column entries filled in
    by back substitution.  Deterministic for a fixed input.
    """
    pd = row_reduce(M, p)
    cols = pd.rref.shape[1]
    free = [c for c in range(cols) if c not in pd.pivot_cols]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for r, pc in enumerate(pd.pivot_cols):
            basis[k, pc] = (-pd.rref[r, fc]) % p
    return pd.rank, basis, pd


def solve(pd: PivotData, b) -> np.ndarray | None:
    """One solution of M x = b from row_reduce(M) data, or None."""
    p = pd.prime
    b = np.asarray(b, dtype=np.int64) % p
    y = (pd.transform @ b) % p
    rank = pd.rank
    if np.any(y[rank:] % p):
        return None
    x = np.zeros(pd.rref.shape[1], dtype=np.int64)
    for r, c in enumerate(pd.pivot_cols):
        x[c] = y[r] % p
    return x


def invert(M, p: int) -> np.ndarray:
    """Inverse of a square matrix over F_p; raises ValueError if singular."""
    A = _as_matrix(M, p)
    n, m = A.shape
    if n != m:
        raise ValueError(f"square matrix required, got {A.shape}")
    pd = row_reduce(A, p)
    if pd.rank != n:
        raise ValueError(f"matrix of rank {pd.rank} < {n} is not invertible")
    return pd.transform % p


def greedy_extend(basis: np.ndarray, candidates: np.ndarray, p: int) -> list[int]:
    """Indices of candidate rows that greedily extend basis to a larger span.

    Scans candidates in order and keeps each row that increases the rank,
    stopping once the combined span fills the ambient space.  Returns the
    kept candidate indices.
    """
    candidates = _as_matrix(candidates, p)
    n = candidates.shape[1]
    basis = np.array(basis, dtype=np.int64).reshape(-1, n) % p
    inv = inverse_table(p)
    # mutually reduced rows: each row is zero at every other row's lead column
    rows: list[np.ndarray] = []
    for r in basis:
        v = _reduce_against(rows, r, p)
        if np.any(v):
            _append_reduced(rows, v, p, inv)
    chosen: list[int] = []
    for idx in range(candidates.shape[0]):
        if len(rows) == n:
            break
        v = _reduce_against(rows, candidates[idx], p)
        if np.any(v):
            _append_reduced(rows, v, p, inv)
            chosen.append(idx)
    return chosen


def _normalize_row(v: np.ndarray, p: int, inv: np.ndarray) -> np.ndarray:
    c = int(np.argmax(v != 0))
    return (v * inv[v[c]]) % p


def _reduce_against(rows: list[np.ndarray], v: np.ndarray, p: int) -> np.ndarray:
    # single pass is exact because rows are kept mutually reduced
    v = np.array(v, dtype=np.int64) % p
    for r in rows:
        c = int(np.argmax(r != 0))
        if v[c]:
            v = (v - v[c] * r) % p
    return v


def _append_reduced(rows: list[np.ndarray], v: np.ndarray, p: int, inv: np.ndarray) -> None:
    v = _normalize_row(v, p, inv)
    c = int(np.argmax(v != 0))
    for i, r in enumerate(rows):
        if r[c]:
            rows[i] = (r - r[c] * v) % p
    rows.append(v)


def choose_complement(W, ambient_dim: int, p: int, order: list[int] | None = None) -> tuple[np.ndarray, list[int]]:
    """Standard-basis complement of the span of W inside F_p^ambient_dim.

    Greedy: walk the standard basis in the given order (default 0..n-1) and
    keep the vectors that grow the span.  Returns (rows, indices); the rows
    together with a basis of W span the ambient space.
    """
    W = np.array(W, dtype=np.int64).reshape(-1, ambient_dim) % p
    if order is None:
        order = list(range(ambient_dim))
    eye = np.eye(ambient_dim, dtype=np.int64)
    candidates = eye[order]
    chosen = greedy_extend(W, candidates, p)
    idx = [order[k] for k in chosen]
    return eye[idx], idx


# ---------------------------------------------------------------------------
# bigraded spaces and maps
# ---------------------------------------------------------------------------

class Bidegree(NamedTuple):
    """(homological degree s, internal degree w); differentials shift by (-1, 0)."""

    s: int
    w: int

    def __add__(self, other):  # type: ignore[override]
        return Bidegree(self.s + other[0], self.w + other[1])


@dataclass
class GradedVectorSpace:
    """Finite bigraded F_p vector space with ordered basis labels per bidegree.

    The window gives inclusive bounds on the homological degree s.  Inside
    the window an absent bidegree means a zero space; outside it nothing is
    known.  Treated as immutable once built.
    """

    prime: int
    window: tuple[int, int]
    blocks: dict[Bidegree, list[str]]
    _index: dict[str, tuple[Bidegree, int]] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        if not is_prime(self.prime):
            raise ValueError(f"prime required, got {self.prime}")
        lo, hi = self.window
        if lo > hi:
            raise ValueError(f"empty window {self.window}")
        clean: dict[Bidegree, list[str]] = {}
        for bd, labels in self.blocks.items():
            bd = Bidegree(*bd)
            if not lo <= bd.s <= hi:
                raise ValueError(f"bidegree {bd} outside window {self.window}")
            if labels:
                clean[bd] = list(labels)
        self.blocks = clean
        self._index = {}
        for bd, labels in self.blocks.items():
            for i, lab in enumerate(labels):
                if lab in self._index:
                    raise ValueError(f"duplicate basis label {lab!r}")
                self._index[lab] = (bd, i)

    def in_window(self, s: int) -> bool:
        return self.window[0] <= s <= self.window[1]

    def require_in_window(self, s: int) -> None:
        if not self.in_window(s):
            raise TruncationExceeded(
                f"homological degree {s} outside window {self.window}")

    def dim(self, bd) -> int:
        bd = Bidegree(*bd)
        self.require_in_window(bd.s)
        return len(self.blocks.get(bd, ()))

    def labels(self, bd) -> list[str]:
        bd = Bidegree(*bd)
        self.require_in_window(bd.s)
        return self.blocks.get(bd, [])

    def bidegree_of(self, label: str) -> Bidegree:
        return self._index[label][0]

    def index_of(self, label: str) -> int:
        return self._index[label][1]

    def has_label(self, label: str) -> bool:
        return label in self._index

    def bidegrees(self) -> Iterator[Bidegree]:
        return iter(sorted(self.blocks))

    def total_dim(self) -> int:
        return sum(len(v) for v in self.blocks.values())

    def restricted(self, window: tuple[int, int]) -> "GradedVectorSpace":
        """The same space seen through a narrower window."""
        lo, hi = window
        if lo < self.window[0] or hi > self.window[1]:
            raise ValueError(f"window {window} not inside {self.window}")
        blocks = {bd: labs for bd, labs in self.blocks.items()
                  if lo <= bd.s <= hi}
        return GradedVectorSpace(prime=self.prime, window=window,
                                 blocks=blocks)

    # -- converters between sparse dict vectors and dense block arrays ----

    def to_array(self, bd, vec: dict[str, int]) -> np.ndarray:
        bd = Bidegree(*bd)
        arr = np.zeros(self.dim(bd), dtype=np.int64)
        for lab, c in vec.items():
            where, i = self._index[lab]
            if where != bd:
                raise ValueError(f"label {lab!r} not in bidegree {bd}")
            arr[i] = c % self.prime
        return arr

    def to_dict(self, bd, arr: np.ndarray) -> dict[str, int]:
        bd = Bidegree(*bd)
        labels = self.labels(bd)
        return {labels[i]: int(c % self.prime)
                for i, c in enumerate(arr) if c % self.prime}


@dataclass
class GradedMap:
    """Degree-homogeneous linear map between graded spaces, stored blockwise.

    blocks[bd] maps the source block at bd to the target block at bd+shift;
    missing blocks are zero when both endpoints are in-window.
    """

    source: GradedVectorSpace
    target: GradedVectorSpace
    shift: tuple[int, int]
    blocks: dict[Bidegree, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for bd, M in list(self.blocks.items()):
            bd = Bidegree(*bd)
            out = bd + self.shift
            expect = (self.target.dim(out), self.source.dim(bd))
            if M.shape != expect:
                raise ValueError(
                    f"block {bd}: shape {M.shape}, expected {expect}")
            self.blocks[bd] = M % self.source.prime

    def block(self, bd) -> np.ndarray:
        bd = Bidegree(*bd)
        out = bd + self.shift
        M = self.blocks.get(bd)
        if M is None:
            M = np.zeros((self.target.dim(out), self.source.dim(bd)),
                         dtype=np.int64)
        return M

    def apply(self, bd, vec: dict[str, int]) -> tuple[Bidegree, dict[str, int]]:
        bd = Bidegree(*bd)
        out = bd + self.shift
        arr = self.source.to_array(bd, vec)
        res = (self.block(bd) @ arr) % self.source.prime
        return out, self.target.to_dict(out, res)
