"""Distance functions over binary vectors, token sequences and real vectors,
plus condensed pairwise-distance matrices.

All pairwise builders produce the same condensed layout used by
:class:`DistanceMatrix`: entry (i, j) with i < j sits at index
``i * n - i * (i + 1) // 2 + (j - i - 1)`` (row-major upper triangle).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from numba import njit

__all__ = [
    "hamming",
    "levenshtein",
    "levenshtein_normalized",
    "cosine_distance",
    "euclidean_distance",
    "DistanceMatrix",
    "pairwise_matrix",
    "hamming_matrix",
    "levenshtein_matrix",
    "cosine_matrix",
    "euclidean_matrix",
    "condensed_index",
    "condensed_pair",
]


def hamming(a: Sequence[int], b: Sequence[int]) -> int:
    """Number of positions at which two equal-length vectors differ."""
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(1 for x, y in zip(a, b) if x != y)


def levenshtein(x: Sequence, y: Sequence) -> int:
    """Minimal number of token insertions, deletions and substitutions
    transforming ``x`` into ``y``.

    Tokens are compared by equality; empty sequences are allowed.
    """
    if len(x) < len(y):
        x, y = y, x
    if not y:
        return len(x)
    prev = list(range(len(y) + 1))
    for i, tx in enumerate(x, start=1):
        cur = [i] + [0] * len(y)
        for j, ty in enumerate(y, start=1):
            cur[j] = min(
                prev[j] + 1,
                cur[j - 1] + 1,
                prev[j - 1] + (tx != ty),
            )
        prev = cur
    return prev[-1]


def levenshtein_normalized(x: Sequence, y: Sequence) -> float:
    """Levenshtein distance divided by the length of the longer sequence.

    Defined as 0.0 when both sequences are empty. Result lies in [0, 1].
    """
    longest = max(len(x), len(y))
    if longest == 0:
        return 0.0
    return levenshtein(x, y) / longest


def cosine_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """1 minus the cosine similarity of two vectors; lies in [0, 2]."""
    av = np.asarray(a, dtype=float)
    bv = np.asarray(b, dtype=float)
    if av.shape != bv.shape or av.ndim != 1:
        raise ValueError(f"dimension mismatch: {av.shape} vs {bv.shape}")
    na = np.linalg.norm(av)
    nb = np.linalg.norm(bv)
    if na == 0.0 or nb == 0.0:
        raise ValueError("cosine distance undefined for zero-norm vector")
    return float(1.0 - (av @ bv) / (na * nb))


def euclidean_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """Euclidean norm of the difference of two equal-dimension vectors."""
    av = np.asarray(a, dtype=float)
    bv = np.asarray(b, dtype=float)
    if av.shape != bv.shape or av.ndim != 1:
        raise ValueError(f"dimension mismatch: {av.shape} vs {bv.shape}")
    return float(np.linalg.norm(av - bv))


def condensed_index(i: int, j: int, n: int) -> int:
    """Condensed index of pair (i, j), i < j, for n items."""
    if not 0 <= i < j < n:
        raise ValueError(f"bad pair ({i}, {j}) for n={n}")
    return i * n - i * (i + 1) // 2 + (j - i - 1)


def condensed_pair(k: int, n: int) -> tuple[int, int]:
    """Inverse of :func:`condensed_index`."""
    if not 0 <= k < n * (n - 1) // 2:
        raise ValueError(f"bad condensed index {k} for n={n}")
    i = int(n - 2 - np.floor(np.sqrt(-8 * k + 4 * n * (n - 1) - 7) / 2.0 - 0.5))
    j = k + i + 1 - i * n + i * (i + 1) // 2
    return i, j


@dataclass(frozen=True)
class DistanceMatrix:
    """Condensed symmetric pairwise-distance store over n items.

    Only the upper triangle is kept; the implied diagonal is zero.
    """

    n: int
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", vals)
        expected = self.n * (self.n - 1) // 2
        if vals.ndim != 1 or vals.shape[0] != expected:
            raise ValueError(
                f"condensed matrix for n={self.n} needs {expected} values, got {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ValueError("distances must be finite")
        if np.any(vals < 0):
            raise ValueError("distances must be non-negative")

    def get(self, i: int, j: int) -> float:
        if i == j:
            return 0.0
        if i > j:
            i, j = j, i
        return float(self.values[condensed_index(i, j, self.n)])

    def to_square(self) -> np.ndarray:
        square = np.zeros((self.n, self.n))
        iu = np.triu_indices(self.n, 1)
        square[iu] = self.values
        return square + square.T

    @classmethod
    def from_square(cls, square: np.ndarray) -> "DistanceMatrix":
        arr = np.asarray(square, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"square matrix expected, got shape {arr.shape}")
        if not np.allclose(arr, arr.T):
            raise ValueError("matrix is not symmetric")
        iu = np.triu_indices(arr.shape[0], 1)
        return cls(n=arr.shape[0], values=arr[iu].copy())

    def save_csv(self, path, square: bool = False) -> None:
        """Write either condensed values under an ``n`` header or the full square."""
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            if square:
                for row in self.to_square():
                    writer.writerow([repr(float(v)) for v in row])
            else:
                writer.writerow(["n", self.n])
                for v in self.values:
                    writer.writerow([repr(float(v))])

    @classmethod
    def load_csv(cls, path) -> "DistanceMatrix":
        with open(path, newline="", encoding="utf-8") as fh:
            rows = [row for row in csv.reader(fh) if row]
        if not rows:
            raise ValueError(f"{path}: empty matrix file")
        if rows[0][0] == "n":
            n = int(rows[0][1])
            vals = np.array([float(r[0]) for r in rows[1:]])
            return cls(n=n, values=vals)
        square = np.array([[float(v) for v in row] for row in rows])
        return cls.from_square(square)


def pairwise_matrix(items: Sequence, metric: Callable) -> DistanceMatrix:
    """All n(n-1)/2 pairwise distances of ``items`` under ``metric``.

    Metric failures are re-raised with the offending pair indices attached.
    """
    n = len(items)
    if n < 3:
        raise ValueError(f"need at least 3 items, got {n}")
    values = np.empty(n * (n - 1) // 2)
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            try:
                values[k] = metric(items[i], items[j])
            except Exception as exc:
                raise ValueError(f"metric failed for item pair ({i}, {j}): {exc}") from exc
            k += 1
    return DistanceMatrix(n=n, values=values)


def hamming_matrix(vectors: Sequence[Sequence[int]]) -> DistanceMatrix:
    """Vectorized condensed Hamming-count matrix."""
    arr = np.asarray(vectors)
    n = arr.shape[0]
    if n < 3:
        raise ValueError(f"need at least 3 items, got {n}")
    if arr.ndim != 2:
        raise ValueError("vectors must share one length")
    iu0, iu1 = np.triu_indices(n, 1)
    counts = (arr[iu0] != arr[iu1]).sum(axis=1)
    return DistanceMatrix(n=n, values=counts.astype(np.float64))


@njit(cache=True, nogil=True)
def _lev_pairs(codes, lengths, iu0, iu1, out):
    maxlen = codes.shape[1]
    prev = np.empty(maxlen + 1, dtype=np.int64)
    cur = np.empty(maxlen + 1, dtype=np.int64)
    for k in range(iu0.shape[0]):
        a = iu0[k]
        b = iu1[k]
        la = lengths[a]
        lb = lengths[b]
        for j in range(lb + 1):
            prev[j] = j
        for i in range(1, la + 1):
            cur[0] = i
            ca = codes[a, i - 1]
            for j in range(1, lb + 1):
                sub = prev[j - 1] + (0 if ca == codes[b, j - 1] else 1)
                ins = cur[j - 1] + 1
                dele = prev[j] + 1
                best = sub
                if ins < best:
                    best = ins
                if dele < best:
                    best = dele
                cur[j] = best
            prev, cur = cur, prev
        out[k] = prev[lb] if la > 0 else lb


def levenshtein_matrix(messages: Sequence[Sequence], normalized: bool = False) -> DistanceMatrix:
    """Condensed token-level Levenshtein matrix, batch-computed.

    Equivalent to ``pairwise_matrix(messages, levenshtein)`` (or its
    normalized variant) but runs the dynamic program in a compiled kernel.
    """
    n = len(messages)
    if n < 3:
        raise ValueError(f"need at least 3 items, got {n}")
    vocab: dict = {}
    lengths = np.array([len(m) for m in messages], dtype=np.int64)
    maxlen = int(lengths.max()) if n else 0
    codes = np.full((n, max(maxlen, 1)), -1, dtype=np.int64)
    for i, msg in enumerate(messages):
        for j, tok in enumerate(msg):
            codes[i, j] = vocab.setdefault(tok, len(vocab))
    iu0, iu1 = np.triu_indices(n, 1)
    out = np.empty(iu0.shape[0], dtype=np.int64)
    _lev_pairs(codes, lengths, iu0.astype(np.int64), iu1.astype(np.int64), out)
    values = out.astype(np.float64)
    if normalized:
        longest = np.maximum(lengths[iu0], lengths[iu1])
        with np.errstate(invalid="ignore"):
            values = np.where(longest > 0, values / np.maximum(longest, 1), 0.0)
    return DistanceMatrix(n=n, values=values)


def cosine_matrix(vectors: np.ndarray) -> DistanceMatrix:
    """Condensed cosine-distance matrix over the rows of ``vectors``."""
    arr = np.asarray(vectors, dtype=float)
    n = arr.shape[0]
    if n < 3:
        raise ValueError(f"need at least 3 items, got {n}")
    norms = np.linalg.norm(arr, axis=1)
    if np.any(norms == 0):
        bad = int(np.argmax(norms == 0))
        raise ValueError(f"cosine distance undefined for zero-norm vector at row {bad}")
    unit = arr / norms[:, None]
    sim = unit @ unit.T
    iu = np.triu_indices(n, 1)
    return DistanceMatrix(n=n, values=np.clip(1.0 - sim[iu], 0.0, 2.0))


def euclidean_matrix(vectors: np.ndarray) -> DistanceMatrix:
    """Condensed Euclidean-distance matrix over the rows of ``vectors``."""
    arr = np.asarray(vectors, dtype=float)
    n = arr.shape[0]
    if n < 3:
        raise ValueError(f"need at least 3 items, got {n}")
    iu0, iu1 = np.triu_indices(n, 1)
    diffs = arr[iu0] - arr[iu1]
    return DistanceMatrix(n=n, values=np.sqrt((diffs * diffs).sum(axis=1)))
