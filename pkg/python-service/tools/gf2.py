"""Bit-packed GF(2) linear algebra and the fast transforms over F_2^n.

Matrices are stored row-major as ``uint64`` words, bit ``c % 64`` of word
``c // 64`` holding column ``c``. Elimination is the usual pivot/XOR sweep,
vectorised over rows with numpy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

_WORD = 64
_BYTE_POPCOUNT = np.array([bin(i).count("1") for i in range(256)], dtype=np.uint8)


def popcount(values: np.ndarray) -> np.ndarray:
    """Per-element popcount of a non-negative integer array (up to 64 bits)."""
    arr = np.asarray(values).astype(np.uint64, copy=False)
    total = np.zeros(arr.shape, dtype=np.int64)
    mask = np.uint64(0xFF)
    for shift in range(0, _WORD, 8):
        total += _BYTE_POPCOUNT[((arr >> np.uint64(shift)) & mask).astype(np.intp)]
    return total


def parity(values: np.ndarray) -> np.ndarray:
    return (popcount(values) & 1).astype(np.uint8)


def moebius(values: np.ndarray) -> np.ndarray:
    """Binary Möbius (zeta) transform along the last axis; it is an involution."""
    out = (np.asarray(values) & 1).astype(np.uint8, copy=True)
    size = out.shape[-1]
    n = size.bit_length() - 1
    if 1 << n != size:
        raise ValueError(f"last axis must have power-of-two length, got {size}")
    lead = out.shape[:-1]
    for i in range(n):
        step = 1 << i
        view = out.reshape(*lead, size // (2 * step), 2, step)
        view[..., 1, :] ^= view[..., 0, :]
    return out


def walsh_butterfly(signs: np.ndarray) -> np.ndarray:
    """In-place style Hadamard butterfly of a ±1 vector, returned as int32."""
    out = np.asarray(signs, dtype=np.int32).copy()
    size = out.shape[-1]
    n = size.bit_length() - 1
    for i in range(n):
        step = 1 << i
        view = out.reshape(size // (2 * step), 2, step)
        low = view[:, 0, :].copy()
        high = view[:, 1, :]
        view[:, 0, :] = low + high
        view[:, 1, :] = low - high
    return out


def pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack a (rows, cols) 0/1 array into (rows, ceil(cols/64)) uint64 words."""
    dense = (np.asarray(bits, dtype=np.uint8) & 1)
    rows, cols = dense.shape
    words = max(1, -(-cols // _WORD))
    padded = np.zeros((rows, words * _WORD), dtype=np.uint8)
    padded[:, :cols] = dense
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64, copy=False).reshape(rows, words)


def unpack_row(row: np.ndarray, cols: int) -> np.ndarray:
    as_bytes = np.ascontiguousarray(row.astype("<u8")).view(np.uint8)
    return np.unpackbits(as_bytes, bitorder="little")[:cols]


@dataclass
class EchelonForm:
    """Reduced row echelon form of a packed matrix."""

    rows: np.ndarray
    cols: int
    pivots: List[int]

    @property
    def rank(self) -> int:
        return len(self.pivots)

    @property
    def nullity(self) -> int:
        return self.cols - self.rank

    def free_columns(self) -> List[int]:
        taken = set(self.pivots)
        return [c for c in range(self.cols) if c not in taken]

    def kernel_vector(self, free_column: int) -> np.ndarray:
        """Kernel vector with a 1 at ``free_column`` and 0 at every other free column."""
        vec = np.zeros(self.cols, dtype=np.uint8)
        vec[free_column] = 1
        word, bit = divmod(free_column, _WORD)
        mask = np.uint64(1) << np.uint64(bit)
        for i, pivot in enumerate(self.pivots):
            if self.rows[i, word] & mask:
                vec[pivot] = 1
        return vec

    def kernel_basis(self, limit: Optional[int] = None) -> List[np.ndarray]:
        free = self.free_columns()
        if limit is not None:
            free = free[:limit]
        return [self.kernel_vector(c) for c in free]


def row_reduce(packed: np.ndarray, cols: int) -> EchelonForm:
    """Gauss-Jordan elimination over GF(2); pivots are taken in column order."""
    mat = np.array(packed, dtype=np.uint64, copy=True)
    n_rows = mat.shape[0]
    pivots: List[int] = []
    r = 0
    for col in range(cols):
        if r == n_rows:
            break
        word, bit = divmod(col, _WORD)
        mask = np.uint64(1) << np.uint64(bit)
        candidates = np.flatnonzero(mat[r:, word] & mask)
        if candidates.size == 0:
            continue
        p = r + int(candidates[0])
        if p != r:
            mat[[r, p]] = mat[[p, r]]
        hits = np.flatnonzero(mat[:, word] & mask)
        hits = hits[hits != r]
        if hits.size:
            # the pivot row is zero left of ``col``
            mat[hits, word:] ^= mat[r, word:]
        pivots.append(col)
        r += 1
    return EchelonForm(rows=mat[:r], cols=cols, pivots=pivots)


def rank(bits: np.ndarray) -> int:
    dense = np.asarray(bits, dtype=np.uint8)
    if dense.size == 0:
        return 0
    return row_reduce(pack_rows(dense), dense.shape[1]).rank


def kernel_basis(bits: np.ndarray, limit: Optional[int] = None) -> List[np.ndarray]:
    """Basis of {x : M x = 0} for a dense (rows, cols) 0/1 matrix M."""
    dense = np.asarray(bits, dtype=np.uint8)
    cols = dense.shape[1]
    if dense.shape[0] == 0:
        basis = [np.eye(cols, dtype=np.uint8)[c] for c in range(cols)]
        return basis if limit is None else basis[:limit]
    return row_reduce(pack_rows(dense), cols).kernel_basis(limit)


def monomials_up_to(n: int, degree: int) -> np.ndarray:
    """Monomial masks of weight <= degree, ordered by (weight, mask value)."""
    masks = np.arange(1 << n, dtype=np.int64)
    weights = popcount(masks)
    keep = masks[weights <= degree]
    order = np.lexsort((keep, weights[keep]))
    return keep[order]


__all__ = [
    "EchelonForm",
    "kernel_basis",
    "monomials_up_to",
    "moebius",
    "pack_rows",
    "parity",
    "popcount",
    "rank",
    "row_reduce",
    "unpack_row",
    "walsh_butterfly",
]
