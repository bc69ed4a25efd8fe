"""Linear algebra over the prime field GF(d).

Matrices are numpy uint8 arrays with entries in [0, d).  Row reduction is
done generically for any prime d, with a bit-packed fast path for d = 2
(rows packed into uint64 words, elimination by XOR).  The packed and
generic paths must agree exactly; tests enforce this.
"""

from __future__ import annotations

import numpy as np

_SMALL_PRIMES = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}


def is_prime(d: int) -> bool:
    if d < 2:
        return False
    if d in _SMALL_PRIMES:
        return True
    if d % 2 == 0:
        return False
    f = 3
    while f * f <= d:
        if d % f == 0:
            return False
        f += 2
    return True


def check_prime(d: int) -> int:
    if not is_prime(d):
        raise ValueError(f"local dimension must be prime, got {d}")
    return d


def _mod_inverse_table(d: int) -> np.ndarray:
    # inv[a] * a == 1 (mod d) for a in [1, d)
    inv = np.zeros(d, dtype=np.int64)
    for a in range(1, d):
        inv[a] = pow(a, -1, d)
    return inv


_INV_CACHE: dict[int, np.ndarray] = {}


def mod_inverse_table(d: int) -> np.ndarray:
    tab = _INV_CACHE.get(d)
    if tab is None:
        tab = _mod_inverse_table(d)
        _INV_CACHE[d] = tab
    return tab


# ---------------------------------------------------------------------------
# bit-packed GF(2) kernels


def pack_rows_gf2(bits: np.ndarray) -> np.ndarray:
    """Pack a (rows, cols) 0/1 uint8 matrix into (rows, nwords) uint64."""
    rows, cols = bits.shape
    nbytes = -(-cols // 8) if cols else 0
    nwords = -(-nbytes // 8) if nbytes else 0
    if rows == 0 or cols == 0:
        return np.zeros((rows, max(nwords, 0)), dtype=np.uint64)
    packed8 = np.packbits(bits, axis=1, bitorder="little")
    if packed8.shape[1] < nwords * 8:
        pad = np.zeros((rows, nwords * 8 - packed8.shape[1]), dtype=np.uint8)
        packed8 = np.concatenate([packed8, pad], axis=1)
    return packed8.view(np.uint64)


def rank_gf2_packed(words: np.ndarray, ncols: int) -> int:
    """Rank over GF(2) of a packed matrix; destroys its argument."""
    rows = words.shape[0]
    if rows == 0 or ncols == 0:
        return 0
    r = 0
    for c in range(ncols):
        w, b = divmod(c, 64)
        colbit = (words[r:, w] >> np.uint64(b)) & np.uint64(1)
        hits = np.nonzero(colbit)[0]
        if hits.size == 0:
            continue
        piv = r + hits[0]
        if piv != r:
            words[[r, piv]] = words[[piv, r]]
        if hits.size > 1:
            rest = r + hits[1:]
            words[rest] ^= words[r]
        r += 1
        if r == rows:
            break
    return r


def rank_gf2(bits: np.ndarray) -> int:
    return rank_gf2_packed(pack_rows_gf2(np.ascontiguousarray(bits)), bits.shape[1])


# ---------------------------------------------------------------------------
# generic GF(p) elimination


def rref_gfp(mat: np.ndarray, d: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over GF(d); returns (rref, pivot columns)."""
    m = np.asarray(mat, dtype=np.int64) % d
    rows, cols = m.shape
    inv = mod_inverse_table(d)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        hits = np.nonzero(m[r:, c])[0]
        if hits.size == 0:
            continue
        piv = r + hits[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = (m[r] * inv[m[r, c]]) % d
        others = np.nonzero(m[:, c])[0]
        others = others[others != r]
        if others.size:
            m[others] = (m[others] - np.outer(m[others, c], m[r])) % d
        pivots.append(c)
        r += 1
    return m.astype(np.uint8), pivots


def rank_gfp(mat: np.ndarray, d: int) -> int:
    if mat.size == 0:
        return 0
    if d == 2:
        return rank_gf2(np.asarray(mat, dtype=np.uint8) % 2)
    _, pivots = rref_gfp(mat, d)
    return len(pivots)


def gf_rank(mat: np.ndarray, d: int) -> int:
    """Rank over GF(d) via Gaussian elimination (packed XOR path for d=2)."""
    check_prime(d)
    return rank_gfp(np.atleast_2d(np.asarray(mat)), d)


def nullspace_gfp(mat: np.ndarray, d: int) -> np.ndarray:
    """Basis (rows) of the right nullspace of mat over GF(d)."""
    m = np.atleast_2d(np.asarray(mat, dtype=np.int64)) % d
    rows, cols = m.shape
    if rows == 0:
        return np.eye(cols, dtype=np.uint8)
    red, pivots = rref_gfp(m, d)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for r, pc in enumerate(pivots):
            basis[i, pc] = (-int(red[r, fc])) % d
    return basis.astype(np.uint8)


def solve_gfp(mat: np.ndarray, target: np.ndarray, d: int) -> np.ndarray | None:
    """A particular solution of mat @ v = target over GF(d), or None."""
    m = np.atleast_2d(np.asarray(mat, dtype=np.int64)) % d
    t = np.asarray(target, dtype=np.int64) % d
    rows, cols = m.shape
    aug = np.concatenate([m, t.reshape(-1, 1)], axis=1)
    red, pivots = rref_gfp(aug, d)
    sol = np.zeros(cols, dtype=np.int64)
    for r, pc in enumerate(pivots):
        if pc == cols:
            return None  # inconsistent
        sol[pc] = int(red[r, cols])
    return (sol % d).astype(np.uint8)


class GfMatrix:
    """A matrix over GF(d); rows are symplectic vectors (x||z) of Pauli words."""

    def __init__(self, data: np.ndarray, d: int):
        check_prime(d)
        data = np.atleast_2d(np.asarray(data, dtype=np.uint8))
        if data.size and int(data.max(initial=0)) >= d:
            raise ValueError("entries must lie in [0, d)")
        self.data = data
        self.d = d

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def rank(self) -> int:
        return rank_gfp(self.data, self.d)

    def rref(self) -> tuple["GfMatrix", list[int]]:
        m, piv = rref_gfp(self.data, self.d)
        return GfMatrix(m, self.d), piv

    def row_space_contains(self, vec: np.ndarray) -> bool:
        stacked = np.vstack([self.data, np.asarray(vec, dtype=np.uint8) % self.d])
        return rank_gfp(stacked, self.d) == self.rank()

    def same_row_space(self, other: "GfMatrix") -> bool:
        ra, rb = self.rank(), other.rank()
        if ra != rb:
            return False
        return rank_gfp(np.vstack([self.data, other.data]), self.d) == ra

    def __repr__(self) -> str:
        return f"GfMatrix(d={self.d}, shape={self.data.shape})"
