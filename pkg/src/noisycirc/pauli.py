"""Pauli (Weyl) words over prime-d qudits and their symplectic algebra.

A word is W(x, z) = omega^phase * prod_i X_i^{x_i} Z_i^{z_i} with X|j> = |j+1>,
Z|j> = omega^j |j>, omega = exp(2 pi i / d).  Phases are tracked modulo 2d for
d = 2 (in units of i, so Hermiticity bookkeeping stays exact) and modulo d for
odd primes (in units of omega).  No entanglement observable in this package
reads phases; they exist for debugging and for exact dense-matrix cross-checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gf import GfMatrix, check_prime, mod_inverse_table, rref_gfp


def phase_modulus(d: int) -> int:
    return 2 * d if d == 2 else d


def phase_unit(d: int) -> int:
    # z*x reordering picks up omega^{z.x}; in i-units for d=2 that is i^{2 z.x}
    return 2 if d == 2 else 1


@dataclass(frozen=True)
class PauliWord:
    d: int
    x: np.ndarray
    z: np.ndarray
    phase: int = 0

    def __post_init__(self):
        check_prime(self.d)
        x = np.asarray(self.x, dtype=np.uint8) % self.d
        z = np.asarray(self.z, dtype=np.uint8) % self.d
        if x.shape != z.shape or x.ndim != 1:
            raise ValueError("x and z must be equal-length vectors")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase", int(self.phase) % phase_modulus(self.d))

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @classmethod
    def identity(cls, n: int, d: int) -> "PauliWord":
        return cls(d, np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    @classmethod
    def single(cls, n: int, d: int, site: int, xexp: int = 0, zexp: int = 0,
               phase: int = 0) -> "PauliWord":
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        x[site] = xexp % d
        z[site] = zexp % d
        return cls(d, x, z, phase)

    def symplectic(self) -> np.ndarray:
        return np.concatenate([self.x, self.z])

    def is_identity(self) -> bool:
        return not self.x.any() and not self.z.any()

    def support(self) -> np.ndarray:
        return np.nonzero((self.x != 0) | (self.z != 0))[0]

    def restrict(self, sites) -> "PauliWord":
        idx = np.asarray(list(sites), dtype=np.intp)
        return PauliWord(self.d, self.x[idx], self.z[idx], 0)

    def __mul__(self, other: "PauliWord") -> "PauliWord":
        if self.d != other.d or self.n != other.n:
            raise ValueError("dimension mismatch in Pauli product")
        d = self.d
        ph = self.phase + other.phase + phase_unit(d) * int(
            np.dot(self.z.astype(np.int64), other.x.astype(np.int64)))
        return PauliWord(d, (self.x + other.x) % d, (self.z + other.z) % d, ph)

    def __pow__(self, e: int) -> "PauliWord":
        if e < 0:
            raise ValueError("negative Pauli powers unsupported; use inverse()")
        d = self.d
        # W(x,z)^e = W(ex, ez) with phase e*phase + z.x * e(e-1)/2 reorder units
        zx = int(np.dot(self.z.astype(np.int64), self.x.astype(np.int64)))
        ph = e * self.phase + phase_unit(d) * zx * (e * (e - 1) // 2)
        return PauliWord(d, (self.x * int(e)) % d, (self.z * int(e)) % d, ph)

    def inverse(self) -> "PauliWord":
        d = self.d
        zx = int(np.dot(self.z.astype(np.int64), self.x.astype(np.int64)))
        ph = -self.phase + phase_unit(d) * zx
        return PauliWord(d, (-self.x) % d, (-self.z) % d, ph)

    def key(self) -> tuple:
        return (self.d, self.x.tobytes(), self.z.tobytes(), self.phase)

    def __eq__(self, other) -> bool:
        return isinstance(other, PauliWord) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __str__(self) -> str:
        if self.d == 2:
            letters = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
            body = "".join(letters[(int(a), int(b))] for a, b in zip(self.x, self.z))
            sign = {0: "+", 1: "+i", 2: "-", 3: "-i"}[self.phase % 4]
            # the Y letter hides an i: W(1,1) = XZ = -iY
            return f"{sign}{body}"
        terms = []
        for i, (a, b) in enumerate(zip(self.x, self.z)):
            if a or b:
                terms.append(f"X{i}^{a}Z{i}^{b}")
        return f"w^{self.phase} " + (" ".join(terms) or "I")


def symplectic_form(p: PauliWord, q: PauliWord) -> int:
    """<p.x, q.z> - <p.z, q.x> mod d; zero iff p and q commute up to phase."""
    if p.d != q.d or p.n != q.n:
        raise ValueError("dimension mismatch in symplectic form")
    a = int(np.dot(p.x.astype(np.int64), q.z.astype(np.int64)))
    b = int(np.dot(p.z.astype(np.int64), q.x.astype(np.int64)))
    return (a - b) % p.d


def commutes(p: PauliWord, q: PauliWord) -> bool:
    return symplectic_form(p, q) == 0


def symplectic_matrix(words: list[PauliWord], d: int) -> np.ndarray:
    """Antisymmetric Gram matrix of pairwise symplectic forms, mod d."""
    if not words:
        return np.zeros((0, 0), dtype=np.int64)
    X = np.stack([w.x for w in words]).astype(np.int64)
    Z = np.stack([w.z for w in words]).astype(np.int64)
    return (X @ Z.T - Z @ X.T) % d


def canonicalize(words: list[PauliWord], avoid_sites=()) -> tuple[GfMatrix, list[PauliWord]]:
    """Reduced echelon form with the avoid-site columns pivoted first.

    Returns the echelon matrix (columns permuted back to site order) together
    with a basis of the subgroup generated by `words` whose support avoids
    `avoid_sites`.  Input rows must pairwise commute.
    """
    if not words:
        return GfMatrix(np.zeros((0, 0), dtype=np.uint8), 2), []
    d = words[0].d
    n = words[0].n
    for w in words:
        if w.d != d or w.n != n:
            raise ValueError("mixed dimensions in canonicalize")
    gram = symplectic_matrix(words, d)
    if gram.any():
        raise ValueError("canonicalize requires mutually commuting rows")

    avoid = sorted(set(int(s) for s in avoid_sites))
    rest = [s for s in range(n) if s not in set(avoid)]
    order = avoid + rest
    # interleave x and z columns per site so the avoid block is contiguous
    cols = []
    for s in order:
        cols.append(s)        # x column
        cols.append(n + s)    # z column
    mat = np.stack([w.symplectic() for w in words]).astype(np.uint8)
    permuted = mat[:, cols]
    red, pivots = rref_gfp(permuted, d)

    n_avoid_cols = 2 * len(avoid)
    kernel_words = []
    for r in range(red.shape[0]):
        row = red[r]
        if not row.any():
            continue
        lead = int(np.nonzero(row)[0][0])
        if lead >= n_avoid_cols:
            # row supported entirely off the avoid block
            full = np.zeros(2 * n, dtype=np.uint8)
            full[np.asarray(cols)] = row
            kernel_words.append(PauliWord(d, full[:n], full[n:], 0))

    unpermuted = np.zeros_like(red)
    unpermuted[:, np.asarray(cols)] = red
    nonzero = unpermuted[np.any(unpermuted != 0, axis=1)]
    return GfMatrix(nonzero, d), kernel_words


def words_span_equal(a: list[PauliWord], b: list[PauliWord], d: int, n: int) -> bool:
    """Whether two generator lists span the same subgroup of the Pauli group."""
    def mat(ws):
        if not ws:
            return np.zeros((0, 2 * n), dtype=np.uint8)
        return np.stack([w.symplectic() for w in ws]).astype(np.uint8)

    ma, mb = mat(a), mat(b)
    ga, gb = GfMatrix(ma, d), GfMatrix(mb, d)
    return ga.same_row_space(gb)
