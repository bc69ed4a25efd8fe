"""Mixed-state stabilizer simulator for prime-d qudit chains.

A state is the uniform mixture over a stabilizer group with k <= n independent
commuting generators; total entropy is n - k dits.  Entropies are exact
integers in units of log d (dits); negativity is an exact half-integer in
units of log 2 (bits).  We fix the convention S_max = n dits = n log d nats
for the maximally mixed state.

Entanglement observables never read generator phases.  Phases (mod 2d for
d = 2, mod d otherwise) are tracked when track_phases is set, purely as a
debugging aid; large sweeps run with tracking off.
"""

from __future__ import annotations

import numpy as np

from .gf import check_prime, mod_inverse_table, pack_rows_gf2, rank_gf2_packed, rank_gfp
from .pauli import PauliWord, phase_modulus, phase_unit, symplectic_matrix


class CliffordGate:
    """An m-site Clifford, stored as its conjugation action on the Pauli basis.

    Rows of `symplectic` are the images of (X_0..X_{m-1}, Z_0..Z_{m-1}) as
    length-2m vectors (x||z) over GF(d); `phases` carries the image phases.
    """

    def __init__(self, d: int, symplectic: np.ndarray, phases=None):
        check_prime(d)
        s = np.asarray(symplectic, dtype=np.uint8) % d
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
            raise ValueError("symplectic matrix must be square of even size")
        self.d = d
        self.m = s.shape[0] // 2
        self.symplectic = s
        if phases is None:
            phases = np.zeros(2 * self.m, dtype=np.int64)
        self.phases = np.asarray(phases, dtype=np.int64) % phase_modulus(d)
        self._phase_table = None
        if not self.preserves_form():
            raise ValueError("action table does not preserve the symplectic form")

    # -- structure ---------------------------------------------------------

    @staticmethod
    def _form_matrix(m: int, d: int) -> np.ndarray:
        j = np.zeros((2 * m, 2 * m), dtype=np.int64)
        j[:m, m:] = np.eye(m, dtype=np.int64)
        j[m:, :m] = (-np.eye(m, dtype=np.int64)) % d
        return j

    def preserves_form(self) -> bool:
        d, m = self.d, self.m
        j = self._form_matrix(m, d)
        s = self.symplectic.astype(np.int64)
        return bool(np.array_equal((s @ j @ s.T) % d, j % d))

    def images(self) -> list[PauliWord]:
        m = self.m
        return [PauliWord(self.d, self.symplectic[r, :m], self.symplectic[r, m:],
                          int(self.phases[r])) for r in range(2 * m)]

    @classmethod
    def from_images(cls, images: list[PauliWord]) -> "CliffordGate":
        if not images:
            raise ValueError("empty action table")
        d = images[0].d
        m = len(images) // 2
        if len(images) != 2 * m or any(w.n != m for w in images):
            raise ValueError("need images of X_0..X_{m-1}, Z_0..Z_{m-1} on m sites")
        s = np.stack([w.symplectic() for w in images])
        return cls(d, s, np.array([w.phase for w in images]))

    def apply_word(self, w: PauliWord) -> PauliWord:
        """Conjugation image of an m-site Pauli word."""
        if w.n != self.m or w.d != self.d:
            raise ValueError("word does not match gate arity")
        out = PauliWord.identity(self.m, self.d)
        imgs = self.images()
        exps = np.concatenate([w.x, w.z])
        for j in range(2 * self.m):
            e = int(exps[j])
            if e:
                out = out * (imgs[j] ** e)
        return PauliWord(self.d, out.x, out.z, out.phase + w.phase)

    def compose(self, after: "CliffordGate") -> "CliffordGate":
        """Gate equivalent to applying self first, then `after`."""
        if self.d != after.d or self.m != after.m:
            raise ValueError("gate mismatch in compose")
        return CliffordGate.from_images([after.apply_word(w) for w in self.images()])

    def inverse(self) -> "CliffordGate":
        d, m = self.d, self.m
        j = self._form_matrix(m, d)
        jinv = (-j) % d
        s = self.symplectic.astype(np.int64)
        sinv = (jinv @ s.T @ j) % d
        inv = CliffordGate(d, sinv.astype(np.uint8))
        # solve image phases so that (self then inv) is the identity table
        phases = np.zeros(2 * m, dtype=np.int64)
        for r in range(2 * m):
            w = PauliWord(d, sinv[r, :m], sinv[r, m:], 0)
            y = self.apply_word(w)
            phases[r] = -y.phase
        return CliffordGate(d, sinv.astype(np.uint8), phases)

    def is_identity_table(self) -> bool:
        eye = np.eye(2 * self.m, dtype=np.uint8)
        return bool(np.array_equal(self.symplectic, eye)) and not self.phases.any()

    # -- engine support ----------------------------------------------------

    def phase_table(self) -> np.ndarray:
        """Output phase of prod_j image_j^{v_j}, indexed by the local exponent
        vector v encoded little-endian base d over (x||z)."""
        if self._phase_table is not None:
            return self._phase_table
        d, m = self.d, self.m
        mod = phase_modulus(d)
        imgs = self.images()
        # image powers 0..d-1 precomputed once
        pows = [[img ** e for e in range(d)] for img in imgs]
        size = d ** (2 * m)
        table = np.zeros(size, dtype=np.int64)
        for idx in range(size):
            v, rem = [], idx
            for _ in range(2 * m):
                v.append(rem % d)
                rem //= d
            out = PauliWord.identity(m, d)
            for jj, e in enumerate(v):
                if e:
                    out = out * pows[jj][e]
            table[idx] = out.phase % mod
        self._phase_table = table
        return table

    # -- named gates (qubit fixtures) ---------------------------------------

    @classmethod
    def identity_gate(cls, m: int, d: int = 2) -> "CliffordGate":
        return cls(d, np.eye(2 * m, dtype=np.uint8))

    @classmethod
    def hadamard(cls) -> "CliffordGate":
        # X -> Z, Z -> X
        return cls(2, np.array([[0, 1], [1, 0]], dtype=np.uint8))

    @classmethod
    def cnot(cls) -> "CliffordGate":
        # control 0, target 1: X0->X0X1, X1->X1, Z0->Z0, Z1->Z0Z1
        s = np.array([
            [1, 1, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 1, 1],
        ], dtype=np.uint8)
        return cls(2, s)

    @classmethod
    def swap_gate(cls, d: int = 2) -> "CliffordGate":
        s = np.zeros((4, 4), dtype=np.uint8)
        s[0, 1] = s[1, 0] = 1
        s[2, 3] = s[3, 2] = 1
        return cls(d, s)

    def __repr__(self) -> str:
        return f"CliffordGate(d={self.d}, m={self.m})"


class MixedStabilizerState:
    """Tableau of k <= n commuting independent generators over GF(d)."""

    def __init__(self, n: int, d: int, X: np.ndarray, Z: np.ndarray,
                 phases=None, track_phases: bool = True):
        check_prime(d)
        self.n = int(n)
        self.d = int(d)
        self.X = np.asarray(X, dtype=np.uint8) % d
        self.Z = np.asarray(Z, dtype=np.uint8) % d
        if self.X.shape != self.Z.shape or self.X.shape[1] != self.n:
            raise ValueError("tableau shape mismatch")
        self.track_phases = bool(track_phases)
        if phases is None:
            phases = np.zeros(self.X.shape[0], dtype=np.int64)
        self.phases = np.asarray(phases, dtype=np.int64) % phase_modulus(d)

    # -- construction --------------------------------------------------------

    @classmethod
    def product_state(cls, n: int, d: int = 2, track_phases: bool = True):
        if n < 1:
            raise ValueError("need at least one site")
        return cls(n, d, np.zeros((n, n), dtype=np.uint8),
                   np.eye(n, dtype=np.uint8), track_phases=track_phases)

    def copy(self) -> "MixedStabilizerState":
        return MixedStabilizerState(self.n, self.d, self.X.copy(), self.Z.copy(),
                                    self.phases.copy(), self.track_phases)

    @property
    def k(self) -> int:
        return self.X.shape[0]

    def generators(self) -> list[PauliWord]:
        return [PauliWord(self.d, self.X[i], self.Z[i], int(self.phases[i]))
                for i in range(self.k)]

    # -- invariants ----------------------------------------------------------

    def check_invariants(self) -> None:
        assert self.k <= self.n
        gens = self.generators()
        gram = symplectic_matrix(gens, self.d)
        assert not gram.any(), "generators must commute"
        stacked = np.concatenate([self.X, self.Z], axis=1)
        assert rank_gfp(stacked, self.d) == self.k, "generators must be independent"

    # -- gates ----------------------------------------------------------------

    def apply_clifford(self, gate: CliffordGate, sites) -> None:
        sites = tuple(int(s) for s in sites)
        if len(sites) != gate.m or len(set(sites)) != len(sites):
            raise ValueError("sites must match gate arity and be distinct")
        if any(s < 0 or s >= self.n for s in sites):
            raise ValueError("site out of range")
        if gate.d != self.d:
            raise ValueError("gate dimension mismatch")
        if self.k == 0:
            return
        d = self.d
        idx = np.asarray(sites, dtype=np.intp)
        block = np.concatenate([self.X[:, idx], self.Z[:, idx]], axis=1).astype(np.int64)
        if self.track_phases:
            radix = (d ** np.arange(2 * gate.m)).astype(np.int64)
            codes = block @ radix
            self.phases = (self.phases + gate.phase_table()[codes]) % phase_modulus(d)
        new = (block @ gate.symplectic.astype(np.int64)) % d
        m = gate.m
        self.X[:, idx] = new[:, :m].astype(np.uint8)
        self.Z[:, idx] = new[:, m:].astype(np.uint8)

    # -- trace channel ----------------------------------------------------------

    def apply_trace_channel(self, sites) -> None:
        """Project the stabilizer group onto the subgroup trivial on `sites`.

        Implemented as Gauss-Jordan on the 2|sites| tableau columns; pivot rows
        are discarded, which is the canonical (basis-independent) projection.
        """
        sites = sorted(set(int(s) for s in sites))
        if not sites:
            raise ValueError("trace channel needs a nonempty site set")
        if any(s < 0 or s >= self.n for s in sites):
            raise ValueError("site out of range")
        if self.k == 0:
            return
        d = self.d
        u = phase_unit(d)
        mod = phase_modulus(d)
        inv = mod_inverse_table(d)
        cols = [("x", s) for s in sites] + [("z", s) for s in sites]
        r = 0
        for kind, s in cols:
            col = (self.X if kind == "x" else self.Z)[:, s]
            hits = np.nonzero(col[r:])[0]
            if hits.size == 0:
                continue
            piv = r + int(hits[0])
            if piv != r:
                self.X[[r, piv]] = self.X[[piv, r]]
                self.Z[[r, piv]] = self.Z[[piv, r]]
                self.phases[[r, piv]] = self.phases[[piv, r]]
            pivval = int(col[r])
            targets = np.nonzero(col)[0]
            targets = targets[targets != r]
            if targets.size:
                # row_t <- row_t * row_r^c with c = -entry/pivot, cancelling the column
                c = (-(col[targets].astype(np.int64)) * inv[pivval]) % d
                if self.track_phases:
                    zx_r = int(np.dot(self.Z[r].astype(np.int64), self.X[r].astype(np.int64)))
                    powphase = (c * int(self.phases[r])
                                + u * zx_r * (c * (c - 1) // 2)) % mod
                    cross = (self.Z[targets].astype(np.int64)
                             @ self.X[r].astype(np.int64)) * c
                    self.phases[targets] = (self.phases[targets] + powphase
                                            + u * cross) % mod
                self.X[targets] = (self.X[targets] + np.outer(c, self.X[r])) % d
                self.Z[targets] = (self.Z[targets] + np.outer(c, self.Z[r])) % d
            r += 1
            if r == self.k:
                break
        keep = np.arange(r, self.k)
        self.X = np.ascontiguousarray(self.X[keep])
        self.Z = np.ascontiguousarray(self.Z[keep])
        self.phases = self.phases[keep]

    # -- observables -------------------------------------------------------------

    def _restricted_rank(self, region: np.ndarray) -> int:
        """Rank over GF(d) of the generator matrix restricted to `region`."""
        if self.k == 0 or region.size == 0:
            return 0
        sub = np.concatenate([self.X[:, region], self.Z[:, region]], axis=1)
        if self.d == 2:
            return rank_gf2_packed(pack_rows_gf2(sub), sub.shape[1])
        return rank_gfp(sub, self.d)

    def _region_array(self, region) -> np.ndarray:
        arr = np.asarray(sorted(set(int(s) for s in region)), dtype=np.intp)
        if arr.size and (arr[0] < 0 or arr[-1] >= self.n):
            raise ValueError("region site out of range")
        return arr

    def entropy_dits(self, region=None) -> int:
        """S_A = |A| - log_d |G_A| with G_A the subgroup supported inside A."""
        if region is None:
            return self.n - self.k
        a = self._region_array(region)
        comp = np.setdiff1d(np.arange(self.n), a, assume_unique=False)
        s = int(a.size) - self.k + self._restricted_rank(comp)
        assert s >= 0
        return s

    def mutual_information_dits(self, region_a, region_b) -> int:
        a = self._region_array(region_a)
        b = self._region_array(region_b)
        if np.intersect1d(a, b).size:
            raise ValueError("regions A and B must be disjoint")
        i = (self.entropy_dits(a) + self.entropy_dits(b)
             - self.entropy_dits(np.concatenate([a, b])))
        assert i >= 0
        return i

    def operator_entanglement_dits(self, region_a) -> int:
        # stabilizer identity: operator EE across A|B equals I(A:B)
        a = self._region_array(region_a)
        comp = np.setdiff1d(np.arange(self.n), a)
        return self.mutual_information_dits(a, comp)

    def log_negativity_bits(self, region_a) -> float:
        """Half the GF(2) rank of the restricted commutation matrix, in bits."""
        if self.d != 2:
            raise ValueError("log-negativity is implemented for d=2 only")
        a = self._region_array(region_a)
        if self.k == 0 or a.size == 0:
            return 0.0
        xa = self.X[:, a].astype(np.float32)
        za = self.Z[:, a].astype(np.float32)
        j = (xa @ za.T + za @ xa.T) % 2
        jbits = j.astype(np.uint8)
        rank = rank_gf2_packed(pack_rows_gf2(jbits), jbits.shape[1])
        return rank / 2.0


def product_state(n: int, d: int = 2, track_phases: bool = True) -> MixedStabilizerState:
    return MixedStabilizerState.product_state(n, d, track_phases)
