"""Circuit architectures, random-gate sampling, noise placement and sweeps.

Brickwork time is counted in single layers (even bonds, odd bonds, ...), so a
period is two layers.  Every trajectory owns a counter-based RNG keyed by its
seed, with one substream per (layer, block); records are therefore bit-identical
for a given (architecture, noise, seed) regardless of how trajectories are
scheduled across workers.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .gf import check_prime, nullspace_gfp, solve_gfp
from .pauli import phase_modulus
from .stabilizer import CliffordGate, MixedStabilizerState


# ---------------------------------------------------------------------------
# architectures


@dataclass(frozen=True)
class Brickwork1D:
    L: int
    periodic: bool = True

    def __post_init__(self):
        if self.L < 2 or self.L % 2:
            raise ValueError("brickwork needs even L >= 2")

    @property
    def n_sites(self) -> int:
        return self.L

    @property
    def arity(self) -> int:
        return 2

    def blocks(self, layer: int) -> list[tuple[int, ...]]:
        off = layer % 2
        out = [(i, i + 1) for i in range(off, self.L - 1, 2)]
        if off and self.periodic:
            out.append((self.L - 1, 0))
        return out

    def noise_blocks(self, layer: int) -> list[tuple[int, ...]]:
        return self.blocks(layer)

    def describe(self) -> dict:
        return {"variant": "brickwork1d", "L": self.L, "periodic": self.periodic}


@dataclass(frozen=True)
class BoundaryNoise1D:
    """Open brickwork chain with trace noise only on the end block(s)."""

    L: int
    noisy_ends: str = "both"  # left | right | both

    def __post_init__(self):
        if self.L < 4 or self.L % 2:
            raise ValueError("boundary-noise chain needs even L >= 4")
        if self.noisy_ends not in ("left", "right", "both"):
            raise ValueError("noisy_ends must be left, right or both")

    @property
    def n_sites(self) -> int:
        return self.L

    @property
    def arity(self) -> int:
        return 2

    def blocks(self, layer: int) -> list[tuple[int, ...]]:
        off = layer % 2
        return [(i, i + 1) for i in range(off, self.L - 1, 2)]

    def noise_blocks(self, layer: int) -> list[tuple[int, ...]]:
        out = []
        if self.noisy_ends in ("left", "both"):
            out.append((0, 1))
        if self.noisy_ends in ("right", "both"):
            out.append((self.L - 2, self.L - 1))
        return out

    def describe(self) -> dict:
        return {"variant": "boundary1d", "L": self.L, "noisy_ends": self.noisy_ends}


@dataclass(frozen=True)
class Plaquette2D:
    """Torus of Lx x Ly qudits with alternating 4-site plaquette layers."""

    Lx: int
    Ly: int

    def __post_init__(self):
        if self.Lx % 2 or self.Ly % 2 or self.Lx < 2 or self.Ly < 2:
            raise ValueError("plaquette lattice needs even Lx, Ly")

    @property
    def n_sites(self) -> int:
        return self.Lx * self.Ly

    @property
    def arity(self) -> int:
        return 4

    def site(self, x: int, y: int) -> int:
        return (x % self.Lx) + self.Lx * (y % self.Ly)

    def blocks(self, layer: int) -> list[tuple[int, ...]]:
        off = layer % 2
        out = []
        for y in range(off, self.Ly + off, 2):
            for x in range(off, self.Lx + off, 2):
                out.append((self.site(x, y), self.site(x + 1, y),
                            self.site(x, y + 1), self.site(x + 1, y + 1)))
        return out

    def noise_blocks(self, layer: int) -> list[tuple[int, ...]]:
        return self.blocks(layer)

    def half_cut_region(self) -> np.ndarray:
        return np.array([self.site(x, y) for y in range(self.Ly // 2)
                         for x in range(self.Lx)], dtype=np.intp)

    def describe(self) -> dict:
        return {"variant": "plaquette2d", "Lx": self.Lx, "Ly": self.Ly}


Architecture = Brickwork1D | BoundaryNoise1D | Plaquette2D


@dataclass(frozen=True)
class NoiseModel:
    p: float
    gate_prob: float = 1.0
    trace_prob_scale: float = 1.0
    boundary_only: bool = False

    def __post_init__(self):
        for name in ("p", "gate_prob", "trace_prob_scale"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")

    @classmethod
    def for_1d(cls, p: float) -> "NoiseModel":
        return cls(p=p)

    @classmethod
    def for_2d(cls, p: float) -> "NoiseModel":
        # gates fire with probability 0.1 and traces with 0.1*p per plaquette
        return cls(p=p, gate_prob=0.1, trace_prob_scale=0.1)

    @classmethod
    def boundary(cls, p: float = 1.0) -> "NoiseModel":
        return cls(p=p, boundary_only=True)

    def describe(self) -> dict:
        return {"p": self.p, "gate_prob": self.gate_prob,
                "trace_prob_scale": self.trace_prob_scale,
                "boundary_only": self.boundary_only}


# ---------------------------------------------------------------------------
# uniform Clifford sampling


def _symplectic_form_rows(vecs: np.ndarray, m: int, d: int) -> np.ndarray:
    """Rows w such that w . u computes <vec, u> for each input vec."""
    out = np.zeros_like(vecs, dtype=np.int64)
    out[:, m:] = vecs[:, :m]
    out[:, :m] = (-vecs[:, m:].astype(np.int64)) % d
    return out % d


_SP4_GF2: np.ndarray | None = None


def _sp4_gf2_table() -> np.ndarray:
    """All 720 elements of Sp(4, 2), enumerated once."""
    global _SP4_GF2
    if _SP4_GF2 is None:
        bits = ((np.arange(1 << 16)[:, None] >> np.arange(16)) & 1).astype(np.uint8)
        cand = bits.reshape(-1, 4, 4)
        j = np.zeros((4, 4), dtype=np.uint8)
        j[0, 2] = j[1, 3] = j[2, 0] = j[3, 1] = 1
        prod = np.einsum("nij,jk,nlk->nil", cand, j, cand) % 2
        mask = np.all(prod == j, axis=(1, 2))
        _SP4_GF2 = np.ascontiguousarray(cand[mask])
        assert _SP4_GF2.shape[0] == 720
    return _SP4_GF2


def sample_symplectic(m: int, d: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform element of Sp(2m, d), rows = images of (X_i..., Z_i...)."""
    check_prime(d)
    if d == 2 and m == 2:
        table = _sp4_gf2_table()
        return table[int(rng.integers(table.shape[0]))].copy()
    dim = 2 * m
    constraints = np.zeros((0, dim), dtype=np.int64)
    es, fs = [], []
    for _ in range(m):
        null = nullspace_gfp(constraints, d) if constraints.shape[0] else np.eye(
            dim, dtype=np.uint8)
        while True:
            coeffs = rng.integers(0, d, null.shape[0])
            v = (coeffs @ null.astype(np.int64)) % d
            if v.any():
                break
        pair_row = _symplectic_form_rows(v.reshape(1, -1), m, d)
        sys_mat = np.vstack([constraints, pair_row])
        target = np.zeros(sys_mat.shape[0], dtype=np.int64)
        target[-1] = 1
        part = solve_gfp(sys_mat, target, d)
        if part is None:
            raise RuntimeError("symplectic completion failed")
        null2 = nullspace_gfp(sys_mat, d)
        w = part.astype(np.int64)
        if null2.shape[0]:
            w = (w + rng.integers(0, d, null2.shape[0]) @ null2.astype(np.int64)) % d
        es.append(v % d)
        fs.append(w % d)
        constraints = np.vstack([
            constraints,
            _symplectic_form_rows(np.vstack([v, w]), m, d),
        ])
    return np.vstack(es + fs).astype(np.uint8)


def sample_random_clifford(d: int, m: int, rng: np.random.Generator) -> CliffordGate:
    """Uniform m-site Clifford modulo global phase: uniform Sp(2m, d) composed
    with a uniform Pauli offset (equivalently uniform image phases)."""
    s = sample_symplectic(m, d, rng)
    if d == 2:
        xz = np.einsum("ri,ri->r", s[:, :m].astype(np.int64), s[:, m:].astype(np.int64)) % 2
        phases = (xz + 2 * rng.integers(0, 2, 2 * m)) % 4
    else:
        phases = rng.integers(0, d, 2 * m)
    return CliffordGate(d, s, phases)


# ---------------------------------------------------------------------------
# trajectories


def _block_rng(key: np.ndarray, layer: int, slot: int) -> np.random.Generator:
    counter = np.array([0, 0, slot, layer], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


@dataclass(frozen=True)
class Partition:
    label: str
    a: tuple[int, ...]
    b: tuple[int, ...]


def resolve_partition(arch: Architecture, spec) -> Partition:
    n = arch.n_sites
    if isinstance(spec, Partition):
        return spec
    if spec == "half" and isinstance(arch, Plaquette2D):
        a = arch.half_cut_region()
        b = np.setdiff1d(np.arange(n), a)
        return Partition("half", tuple(a.tolist()), tuple(b.tolist()))
    if isinstance(spec, (int, np.integer)):
        size = int(spec)
        if not 0 < size < n:
            raise ValueError(f"partition size {size} out of range for {n} sites")
        if isinstance(arch, BoundaryNoise1D):
            start = (n - size) // 2  # keep A away from the noisy ends
        else:
            start = 0
        a = tuple(range(start, start + size))
        b = tuple(s for s in range(n) if s not in set(a))
        return Partition(f"A{size}", a, b)
    if isinstance(spec, dict):
        a = tuple(int(s) for s in spec["a"])
        b = tuple(int(s) for s in spec.get("b", ())) or tuple(
            s for s in range(n) if s not in set(a))
        return Partition(str(spec.get("label", f"A{len(a)}")), a, b)
    if isinstance(spec, (list, tuple)):
        a = tuple(int(s) for s in spec)
        b = tuple(s for s in range(n) if s not in set(a))
        return Partition(f"A{len(a)}", a, b)
    raise ValueError(f"cannot interpret partition spec {spec!r}")


@dataclass
class TrajectoryRecord:
    seed: int
    d: int
    arch: dict
    noise: dict
    partitions: dict[str, Partition]
    times: np.ndarray
    s_total: np.ndarray
    mutual: dict[str, np.ndarray]
    negativity: dict[str, np.ndarray] = field(default_factory=dict)

    def observable(self, name: str) -> np.ndarray:
        if name == "s_total":
            return self.s_total
        kind, _, label = name.partition(":")
        if kind == "mutual":
            return self.mutual[label]
        if kind == "negativity":
            return self.negativity[label]
        raise KeyError(name)

    def observable_names(self) -> list[str]:
        names = ["s_total"]
        names += [f"mutual:{lab}" for lab in self.mutual]
        names += [f"negativity:{lab}" for lab in self.negativity]
        return names


def run_trajectory(arch: Architecture, noise: NoiseModel, partitions, t_max: int,
                   seed: int, d: int = 2, observables: tuple[str, ...] = ("mutual",),
                   track_phases: bool = False) -> TrajectoryRecord:
    """Simulate one trajectory and record observables after every layer.

    Per block the draw order is fixed: gate coin (only if gate_prob < 1),
    gate sample, then an independent trace coin with probability
    p * trace_prob_scale; boundary architectures instead draw end-block trace
    coins with probability p in dedicated substreams after the gate blocks.
    """
    if t_max < 1:
        raise ValueError("t_max must be >= 1")
    parts = [resolve_partition(arch, s) for s in partitions]
    labels = [p.label for p in parts]
    if len(set(labels)) != len(labels):
        raise ValueError("partition labels collide")
    for p in parts:
        if set(p.a) & set(p.b):
            raise ValueError("partition regions overlap")
        if not set(p.a) <= set(range(arch.n_sites)):
            raise ValueError("partition does not fit architecture")

    want_neg = "negativity" in observables
    if want_neg and d != 2:
        raise ValueError("negativity recording requires d = 2")

    key = np.random.SeedSequence(seed).generate_state(2, dtype=np.uint64)
    state = MixedStabilizerState.product_state(arch.n_sites, d,
                                               track_phases=track_phases)
    times = [0]
    s_total = [0]
    mutual = {lab: [0] for lab in labels}
    negativity = {lab: [0.0] for lab in labels} if want_neg else {}

    p_trace = noise.p * noise.trace_prob_scale
    apply_bulk_trace = not noise.boundary_only and not isinstance(arch, BoundaryNoise1D)

    for layer in range(t_max):
        blocks = arch.blocks(layer)
        for slot, sites in enumerate(blocks):
            rng = _block_rng(key, layer, slot)
            if noise.gate_prob >= 1.0 or rng.random() < noise.gate_prob:
                gate = sample_random_clifford(d, len(sites), rng)
                state.apply_clifford(gate, sites)
            if apply_bulk_trace and p_trace > 0 and rng.random() < p_trace:
                state.apply_trace_channel(sites)
        if not apply_bulk_trace:
            for end_idx, sites in enumerate(arch.noise_blocks(layer)):
                rng = _block_rng(key, layer, len(blocks) + end_idx)
                if noise.p >= 1.0 or rng.random() < noise.p:
                    state.apply_trace_channel(sites)
        times.append(layer + 1)
        s_total.append(state.entropy_dits())
        for part in parts:
            mutual[part.label].append(
                state.mutual_information_dits(part.a, part.b))
            if want_neg:
                negativity[part.label].append(state.log_negativity_bits(part.a))

    return TrajectoryRecord(
        seed=seed, d=d, arch=arch.describe(), noise=noise.describe(),
        partitions={p.label: p for p in parts},
        times=np.asarray(times), s_total=np.asarray(s_total),
        mutual={lab: np.asarray(v) for lab, v in mutual.items()},
        negativity={lab: np.asarray(v) for lab, v in negativity.items()},
    )


# ---------------------------------------------------------------------------
# ensembles


@dataclass
class EnsembleResult:
    times: np.ndarray
    n_traj: int
    mean: dict[str, np.ndarray]
    stderr: dict[str, np.ndarray]

    def peak(self, name: str) -> float:
        return float(np.max(self.mean[name]))


def _traj_job(args) -> TrajectoryRecord:
    arch, noise, partitions, t_max, seed, d, observables = args
    return run_trajectory(arch, noise, partitions, t_max, seed, d, observables)


def ensemble_average(arch: Architecture, noise: NoiseModel, partitions, t_max: int,
                     n_traj: int, base_seed: int, d: int = 2,
                     observables: tuple[str, ...] = ("mutual",),
                     workers: int = 1) -> EnsembleResult:
    """Mean and standard error over trajectories seeded base_seed..base_seed+n-1.

    The reduction is ordered by trajectory index, so the result does not depend
    on the worker count.
    """
    if n_traj < 1:
        raise ValueError("n_traj must be >= 1")
    jobs = [(arch, noise, partitions, t_max, base_seed + i, d, observables)
            for i in range(n_traj)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_traj_job, jobs, chunksize=max(1, n_traj // (4 * workers))))
    else:
        records = [_traj_job(j) for j in jobs]

    names = records[0].observable_names()
    mean, stderr = {}, {}
    for name in names:
        stack = np.stack([r.observable(name) for r in records]).astype(np.float64)
        mean[name] = stack.mean(axis=0)
        if n_traj > 1:
            stderr[name] = stack.std(axis=0, ddof=1) / np.sqrt(n_traj)
        else:
            stderr[name] = np.zeros_like(mean[name])
    return EnsembleResult(times=records[0].times, n_traj=n_traj, mean=mean,
                          stderr=stderr)


# ---------------------------------------------------------------------------
# small-incremental bound


def rebuild_arch(desc: dict) -> Architecture:
    variant = desc["variant"]
    if variant == "brickwork1d":
        return Brickwork1D(desc["L"], desc["periodic"])
    if variant == "boundary1d":
        return BoundaryNoise1D(desc["L"], desc["noisy_ends"])
    if variant == "plaquette2d":
        return Plaquette2D(desc["Lx"], desc["Ly"])
    raise ValueError(f"unknown architecture {variant}")


def crossing_gates(arch: Architecture, part: Partition, layer: int) -> list[tuple[int, ...]]:
    a, b = set(part.a), set(part.b)
    out = []
    for sites in arch.blocks(layer):
        ss = set(sites)
        if ss & a and ss & b:
            out.append(sites)
    return out


def check_small_increment(record: TrajectoryRecord, label: str | None = None) -> bool:
    """Whether every per-layer increment of I(A:B) respects the boundary bound.

    Each cut-crossing gate can raise I by at most 2(|gate intersect A| +
    |gate intersect B|) dits; trace channels never raise it.  For a contiguous
    region on a periodic chain this caps the increment at 8 dits per layer.
    """
    arch = rebuild_arch(record.arch)
    labels = [label] if label is not None else list(record.mutual)
    for lab in labels:
        part = record.partitions[lab]
        series = record.mutual[lab]
        a, b = set(part.a), set(part.b)
        for i in range(1, len(series)):
            layer = int(record.times[i]) - 1
            bound = 0
            for sites in crossing_gates(arch, part, layer):
                ss = set(sites)
                bound += 2 * (len(ss & a) + len(ss & b))
            if series[i] - series[i - 1] > bound:
                return False
    return True
