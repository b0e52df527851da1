"""Random walks over the chamber graph (NRW) and their lazy variant.

The lazy chamber graph pads every chamber vertex with degree-1 dummy
vertices up to ``lazy_degree``.  Observed on chamber vertices this is the
chain that crosses each face with probability ``1 / lazy_degree`` and stays
put otherwise; it is symmetric, hence uniform over chambers.  That projected
chain is what is simulated here.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chamber import ChamberCache, ChamberWitness
from .errors import WalkConfigError
from .rs import ArrangementSpec, RecursiveSampler


@dataclass(frozen=True)
class WalkConfig:
    steps: int = 0
    lazy: bool = False
    lazy_degree: int | None = None  # defaults to 4 * k
    keep_trace: bool = True

    def __post_init__(self):
        if self.steps < 0:
            raise WalkConfigError("steps must be nonnegative")
        if self.lazy_degree is not None and self.lazy_degree < 1:
            raise WalkConfigError("lazy_degree must be positive")

    def resolved_degree(self, spec: ArrangementSpec) -> int:
        return 4 * spec.k if self.lazy_degree is None else self.lazy_degree


@dataclass(frozen=True)
class WalkTrace:
    visited: list
    final: ChamberWitness


def _check_degree(w: ChamberWitness, L: int) -> None:
    if len(w.faces) > L:
        raise WalkConfigError(f"chamber {w.signs} has degree {len(w.faces)} > lazy_degree {L}")


def nrw(spec: ArrangementSpec, cfg: WalkConfig, rng, cache: ChamberCache | None = None) -> WalkTrace:
    """Run one walk of ``cfg.steps`` steps started from an RS sample."""
    cache = ChamberCache(spec) if cache is None else cache
    start = RecursiveSampler(spec.normals).sample(rng)
    w = cache.locate(start.point)
    L = cfg.resolved_degree(spec)
    u = rng.random(cfg.steps)
    visited = [w.signs] if cfg.keep_trace else []
    for t in range(cfg.steps):
        deg = len(w.faces)
        if cfg.lazy:
            _check_degree(w, L)
            j = int(u[t] * L)
            if j < deg:
                w = cache.cross(w, w.faces[j])
        else:
            w = cache.cross(w, w.faces[int(u[t] * deg)])
        if cfg.keep_trace:
            visited.append(w.signs)
    if cfg.lazy:
        _check_degree(w, L)
    return WalkTrace(visited, w)


@dataclass
class TransitionTable:
    """Chamber graph discovered by face crossing, in array form."""

    signs: np.ndarray  # (C, k) entries +-1
    degree: np.ndarray  # (C,)
    neighbors: np.ndarray  # (C, max_degree), padded with -1
    faces: np.ndarray  # (C, max_degree) hyperplane index crossed, padded with -1

    @classmethod
    def from_cache(cls, cache: ChamberCache) -> "TransitionTable":
        chambers = sorted(cache, key=lambda w: w.signs)
        index = {w.signs: i for i, w in enumerate(chambers)}
        width = max(len(w.faces) for w in chambers)
        nb = -np.ones((len(chambers), width), dtype=int)
        fc = -np.ones_like(nb)
        for a, w in enumerate(chambers):
            for j, i in enumerate(w.faces):
                flipped = list(w.signs)
                flipped[i] = -flipped[i]
                nb[a, j] = index[tuple(flipped)]
                fc[a, j] = i
        return cls(
            np.array([w.signs for w in chambers], dtype=int),
            np.array([len(w.faces) for w in chambers], dtype=int),
            nb,
            fc,
        )

    def index_of(self, signs) -> int:
        hit = np.flatnonzero(np.all(self.signs == np.asarray(signs), axis=1))
        if hit.size == 0:
            raise KeyError(tuple(signs))
        return int(hit[0])

    def step(self, state: np.ndarray, u: np.ndarray, lazy: bool, lazy_degree: int) -> np.ndarray:
        deg = self.degree[state]
        if lazy:
            j = (u * lazy_degree).astype(int)
            move = j < deg
            out = state.copy()
            out[move] = self.neighbors[state[move], j[move]]
            return out
        j = (u * deg).astype(int)
        return self.neighbors[state, j]


def explore(spec: ArrangementSpec, rng, cache: ChamberCache | None = None) -> tuple[ChamberCache, TransitionTable]:
    """Discover every chamber reachable by face crossing from an RS start."""
    cache = ChamberCache(spec) if cache is None else cache
    start = cache.locate(RecursiveSampler(spec.normals).sample(rng).point)
    cache.explore(start)
    return cache, TransitionTable.from_cache(cache)


def nrw_many(spec: ArrangementSpec, cfg: WalkConfig, runs: int, rng,
             table: TransitionTable | None = None) -> tuple[np.ndarray, TransitionTable]:
    """``runs`` independent walks advanced in lockstep.

    Each run starts from its own RS sample.  Returns the final chamber index
    of every run (rows of ``table.signs``) and the table.
    """
    if table is None:
        _, table = explore(spec, rng)
    L = cfg.resolved_degree(spec)
    if cfg.lazy and table.degree.max() > L:
        raise WalkConfigError(f"observed degree {table.degree.max()} > lazy_degree {L}")
    starts = RecursiveSampler(spec.normals).sample_points(runs, rng)
    signs = np.where(starts @ spec.normals.T > 0, 1, -1)
    lookup = {tuple(s): i for i, s in enumerate(table.signs.tolist())}
    state = np.array([lookup[tuple(s)] for s in signs.tolist()], dtype=int)
    for _ in range(cfg.steps):
        state = table.step(state, rng.random(runs), cfg.lazy, L)
    return state, table


def visit_frequencies(table: TransitionTable, steps: int, chains: int, rng, lazy: bool = False,
                      lazy_degree: int = 1, burn_in: int = 0) -> np.ndarray:
    """Long-run visit frequencies pooled over ``chains`` parallel walks.

    Chains start uniformly over chambers; the first ``burn_in`` steps are
    discarded.
    """
    C = table.signs.shape[0]
    state = rng.integers(C, size=chains)
    for _ in range(burn_in):
        state = table.step(state, rng.random(chains), lazy, lazy_degree)
    counts = np.zeros(C, dtype=np.int64)
    for _ in range(steps):
        state = table.step(state, rng.random(chains), lazy, lazy_degree)
        counts += np.bincount(state, minlength=C)
    return counts / counts.sum()


def walk_tv_to_uniform(spec: ArrangementSpec, cfg: WalkConfig, runs: int, rng, support=None) -> float:
    """Empirical total-variation distance of the walk's final chamber to uniform.

    ``support`` (sign vectors of all chambers) defaults to the oracle's.
    """
    from .oracle import feasible_sign_patterns
    from .stats import frequency_report

    if support is None:
        support, _, _ = feasible_sign_patterns(spec)
    final, table = nrw_many(spec, cfg, runs, rng)
    return frequency_report(table.signs[final], support=support).tv_to_uniform


def stationary_ratio_audit(spec: ArrangementSpec, cfg: WalkConfig, samples: int, rng,
                           chains: int = 1000, burn_in: int = 200, rel_tol: float = 0.05,
                           slack: float = 0.05) -> dict:
    """Compare long-run visit frequencies of the simple walk with degrees.

    Frequencies should be proportional to chamber degree, and their max/min
    ratio should not exceed ``k / m`` (up to ``slack``).
    """
    from .oracle import enumerate_chambers

    if cfg.lazy:
        raise WalkConfigError("the stationary-ratio audit runs the non-lazy walk")
    _, table = explore(spec, rng)
    steps = max(1, -(-samples // chains))
    freq = visit_frequencies(table, steps, chains, rng, burn_in=burn_in)
    g = enumerate_chambers(spec)
    deg = np.array([g.degrees[g.index_of(s)] for s in table.signs])
    expected = deg / deg.sum()
    rel = np.abs(freq - expected) / expected
    ratio = float(freq.max() / freq.min())
    bound = spec.k / min(spec.m, spec.k)
    return {
        "chambers": int(table.signs.shape[0]),
        "oracle_chambers": g.n_chambers,
        "visits": int(steps * chains),
        "max_relative_error": float(rel.max()),
        "degree_ratio": float(deg.max() / deg.min()),
        "frequency_ratio": ratio,
        "ratio_bound": bound,
        "proportional_ok": bool(rel.max() <= rel_tol),
        "ratio_ok": bool(ratio <= bound * (1 + slack)),
        "complete": table.signs.shape[0] == g.n_chambers,
    }
