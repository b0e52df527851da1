"""Exhaustive ground truth for small instances.

Chamber enumeration by LP over sign patterns, explicit chamber graphs,
closed-form chamber counts, exact conductance by subset sweep, and the
labeling set of tiny threshold networks.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb

import numpy as np
from scipy.sparse.csgraph import connected_components, shortest_path

from .chamber import faces_of
from .errors import OracleBudgetExceeded
from .geometry import lift, rank_and_span_basis
from .lp import solve_margin
from .network import NetworkArchitecture, step
from .rs import ArrangementSpec

MAX_ENUM_K = 20
MAX_CONDUCTANCE_V = 22


@dataclass
class ChamberGraphExplicit:
    signs: np.ndarray  # (C, k), rows sorted lexicographically
    points: np.ndarray  # (C, m) interior witnesses
    faces: list  # faces[c] = tuple of hyperplane indices
    edges: list  # (a, b) with a < b
    degenerate_margins: int = 0

    @property
    def n_chambers(self) -> int:
        return self.signs.shape[0]

    @property
    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_chambers, dtype=int)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def adjacency(self) -> np.ndarray:
        A = np.zeros((self.n_chambers, self.n_chambers), dtype=bool)
        for a, b in self.edges:
            A[a, b] = A[b, a] = True
        return A

    def index_of(self, signs) -> int:
        hit = np.flatnonzero(np.all(self.signs == np.asarray(signs), axis=1))
        if hit.size == 0:
            raise KeyError(tuple(signs))
        return int(hit[0])

    def is_connected(self) -> bool:
        n, _ = connected_components(self.adjacency(), directed=False)
        return n == 1

    def diameter(self) -> int:
        D = shortest_path(self.adjacency(), unweighted=True, directed=False)
        return int(D.max()) if np.all(np.isfinite(D)) else -1


def chamber_count_formula(n: int, d: int) -> int:
    """Chambers of ``n`` general-position centered hyperplanes in R^d."""
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    return 2 * sum(comb(n - 1, i) for i in range(d))


def feasible_sign_patterns(spec: ArrangementSpec, max_k: int = MAX_ENUM_K) -> tuple[np.ndarray, np.ndarray, int]:
    """All strictly feasible sign patterns, with interior witnesses.

    Patterns are grown one hyperplane at a time; an infeasible prefix has no
    feasible extension, so it is pruned.  Patterns come in antipodal pairs,
    so only those with first sign ``+1`` are searched.
    """
    if spec.k > max_k:
        raise OracleBudgetExceeded(f"k = {spec.k} exceeds the enumeration limit {max_k}")
    V = spec.normals
    degenerate = 0
    frontier = [((1,), V[0])]
    for j in range(1, spec.k):
        nxt = []
        for prefix, _ in frontier:
            for s in (1, -1):
                pattern = prefix + (s,)
                sol = solve_margin(V[: j + 1], pattern)
                degenerate += sol.status == "degenerate"
                if sol.feasible:
                    nxt.append((pattern, sol.witness))
        frontier = nxt
    pats = [p for p, _ in frontier] + [tuple(-x for x in p) for p, _ in frontier]
    pts = [w for _, w in frontier] + [-w for _, w in frontier]
    order = sorted(range(len(pats)), key=lambda i: pats[i])
    return np.array([pats[i] for i in order], dtype=int), np.array([pts[i] for i in order]), degenerate


def enumerate_chambers(spec: ArrangementSpec, max_k: int = MAX_ENUM_K) -> ChamberGraphExplicit:
    """Every chamber of ``spec`` and the face-sharing adjacency between them."""
    signs, points, degenerate = feasible_sign_patterns(spec, max_k)
    faces = [faces_of(spec, s) for s in signs]
    index = {tuple(s): c for c, s in enumerate(signs.tolist())}
    edges = []
    for a, s in enumerate(signs.tolist()):
        for i in faces[a]:
            flipped = list(s)
            flipped[i] = -flipped[i]
            b = index.get(tuple(flipped))
            if b is not None and a < b and i in faces[b]:
                edges.append((a, b))
    return ChamberGraphExplicit(signs, points, faces, sorted(edges), degenerate)


def graph_checks(g: ChamberGraphExplicit, spec: ArrangementSpec) -> dict:
    """Degree, connectivity and diameter checks for general-position input.

    Degrees must lie in ``[min(m, k), k]`` (with fewer hyperplanes than
    dimensions every chamber is bounded by all of them), face counts in
    ``[rank, k]``, and the graph must be connected with diameter at most ``k``.
    """
    rank, _ = rank_and_span_basis(spec.normals)
    deg = g.degrees
    violations = []
    for c in range(g.n_chambers):
        nf = len(g.faces[c])
        if not (min(spec.m, spec.k) <= deg[c] <= spec.k):
            violations.append({"check": "degree", "chamber": g.signs[c].tolist(), "value": int(deg[c])})
        if not (rank <= nf <= spec.k):
            violations.append({"check": "faces", "chamber": g.signs[c].tolist(), "value": nf})
    connected = g.is_connected()
    if not connected:
        violations.append({"check": "connected"})
    diam = g.diameter()
    if connected and diam > spec.k:
        violations.append({"check": "diameter", "value": diam})
    return {
        "chambers": g.n_chambers,
        "rank": rank,
        "min_degree": int(deg.min()),
        "max_degree": int(deg.max()),
        "connected": connected,
        "diameter": diam,
        "violations": violations,
        "ok": not violations,
    }


@dataclass
class ConductanceReport:
    value: float
    witness_set: tuple
    cut: int = 0
    volume: int = 0
    extra: dict = field(default_factory=dict)


def cut_and_volume(adjacency, subset, degrees=None) -> tuple[int, int]:
    """Boundary edge count and degree sum of ``subset``, computed directly."""
    A = np.asarray(adjacency, dtype=int)
    deg = A.sum(axis=1) if degrees is None else np.asarray(degrees)
    inside = np.zeros(A.shape[0], dtype=bool)
    inside[list(subset)] = True
    return int(A[np.ix_(inside, ~inside)].sum()), int(deg[inside].sum())


def _subset_tables(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cut size and volume of every vertex subset, indexed by bitmask."""
    n = A.shape[0]
    deg = A.sum(axis=1).astype(np.int32)
    nbr = np.array([sum(1 << j for j in np.flatnonzero(A[i])) for i in range(n)], dtype=np.int64)
    vol = np.zeros(1 << n, dtype=np.int32)
    cut = np.zeros(1 << n, dtype=np.int32)
    for b in range(n):
        lo = 1 << b
        prev = np.arange(lo, dtype=np.int64)
        common = np.bitwise_count(prev & nbr[b]).astype(np.int32)
        vol[lo:2 * lo] = vol[:lo] + deg[b]
        cut[lo:2 * lo] = cut[:lo] + deg[b] - 2 * common
    return cut, vol


def _members(mask: int, n: int) -> tuple:
    return tuple(i for i in range(n) if mask >> i & 1)


def conductance_exact(graph, max_vertices: int = MAX_CONDUCTANCE_V) -> ConductanceReport:
    """``min |cut(S)| / vol(S)`` over nonempty ``S`` with ``vol(S) <= vol(V)/2``."""
    A = graph.adjacency() if isinstance(graph, ChamberGraphExplicit) else np.asarray(graph, dtype=bool)
    n = A.shape[0]
    if n > max_vertices:
        raise OracleBudgetExceeded(f"{n} vertices exceed the subset-sweep limit {max_vertices}")
    cut, vol = _subset_tables(A)
    total = int(vol[-1])
    ok = (vol > 0) & (2 * vol.astype(np.int64) <= total)
    ratio = np.full(vol.shape, np.inf)
    ratio[ok] = cut[ok] / vol[ok]
    best = int(np.argmin(ratio))
    S = _members(best, n)
    c, v = cut_and_volume(A, S)
    return ConductanceReport(c / v, S, c, v)


def lazy_conductance_exact(graph, lazy_degree: int, max_vertices: int = MAX_CONDUCTANCE_V) -> ConductanceReport:
    """Exact conductance of the chamber graph padded with degree-1 dummies.

    Every chamber vertex receives ``lazy_degree - deg`` pendant dummy vertices.
    For a fixed set ``S`` of chamber vertices the best completion takes as many
    dummies of ``S`` as the volume cap allows (each one moves a unit from the
    cut to the volume); dummies whose chamber is outside the set add one unit
    to both and never lower a ratio that is at most one.  The minimum over
    chamber sets ``S`` of that completion is therefore exact.
    """
    A = graph.adjacency() if isinstance(graph, ChamberGraphExplicit) else np.asarray(graph, dtype=bool)
    n = A.shape[0]
    if n > max_vertices:
        raise OracleBudgetExceeded(f"{n} chambers exceed the subset-sweep limit {max_vertices}")
    deg = A.sum(axis=1)
    if deg.max() > lazy_degree:
        raise ValueError("lazy_degree is below the maximum chamber degree")
    pad = lazy_degree - deg
    cut, _ = _subset_tables(A)
    masks = np.arange(1 << n, dtype=np.int64)
    n_in = np.bitwise_count(masks).astype(np.int64)
    pad_in = np.zeros(1 << n, dtype=np.int64)
    for b in range(n):
        lo = 1 << b
        pad_in[lo:2 * lo] = pad_in[:lo] + pad[b]
    total = lazy_degree * n + int(pad.sum())
    base_vol = lazy_degree * n_in
    take = np.clip(total // 2 - base_vol, 0, pad_in)
    ok = (n_in > 0) & (2 * base_vol <= total)
    ratio = np.full(1 << n, np.inf)
    ratio[ok] = (cut[ok] + pad_in[ok] - take[ok]) / (base_vol[ok] + take[ok])
    best = int(np.argmin(ratio))
    if ratio[best] >= 1.0:
        # a lone dummy vertex has ratio exactly one
        return ConductanceReport(1.0, (), 1, 1, {"dummies_taken": 1})
    taken = int(take[best])
    c = int(cut[best] + pad_in[best] - taken)
    v = int(base_vol[best] + taken)
    return ConductanceReport(c / v, _members(best, n), c, v, {"dummies_taken": taken})


def lazy_graph_explicit(graph, lazy_degree: int) -> np.ndarray:
    """Adjacency of the chamber graph with explicit pendant dummy vertices."""
    A = graph.adjacency() if isinstance(graph, ChamberGraphExplicit) else np.asarray(graph, dtype=bool)
    n = A.shape[0]
    pad = lazy_degree - A.sum(axis=1)
    N = n + int(pad.sum())
    B = np.zeros((N, N), dtype=bool)
    B[:n, :n] = A
    nxt = n
    for v in range(n):
        for _ in range(int(pad[v])):
            B[v, nxt] = B[nxt, v] = True
            nxt += 1
    return B


def rs_exact_distribution(spec) -> dict:
    """Exact chamber distribution of RS, by enumerating all of its coin flips.

    ``spec`` is an ``ArrangementSpec`` or raw vectors (reduced to their span
    as RS does); keys are sign vectors against the given rows.

    RS makes only discrete random choices (a hyperplane index and a side at
    each level), so the law of its output chamber is a finite sum over
    branches.  Each branch is replayed with a scripted generator.
    """
    from .rs import RecursiveSampler

    normals = spec.normals if isinstance(spec, ArrangementSpec) else np.asarray(spec, dtype=float)
    sampler = RecursiveSampler(normals)
    out: dict = {}

    class Scripted:
        def __init__(self, script):
            self.script = list(script)
            self.log = []  # (n_options, probability) of each choice consumed

        def integers(self, k):
            j = self.script[len(self.log)] if len(self.log) < len(self.script) else 0
            self.log.append(k)
            return j

        def random(self, size=None):
            j = self.script[len(self.log)] if len(self.log) < len(self.script) else 0
            self.log.append(2)
            return 0.25 if j == 0 else 0.75

    stack = [()]
    while stack:
        script = stack.pop()
        r = Scripted(script)
        y = sampler.sample(r).point
        if len(r.log) > len(script):
            # branch on the first unscripted choice
            for j in range(r.log[len(script)]):
                stack.append(script + (j,))
            continue
        p = 1.0
        for k in r.log:
            p /= k
        key = tuple(int(s) for s in np.where(normals @ y > 0, 1, -1))
        out[key] = out.get(key, 0.0) + p
    return out


def labelings_of_neuron(H: np.ndarray) -> np.ndarray:
    """All labelings one threshold neuron induces on the rows of ``H``."""
    uniq, inverse = np.unique(H, axis=0, return_inverse=True)
    lifted = lift(uniq)
    if uniq.shape[0] == 1:
        signs = np.array([[1], [-1]])
    else:
        signs, _, _ = feasible_sign_patterns(ArrangementSpec(lifted))
    return ((signs + 1) // 2)[:, np.ravel(inverse)].astype(np.int8)


def enumerate_network_labelings(net: NetworkArchitecture, X, budget: int = 1_000_000) -> set:
    """The exact labeling set of ``net`` on ``X``, composed layer by layer.

    Neurons in a layer act independently on the same input, so the set of
    layer outputs is the product of per-neuron labeling sets; distinct layer
    outputs are then propagated to the next layer.
    """
    X = np.asarray(X, dtype=float)
    reps = {X.tobytes(): X}
    used = 0
    memo: dict = {}
    for u in net.layers:
        nxt = {}
        for H in reps.values():
            key = H.tobytes() + bytes(str(H.shape), "ascii")
            if key not in memo:
                memo[key] = labelings_of_neuron(H)
            L = memo[key]
            used += L.shape[0] ** u
            if used > budget:
                raise OracleBudgetExceeded(f"more than {budget} composed patterns")
            for combo in itertools.product(range(L.shape[0]), repeat=u):
                out = L[list(combo)].T.astype(float)  # (n, u)
                nxt.setdefault(out.tobytes(), out)
        reps = nxt
    return {tuple(int(b) for b in H[:, 0]) for H in reps.values()}


def slice_chamber_count(spec: ArrangementSpec, cut_normal) -> int:
    """Chambers induced inside the hyperplane ``cut_normal^perp``."""
    from .geometry import hyperplane_basis

    c = np.asarray(cut_normal, dtype=float)
    B = hyperplane_basis(c / np.linalg.norm(c))
    P = spec.normals @ B.T
    return enumerate_chambers(ArrangementSpec.from_vectors(P)).n_chambers


__all__ = [
    "ChamberGraphExplicit",
    "ConductanceReport",
    "chamber_count_formula",
    "conductance_exact",
    "cut_and_volume",
    "enumerate_chambers",
    "enumerate_network_labelings",
    "feasible_sign_patterns",
    "graph_checks",
    "labelings_of_neuron",
    "lazy_conductance_exact",
    "lazy_graph_explicit",
    "rs_exact_distribution",
    "slice_chamber_count",
    "slow_mixing_fixture",
]


def slow_mixing_fixture(n: int) -> ArrangementSpec:
    """A non-general-position arrangement of ``n`` planes in R^3 with a bottleneck.

    ``n - 1`` planes form a pencil around the vertical axis and one horizontal
    plane caps it.  The chamber graph is a prism over a ``2(n-1)``-cycle whose
    half-prism cut has only four edges, giving conductance ``2 / (3(n-1))``,
    below the planar general-position value ``1/n`` for every ``n >= 4``.
    """
    if n < 4:
        raise ValueError("the fixture needs n >= 4")
    p = n - 1
    theta = np.pi * np.arange(p) / p
    pencil = np.column_stack([np.cos(theta), np.sin(theta), np.zeros(p)])
    return ArrangementSpec(np.vstack([pencil, [[0.0, 0.0, 1.0]]]))
