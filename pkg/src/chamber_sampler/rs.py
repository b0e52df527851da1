"""Recursive near-uniform sampling of chambers (the RS procedure).

Pick a hyperplane uniformly, recurse on the arrangement it induces inside
itself, lift the recursive point back and step off the chosen hyperplane by
half the distance to the nearest other one, on a random side.  Every chamber
of a rank-``m`` arrangement of ``k`` hyperplanes is hit with probability at
least ``1 / (2**m * comb(k, m))``.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import (
    TOL,
    as_matrix,
    canonicalize,
    distinct_hyperplanes,
    hyperplane_basis,
    project_to_span,
    rank_and_span_basis,
)

PARALLEL_TOL = 1e-9


@dataclass(frozen=True)
class ArrangementSpec:
    """``k`` distinct unit normals in R^m of a centered arrangement."""

    normals: np.ndarray

    def __post_init__(self):
        N = as_matrix(self.normals, "normals")
        norms = np.linalg.norm(N, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1.0) > TOL)
        if bad.size:
            raise ValueError(f"normal {int(bad[0])} is not a unit vector (norm {norms[bad[0]]:.6g})")
        if distinct_hyperplanes(N).size != N.shape[0]:
            raise ValueError("normals do not define pairwise distinct hyperplanes")
        N.setflags(write=False)
        object.__setattr__(self, "normals", N)

    @classmethod
    def from_vectors(cls, vectors, dedupe: bool = True) -> "ArrangementSpec":
        """Normalize rows (and optionally merge duplicate hyperplanes)."""
        N = as_matrix(vectors)
        norms = np.linalg.norm(N, axis=1)
        if np.any(norms < TOL):
            raise ValueError("zero normal vector")
        N = N / norms[:, None]
        if dedupe:
            N = N[distinct_hyperplanes(N)]
        return cls(N)

    @property
    def k(self) -> int:
        return self.normals.shape[0]

    @property
    def m(self) -> int:
        return self.normals.shape[1]


@dataclass(frozen=True)
class ChamberPoint:
    point: np.ndarray
    clearance: float


@dataclass
class _Node:
    V: np.ndarray
    children: dict = field(default_factory=dict)

    def child(self, I: int):
        try:
            return self.children[I]
        except KeyError:
            pass
        B = hyperplane_basis(self.V[I])
        others = np.delete(self.V, I, axis=0)
        P = others @ B.T
        norms = np.linalg.norm(P, axis=1)
        keep = norms > PARALLEL_TOL
        if keep.any():
            U = canonicalize(P[keep] / norms[keep, None])
            sub = _Node(U[distinct_hyperplanes(U)])
        else:
            sub = None
        entry = (sub, B, others[keep])
        self.children[I] = entry
        return entry


def _coin(rng, size=None):
    return np.where(rng.random(size) < 0.5, -1.0, 1.0)


def _sample_one(node: _Node, rng) -> np.ndarray:
    k, m = node.V.shape
    if m == 1:
        return np.array([_coin(rng)])
    if k == 1:
        return _coin(rng) * node.V[0]
    I = int(rng.integers(k))
    sub, B, others = node.child(I)
    if sub is None:
        return _coin(rng) * node.V[I]
    p = _sample_one(sub, rng) @ B
    delta = np.abs(others @ p).min()
    y = p + _coin(rng) * (delta / 2.0) * node.V[I]
    return y / np.linalg.norm(y)


def _sample_many(node: _Node, n: int, rng) -> np.ndarray:
    k, m = node.V.shape
    if m == 1:
        return _coin(rng, n)[:, None]
    if k == 1:
        return _coin(rng, n)[:, None] * node.V[0]
    choice = rng.integers(k, size=n)
    out = np.empty((n, m))
    for I in np.unique(choice):
        idx = np.flatnonzero(choice == I)
        sub, B, others = node.child(int(I))
        if sub is None:
            out[idx] = _coin(rng, idx.size)[:, None] * node.V[I]
            continue
        P = _sample_many(sub, idx.size, rng) @ B
        delta = np.abs(P @ others.T).min(axis=1)
        Y = P + (_coin(rng, idx.size) * delta / 2.0)[:, None] * node.V[I]
        out[idx] = Y / np.linalg.norm(Y, axis=1, keepdims=True)
    return out


class RecursiveSampler:
    """Reusable RS sampler for one arrangement.

    The recursion tree (bases and induced sub-arrangements) depends only on the
    normals, so it is built lazily once and shared by all draws.  Rank-deficient
    inputs are reduced to their span first.

    Parameters
    ----------
    vectors : array-like of shape (k, m)
        Hyperplane normals; need not be unit, distinct or full rank.
    """

    def __init__(self, vectors):
        V = as_matrix(vectors)
        norms = np.linalg.norm(V, axis=1)
        nonzero = norms > TOL
        if not nonzero.any():
            raise ValueError("all input vectors are zero")
        self.normals = V[nonzero] / norms[nonzero, None]
        self.rank, self.basis = rank_and_span_basis(self.normals)
        coords = project_to_span(self.normals, self.basis)
        coords /= np.linalg.norm(coords, axis=1, keepdims=True)
        coords = canonicalize(coords)
        self._root = _Node(coords[distinct_hyperplanes(coords)])

    def _finish(self, x: np.ndarray) -> np.ndarray:
        y = x @ self.basis
        return y / np.linalg.norm(y, axis=-1, keepdims=True)

    def sample(self, rng) -> ChamberPoint:
        y = self._finish(_sample_one(self._root, rng))
        clearance = float(np.abs(self.normals @ y).min())
        if not clearance > 0.0:
            raise AssertionError("RS produced a point on a hyperplane (tolerance breakdown)")
        return ChamberPoint(y, clearance)

    def sample_points(self, n: int, rng) -> np.ndarray:
        """``n`` independent RS points as rows of an ``(n, m)`` array."""
        if n == 0:
            return np.empty((0, self.normals.shape[1]))
        Y = self._finish(_sample_many(self._root, n, rng))
        if not np.all(np.abs(Y @ self.normals.T).min(axis=1) > 0.0):
            raise AssertionError("RS produced a point on a hyperplane (tolerance breakdown)")
        return Y


def rs_sample(spec: ArrangementSpec, rng) -> ChamberPoint:
    """One RS draw on a validated arrangement."""
    return RecursiveSampler(spec.normals).sample(rng)


def rs_sample_reduced(vectors, rng) -> ChamberPoint:
    """One RS draw on possibly rank-deficient, unnormalized, repeated normals."""
    return RecursiveSampler(vectors).sample(rng)
