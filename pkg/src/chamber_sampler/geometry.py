"""Dense linear-algebra kernels for centered hyperplane arrangements."""
from __future__ import annotations

import numpy as np

from .config import current

TOL = 1e-9


def as_matrix(vectors, name: str = "vectors") -> np.ndarray:
    """Coerce a list of vectors to a finite 2-D float array."""
    arr = np.asarray(vectors, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"{name} must be a nonempty list of vectors")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite coordinates")
    return arr


def lift(sample) -> np.ndarray:
    """Map points ``x_i`` in R^d to unit normals ``(x_i, -1)/||(x_i, -1)||``.

    Row ``i`` of the result is the normal of the hyperplane
    ``{(w, c) : x_i.w - c = 0}`` in parameter space, i.e. the decision
    boundary of a threshold neuron with weights ``w`` and bias ``-c``.
    """
    X = as_matrix(sample, "sample")
    lifted = np.hstack([X, -np.ones((X.shape[0], 1))])
    return lifted / np.linalg.norm(lifted, axis=1, keepdims=True)


def hyperplane_basis(v) -> np.ndarray:
    """Orthonormal basis (rows) of the hyperplane orthogonal to unit ``v``.

    Built from the Householder reflection sending ``v`` to a signed axis
    vector; the remaining rows of the (symmetric, orthogonal) reflector are
    orthonormal and orthogonal to ``v``.  Deterministic in ``v``.
    """
    v = np.asarray(v, dtype=float)
    if v.ndim != 1:
        raise ValueError("v must be a single vector")
    m = v.shape[0]
    if m < 2:
        raise ValueError("a hyperplane basis needs ambient dimension >= 2")
    norm = np.linalg.norm(v)
    if not np.isfinite(norm) or norm < TOL:
        raise ValueError("v is (near) zero")
    if abs(norm - 1.0) > 1e-6:
        raise ValueError("v must be a unit vector")
    v = v / norm
    j = int(np.argmax(np.abs(v)))
    u = v.copy()
    u[j] += 1.0 if v[j] >= 0 else -1.0
    H = np.eye(m) - (2.0 / (u @ u)) * np.outer(u, u)
    return np.delete(H, j, axis=0)


def rank_and_span_basis(vectors, tol_rank: float | None = None) -> tuple[int, np.ndarray]:
    """Numerical rank and an orthonormal basis (rows) of the span."""
    tol_rank = current().rank if tol_rank is None else tol_rank
    A = as_matrix(vectors)
    _, s, vt = np.linalg.svd(A, full_matrices=False)
    if s[0] == 0.0:
        return 0, np.zeros((0, A.shape[1]))
    r = int(np.sum(s > tol_rank * s[0]))
    return r, vt[:r].copy()


def project_to_span(vectors, basis) -> np.ndarray:
    """Coordinates of ``vectors`` with respect to the orthonormal ``basis``."""
    A = as_matrix(vectors)
    B = np.asarray(basis, dtype=float)
    if B.ndim != 2 or B.shape[1] != A.shape[1]:
        raise ValueError(
            f"basis of ambient dimension {B.shape[-1]} does not match vectors of dimension {A.shape[1]}"
        )
    return A @ B.T


def canonicalize(normals, tol: float = TOL) -> np.ndarray:
    """Flip each row so its first coordinate of magnitude > tol is positive."""
    N = np.array(normals, dtype=float, copy=True)
    for row in N:
        big = np.flatnonzero(np.abs(row) > tol)
        if big.size and row[big[0]] < 0:
            row *= -1.0
    return N


def distinct_hyperplanes(normals, tol: float | None = None) -> np.ndarray:
    """Indices of rows defining pairwise distinct hyperplanes.

    ``v`` and ``-v`` describe the same hyperplane, so rows are compared after
    sign canonicalization; the first representative of each cluster is kept.
    """
    tol = current().dedup if tol is None else tol
    C = canonicalize(normals)
    keep: list[int] = []
    for i, row in enumerate(C):
        if all(np.linalg.norm(row - C[j]) > tol for j in keep):
            keep.append(i)
    return np.asarray(keep, dtype=int)


def is_general_position(normals, tol_rank: float = 1e-8) -> bool:
    """Every subset of at most ``m`` normals is linearly independent."""
    from itertools import combinations

    N = as_matrix(normals)
    k, m = N.shape
    size = min(k, m)
    for idx in combinations(range(k), size):
        s = np.linalg.svd(N[list(idx)], compute_uv=False)
        if s[-1] <= tol_rank * max(s[0], 1.0):
            return False
    return True


def random_unit_vectors(k: int, m: int, rng: np.random.Generator) -> np.ndarray:
    """``k`` independent points uniform on the unit sphere in R^m."""
    G = rng.standard_normal((k, m))
    return G / np.linalg.norm(G, axis=1, keepdims=True)


def random_general_position(k: int, m: int, rng: np.random.Generator, min_sv: float = 1e-3) -> np.ndarray:
    """Random unit normals, redrawn until well-conditioned general position."""
    for _ in range(1000):
        N = random_unit_vectors(k, m, rng)
        if is_general_position(N, tol_rank=min_sv):
            return N
    raise RuntimeError("could not draw a general-position arrangement")
