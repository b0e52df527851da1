"""Margin linear programs deciding strict sign-pattern feasibility.

A sign pattern ``s`` over normals ``v_j`` is realized by an open cone
``{w : s_j v_j.w > 0 (s_j != 0), v_j.w = 0 (s_j == 0)}``.  Open constraints
are handled by maximizing a common margin ``t`` under the box ``|w_c| <= 1``;
since the constraints are homogeneous, the cone is nonempty iff the optimal
``t`` is positive.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import current
from .errors import LPIterationLimit, LPNumericalError

_PIVOT_EPS = 1e-11
_PERTURB = 1e-9
_STALL = 20  # degenerate pivots tolerated before switching to Bland's rule


@dataclass(frozen=True)
class MarginSolution:
    feasible: bool
    witness: np.ndarray | None
    margin: float
    status: str  # "feasible", "infeasible" or "degenerate" (0 < t <= margin_min)
    iterations: int = 0


def _pivot(T: np.ndarray, basis: np.ndarray, r: int, c: int) -> None:
    T[r] /= T[r, c]
    col = T[:, c].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    basis[r] = c


def _run(T: np.ndarray, basis: np.ndarray, n_cols: int, max_iter: int, used: int) -> int:
    """Primal simplex on a feasible tableau; returns the pivot count so far.

    Entering columns follow Dantzig's rule until pivots stop making progress,
    then Bland's smallest-index rule takes over until a nondegenerate pivot
    occurs, which rules out cycling.
    """
    M = T.shape[0] - 1
    it = used
    stalled = 0
    while True:
        z = T[-1, :n_cols]
        cand = np.flatnonzero(z < -_PIVOT_EPS)
        if cand.size == 0:
            return it
        if it >= max_iter:
            raise LPIterationLimit(f"simplex exceeded {max_iter} pivots")
        c = int(cand[0]) if stalled >= _STALL else int(cand[np.argmin(z[cand])])
        col = T[:M, c]
        rows = np.flatnonzero(col > _PIVOT_EPS)
        if rows.size == 0:
            raise LPNumericalError("unbounded direction in a bounded program")
        ratios = T[rows, -1] / col[rows]
        best = ratios.min()
        tied = rows[ratios <= best + 1e-12 * max(1.0, abs(best))]
        r = int(tied[np.argmin(basis[tied])])
        stalled = stalled + 1 if best <= 1e-12 else 0
        _pivot(T, basis, r, c)
        it += 1


def _perturbation(M: int) -> np.ndarray:
    # deterministic, distinct, tiny; breaks ties among the many zero right-hand sides
    return _PERTURB * (1.0 + (np.arange(M) * 0.6180339887498949) % 1.0)


def simplex_max(c, A, b, max_iter: int | None = None, perturb: bool = True) -> tuple[str, np.ndarray | None, float, int]:
    """Maximize ``c.x`` subject to ``A x <= b``, ``x >= 0``.

    Two-phase tableau method; phase one is skipped when the origin is
    feasible (``b >= 0``).  With ``perturb`` the pivots are chosen on a
    slightly perturbed right-hand side (which removes most degenerate pivots)
    while the unperturbed right-hand side is carried along; the final basis
    is accepted only if it is primal feasible for the original data, and the
    solve is otherwise repeated without perturbation.

    Returns ``(status, x, value, pivots)`` with status ``"optimal"`` or
    ``"infeasible"``.
    """
    c = np.asarray(c, dtype=float)
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    M, n = A.shape
    if max_iter is None:
        max_iter = 50 * (M + n)
    # columns: x (n) | slacks (M) | artificial (1) | original rhs | working rhs
    T = np.zeros((M + 1, n + M + 3))
    T[:M, :n] = A
    T[:M, n:n + M] = np.eye(M)
    T[:M, -2] = b
    T[:M, -1] = b + (_perturbation(M) if perturb else 0.0)
    basis = np.arange(n, n + M)
    art = n + M
    it = 0
    if M and T[:M, -1].min() < 0:
        T[:M, art] = -1.0
        T[-1, art] = 1.0  # maximize -x0
        _pivot(T, basis, int(np.argmin(T[:M, -1])), art)
        it = _run(T, basis, art + 1, max_iter, 1)
        if T[-1, -2] < -1e-9:
            return "infeasible", None, float("nan"), it
        if art in basis:
            r = int(np.flatnonzero(basis == art)[0])
            nz = np.flatnonzero(np.abs(T[r, :art]) > _PIVOT_EPS)
            if nz.size:
                _pivot(T, basis, r, int(nz[0]))
        T[:, art] = 0.0
    T[-1, :] = 0.0
    T[-1, :n] = -c
    for r, j in enumerate(basis):
        if j < n and c[j] != 0.0:
            T[-1] += c[j] * T[r]
    it = _run(T, basis, art, max_iter, it)
    xb = T[:M, -2]
    if perturb and xb.min() < -1e-9:
        status, x, val, more = simplex_max(c, A, b, max_iter=max_iter - it, perturb=False)
        return status, x, val, it + more
    x = np.zeros(n + M + 1)
    x[basis] = np.maximum(xb, 0.0)
    return "optimal", x[:n], float(c @ x[:n]), it


def solve_margin(normals, signs, margin_min: float | None = None, tol_eq: float | None = None,
                 max_iter: int | None = None) -> MarginSolution:
    """Maximize the common slack of a sign pattern inside the unit box.

    ``signs`` entries are -1, 0 or +1; zero entries become equality
    constraints.  At least one entry must be nonzero.
    """
    V = np.asarray(normals, dtype=float)
    s = np.asarray(signs)
    if V.ndim != 2 or V.shape[0] == 0:
        raise ValueError("normals must be a nonempty 2-D array")
    if s.shape != (V.shape[0],):
        raise ValueError("signs and normals lengths differ")
    if not np.all(np.isin(s, (-1, 0, 1))):
        raise ValueError("signs must be in {-1, 0, +1}")
    tol = current()
    margin_min = tol.margin if margin_min is None else margin_min
    tol_eq = tol.eq if tol_eq is None else tol_eq
    strict = s != 0
    if not strict.any():
        raise ValueError("at least one strict constraint is required")
    k, m = V.shape
    S = s[strict, None] * V[strict]
    E = V[~strict]
    # x = [w+ (m), w- (m), t]
    rows = [np.hstack([-S, S, np.ones((S.shape[0], 1))])]
    if E.shape[0]:
        rows.append(np.hstack([E, -E, np.zeros((E.shape[0], 1))]))
        rows.append(np.hstack([-E, E, np.zeros((E.shape[0], 1))]))
    rows.append(np.hstack([np.eye(2 * m), np.zeros((2 * m, 1))]))
    A = np.vstack(rows)
    b = np.zeros(A.shape[0])
    b[-2 * m:] = 1.0
    c = np.zeros(2 * m + 1)
    c[-1] = 1.0
    if max_iter is None:
        max_iter = 50 * (k + m)
    _, x, t, it = simplex_max(c, A, b, max_iter=max_iter)
    w = x[:m] - x[m:2 * m]
    if t <= 0.0:
        return MarginSolution(False, None, 0.0, "infeasible", it)
    if t <= margin_min:
        return MarginSolution(False, None, t, "degenerate", it)
    slack = S @ w
    if slack.min() < margin_min or (E.shape[0] and np.abs(E @ w).max() > tol_eq):
        raise LPNumericalError("margin witness failed re-verification")
    return MarginSolution(True, w, float(slack.min()), "feasible", it)


def face_feasible(normals, signs, i: int, **kw) -> MarginSolution:
    """Whether hyperplane ``i`` supports a facet of the chamber ``signs``."""
    s = np.array(signs, dtype=int, copy=True)
    if np.any(s == 0):
        raise ValueError("chamber signs must be nonzero")
    if not 0 <= i < s.shape[0]:
        raise IndexError(f"face index {i} out of range")
    s[i] = 0
    if not np.any(s):
        # a single hyperplane is always a face of both its half-spaces
        return MarginSolution(True, np.zeros(np.asarray(normals).shape[1]), np.inf, "feasible", 0)
    return solve_margin(normals, s, **kw)
