"""Chamber identification: sign vectors, faces and face crossing."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import current
from .errors import AdjacencyViolation, OnBoundaryError
from .lp import face_feasible, solve_margin
from .rs import ArrangementSpec



@dataclass(frozen=True)
class ChamberWitness:
    point: np.ndarray
    signs: tuple[int, ...]
    faces: tuple[int, ...]

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple((s + 1) // 2 for s in self.signs)


def signs_to_labels(signs) -> np.ndarray:
    return (np.asarray(signs) + 1) // 2


def labels_to_signs(labels) -> np.ndarray:
    return 2 * np.asarray(labels) - 1


def sign_vector(point, spec: ArrangementSpec, tol_sign: float | None = None) -> tuple[int, ...]:
    tol_sign = current().sign if tol_sign is None else tol_sign
    p = np.asarray(point, dtype=float)
    if p.shape != (spec.m,):
        raise ValueError(f"point has shape {p.shape}, expected ({spec.m},)")
    # scale-free test: the point is only meaningful up to positive scaling
    norm = np.linalg.norm(p)
    if norm == 0.0:
        raise OnBoundaryError("the origin lies on every hyperplane")
    u = spec.normals @ (p / norm)
    close = np.flatnonzero(np.abs(u) <= tol_sign)
    if close.size:
        raise OnBoundaryError(f"point lies within {tol_sign:g} of hyperplane {int(close[0])}")
    return tuple(int(x) for x in np.where(u > 0, 1, -1))


def faces_of(spec: ArrangementSpec, signs) -> tuple[int, ...]:
    """Indices ``i`` such that hyperplane ``i`` bounds the chamber ``signs``."""
    return tuple(i for i in range(spec.k) if face_feasible(spec.normals, signs, i).feasible)


def chamber_faces(point, spec: ArrangementSpec, tol_sign: float | None = None) -> ChamberWitness:
    """Sign vector and face set of the chamber containing ``point``."""
    signs = sign_vector(point, spec, tol_sign)
    return ChamberWitness(np.asarray(point, dtype=float), signs, faces_of(spec, signs))


def cross_face(w: ChamberWitness, i: int, spec: ArrangementSpec, rng=None) -> ChamberWitness:
    """Move to the chamber across face ``i``.

    The new interior point is the margin-LP witness of the flipped pattern.
    ``rng`` is accepted for interface symmetry; crossing is deterministic.
    """
    if i not in w.faces:
        raise ValueError(f"hyperplane {i} is not a face of chamber {w.signs}")
    flipped = list(w.signs)
    flipped[i] = -flipped[i]
    sol = solve_margin(spec.normals, flipped)
    if not sol.feasible:
        raise AdjacencyViolation(f"crossing face {i} of {w.signs} leads to an empty chamber ({sol.status})")
    signs = tuple(flipped)
    return ChamberWitness(sol.witness, signs, faces_of(spec, signs))


class ChamberCache:
    """Memo of chamber witnesses keyed by sign vector.

    Faces and LP witnesses are deterministic functions of the sign vector, so
    a walk that revisits a chamber reuses the earlier computation.
    """

    def __init__(self, spec: ArrangementSpec):
        self.spec = spec
        self._table: dict[tuple[int, ...], ChamberWitness] = {}

    def __len__(self):
        return len(self._table)

    def __contains__(self, signs):
        return tuple(signs) in self._table

    def __iter__(self):
        return iter(self._table.values())

    def add(self, w: ChamberWitness) -> ChamberWitness:
        return self._table.setdefault(w.signs, w)

    def locate(self, point) -> ChamberWitness:
        signs = sign_vector(point, self.spec)
        if signs in self._table:
            return self._table[signs]
        return self.add(ChamberWitness(np.asarray(point, dtype=float), signs, faces_of(self.spec, signs)))

    def cross(self, w: ChamberWitness, i: int) -> ChamberWitness:
        flipped = list(w.signs)
        flipped[i] = -flipped[i]
        hit = self._table.get(tuple(flipped))
        if hit is not None:
            if i not in w.faces:
                raise ValueError(f"hyperplane {i} is not a face of chamber {w.signs}")
            return hit
        return self.add(cross_face(w, i, self.spec))

    def explore(self, start: ChamberWitness, limit: int = 100_000) -> "ChamberCache":
        """Close the table under face crossing, starting from ``start``."""
        stack = [self.add(start)]
        seen = {start.signs}
        while stack:
            w = stack.pop()
            for i in w.faces:
                nxt = self.cross(w, i)
                if nxt.signs not in seen:
                    seen.add(nxt.signs)
                    stack.append(nxt)
                    if len(seen) > limit:
                        raise RuntimeError("chamber exploration limit exceeded")
        return self
