"""Flat-file formats: CSV points/normals, architecture JSON, JSON-lines output."""
from __future__ import annotations

import csv
import json
import math

import numpy as np

from .network import NetworkArchitecture
from .rs import ArrangementSpec

UNIT_SLOP = 1e-6


class InputError(ValueError):
    """A malformed input file; the message names the offending row."""


def read_points(path) -> np.ndarray:
    """One point per row, comma-separated decimals, optional header row."""
    rows = []
    width = None
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            cells = [c.strip() for c in row]
            if not cells or all(c == "" for c in cells):
                continue
            try:
                values = [float(c) for c in cells]
            except ValueError:
                if lineno == 1 and not rows:
                    continue  # header
                raise InputError(f"{path}: row {lineno}: non-numeric value in {row!r}") from None
            if not all(math.isfinite(v) for v in values):
                raise InputError(f"{path}: row {lineno}: non-finite value")
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise InputError(f"{path}: row {lineno}: expected {width} columns, got {len(values)}")
            rows.append(values)
    if not rows:
        raise InputError(f"{path}: no data rows")
    return np.array(rows, dtype=float)


def read_normals(path, normalize: bool = False) -> ArrangementSpec:
    """Unit normals from CSV; rows within ``1e-6`` of unit norm are renormalized."""
    N = read_points(path)
    norms = np.linalg.norm(N, axis=1)
    if not normalize:
        bad = np.flatnonzero(np.abs(norms - 1.0) > UNIT_SLOP)
        if bad.size:
            raise InputError(f"{path}: normal {int(bad[0])} is not a unit vector (norm {norms[bad[0]]:.6g})")
    if np.any(norms == 0):
        raise InputError(f"{path}: normal {int(np.flatnonzero(norms == 0)[0])} is zero")
    try:
        return ArrangementSpec.from_vectors(N, dedupe=normalize)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def read_architecture(path) -> NetworkArchitecture:
    with open(path) as fh:
        text = fh.read()
    try:
        return NetworkArchitecture.from_json(text)
    except (ValueError, json.JSONDecodeError) as exc:
        raise InputError(f"{path}: {exc}") from None


def dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), sort_keys=True)
