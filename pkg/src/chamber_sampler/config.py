"""Numerical tolerances, overridable per context (CLI ``--tol-*`` flags)."""
from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    sign: float = 1e-9  # on-boundary detection for sign vectors
    margin: float = 1e-7  # minimum LP margin certifying an open cone
    eq: float = 1e-9  # equality residual for face LPs
    rank: float = 1e-8  # relative singular-value cutoff
    dedup: float = 1e-7  # Euclidean distance merging canonicalized normals


_current: ContextVar[Tolerances] = ContextVar("tolerances", default=Tolerances())


def current() -> Tolerances:
    return _current.get()


@contextmanager
def tolerances(**overrides):
    """Temporarily override tolerances, e.g. ``with tolerances(margin=1e-8):``."""
    token = _current.set(replace(current(), **{k: v for k, v in overrides.items() if v is not None}))
    try:
        yield current()
    finally:
        _current.reset(token)
