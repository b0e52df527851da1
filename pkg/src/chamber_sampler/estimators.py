"""scikit-learn style front ends.

``ChamberSampler`` fits on a data sample (or on raw normals) and draws
labelings a single threshold neuron can produce; ``ThresholdNetworkSampler``
does the same for a feedforward architecture and, once fitted, predicts with
the last sampled network.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .chamber import signs_to_labels
from .geometry import lift
from .network import NetworkArchitecture, NetworkSampler, WeightAssignment, forward_batch
from .rng import make_rng
from .rs import ArrangementSpec, RecursiveSampler
from .walk import WalkConfig, explore, nrw_many


class ChamberSampler(BaseEstimator):
    """Sample labelings of a single linear-threshold neuron.

    Parameters
    ----------
    method : {"rs", "nrw"}
        Recursive sampling, or the chamber-graph walk started from it.
    n_steps : int
        Walk length for ``method="nrw"``.
    lazy : bool
        Use the lazy chamber graph (uniform stationary law).
    lift : bool
        If True, rows of ``X`` are data points; otherwise they are normals.
    random_state : int, Generator or None
    """

    def __init__(self, method="rs", n_steps=0, lazy=True, lift=True, random_state=None):
        self.method = method
        self.n_steps = n_steps
        self.lazy = lazy
        self.lift = lift
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_array(X, dtype=float, ensure_min_samples=1)
        if self.method not in ("rs", "nrw"):
            raise ValueError(f"unknown method {self.method!r}")
        normals = lift(X) if self.lift else X
        self.normals_ = normals / np.linalg.norm(normals, axis=1, keepdims=True)
        self.spec_ = ArrangementSpec.from_vectors(self.normals_)
        self.sampler_ = RecursiveSampler(self.normals_)
        self.n_features_in_ = X.shape[1]
        self._rng = make_rng(self.random_state)
        self._table = None
        return self

    def sample_points(self, n_samples=1):
        """Interior points of sampled chambers, shape ``(n_samples, m)``."""
        check_is_fitted(self, "sampler_")
        if self.method == "rs":
            return self.sampler_.sample_points(n_samples, self._rng)
        if self._table is None:
            self._cache, self._table = explore(self.spec_, self._rng)
        cfg = WalkConfig(self.n_steps, self.lazy)
        final, _ = nrw_many(self.spec_, cfg, n_samples, self._rng, self._table)
        witness = {w.signs: w.point for w in self._cache}
        P = np.array([witness[tuple(s)] for s in self._table.signs[final].tolist()])
        return P.reshape(n_samples, self.spec_.m)

    def sample(self, n_samples=1):
        """Sampled labelings of the fitted rows, shape ``(n_samples, n_rows)``."""
        P = self.sample_points(n_samples)
        return signs_to_labels(np.where(P @ self.normals_.T > 0, 1, -1)).astype(np.int8)


class ThresholdNetworkSampler(BaseEstimator):
    """Draw random threshold networks whose labelings of ``X`` are near uniform.

    Parameters
    ----------
    layers : tuple of int
        Layer widths; the last must be 1.
    random_state : int, Generator or None
    """

    def __init__(self, layers=(1,), random_state=None):
        self.layers = layers
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_array(X, dtype=float, ensure_min_samples=1)
        self.architecture_ = NetworkArchitecture(X.shape[1], tuple(self.layers))
        self.n_features_in_ = X.shape[1]
        self._sampler = NetworkSampler(self.architecture_, X)
        self._rng = make_rng(self.random_state)
        self.weights_, self.labels_ = self._sampler.sample(self._rng)
        return self

    def sample(self, n_samples=1):
        """Labelings of the fitted ``X``, shape ``(n_samples, n_rows)``."""
        check_is_fitted(self, "architecture_")
        _, labels = self._sampler.sample_many(n_samples, self._rng)
        return labels

    def resample(self):
        """Replace the current network by a fresh draw."""
        check_is_fitted(self, "architecture_")
        self.weights_, self.labels_ = self._sampler.sample(self._rng)
        return self

    def predict(self, X):
        check_is_fitted(self, "weights_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return forward_batch(self.architecture_, self.weights_, X)

    def get_weights(self) -> WeightAssignment:
        check_is_fitted(self, "weights_")
        return self.weights_
