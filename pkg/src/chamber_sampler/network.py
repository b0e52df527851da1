"""Layer-by-layer RS sampling of linear-threshold network weights."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .geometry import as_matrix, lift
from .rs import RecursiveSampler


@dataclass(frozen=True)
class NetworkArchitecture:
    """Feedforward linear-threshold net ``input_dim -> layers[0] -> ... -> 1``."""

    input_dim: int
    layers: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "layers", tuple(int(u) for u in self.layers))
        if self.input_dim < 1:
            raise ValueError("input_dim must be >= 1")
        if not self.layers or any(u < 1 for u in self.layers):
            raise ValueError("layer widths must be >= 1")
        if self.layers[-1] != 1:
            raise ValueError("the final layer must have width 1 (single binary output)")

    @property
    def fan_ins(self) -> tuple[int, ...]:
        return (self.input_dim,) + self.layers[:-1]

    @property
    def n_neurons(self) -> int:
        return sum(self.layers)

    @property
    def n_params(self) -> int:
        return sum(u * (f + 1) for u, f in zip(self.layers, self.fan_ins))

    @classmethod
    def from_json(cls, text: str) -> "NetworkArchitecture":
        obj = json.loads(text)
        try:
            return cls(int(obj["input_dim"]), tuple(obj["layers"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"architecture JSON needs 'input_dim' and 'layers': {exc}") from None

    def to_json(self) -> str:
        return json.dumps({"input_dim": self.input_dim, "layers": list(self.layers)})


@dataclass
class WeightAssignment:
    """Per-layer weight matrices ``(u, fan_in)`` and bias vectors ``(u,)``."""

    weights: list
    biases: list

    def flat(self) -> np.ndarray:
        parts = []
        for Wl, bl in zip(self.weights, self.biases):
            parts.append(np.hstack([Wl, bl[:, None]]).ravel())
        return np.concatenate(parts)

    @classmethod
    def from_flat(cls, net: NetworkArchitecture, vec) -> "WeightAssignment":
        vec = np.asarray(vec, dtype=float)
        if vec.shape != (net.n_params,):
            raise ValueError(f"expected {net.n_params} parameters, got {vec.shape}")
        if not np.all(np.isfinite(vec)):
            raise ValueError("weights must be finite")
        weights, biases, pos = [], [], 0
        for u, f in zip(net.layers, net.fan_ins):
            block = vec[pos:pos + u * (f + 1)].reshape(u, f + 1)
            weights.append(block[:, :f].copy())
            biases.append(block[:, f].copy())
            pos += u * (f + 1)
        return cls(weights, biases)


def step(u):
    """Threshold activation with the convention ``step(0) = 1``."""
    return (np.asarray(u) >= 0).astype(np.int8)


def forward(net: NetworkArchitecture, w: WeightAssignment, x) -> tuple[int, list]:
    """Output bit and every layer's binary output for one input."""
    h = np.asarray(x, dtype=float)
    if h.shape != (net.input_dim,):
        raise ValueError(f"input has shape {h.shape}, expected ({net.input_dim},)")
    acts = []
    for Wl, bl in zip(w.weights, w.biases):
        h = step(Wl @ h + bl)
        acts.append(h)
    return int(h[0]), acts


def forward_batch(net: NetworkArchitecture, w: WeightAssignment, X) -> np.ndarray:
    """Output bits for every row of ``X``."""
    H = as_matrix(X, "X")
    if H.shape[1] != net.input_dim:
        raise ValueError(f"X has {H.shape[1]} columns, expected {net.input_dim}")
    for Wl, bl in zip(w.weights, w.biases):
        H = step(H @ Wl.T + bl)
    return H[:, 0]


def _neuron_params(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Split lifted parameter points ``(w, c)`` into weights and bias ``-c``."""
    return points[..., :-1], -points[..., -1]


class NetworkSampler:
    """Samples weights layer by layer, one RS draw per neuron.

    Samplers are cached per distinct layer input (binary hidden layers
    repeat), so repeated draws reuse the RS recursion trees.
    """

    def __init__(self, net: NetworkArchitecture, X):
        self.net = net
        self.X = as_matrix(X, "X")
        if self.X.shape[1] != net.input_dim:
            raise ValueError(f"X has {self.X.shape[1]} columns, expected {net.input_dim}")
        self._samplers: dict[bytes, RecursiveSampler] = {}
        self._by_input: dict[bytes, RecursiveSampler] = {}

    def _sampler(self, H: np.ndarray) -> RecursiveSampler:
        raw = H.tobytes() + bytes(str(H.shape), "ascii")
        s = self._by_input.get(raw)
        if s is not None:
            return s
        # duplicate rows give identical lifted normals, so share by row set
        U = np.unique(H, axis=0)
        key = U.tobytes() + bytes(str(U.shape), "ascii")
        s = self._samplers.get(key)
        if s is None:
            s = RecursiveSampler(lift(U))
            self._samplers[key] = s
        if len(self._by_input) < 100_000:
            self._by_input[raw] = s
        return s

    def sample(self, rng) -> tuple[WeightAssignment, np.ndarray]:
        H = self.X
        weights, biases = [], []
        for u in self.net.layers:
            s = self._sampler(H)
            P = np.array([s.sample(rng).point for _ in range(u)])
            Wl, bl = _neuron_params(P)
            weights.append(Wl)
            biases.append(bl)
            H = step(H @ Wl.T + bl).astype(float)
        return WeightAssignment(weights, biases), H[:, 0].astype(np.int8)

    def sample_many(self, n_draws: int, rng) -> tuple[list, np.ndarray]:
        """``n_draws`` independent draws, vectorized over draws.

        Returns ``(layers, labels)`` where ``layers[l] = (W, b)`` with shapes
        ``(n_draws, u, fan_in)`` and ``(n_draws, u)``, and ``labels`` has shape
        ``(n_draws, n)``.
        """
        n = self.X.shape[0]
        H = np.broadcast_to(self.X, (n_draws,) + self.X.shape)
        layers = []
        for u, f in zip(self.net.layers, self.net.fan_ins):
            Wl = np.empty((n_draws, u, f))
            bl = np.empty((n_draws, u))
            if n_draws:
                keys, inverse = np.unique(H.reshape(n_draws, -1), axis=0, return_inverse=True)
                inverse = np.ravel(inverse)
                for g in range(keys.shape[0]):
                    idx = np.flatnonzero(inverse == g)
                    P = self._sampler(keys[g].reshape(n, f)).sample_points(idx.size * u, rng)
                    Wg, bg = _neuron_params(P.reshape(idx.size, u, f + 1))
                    Wl[idx] = Wg
                    bl[idx] = bg
            layers.append((Wl, bl))
            H = step(np.einsum("dnf,duf->dnu", H, Wl) + bl[:, None, :]).astype(float)
        return layers, H[:, :, 0].astype(np.int8)


def sample_network_labeling(net: NetworkArchitecture, X, rng) -> tuple[WeightAssignment, np.ndarray]:
    """One near-uniform labeling of ``X`` together with weights realizing it."""
    return NetworkSampler(net, X).sample(rng)


def growth_bound(n: int, k: int, W: int) -> float:
    """Upper bound ``(e n k / W)^W`` on the number of labelings, for ``W < n``."""
    return float((np.e * n * k / W) ** W)


def probability_floor(n: int, k: int, W: int) -> float:
    """Per-labeling probability floor ``(W / (2 e n k))^W``."""
    return float((W / (2 * np.e * n * k)) ** W)


@dataclass
class CoverageReport:
    budget: int
    support_size: int
    covered: int
    full_coverage_at: int | None
    spurious: int

    @property
    def fraction(self) -> float:
        return self.covered / self.support_size if self.support_size else 0.0

    def to_dict(self) -> dict:
        return {
            "budget": self.budget,
            "support_size": self.support_size,
            "covered": self.covered,
            "fraction": self.fraction,
            "full_coverage_at": self.full_coverage_at,
            "spurious": self.spurious,
        }


def coverage_experiment(net: NetworkArchitecture, X, budget: int, rng, support=None,
                        chunk: int = 10_000, stop_when_covered: bool = True) -> CoverageReport:
    """Draw up to ``budget`` labelings and track coverage of ``support``.

    ``support`` defaults to the exhaustive oracle's labeling set.
    """
    if support is None:
        from .oracle import enumerate_network_labelings

        support = enumerate_network_labelings(net, X)
    support = {tuple(int(b) for b in s) for s in support}
    sampler = NetworkSampler(net, X)
    seen: set = set()
    spurious: set = set()
    done_at = None
    drawn = 0
    while drawn < budget and done_at is None:
        size = min(chunk, budget - drawn)
        _, labels = sampler.sample_many(size, rng)
        for j, row in enumerate(map(tuple, labels.tolist())):
            if row in support:
                seen.add(row)
            else:
                spurious.add(row)
            if done_at is None and len(seen) == len(support):
                done_at = drawn + j + 1
                if stop_when_covered:
                    break
        drawn += size
    return CoverageReport(budget, len(support), len(seen), done_at, len(spurious))
