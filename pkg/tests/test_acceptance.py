"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line."""
import json
import time
from math import comb

import numpy as np
import pytest

from chamber_sampler.cli import main
from chamber_sampler.geometry import random_general_position
from chamber_sampler.network import NetworkArchitecture, NetworkSampler, coverage_experiment, growth_bound, step
from chamber_sampler.oracle import (
    chamber_count_formula,
    conductance_exact,
    enumerate_chambers,
    enumerate_network_labelings,
    feasible_sign_patterns,
    graph_checks,
    lazy_conductance_exact,
    slice_chamber_count,
    slow_mixing_fixture,
)
from chamber_sampler.rs import ArrangementSpec, RecursiveSampler
from chamber_sampler.walk import WalkConfig, stationary_ratio_audit, walk_tv_to_uniform

from conftest import ACCEPTANCE_LINES, FOUR_LINES

SEED = 20240611


def record(n, title, ok, detail):
    line = f"criterion {n:2d} {'PASS' if ok else 'FAIL'}: {title} ({detail})"
    ACCEPTANCE_LINES[n] = line
    print(line)
    return ok


def _fixtures():
    """50 general-position arrangements, m in {2, 3}, k in 2..10."""
    rng = np.random.default_rng(SEED)
    out = []
    for _ in range(50):
        m = int(rng.choice([2, 3]))
        k = int(rng.integers(2, 11))
        out.append(ArrangementSpec(random_general_position(k, m, rng)))
    return out


FIXTURES = _fixtures()


@pytest.fixture(scope="module")
def graphs():
    return [enumerate_chambers(spec) for spec in FIXTURES]


@pytest.fixture(scope="module")
def planar():
    """General-position planar fixtures with n <= 7, plus one per n = 3..7."""
    rng = np.random.default_rng(SEED + 5)
    specs = [s for s in FIXTURES if s.m == 2 and s.k <= 7]
    specs += [ArrangementSpec(random_general_position(n, 2, rng)) for n in range(3, 8)]
    return [(s, enumerate_chambers(s)) for s in specs]


def four_lines():
    return ArrangementSpec.from_vectors(FOUR_LINES)


def test_criterion_01_chamber_counts():
    t = time.perf_counter()
    bad = [(s.k, s.m) for s in FIXTURES if enumerate_chambers(s).n_chambers != chamber_count_formula(s.k, s.m)]
    elapsed = time.perf_counter() - t
    ok = not bad and elapsed < 60
    assert record(1, "chamber counts equal the closed form", ok,
                  f"{len(FIXTURES) - len(bad)}/{len(FIXTURES)} exact, {elapsed:.1f}s"), bad


def test_criterion_02_rs_floor():
    spec = four_lines()
    n = 100_000
    t = time.perf_counter()
    P = RecursiveSampler(spec.normals).sample_points(n, np.random.default_rng(SEED))
    elapsed = time.perf_counter() - t
    keys, counts = np.unique(np.where(P @ spec.normals.T > 0, 1, -1), axis=0, return_counts=True)
    p = 1 / 24
    floor = p - 5 * np.sqrt(p * (1 - p) / n)
    lo = counts.min() / n
    ok = len(keys) == 8 and lo >= floor and elapsed < 10
    assert record(2, "RS frequency floor on four lines", ok,
                  f"{len(keys)} chambers, min freq {lo:.5f} >= {floor:.5f}, {elapsed:.2f}s")


def test_criterion_03_rs_validity():
    rng = np.random.default_rng(SEED + 3)
    failures = draws = 0
    for _ in range(100):
        m = int(rng.integers(2, 5))
        spec = ArrangementSpec(random_general_position(int(rng.integers(2, 11)), m, rng))
        known = {tuple(s) for s in feasible_sign_patterns(spec)[0].tolist()}
        sampler = RecursiveSampler(spec.normals)
        for _ in range(100):
            cp = sampler.sample(rng)
            signs = tuple(int(s) for s in np.where(spec.normals @ cp.point > 0, 1, -1))
            failures += not (cp.clearance > 0 and signs in known)
            draws += 1
    assert record(3, "RS outputs are interior points of real chambers", failures == 0,
                  f"{failures} failures in {draws} draws")


def test_criterion_04_face_bounds(graphs):
    bad = []
    for spec, g in zip(FIXTURES, graphs):
        r = graph_checks(g, spec)
        if not r["ok"]:
            bad.append((spec.k, spec.m, r["violations"][:1]))
    chambers = sum(g.n_chambers for g in graphs)
    assert record(4, "face counts, degrees, connectivity and diameter", not bad,
                  f"{len(bad)} violating fixtures over {chambers} chambers"), bad


def test_criterion_05_planar_conductance(planar):
    t = time.perf_counter()
    bad = []
    for spec, g in planar:
        c = conductance_exact(g).value
        if c < 1 / (2 * spec.k):
            bad.append((spec.k, c))
    elapsed = time.perf_counter() - t
    ok = not bad and elapsed < 120
    assert record(5, "planar conductance at least 1/(2n)", ok,
                  f"{len(planar) - len(bad)}/{len(planar)} fixtures, {elapsed:.1f}s"), bad


def test_criterion_06_lazy_conductance(planar):
    bad = []
    worst = np.inf
    for spec, g in planar:
        n = spec.k
        base = conductance_exact(g).value
        lazy = lazy_conductance_exact(g, 4 * n).value
        worst = min(worst, lazy / (base / (8 * n ** 2)))
        if lazy < base / (8 * n ** 2):
            bad.append((n, lazy, base))
    assert record(6, "lazy conductance at least g/(8n^2)", not bad,
                  f"{len(bad)} violations, smallest ratio to floor {worst:.2f}"), bad


def test_criterion_07_walk_uniformity():
    t = time.perf_counter()
    tv = walk_tv_to_uniform(four_lines(), WalkConfig(steps=500, lazy=True), 20_000, np.random.default_rng(SEED))
    elapsed = time.perf_counter() - t
    ok = tv < 0.02 and elapsed < 120
    assert record(7, "lazy walk TV to uniform after 500 steps", ok, f"TV {tv:.4f} < 0.02, {elapsed:.1f}s")


def test_criterion_08_stationary_ratio():
    rng = np.random.default_rng(SEED + 8)
    worst_rel, worst_ratio, bad = 0.0, 0.0, []
    for spec in FIXTURES:
        r = stationary_ratio_audit(spec, WalkConfig(), 4_000_000, rng)
        worst_rel = max(worst_rel, r["max_relative_error"])
        worst_ratio = max(worst_ratio, r["frequency_ratio"] / r["ratio_bound"])
        if not (r["proportional_ok"] and r["ratio_ok"] and r["complete"]):
            bad.append((spec.k, spec.m, r["max_relative_error"], r["frequency_ratio"]))
    assert record(8, "visit frequencies proportional to degree, ratio within n/d", not bad,
                  f"max relative error {worst_rel:.4f}, max ratio/bound {worst_ratio:.3f}"), bad


def test_criterion_09_slow_mixing_contrast(planar):
    slow = slow_mixing_fixture(6)
    c_slow = conductance_exact(enumerate_chambers(slow)).value
    same_n = [conductance_exact(g).value for s, g in planar if s.k == 6]
    control = next(s for s, _ in planar if s.k == 6)
    cfg = WalkConfig(steps=500, lazy=True)
    tv_slow = walk_tv_to_uniform(slow, cfg, 20_000, np.random.default_rng(SEED))
    tv_control = walk_tv_to_uniform(control, cfg, 20_000, np.random.default_rng(SEED))
    conductance_ok = bool(same_n) and c_slow < min(same_n)
    ok = conductance_ok and tv_slow > 0.1 and tv_control < 0.05
    assert record(9, "slow-mixing fixture contrast", ok,
                  f"conductance {c_slow:.4f} < {min(same_n):.4f}: {conductance_ok}; "
                  f"TV slow {tv_slow:.4f} > 0.1; TV control {tv_control:.4f} < 0.05")


def test_criterion_10_network_sampler():
    rng = np.random.default_rng(SEED + 10)
    X = rng.normal(size=(4, 2))
    net21 = NetworkArchitecture(2, (2, 1))
    neuron = NetworkArchitecture(2, (1,))

    # (a) every sampled labeling is reproduced by its own weights
    layers, labels = NetworkSampler(net21, X).sample_many(100_000, rng)
    H = np.broadcast_to(X, (100_000,) + X.shape)
    for W, b in layers:
        H = step(np.einsum("dnf,duf->dnu", H, W) + b[:, None, :])
    mismatches = int(np.any(H[:, :, 0] != labels, axis=1).sum())

    # (b) full coverage of the oracle sets within 10^6 draws
    cov = {name: coverage_experiment(net, X, 1_000_000, rng) for name, net in [("neuron", neuron), ("net21", net21)]}
    covered = all(r.full_coverage_at is not None and r.spurious == 0 for r in cov.values())

    # (c) labeling counts respect the growth bound when W < n
    bound_bad = []
    for n in (4, 5, 6, 8):
        Xn = rng.normal(size=(n, 2))
        size = len(enumerate_network_labelings(neuron, Xn))
        bound_bad += [] if size <= growth_bound(n, 1, 3) else [(n, size)]
    X10 = rng.normal(size=(10, 1))
    net1 = NetworkArchitecture(1, (2, 1))
    size = len(enumerate_network_labelings(net1, X10))
    bound_bad += [] if size <= growth_bound(10, 3, net1.n_params) else [(10, size)]

    ok = mismatches == 0 and covered and not bound_bad
    detail = (f"{mismatches} mismatches in 1e5; coverage at "
              + ", ".join(f"{k} {r.covered}/{r.support_size} by draw {r.full_coverage_at}" for k, r in cov.items())
              + f"; {len(bound_bad)} growth-bound violations")
    assert record(10, "network realizability, coverage and growth bound", ok, detail)


def test_criterion_11_slice_counts():
    rng = np.random.default_rng(SEED + 11)
    bad, checked = [], 0
    for _ in range(20):
        n = int(rng.integers(3, 11))
        spec = ArrangementSpec(random_general_position(n, 3, rng))
        count = slice_chamber_count(spec, rng.normal(size=3))
        checked += 1
        if count < comb(n - 1, 2) / n:
            bad.append((n, count))
    assert record(11, "induced chamber count of a random slice", not bad,
                  f"{checked - len(bad)}/{checked} above (1/n) C(n-1, 2)"), bad


def test_criterion_12_cli_determinism(tmp_path):
    normals = tmp_path / "four.csv"
    N = FOUR_LINES / np.linalg.norm(FOUR_LINES, axis=1, keepdims=True)
    normals.write_text("\n".join(",".join(repr(float(v)) for v in row) for row in N) + "\n")
    data = tmp_path / "x.csv"
    data.write_text("x,y\n0,0\n1,0.2\n0.3,1\n-0.5,0.4\n")
    arch = tmp_path / "arch.json"
    arch.write_text(json.dumps({"input_dim": 2, "layers": [2, 1]}))
    commands = {
        "sample-chamber rs": ["sample-chamber", "--input", str(normals), "--draws", "200", "--report"],
        "sample-chamber nrw": ["sample-chamber", "--input", str(normals), "--method", "nrw", "--steps", "30",
                               "--lazy", "--draws", "100"],
        "walk": ["walk", "--input", str(normals), "--steps", "25", "--trace", "--draws", "20"],
        "sample-labels": ["sample-labels", "--arch", str(arch), "--input", str(data), "--draws", "200", "--weights"],
        "enumerate": ["enumerate", "--input", str(data), "--lift"],
        "conductance": ["conductance", "--input", str(normals)],
        "verify": ["verify", "--seed", "3"],
    }
    differing = []
    for name, args in commands.items():
        outs = []
        for run in range(2):
            out = tmp_path / f"{name.replace(' ', '_')}_{run}"
            rep = tmp_path / f"{name.replace(' ', '_')}_{run}.report"
            extra = [str(rep)] if args[-1] == "--report" else []
            code = main(args + extra + ["--seed", "11", "--output", str(out)] if name != "verify"
                        else args + ["--output", str(out)])
            blob = out.read_bytes() + (rep.read_bytes() if extra else b"")
            outs.append((code, blob))
        if outs[0] != outs[1]:
            differing.append(name)
    assert record(12, "CLI output byte-identical under a fixed seed", not differing,
                  f"{len(commands) - len(differing)}/{len(commands)} commands identical"), differing
