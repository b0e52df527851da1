"""Command-line interface: ``chamber-sampler <command> ...``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
from contextlib import contextmanager
from math import comb

import numpy as np

from . import oracle
from .chamber import ChamberCache, signs_to_labels
from .config import tolerances
from .errors import ChamberSamplerError, OracleBudgetExceeded
from .geometry import is_general_position, lift, random_general_position
from .io import InputError, dumps, read_architecture, read_normals, read_points
from .network import NetworkArchitecture, NetworkSampler, forward_batch, WeightAssignment, growth_bound
from .rng import make_rng, stream
from .rs import ArrangementSpec, RecursiveSampler
from .stats import frequency_report
from .walk import WalkConfig, nrw, nrw_many

log = logging.getLogger("chamber_sampler")


@contextmanager
def _output(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="\n") as fh:
            yield fh


def _emit_report(args, report: dict) -> None:
    if args.report is None:
        return
    text = dumps(report) + "\n"
    if args.report == "-":
        sys.stderr.write(text)
    else:
        with open(args.report, "w") as fh:
            fh.write(text)


def _load_spec(args) -> ArrangementSpec:
    if getattr(args, "lift", False):
        return ArrangementSpec.from_vectors(lift(read_points(args.input)))
    return read_normals(args.input, normalize=args.normalize)


def _record(point, spec: ArrangementSpec, signs=None) -> dict:
    p = np.asarray(point, dtype=float)
    if signs is None:
        signs = tuple(int(s) for s in np.where(spec.normals @ p > 0, 1, -1))
    return {
        "signs": list(signs),
        "labels": signs_to_labels(signs).tolist(),
        "point": p.tolist(),
        "clearance": float(np.abs(spec.normals @ (p / np.linalg.norm(p))).min()),
    }


def cmd_sample_chamber(args) -> int:
    spec = _load_spec(args)
    sampler = RecursiveSampler(spec.normals)
    cache = ChamberCache(spec)
    cfg = WalkConfig(args.steps, args.lazy, args.lazy_degree, keep_trace=False)
    keys = []
    with _output(args.output) as out:
        for i in range(args.draws):
            rng = stream(args.seed, i)
            if args.method == "rs":
                rec = _record(sampler.sample(rng).point, spec)
            else:
                w = nrw(spec, cfg, rng, cache).final
                rec = _record(w.point, spec, w.signs)
            keys.append(rec["signs"])
            out.write(dumps(rec) + "\n")
    if args.report is not None:
        support = None
        if spec.k <= oracle.MAX_ENUM_K:
            support, _, _ = oracle.feasible_sign_patterns(spec)
        _emit_report(args, frequency_report(keys, support).to_dict())
    return 0


def cmd_walk(args) -> int:
    spec = _load_spec(args)
    cache = ChamberCache(spec)
    cfg = WalkConfig(args.steps, args.lazy, args.lazy_degree, keep_trace=args.trace)
    keys = []
    with _output(args.output) as out:
        for i in range(args.draws):
            tr = nrw(spec, cfg, stream(args.seed, i), cache)
            rec = _record(tr.final.point, spec, tr.final.signs)
            if args.trace:
                rec["trace"] = [list(s) for s in tr.visited]
            keys.append(rec["signs"])
            out.write(dumps(rec) + "\n")
    if args.report is not None:
        support, _, _ = oracle.feasible_sign_patterns(spec)
        _emit_report(args, frequency_report(keys, support).to_dict())
    return 0


def cmd_sample_labels(args) -> int:
    net = read_architecture(args.arch)
    X = read_points(args.input)
    if X.shape[1] != net.input_dim:
        raise InputError(f"{args.input}: {X.shape[1]} columns but architecture input_dim is {net.input_dim}")
    sampler = NetworkSampler(net, X)
    keys = []
    with _output(args.output) as out:
        for i in range(args.draws):
            w, labels = sampler.sample(stream(args.seed, i, purpose=1))
            rec = {"labels": labels.tolist()}
            if args.weights:
                rec["weights"] = w.flat().tolist()
            keys.append(rec["labels"])
            out.write(dumps(rec) + "\n")
    if args.report is not None:
        support = None
        try:
            support = oracle.enumerate_network_labelings(net, X)
        except OracleBudgetExceeded:
            log.warning("labeling oracle budget exceeded; report without reference support")
        _emit_report(args, frequency_report(keys, support).to_dict())
    return 0


def cmd_enumerate(args) -> int:
    if args.arch:
        net = read_architecture(args.arch)
        labelings = sorted(oracle.enumerate_network_labelings(net, read_points(args.input)))
        report = {"labelings": [list(s) for s in labelings], "count": len(labelings)}
    else:
        spec = _load_spec(args)
        g = oracle.enumerate_chambers(spec)
        report = {
            "chambers": g.signs.tolist(),
            "count": g.n_chambers,
            "faces": [list(f) for f in g.faces],
            "edges": [list(e) for e in g.edges],
            "degrees": g.degrees.tolist(),
            "general_position": is_general_position(spec.normals),
            "formula": oracle.chamber_count_formula(spec.k, spec.m),
        }
    with _output(args.output) as out:
        out.write(dumps(report) + "\n")
    return 0


def cmd_conductance(args) -> int:
    spec = _load_spec(args)
    g = oracle.enumerate_chambers(spec)
    c = oracle.conductance_exact(g)
    L = args.lazy_degree or 4 * spec.k
    lz = oracle.lazy_conductance_exact(g, L)
    report = {
        "chambers": g.n_chambers,
        "conductance": c.value,
        "witness_set": list(c.witness_set),
        "lazy_degree": L,
        "lazy_conductance": lz.value,
        "lazy_floor": c.value / (8 * spec.k ** 2),
        "planar_floor": 1 / (2 * spec.k) if spec.m == 2 else None,
    }
    with _output(args.output) as out:
        out.write(dumps(report) + "\n")
    return 0


# ----------------------------------------------------------------------------
# verify


def _check(report: list, name: str, fixture: str, fn) -> None:
    try:
        ok, detail = fn()
        report.append({"check": name, "fixture": fixture, "status": "pass" if ok else "fail", "detail": detail})
    except OracleBudgetExceeded as exc:
        report.append({"check": name, "fixture": fixture, "status": "skipped", "detail": str(exc)})


def _arrangement_checks(report: list, spec: ArrangementSpec, name: str, seed: int) -> None:
    gp = is_general_position(spec.normals)
    box = {}

    def graph():
        box["g"] = g = oracle.enumerate_chambers(spec)
        return True, {"chambers": g.n_chambers}

    _check(report, "enumerate", name, graph)
    g = box.get("g")
    if g is None:
        return
    if gp:
        _check(report, "chamber_count", name, lambda: (
            g.n_chambers == oracle.chamber_count_formula(spec.k, spec.m),
            {"count": g.n_chambers, "formula": oracle.chamber_count_formula(spec.k, spec.m)}))

        def faces():
            r = oracle.graph_checks(g, spec)
            return r["ok"], {k: v for k, v in r.items() if k != "ok"}

        _check(report, "face_bounds", name, faces)

    def rs_floor():
        dist = oracle.rs_exact_distribution(spec)
        floor = 1.0 / (2 ** spec.m * comb(spec.k, spec.m)) if spec.k >= spec.m else 0.0
        covered = len(dist) == g.n_chambers
        return covered and min(dist.values()) >= floor - 1e-12, {"min_probability": min(dist.values()), "floor": floor,
                                                                "covered": covered}

    if gp:
        _check(report, "rs_floor_exact", name, rs_floor)

    def rs_valid():
        pts = RecursiveSampler(spec.normals).sample_points(1000, make_rng(seed))
        signs = np.where(pts @ spec.normals.T > 0, 1, -1)
        known = {tuple(s) for s in g.signs.tolist()}
        bad = sum(tuple(s) not in known for s in signs.tolist())
        clear = float(np.abs(pts @ spec.normals.T).min())
        return bad == 0 and clear > 0, {"invalid": bad, "min_clearance": clear}

    _check(report, "rs_validity", name, rs_valid)
    if spec.m == 2 and gp:
        def cond():
            c = oracle.conductance_exact(g)
            lz = oracle.lazy_conductance_exact(g, 4 * spec.k)
            box["c"] = c.value
            return (c.value >= 1 / (2 * spec.k) and lz.value >= c.value / (8 * spec.k ** 2),
                    {"conductance": c.value, "floor": 1 / (2 * spec.k), "lazy": lz.value})

        _check(report, "conductance", name, cond)
    if spec.m == 3 and gp:
        def slice_count():
            rng = make_rng(seed)
            cut = rng.standard_normal(3)
            count = oracle.slice_chamber_count(spec, cut)
            floor = comb(spec.k - 1, spec.m - 1) / spec.k
            return count >= floor, {"count": count, "floor": floor}

        _check(report, "slice_count", name, slice_count)


def _mixing_check(report: list, spec: ArrangementSpec, name: str, seed: int, steps: int, runs: int) -> None:
    def mixing():
        g = oracle.enumerate_chambers(spec)
        c = oracle.conductance_exact(g).value
        reference = 1.0 / spec.k  # planar general-position chamber graph (a 2k-cycle)
        from .walk import walk_tv_to_uniform

        tv = walk_tv_to_uniform(spec, WalkConfig(steps, lazy=True), runs, make_rng(seed), support=g.signs)
        slow = c < reference or tv > 0.1
        return not slow, {"conductance": c, "general_position_reference": reference, "tv": tv, "steps": steps}

    _check(report, "mixing", name, mixing)


def _network_checks(report: list, net: NetworkArchitecture, X, name: str, seed: int, draws: int) -> None:
    def realizable():
        layers, labels = NetworkSampler(net, X).sample_many(draws, make_rng(seed))
        bad = 0
        for d in range(draws):
            w = WeightAssignment([W[d] for W, _ in layers], [b[d] for _, b in layers])
            bad += not np.array_equal(forward_batch(net, w, X), labels[d])
        return bad == 0, {"draws": draws, "mismatches": bad}

    _check(report, "network_realizability", name, realizable)

    def coverage():
        support = oracle.enumerate_network_labelings(net, X)
        from .network import coverage_experiment

        r = coverage_experiment(net, X, 100 * draws, make_rng(seed + 1), support=support)
        n, k, W = X.shape[0], net.n_neurons, net.n_params
        bound_ok = W >= n or len(support) <= growth_bound(n, k, W)
        return r.full_coverage_at is not None and r.spurious == 0 and bound_ok, r.to_dict()

    _check(report, "network_coverage", name, coverage)


def default_fixtures(seed: int) -> list:
    rng = make_rng(seed)
    out = [("orthogonal_lines", ArrangementSpec(np.eye(2)))]
    for m, k in [(2, 3), (2, 4), (2, 5), (2, 7), (3, 4), (3, 6)]:
        out.append((f"gp_m{m}_k{k}", ArrangementSpec(random_general_position(k, m, rng))))
    return out


def cmd_verify(args) -> int:
    report: list = []
    try:
        if args.input:
            fixtures = [(args.input, _load_spec(args))]
        else:
            fixtures = default_fixtures(args.seed)
    except (InputError, ValueError) as exc:
        report.append({"check": "validation", "fixture": args.input, "status": "fail", "detail": str(exc)})
        fixtures = []
    for name, spec in fixtures:
        _arrangement_checks(report, spec, name, args.seed)
    if args.mixing:
        target = fixtures if args.input else [("slow_mixing_n6", oracle.slow_mixing_fixture(6)),
                                              ("gp_m3_k6", fixtures[-1][1])]
        for name, spec in target:
            _mixing_check(report, spec, name, args.seed, args.steps or 500, args.draws or 20_000)
    if not args.input:
        rng = make_rng(args.seed)
        X = rng.standard_normal((4, 2))
        _network_checks(report, NetworkArchitecture(2, (1,)), X, "neuron_n4", args.seed, 1000)
        _network_checks(report, NetworkArchitecture(2, (2, 1)), X, "net21_n4", args.seed, 1000)
    ok = all(r["status"] != "fail" for r in report)
    with _output(args.output) as out:
        out.write(dumps({"ok": ok, "checks": report}) + "\n")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="chamber-sampler",
                                description="Near-uniform sampling of threshold-network labelings.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, inputs=True):
        if inputs:
            sp.add_argument("--input", required=True, help="CSV of normals (or data points with --lift)")
            sp.add_argument("--lift", action="store_true", help="treat --input rows as data points to lift")
            sp.add_argument("--normalize", action="store_true", help="normalize and deduplicate input normals")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--output", default="-")
        sp.add_argument("--tol-sign", type=float)
        sp.add_argument("--tol-margin", type=float)
        sp.add_argument("--tol-eq", type=float)
        sp.add_argument("--tol-rank", type=float)

    def walking(sp):
        sp.add_argument("--steps", type=int, default=0)
        sp.add_argument("--lazy", action="store_true")
        sp.add_argument("--lazy-degree", type=int)

    sc = sub.add_parser("sample-chamber", help="draw chambers by RS or NRW")
    common(sc)
    walking(sc)
    sc.add_argument("--method", choices=("rs", "nrw"), default="rs")
    sc.add_argument("--draws", type=int, default=1)
    sc.add_argument("--report", nargs="?", const="-", help="write a frequency report (default: stderr)")
    sc.set_defaults(func=cmd_sample_chamber)

    w = sub.add_parser("walk", help="run NRW walks")
    common(w)
    walking(w)
    w.add_argument("--draws", type=int, default=1)
    w.add_argument("--trace", action="store_true")
    w.add_argument("--report", nargs="?", const="-")
    w.set_defaults(func=cmd_walk)

    sl = sub.add_parser("sample-labels", help="draw network labelings of a data sample")
    common(sl, inputs=False)
    sl.add_argument("--input", required=True, help="data CSV")
    sl.add_argument("--arch", required=True, help="architecture JSON")
    sl.add_argument("--draws", type=int, default=1)
    sl.add_argument("--weights", action="store_true", help="also write sampled weights")
    sl.add_argument("--report", nargs="?", const="-")
    sl.set_defaults(func=cmd_sample_labels)

    en = sub.add_parser("enumerate", help="exhaustive chambers (or network labelings with --arch)")
    common(en)
    en.add_argument("--arch")
    en.set_defaults(func=cmd_enumerate)

    co = sub.add_parser("conductance", help="exact conductance of the chamber graph")
    common(co)
    co.add_argument("--lazy-degree", type=int)
    co.set_defaults(func=cmd_conductance)

    ve = sub.add_parser("verify", help="run oracle cross-checks; nonzero exit on violation")
    common(ve, inputs=False)
    ve.add_argument("--input", help="CSV of normals (default: built-in fixtures)")
    ve.add_argument("--lift", action="store_true")
    ve.add_argument("--normalize", action="store_true")
    ve.add_argument("--mixing", action="store_true", help="also run the slow-mixing contrast")
    ve.add_argument("--steps", type=int)
    ve.add_argument("--draws", type=int)
    ve.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("CHAMBER_SAMPLER_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        with tolerances(sign=args.tol_sign, margin=args.tol_margin, eq=args.tol_eq, rank=args.tol_rank):
            return args.func(args)
    except (InputError, ChamberSamplerError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
