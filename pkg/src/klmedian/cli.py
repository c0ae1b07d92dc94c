"""Command-line interface.

Exit codes: 0 success, 2 usage or parameter error, 3 resource cap exceeded,
4 I/O or malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .candidates import EnumerationCaps, median5
from .cost import CostEvaluator
from .errors import ParameterError, ResourceError
from .frechet import FrechetConfig, frechet_distance
from .geometry import PolygonalCurve
from .io import Dataset, DatasetError, read_dataset, write_dataset
from .kmedian import ClusteringParams, ClusteringResult, assign, cluster
from .median_seed import SampleScale, SeedParams, median34
from .rng import child, make_rng
from .simplify import simplify
from .synthetic import planted_instance

EXIT_OK, EXIT_USAGE, EXIT_RESOURCE, EXIT_IO = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(obj, output: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _curve_by_id(ds: Dataset, cid: int) -> PolygonalCurve:
    try:
        return ds.curves[ds.curves.ids.index(cid)]
    except ValueError:
        raise ParameterError(f"no curve with id {cid}") from None


def _scale(factor: float) -> SampleScale:
    return SampleScale() if factor == 1.0 else SampleScale.test(factor)


def _frechet_cfg(tol: float | None) -> FrechetConfig:
    return FrechetConfig() if tol is None else FrechetConfig(abs_tol=tol)


# -- subcommands ------------------------------------------------------------


def cmd_generate(args) -> int:
    rng = make_rng(args.seed)
    inst = planted_instance(args.k, args.n, args.m, args.d, args.radius, rng, extent=args.extent)
    write_dataset(Dataset(inst.curves, args.d, args.name), args.output)
    truth = {
        "k": args.k,
        "n": args.n,
        "m": args.m,
        "d": args.d,
        "radius": args.radius,
        "seed": args.seed,
        "bases": [b.tolist() for b in inst.bases],
        "labels": inst.labels,
        "planted_bound": inst.bound,
    }
    Path(str(args.output) + ".truth.json").write_text(json.dumps(truth, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def _report(ds: Dataset, params: ClusteringParams, algorithm: str, result: ClusteringResult, ev: CostEvaluator, wall: float) -> dict:
    t = ds.curves
    return {
        "input": {"n": len(t), "m": t.max_complexity(), "d": ds.d, "name": ds.name},
        "params": {
            "algorithm": algorithm,
            "k": params.k,
            "l": params.l,
            "delta": params.delta,
            "epsilon": params.epsilon,
            "beta": result.diagnostics.get("beta"),
            "seed": params.seed,
            "scale": {"factor": params.scale.factor, "mode": params.scale.mode},
            "caps": {
                "grid": params.caps.max_grid_points,
                "candidates": params.caps.max_candidates,
                "overflow": params.caps.overflow,
                "restrict": params.caps.restrict,
            },
            "tolerance": params.frechet.abs_tol,
        },
        "centers": [c.tolist() for c in result.centers],
        "assignment": [{"id": int(i), "center": int(a)} for i, a in zip(t.ids, result.assignment)],
        "total_cost": result.total_cost,
        "cluster_costs": result.cluster_costs(t, ev),
        "diagnostics": result.diagnostics,
        "wall_time_s": wall,
    }


def _single_median(ds: Dataset, params: ClusteringParams, algorithm: str, ev: CostEvaluator) -> ClusteringResult:
    if params.k != 1:
        raise ParameterError(f"--algorithm {algorithm} computes a single median; use --k 1")
    rng = make_rng(params.seed)
    if algorithm == "median34":
        center = median34(ds.curves, SeedParams(params.delta, params.l, params.scale), child(rng, 0), ev)
        diag = {"algorithm": algorithm}
    else:
        res = median5(ds.curves, params.delta, params.epsilon, params.l, params.scale, params.caps, child(rng, 0), ev)
        center, diag = res.curve, {"algorithm": algorithm, **res.diagnostics}
    diag.update(
        seed=params.seed,
        scale={"factor": params.scale.factor, "mode": params.scale.mode},
        frechet_tolerance={"abs_tol": params.frechet.abs_tol, "rel_tol": params.frechet.rel_tol},
    )
    assignment, total = assign(ds.curves, [center], ev)
    return ClusteringResult([center], assignment, total, diag)


def cmd_cluster(args) -> int:
    ds = read_dataset(args.dataset)
    params = ClusteringParams(
        k=args.k,
        l=args.l,
        delta=args.delta,
        epsilon=args.epsilon,
        seed=args.seed,
        scale=_scale(args.scale),
        caps=EnumerationCaps(args.caps_grid, args.caps_candidates, args.overflow, not args.no_restrict),
        frechet=_frechet_cfg(args.tolerance),
        threads=args.threads,
    )
    start = time.perf_counter()
    with CostEvaluator(params.frechet, params.threads) as ev:
        if args.algorithm in ("simple", "advanced"):
            result = cluster(ds.curves, params, args.algorithm, make_rng(params.seed), ev)
        else:
            result = _single_median(ds, params, args.algorithm, ev)
        report = _report(ds, params, args.algorithm, result, ev, time.perf_counter() - start)
    if result.diagnostics.get("truncated"):
        print("warning: candidate enumeration hit its caps; the result is truncated", file=sys.stderr)
    if result.diagnostics.get("coarsened"):
        print("warning: grid cells were widened to fit the caps", file=sys.stderr)
    _emit(report, args.output)
    return EXIT_OK


def cmd_dist(args) -> int:
    ds = read_dataset(args.dataset)
    a, b = _curve_by_id(ds, args.id1), _curve_by_id(ds, args.id2)
    print(repr(frechet_distance(a, b, _frechet_cfg(args.tolerance))))
    return EXIT_OK


def cmd_simplify(args) -> int:
    ds = read_dataset(args.dataset)
    res = simplify(_curve_by_id(ds, args.id), args.l, _frechet_cfg(args.tolerance))
    _emit({"id": args.id, "l": args.l, "curve": res.curve.tolist(), "indices": list(res.indices), "error": res.error}, args.output)
    return EXIT_OK


def _load_centers(path: str) -> list[PolygonalCurve]:
    text = Path(path).read_text()
    try:
        obj = json.loads(text)
    except json.JSONDecodeError:
        return list(read_dataset(path).curves)
    if not isinstance(obj, dict) or "centers" not in obj:
        raise DatasetError(f"{path}: expected a run report with a 'centers' field")
    return [PolygonalCurve(c) for c in obj["centers"]]


def cmd_eval(args) -> int:
    ds = read_dataset(args.dataset)
    centers = _load_centers(args.centers)
    with CostEvaluator(_frechet_cfg(args.tolerance)) as ev:
        assignment, total = assign(ds.curves, centers, ev)
    _emit({"total_cost": total, "assignment": [{"id": int(i), "center": int(a)} for i, a in zip(ds.curves.ids, assignment)]}, args.output)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import SUITES, run_suite

    names = args.suite or list(SUITES)
    results = run_suite(args.seed, names)
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.passed}/{r.total}")
    n_ok = sum(r.ok for r in results)
    print(f"{n_ok}/{len(results)} suites passed, {sum(r.total for r in results)} checks run")
    return EXIT_OK if n_ok == len(results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="klmedian", description="(k,l)-median clustering of polygonal curves under the Fréchet distance")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("generate", help="write a planted-cluster dataset and its ground-truth sidecar")
    g.add_argument("--k", type=int, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--radius", type=float, default=0.05, help="per-coordinate perturbation bound")
    g.add_argument("--extent", type=float, default=10.0, help="base vertices are uniform in [0, extent]^d")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--name", default=None)
    g.add_argument("--output", "-o", required=True)
    g.set_defaults(func=cmd_generate)

    c = sub.add_parser("cluster", help="cluster a dataset and write a run report")
    c.add_argument("dataset")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--l", type=int, required=True)
    c.add_argument("--epsilon", type=float, default=0.1)
    c.add_argument("--delta", type=float, default=0.1)
    c.add_argument("--algorithm", choices=["simple", "advanced", "median5", "median34"], default="simple")
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--scale", type=float, default=1.0, help="sample-size multiplier; 1.0 is faithful mode")
    c.add_argument("--caps-grid", type=int, default=10**6)
    c.add_argument("--caps-candidates", type=int, default=10**5)
    c.add_argument("--overflow", choices=["truncate", "coarsen"], default="truncate")
    c.add_argument("--no-restrict", action="store_true", help="enumerate over the full grid covers")
    c.add_argument("--threads", type=int, default=1)
    c.add_argument("--tolerance", type=float, default=None, help="absolute Fréchet tolerance")
    c.add_argument("--output", "-o", default=None)
    c.set_defaults(func=cmd_cluster)

    d = sub.add_parser("dist", help="Fréchet distance between two curves of a dataset")
    d.add_argument("dataset")
    d.add_argument("id1", type=int)
    d.add_argument("id2", type=int)
    d.add_argument("--tolerance", type=float, default=None)
    d.set_defaults(func=cmd_dist)

    s = sub.add_parser("simplify", help="4-approximate l-simplification of one curve")
    s.add_argument("dataset")
    s.add_argument("id", type=int)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--tolerance", type=float, default=None)
    s.add_argument("--output", "-o", default=None)
    s.set_defaults(func=cmd_simplify)

    e = sub.add_parser("eval", help="cost of given centers over a dataset")
    e.add_argument("dataset")
    e.add_argument("--centers", required=True, help="run report or dataset file holding the centers")
    e.add_argument("--tolerance", type=float, default=None)
    e.add_argument("--output", "-o", default=None)
    e.set_defaults(func=cmd_eval)

    v = sub.add_parser("verify", help="run the oracle self-check suites")
    v.add_argument("--seed", type=int, default=1)
    v.add_argument("--suite", action="append", choices=["sandwich", "shortcut", "simplify", "candidates"])
    v.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (OSError, DatasetError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
