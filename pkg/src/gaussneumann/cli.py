"""Command-line driver: one subcommand per verification.

Every command prints a document ``{command, config, results, checks}``
(JSON, or CSV of the results rows) and exits 0 when all checks pass,
1 when a check fails, 2 on usage or domain errors and 3 when a solver
fails. Defaults come from a JSON config file (``--config`` or the
``GAUSSNEUMANN_CONFIG`` environment variable) and are overridden by flags.
"""

import argparse
from concurrent.futures import ProcessPoolExecutor
import csv
from dataclasses import asdict, dataclass, fields
import functools
import io
import json
import math
import os
import sys
import time

import jsonschema
import numpy as np

from . import bounds, grid2d, radial, sturm1d, verify, weinberger
from .errors import DomainError, PreconditionError, SolverError
from .measure import Interval1D, b_of_a
from .special import TRUNC_WEIGHT

CONFIG_ENV = "GAUSSNEUMANN_CONFIG"

COMMANDS = (
    "eig1d",
    "slide",
    "radial",
    "ball",
    "bounds",
    "lemma",
    "rearrange-check",
    "weinberger",
    "counterexample",
    "shape-deriv",
    "verify-all",
)

_NUM = {"type": ["number", "string"]}

SCHEMA = {
    "type": "object",
    "required": ["command", "config", "results", "checks"],
    "additionalProperties": False,
    "properties": {
        "command": {"enum": list(COMMANDS)},
        "config": {
            "type": "object",
            "required": ["tol", "trunc_weight", "n_samples", "grid_n", "format", "workers", "seed"],
        },
        "results": {"type": "array", "items": {"type": "object"}},
        "checks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "pass", "lhs", "rhs", "slack"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "pass": {"type": "boolean"},
                    "lhs": _NUM,
                    "rhs": _NUM,
                    "slack": _NUM,
                },
            },
        },
    },
}


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    tol: float = 1e-9
    trunc_weight: float = TRUNC_WEIGHT
    n_samples: int = 801  # eigenfunction samples in 1D and radial solves
    grid_n: int = 60  # cells per half-extent of planar masks
    format: str = "json"
    out: str = None
    workers: int = 1
    seed: int = 0

    def __post_init__(self):
        if not 1e-14 < self.tol < 1e-2:
            raise DomainError(f"tol must lie in (1e-14, 1e-2), got {self.tol}")
        if not 0 < self.trunc_weight < 1:
            raise DomainError(f"trunc_weight must lie in (0, 1), got {self.trunc_weight}")
        if self.workers < 1:
            raise DomainError(f"workers must be >= 1, got {self.workers}")
        if self.n_samples < 3 or self.grid_n < 2:
            raise DomainError("grid sizes too small")
        if self.format not in ("json", "csv"):
            raise DomainError(f"format must be json or csv, got {self.format!r}")


def load_config(path=None, overrides=None):
    """Defaults, then the config file, then explicit overrides."""
    values = {}
    path = path or os.environ.get(CONFIG_ENV)
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {path}: {exc}") from exc
        known = {f.name for f in fields(RunConfig)}
        if not isinstance(data, dict) or set(data) - known:
            raise UsageError(f"config {path} must be an object with keys from {sorted(known)}")
        values.update(data)
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return RunConfig(**values)


def jsonable(x):
    """Plain JSON types; non-finite floats become strings."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, np.ndarray)):
        return [jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    return x


def validate(doc):
    jsonschema.validate(doc, SCHEMA)
    return doc


def to_csv(rows):
    """Flatten result rows; nested values are JSON-encoded."""
    keys = []
    for row in rows:
        keys += [k for k in row if k not in keys]
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in row.items()})
    return buf.getvalue()


def pool_map(fn, items, workers):
    """``map`` over a process pool; results come back in input order."""
    items = list(items)
    if workers == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(workers, len(items))) as ex:
        return list(ex.map(fn, items))


def _prefixed(tag, checks):
    return [dict(c, name=f"{tag}: {c['name']}") for c in checks]


# --- sweep workers (top level so they pickle) ---


def _slide_point(a, L, tol, trunc_weight):
    return sturm1d.mu1(Interval1D(a, b_of_a(a, L)), tol, trunc_weight)


def _lemma_point(point, tol):
    N, R = point
    nu = radial.nu1(N, R, tol)
    res = radial.radial_eigs(radial.RadialProblem(N, 0, R), 2, tol)[1]
    rep = bounds.lemma_chain(N, R, tol, nu, res.value, res.diagnostics["r0"])
    return nu, res.value, res.diagnostics["r0"], rep


def _make_domain(shape, m, args, seed, index, n):
    if shape == "disk":
        return weinberger.disk(m)
    if shape == "square":
        return weinberger.centered_square(m)
    if shape == "star":
        return weinberger.star(m, args["amplitude"])
    if shape == "random-star":
        return weinberger.random_star(m, np.random.default_rng([seed, index]))
    return weinberger.annulus(m, args["inner"], n)


def _weinberger_point(item, shape, args, seed, tol, n):
    index, m = item
    omega = _make_domain(shape, m, args, seed, index, n)
    return weinberger.szego_weinberger_check(omega, tol, n)


def _shape_1d(iv, tol):
    return iv, sturm1d.shape_derivative_1d(iv, max(tol * 1e-2, 1e-13))


def _shape_radial(cfg, tol):
    N, R, idx = cfg
    return cfg, radial.shape_derivative_radial(N, R, idx, max(tol * 1e-2, 1e-13))


def _criterion(number, tol, seed):
    t0 = time.perf_counter()
    rep = verify.run_criterion(number, tol, seed)
    rep["seconds"] = time.perf_counter() - t0
    return rep


# --- commands: each returns (results, checks) ---


def cmd_eig1d(args, cfg):
    iv = Interval1D(args.a, args.b)
    res = sturm1d.eig1d(iv, args.bc, args.count, cfg.tol, cfg.n_samples, cfg.trunc_weight)
    results = [
        {"index": r.index, "value": r.value, "nodes": r.nodes, "bracket_width": r.bracket, "a": iv.a, "b": iv.b, "bc": args.bc}
        for r in res
    ]
    checks = [verify.record(f"u_{r.index} has {r.index} nodes", r.nodes == r.index, r.nodes, r.index, 0) for r in res]
    return results, checks


def cmd_slide(args, cfg):
    grid, a_sym = verify.slide_grid(args.L, args.n, args.far)
    fn = functools.partial(_slide_point, L=args.L, tol=cfg.tol, trunc_weight=cfg.trunc_weight)
    prof = pool_map(fn, grid, cfg.workers)
    results = [{"a": a, "b": b_of_a(a, args.L), "mu1": mu, "symmetric": bool(a == a_sym)} for a, mu in zip(grid, prof)]
    checks, _ = verify.slide_checks(args.L, grid, prof, cfg.tol)
    return results, checks


def cmd_radial(args, cfg):
    p = radial.RadialProblem(args.N, args.k, args.R, args.bc)
    res = radial.radial_eigs(p, args.count, cfg.tol, cfg.n_samples)
    results = []
    for r in res:
        row = {"N": p.N, "k": p.k, "R": p.R, "bc": p.bc, "n": r.index, "value": r.value, "nodes": r.nodes}
        if "r0" in r.diagnostics:
            row["r0"] = r.diagnostics["r0"]
        results.append(row)
    checks = [
        verify.strictly_less(f"eigenvalue {r0.index} < eigenvalue {r1.index}", r0.value, r1.value)
        for r0, r1 in zip(res, res[1:])
    ]
    return results, checks


def cmd_ball(args, cfg):
    mu, w = radial.mu1_ball(args.N, args.R, cfg.tol, cfg.n_samples)
    t1 = radial.tau(args.N, args.R, 1, cfg.tol)
    k2 = radial.radial_eigenvalue(args.N, 2, args.R, 0, sturm1d.NEUMANN, cfg.tol)
    rq = radial.ball_rayleigh(args.N, w, None if math.isinf(args.R) else args.R)
    results = [{"N": args.N, "R": args.R, "mu1": mu, "tau1": t1, "k2_first": k2, "rayleigh": rq}]
    checks = [
        verify.strictly_less("nu1 < tau1", mu, t1),
        verify.strictly_less("nu1 < first k=2 eigenvalue", mu, k2),
        verify.close("Rayleigh quotient of profile = mu1", rq, mu, 10 * cfg.tol),
    ]
    return results, checks


def cmd_bounds(args, cfg):
    results, checks = [], []
    for R in args.R:
        reg = bounds.regime(args.N, R)
        row = {"N": args.N, "R": R, "regime": reg, "k": bounds.k_bound(args.N, R)}
        row["h"] = bounds.h_bound(args.N, R) if reg != bounds.J1 else math.inf
        if args.N == 2:
            row["k_closed_form"] = bounds.k_bound_2d(R)
            checks.append(verify.close(f"R={R:g}: k quadrature = closed form", row["k"], row["k_closed_form"], 1e-12))
        results.append(row)
    return results, checks


def cmd_lemma(args, cfg):
    points = []
    for N in args.N:
        radii = args.R if args.R else verify.lemma_radii(N)
        points += [(N, float(R)) for R in radii]
    out = pool_map(functools.partial(_lemma_point, tol=cfg.tol), points, cfg.workers)
    results, checks = [], []
    for (N, R), (nu, t1, r0, rep) in zip(points, out):
        results.append(
            {"N": N, "R": R, "regime": rep.regime, "nu1": nu, "tau1": t1, "r0": r0, "k": rep.k_val, "h": rep.h_val, "chain_ok": rep.chain_ok}
        )
        tag = f"N={N} R={R:.4f}"
        checks += _prefixed(tag, [link.as_dict() for link in rep.links])
        checks.append(verify.at_most(f"{tag}: nu1 <= k(R)", nu, rep.k_val))
    return results, checks


def cmd_rearrange(args, cfg):
    checks = verify.rearrangement_checks(cfg.seed, args.n_norm, args.n_pairs, args.n_ps)
    results = [{"quantity": c["name"], "worst": c["lhs"] if c["name"].startswith("L^p") else c["rhs"]} for c in checks]
    return results, checks


def cmd_weinberger(args, cfg):
    extra = {"amplitude": args.amplitude, "inner": args.inner}
    fn = functools.partial(_weinberger_point, shape=args.shape, args=extra, seed=cfg.seed, tol=cfg.tol, n=cfg.grid_n)
    reps = pool_map(fn, list(enumerate(args.m)), cfg.workers)
    results, checks = [], []
    for rep in reps:
        results.append({k: v for k, v in rep.items() if k != "checks"})
        checks += _prefixed(f"{rep['kind']} m={rep['measure']:.4f}", rep["checks"])
        checks.append(
            verify.record(
                f"{rep['kind']} m={rep['measure']:.4f}: equality only for the disk",
                rep["equal_to_ball"] == (rep["kind"] == "disk"),
                rep["bound"],
                rep["mu1_ball"],
            )
        )
    return results, checks


def cmd_counterexample(args, cfg):
    deltas = sorted(args.deltas, reverse=True)
    hs = sorted(args.h, reverse=True)
    rep = grid2d.counterexample_run(deltas, hs, cfg.tol)
    results = [dict(row, kind="square" if row["delta"] == 0 else "rounded") for row in rep["rows"]]
    results.append(dict(rep["half_space"], kind="half-space"))
    return results, verify.counterexample_checks(rep, cfg.tol)


def cmd_shape(args, cfg):
    results, checks = [], []
    if args.mode == "1d":
        if args.a is not None and args.b is not None:
            ivs = [Interval1D(args.a, args.b)]
        else:
            ivs = verify.shape_configs(np.random.default_rng(cfg.seed), args.samples)[0]
        for iv, sd in pool_map(functools.partial(_shape_1d, tol=cfg.tol), ivs, cfg.workers):
            results.append({"a": iv.a, "b": iv.b, "formula": sd.formula_value, "fd": sd.fd_value, "unscaled": sd.unscaled_value})
            err = abs(sd.formula_value - sd.fd_value)
            checks.append(verify.at_most(f"({iv.a:.4f}, {iv.b:.4f}): formula vs FD", err, 1e-4 * (1 + abs(sd.fd_value))))
        return results, checks
    if args.N is not None and args.R is not None:
        cfgs = [(args.N, args.R, args.index)]
    else:
        cfgs = verify.shape_configs(np.random.default_rng(cfg.seed), args.samples)[1]
    for (N, R, idx), sd in pool_map(functools.partial(_shape_radial, tol=cfg.tol), cfgs, cfg.workers):
        results.append({"N": N, "R": R, "index": idx, "formula": sd.formula_value, "fd": sd.fd_value})
        tag = f"N={N} R={R:.4f} tau_{idx}"
        err = abs(sd.formula_value - sd.fd_value)
        checks.append(verify.at_most(f"{tag}: formula vs FD", err, 1e-4 * (1 + abs(sd.fd_value))))
        checks.append(verify.strictly_less(f"{tag}: derivative < 0", sd.formula_value, 0.0))
    return results, checks


def cmd_verify_all(args, cfg):
    numbers = args.only or sorted(verify.CRITERIA)
    unknown = set(numbers) - set(verify.CRITERIA)
    if unknown:
        raise UsageError(f"unknown criteria {sorted(unknown)}")
    reps = pool_map(functools.partial(_criterion, tol=cfg.tol, seed=cfg.seed), numbers, cfg.workers)
    results, checks = [], []
    for rep in reps:
        results.append(
            {"criterion": rep["criterion"], "title": rep["title"], "pass": rep["pass"], "n_checks": len(rep["checks"]), "seconds": rep["seconds"]}
        )
        checks += _prefixed(f"C{rep['criterion']}", rep["checks"])
    return results, checks


HANDLERS = {
    "eig1d": cmd_eig1d,
    "slide": cmd_slide,
    "radial": cmd_radial,
    "ball": cmd_ball,
    "bounds": cmd_bounds,
    "lemma": cmd_lemma,
    "rearrange-check": cmd_rearrange,
    "weinberger": cmd_weinberger,
    "counterexample": cmd_counterexample,
    "shape-deriv": cmd_shape,
    "verify-all": cmd_verify_all,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    common = _Parser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--config", help=f"JSON config file (default: ${CONFIG_ENV})")
    g.add_argument("--tol", type=float)
    g.add_argument("--trunc-weight", dest="trunc_weight", type=float)
    g.add_argument("--n-samples", dest="n_samples", type=int)
    g.add_argument("--grid-n", dest="grid_n", type=int)
    g.add_argument("--format", choices=("json", "csv"))
    g.add_argument("--out")
    g.add_argument("--workers", type=int)
    g.add_argument("--seed", type=int)

    p = _Parser(prog="gaussneumann", description="Gaussian Neumann eigenvalue laboratory.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("eig1d", parents=[common], help="eigenvalues of an interval")
    s.add_argument("--a", type=float, default=-math.inf)
    s.add_argument("--b", type=float, default=math.inf)
    s.add_argument("--bc", choices=(sturm1d.NEUMANN, sturm1d.DIRICHLET), default=sturm1d.NEUMANN)
    s.add_argument("--count", type=int, default=2)

    s = sub.add_parser("slide", parents=[common], help="mu1 along intervals of fixed measure")
    s.add_argument("--L", type=float, required=True)
    s.add_argument("--n", type=int, default=60)
    s.add_argument("--far", type=float, default=8.0)

    s = sub.add_parser("radial", parents=[common], help="radial branch eigenvalues of a ball")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--R", type=float, required=True)
    s.add_argument("--bc", choices=(sturm1d.NEUMANN, sturm1d.DIRICHLET), default=sturm1d.NEUMANN)
    s.add_argument("--count", type=int, default=3)

    s = sub.add_parser("ball", parents=[common], help="first nontrivial Neumann eigenvalue of a ball")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--R", type=float, required=True)

    s = sub.add_parser("bounds", parents=[common], help="bound functions k(R) and h(R)")
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--R", type=float, nargs="+", required=True)

    s = sub.add_parser("lemma", parents=[common], help="nu1 < tau1 chain across radii")
    s.add_argument("--N", type=int, nargs="+", default=[2, 3, 5])
    s.add_argument("--R", type=float, nargs="*")

    s = sub.add_parser("rearrange-check", parents=[common], help="rearrangement inequalities on random samples")
    s.add_argument("--n-norm", dest="n_norm", type=int, default=100)
    s.add_argument("--n-pairs", dest="n_pairs", type=int, default=100)
    s.add_argument("--n-ps", dest="n_ps", type=int, default=50)

    s = sub.add_parser("weinberger", parents=[common], help="Weinberger bound on a symmetric planar domain")
    s.add_argument("--shape", choices=("disk", "square", "star", "random-star", "annulus"), default="square")
    s.add_argument("--m", type=float, nargs="+", default=[0.3, 0.5, 0.7])
    s.add_argument("--amplitude", type=float, default=0.3)
    s.add_argument("--inner", type=float, default=0.3)

    s = sub.add_parser("counterexample", parents=[common], help="rounded squares against the half-space")
    s.add_argument("--deltas", type=float, nargs="+", default=[0.2, 0.1, 0.05])
    s.add_argument("--h", type=float, nargs="+", default=[0.04, 0.02])

    s = sub.add_parser("shape-deriv", parents=[common], help="shape derivative formula against finite differences")
    s.add_argument("--mode", choices=("1d", "radial"), default="1d")
    s.add_argument("--a", type=float)
    s.add_argument("--b", type=float)
    s.add_argument("--N", type=int)
    s.add_argument("--R", type=float)
    s.add_argument("--index", type=int, default=1)
    s.add_argument("--samples", type=int, default=10, help="sampled configurations when no domain is given")

    s = sub.add_parser("verify-all", parents=[common], help="run the acceptance criteria")
    s.add_argument("--only", type=int, nargs="*")
    return p


def emit(doc, cfg, stream):
    text = to_csv(doc["results"]) if cfg.format == "csv" else json.dumps(doc, indent=2, allow_nan=False) + "\n"
    stream.write(text)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def run(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        overrides = {f.name: getattr(args, f.name, None) for f in fields(RunConfig)}
        cfg = load_config(args.config, overrides)
        results, checks = HANDLERS[args.command](args, cfg)
        doc = validate(jsonable({"command": args.command, "config": asdict(cfg), "results": results, "checks": checks}))
        emit(doc, cfg, stdout)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 2
    except (DomainError, PreconditionError) as exc:
        print(f"error: {exc}", file=stderr)
        return 2
    except SolverError as exc:
        print(f"solver failure: {exc} {exc.diagnostics}", file=stderr)
        return 3
    failed = [c["name"] for c in doc["checks"] if not c["pass"]]
    for name in failed:
        print(f"FAILED: {name}", file=stderr)
    return 1 if failed else 0


def main():
    sys.exit(run())
