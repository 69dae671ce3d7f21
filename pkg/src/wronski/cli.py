"""Command-line interface: ``wronski count|solve|verify-sweep|tables``.

Exit codes: 0 when every computed route agrees, 1 on a disagreement, an
overcount or a failed verification, 2 when the only problem is that the
solver found fewer orbits than predicted, 3 for unusable arguments.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
import time
import warnings
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from .bethe import (
    MasterProblem,
    SolverConfig,
    boundary_class,
    reconstruct_class,
    sample_generic_z,
    solve_orbits,
    verify_class,
)
from .combinatorics import ProblemSpec, catalan, count_classes, dim_sing_formula, genfun_coefficients
from .errors import (
    InvalidArgumentError,
    InvalidConfigurationError,
    NotCriticalError,
    ReconstructionError,
    SolverCoverageWarning,
)
from .schubert import intersection_number
from .sl2rep import dim_sing_oracle, tensor_decompose

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_DISAGREE = 1
EXIT_COVERAGE = 2
EXIT_USAGE = 3

ROUTES = ("formula", "schubert", "rep")
MAX_TABLE_ORDER = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags, which would collide with the
    # coverage-shortfall code
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- argument parsing helpers -----------------------------------------------


def parse_m(text: str) -> tuple[int, ...]:
    try:
        m = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not m:
        raise argparse.ArgumentTypeError("empty multiplicity list")
    return m


def parse_z(text: str) -> tuple[complex, ...]:
    """``re,im;re,im;...`` -> complex tuple."""
    out = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = chunk.split(",")
        if len(parts) != 2:
            raise argparse.ArgumentTypeError(f"expected 're,im', got {chunk!r}")
        try:
            out.append(complex(float(parts[0]), float(parts[1])))
        except ValueError:
            raise argparse.ArgumentTypeError(f"non-numeric point {chunk!r}")
    if not out:
        raise argparse.ArgumentTypeError("empty point list")
    return tuple(out)


def parse_methods(text: str) -> tuple[str, ...]:
    names = [x.strip() for x in text.split(",") if x.strip()]
    if "all" in names:
        return ROUTES
    bad = [x for x in names if x not in ROUTES]
    if bad or not names:
        raise argparse.ArgumentTypeError(f"methods must be drawn from {ROUTES} or 'all', got {text!r}")
    return tuple(r for r in ROUTES if r in names)


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {v}")
    return v


# -- report -----------------------------------------------------------------


@dataclass
class RunReport:
    spec: ProblemSpec
    counts: dict[str, int] = field(default_factory=dict)
    z_used: tuple[complex, ...] | None = None
    orbits: list[dict] = field(default_factory=list)
    timings: dict[str, float] = field(default_factory=dict)
    config: dict | None = None
    seed: int | None = None
    remark: str | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def agreement(self) -> bool:
        return len(set(self.counts.values())) <= 1

    def to_json(self, with_timings: bool = True) -> dict:
        s = self.spec
        return {
            "spec": {"d": s.d, "m": list(s.m), "M": s.M, "k": s.k, "m_inf": s.m_inf},
            "z_used": None if self.z_used is None else [[z.real, z.imag] for z in self.z_used],
            "counts": dict(self.counts),
            "agreement": self.agreement,
            "orbits": self.orbits,
            "timings": dict(self.timings) if with_timings else None,
            "config": self.config,
            "seed": self.seed,
            "remark": self.remark,
            "warnings": list(self.warnings),
        }


def _finite(obj: Any) -> Any:
    """Strict JSON has no inf/nan; they become null."""
    if isinstance(obj, float) and not np.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    return obj


def dump_json(obj: Any) -> str:
    return json.dumps(_finite(obj), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _timed(fn: Callable[[], Any]) -> tuple[Any, float]:
    t0 = time.perf_counter()
    out = fn()
    return out, (time.perf_counter() - t0) * 1000.0


def remark_for(spec: ProblemSpec) -> str | None:
    reason = spec.vanishing_reason()
    if reason is not None:
        return f"no degree-{spec.d} map has these critical multiplicities for any z: {reason}; count is 0"
    if spec.boundary:
        return (
            f"M = d-1 = {spec.M}: for every z the only class is the polynomial "
            "integral of prod (x - z_j)^m_j; count is 1"
        )
    return None


def route_count(route: str, spec: ProblemSpec) -> int:
    if route == "formula":
        return count_classes(spec)
    if route == "schubert":
        return intersection_number(spec)
    if route == "rep":
        if spec.n >= 2:
            return dim_sing_formula(spec.m, spec.k)
        return dim_sing_oracle(spec.m, spec.k)
    raise InvalidArgumentError(f"unknown route {route!r}")


def count_report(spec: ProblemSpec, methods: Sequence[str]) -> RunReport:
    rep = RunReport(spec=spec, remark=remark_for(spec))
    for route in methods:
        # the singular-vector count only matches for admissible specs
        if route == "rep" and not spec.admissible:
            continue
        value, ms = _timed(lambda: route_count(route, spec))
        rep.counts[route] = value
        rep.timings[route] = ms
    return rep


def solve_report(spec: ProblemSpec, z: Sequence[complex], cfg: SolverConfig) -> tuple[RunReport, int]:
    """Count by every route, then enumerate and verify orbits. Returns (report, exit code)."""
    rep = count_report(spec, ROUTES)
    rep.z_used = tuple(z)
    rep.config = cfg.to_json()
    rep.seed = cfg.seed
    if not spec.admissible:
        rep.counts["orbits"] = 0
        return rep, EXIT_OK if rep.agreement else EXIT_DISAGREE
    prob = MasterProblem(tuple(z), spec.m, spec.d)
    failed = False
    t0 = time.perf_counter()
    if prob.k == 0:
        rc = boundary_class(prob)
        vr = verify_class(rc, prob, cfg.eps_verify, cfg.delta_sep)
        failed |= not vr.passed
        rep.orbits.append({"orbit": {"points": []}, "class": rc.to_json(), "verification": vr.to_json()})
        rep.counts["orbits"] = 1
    else:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", SolverCoverageWarning)
            orbits = solve_orbits(prob, cfg)
        rep.warnings.extend(str(w.message) for w in caught if issubclass(w.category, SolverCoverageWarning))
        rep.counts["orbits"] = len(orbits)
        for orb in orbits:
            entry: dict[str, Any] = {"orbit": orb.to_json()}
            try:
                rc = reconstruct_class(orb, prob, eps_verify=cfg.eps_verify)
            except (NotCriticalError, ReconstructionError) as exc:
                entry["error"] = str(exc)
                failed = True
            else:
                vr = verify_class(rc, prob, cfg.eps_verify, cfg.delta_sep)
                entry["class"] = rc.to_json()
                entry["verification"] = vr.to_json()
                failed |= not vr.passed
            rep.orbits.append(entry)
    rep.timings["orbits"] = (time.perf_counter() - t0) * 1000.0
    return rep, _exit_code(rep.counts, failed)


def _exit_code(counts: dict[str, int], failed: bool) -> int:
    routes = {v for k, v in counts.items() if k != "orbits"}
    if failed or len(routes) > 1:
        return EXIT_DISAGREE
    found = counts.get("orbits")
    if found is None or not routes:
        return EXIT_OK
    expected = routes.pop()
    if found > expected:
        return EXIT_DISAGREE
    if found < expected:
        return EXIT_COVERAGE
    return EXIT_OK


def _write_json(path: str | None, payload: Any) -> None:
    if path:
        Path(path).write_text(dump_json(payload))


def _config_from_args(args: argparse.Namespace) -> SolverConfig:
    overrides = {
        "seed": args.seed,
        "max_starts": getattr(args, "max_starts", None),
        "saturation_window": getattr(args, "saturation_window", None),
        "eps_newton": getattr(args, "eps_newton", None),
        "eps_verify": getattr(args, "eps_verify", None),
        "delta_dedupe": getattr(args, "delta_dedupe", None),
        "delta_sep": getattr(args, "delta_sep", None),
        "threads": getattr(args, "threads", None),
    }
    source = args.config if args.config else {}
    try:
        return SolverConfig.from_json(source, **overrides)
    except (OSError, json.JSONDecodeError, TypeError) as exc:
        raise UsageError(f"cannot read solver config: {exc}")


# -- commands ---------------------------------------------------------------


def cmd_count(args: argparse.Namespace, out) -> int:
    spec = ProblemSpec(args.d, args.m)
    rep = count_report(spec, args.methods)
    print(f"d={spec.d} m={','.join(map(str, spec.m))} M={spec.M} k={spec.k}", file=out)
    for route, value in rep.counts.items():
        if args.no_timings:
            print(f"  {route:<9}{value:>12}", file=out)
        else:
            print(f"  {route:<9}{value:>12}   {rep.timings[route]:9.3f} ms", file=out)
    if rep.remark:
        print(f"note: {rep.remark}", file=out)
    print(f"agreement: {'yes' if rep.agreement else 'NO'}", file=out)
    _write_json(args.json, rep.to_json(not args.no_timings))
    return EXIT_OK if rep.agreement else EXIT_DISAGREE


def cmd_solve(args: argparse.Namespace, out) -> int:
    spec = ProblemSpec(args.d, args.m)
    cfg = _config_from_args(args)
    if args.z is not None:
        z = args.z
        if len(z) != spec.n:
            raise UsageError(f"--z has {len(z)} points but --m has {spec.n} entries")
    else:
        z = sample_generic_z(spec.n, np.random.default_rng(cfg.seed))
    rep, code = solve_report(spec, z, cfg)
    payload = rep.to_json(not args.no_timings)
    payload["exit_code"] = code
    out.write(dump_json(payload))
    _write_json(args.json, payload)
    return code


def sweep_specs(max_d: int, max_n: int, max_m: int):
    """Every admissible (d, m) with 2 <= n, ordered m tuples, in lexicographic order."""
    for d in range(1, max_d + 1):
        for n in range(2, max_n + 1):
            for m in product(range(1, max_m + 1), repeat=n):
                spec = ProblemSpec(d, m)
                if spec.admissible:
                    yield spec


def cmd_verify_sweep(args: argparse.Namespace, out) -> int:
    specs = list(sweep_specs(args.max_d, args.max_n, args.max_m))
    rows: list[dict[str, Any]] = []
    bad: list[str] = []
    for spec in specs:
        counts = {r: route_count(r, spec) for r in ROUTES}
        counts["rep_oracle"] = dim_sing_oracle(spec.m, spec.k)
        agree = len(set(counts.values())) == 1
        rows.append(
            {
                "spec": f"d={spec.d};m={','.join(map(str, spec.m))}",
                "formula": counts["formula"],
                "schubert": counts["schubert"],
                "rep": counts["rep"],
                "rep_oracle": counts["rep_oracle"],
                "agree": agree,
                "orbit_count": "",
                "max_residual": "",
            }
        )
        if not agree:
            bad.append(rows[-1]["spec"])
    shortfall = False
    if args.with_bethe and rows:
        cfg = _config_from_args(args)
        rng = np.random.default_rng([cfg.seed, 0xB37E])
        picks = sorted(rng.choice(len(rows), size=min(args.with_bethe, len(rows)), replace=False))
        for i in picks:
            spec = specs[i]
            z = sample_generic_z(spec.n, rng)
            rep, code = solve_report(spec, z, cfg)
            resid = [
                e["verification"]["wronskian_residual"] for e in rep.orbits if "verification" in e
            ]
            rows[i]["orbit_count"] = rep.counts["orbits"]
            rows[i]["max_residual"] = f"{max(resid):.3e}" if resid else ""
            if code == EXIT_DISAGREE:
                rows[i]["agree"] = False
                bad.append(rows[i]["spec"])
            elif code == EXIT_COVERAGE:
                shortfall = True
    buf = io.StringIO()
    columns = ["spec", "formula", "schubert", "rep", "rep_oracle", "agree", "orbit_count", "max_residual"]
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    if args.csv:
        Path(args.csv).write_text(buf.getvalue())
    else:
        out.write(buf.getvalue())
    summary = {"specs": len(rows), "disagreements": bad, "coverage_shortfall": shortfall}
    _write_json(args.json, summary)
    print(f"{len(rows)} specs checked, {len(bad)} disagreements", file=sys.stderr)
    for s in bad:
        print(f"  disagreement: {s}", file=sys.stderr)
    if bad:
        return EXIT_DISAGREE
    return EXIT_COVERAGE if shortfall else EXIT_OK


def table_rows(kind: str, order: int) -> list[tuple[int, int, int]]:
    """(index, closed-form value, tensor-product oracle)."""
    if not 1 <= order <= MAX_TABLE_ORDER:
        raise UsageError(f"--order must be between 1 and {MAX_TABLE_ORDER}, got {order}")
    if kind == "catalan":
        # C_d is the multiplicity of L_0 in L_1^(2d-2)
        return [(d, catalan(d), tensor_decompose([1] * (2 * d - 2)).get(0, 0)) for d in range(1, order + 1)]
    if kind == "genfun":
        vals = genfun_coefficients(order)
        return [(k, vals[k - 1], tensor_decompose([1] * k).get(0, 0)) for k in range(1, order + 1)]
    raise UsageError(f"unknown table {kind!r}")


def cmd_tables(args: argparse.Namespace, out) -> int:
    rows = table_rows(args.kind, args.order)
    label = "d" if args.kind == "catalan" else "k"
    print(f"{label:>4} {'value':>22} {'oracle':>22}", file=out)
    for i, v, o in rows:
        print(f"{i:>4} {v:>22} {o:>22}{'' if v == o else '  MISMATCH'}", file=out)
    _write_json(args.json, {"kind": args.kind, "rows": [list(r) for r in rows]})
    return EXIT_OK if all(v == o for _, v, o in rows) else EXIT_DISAGREE


# -- entry point --------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="PATH", help="also write a JSON report here")
    common.add_argument("--seed", type=_u64, default=0, help="master seed (default 0)")
    common.add_argument("--config", metavar="PATH", help="solver config JSON")
    common.add_argument("--no-timings", action="store_true", help="omit timings for byte-stable output")
    common.add_argument("-v", "--verbose", action="store_true")

    solver = argparse.ArgumentParser(add_help=False)
    solver.add_argument("--max-starts", type=int)
    solver.add_argument("--saturation-window", type=int)
    solver.add_argument("--eps-newton", type=float)
    solver.add_argument("--eps-verify", type=float)
    solver.add_argument("--delta-dedupe", type=float)
    solver.add_argument("--delta-sep", type=float)
    solver.add_argument("--threads", type=int, help="worker threads (capped by WRONSKI_THREADS)")

    parser = _Parser(prog="wronski", description="Count and construct rational functions with prescribed critical points.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("count", parents=[common], help="count classes by the closed routes")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=parse_m, required=True)
    p.add_argument("--methods", type=parse_methods, default=ROUTES, help="formula,schubert,rep or all")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("solve", parents=[common, solver], help="enumerate and verify classes numerically")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--m", type=parse_m, required=True)
    p.add_argument("--z", type=parse_z, help="critical points as 're,im;re,im;...' (sampled from --seed if absent)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify-sweep", parents=[common, solver], help="check route identities over a grid")
    p.add_argument("--max-d", type=int, default=7)
    p.add_argument("--max-n", type=int, default=5)
    p.add_argument("--max-m", type=int, default=4)
    p.add_argument("--with-bethe", type=int, default=0, metavar="N", help="also solve N random rows end to end")
    p.add_argument("--csv", metavar="PATH", help="write CSV here instead of standard output")
    p.set_defaults(func=cmd_verify_sweep)

    p = sub.add_parser("tables", parents=[common], help="Catalan or generating-function table")
    p.add_argument("kind", choices=("catalan", "genfun"))
    p.add_argument("--order", type=int, default=10)
    p.set_defaults(func=cmd_tables)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args, out)
    except (UsageError, InvalidArgumentError, InvalidConfigurationError) as exc:
        print(f"wronski: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
