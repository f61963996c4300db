"""Command line front end: instance IO, single solves, and experiment sweeps.

Subcommands:

* ``generate`` -- write random instance JSON files, one per seed.
* ``solve``    -- solve one instance with a chosen method.
* ``sweep-k``  -- bounds/approximation study over a range of cluster
  counts; emits a CSV of per-(seed, k) rows plus per-k summary means,
  and a sibling ``*_cdf.csv`` with the empirical CDF of the normalized
  approximation per k.
* ``bench``    -- wall-clock of the reduced-dual and column-generation
  solvers across N and K.

All CSV floats carry 9 significant digits; rows are sorted by (seed, k)
so reruns of the same configuration reproduce identical files (up to
the wall-clock ``solve_ms`` column).
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bounds import BoundsReport, approximate_solve, bound_pair, improve_upper
from .clustering import kmeans
from .colgen import run_colgen
from .dual_reduce import build_reduced_dual, reduced_dual_solve
from .decomposition import decomposed_solve
from .netmodel import (Instance, RateVariant, TableRates, TrueRates,
                       build_rate_table, generate_instance, load_instance,
                       save_instance)
from .oracle import BRUTE_FORCE_CAP, Schedule, brute_force_solve

SWEEP_HEADER = ("seed,k,n,t_lower,t_upper,t_upper_improved,t_approx,t_star,"
                "norm_gap_bounds,norm_gap_improved,norm_approx,solve_ms")
BENCH_HEADER = "method,n,k,seed,profile_count,lp_constraints,columns_generated,solve_ms"


@dataclass
class ExperimentConfig:
    n_links: int
    k_values: list[int]
    seeds: list[int]
    demand_lo: float
    demand_hi: float
    out: Path
    with_oracle: bool = True

    def __post_init__(self):
        if not self.seeds:
            raise ValueError("need at least one seed")
        if any(not 1 <= k <= self.n_links for k in self.k_values):
            raise ValueError("every k must satisfy 1 <= k <= n_links")


@dataclass
class SweepRow:
    seed: int
    k: int
    n: int
    t_lower: float
    t_upper: float
    t_upper_improved: float
    t_approx: float
    t_star: float | None
    solve_ms: float
    norms: dict = field(init=False)

    def __post_init__(self):
        denom = self.t_star if self.t_star is not None else self.t_lower
        if denom <= 0:
            raise ValueError("normalization denominator must be positive")
        self.norms = {
            "norm_gap_bounds": (self.t_upper - self.t_lower) / denom,
            "norm_gap_improved": (self.t_upper_improved - self.t_lower) / denom,
            "norm_approx": self.t_approx / denom,
        }

    def csv_fields(self) -> list[str]:
        star = _fmt(self.t_star) if self.t_star is not None else ""
        return [str(self.seed), str(self.k), str(self.n),
                _fmt(self.t_lower), _fmt(self.t_upper),
                _fmt(self.t_upper_improved), _fmt(self.t_approx), star,
                _fmt(self.norms["norm_gap_bounds"]),
                _fmt(self.norms["norm_gap_improved"]),
                _fmt(self.norms["norm_approx"]), _fmt(self.solve_ms)]


def _fmt(v: float) -> str:
    return f"{v:.9g}"


def _parse_seeds(spec: str) -> list[int]:
    """'100' -> seeds 0..99; '5:25' -> seeds 5..24."""
    if ":" in spec:
        lo, hi = spec.split(":", 1)
        seeds = list(range(int(lo), int(hi)))
    else:
        seeds = list(range(int(spec)))
    if not seeds:
        raise ValueError(f"seed spec {spec!r} selects no seeds")
    return seeds


def _instance_path(out_dir: Path, n: int, seed: int) -> Path:
    return out_dir / f"instance_n{n}_seed{seed:04d}.json"


# -- generate ----------------------------------------------------------------

def cmd_generate(config: ExperimentConfig) -> list[Path]:
    config.out.mkdir(parents=True, exist_ok=True)
    paths = []
    for seed in config.seeds:
        inst = generate_instance(seed, config.n_links,
                                 config.demand_lo, config.demand_hi)
        path = _instance_path(config.out, config.n_links, seed)
        save_instance(inst, path)
        paths.append(path)
    return paths


# -- solve -------------------------------------------------------------------

def _print_schedule(schedule: Schedule, out) -> None:
    print(f"total: {schedule.total:.9g}", file=out)
    print(f"entries: {len(schedule.entries)}", file=out)
    for e in schedule.entries:
        links = ",".join(str(i) for i in sorted(e.group))
        print(f"  {e.duration:12.6g}  links [{links}]", file=out)


def cmd_solve(instance_path, method: str, k: int | None,
              variant: RateVariant, out=sys.stdout) -> float:
    """Solve one instance file; prints a report and returns the length."""
    instance = load_instance(instance_path)
    n_sched = len(instance.positive_links)
    needs_table = method in ("colgen", "dual-reduce", "decomposed") or (
        method == "oracle" and k is not None)
    table = clustering = None
    if needs_table:
        if k is None:
            raise SystemExit(f"method {method} requires --k")
        clustering = kmeans(instance.lengths, k, seed=0)
        table = build_rate_table(instance, clustering, variant)

    print(f"instance: {instance_path} (n={instance.n_links}, "
          f"scheduled={n_sched})", file=out)
    print(f"method: {method}" + (f", k={k}, variant={variant.value}"
                                 if needs_table else ", true rates"), file=out)

    if method == "oracle":
        if n_sched > BRUTE_FORCE_CAP:
            raise SystemExit(
                f"refusing oracle: {n_sched} links exceed the cap of "
                f"{BRUTE_FORCE_CAP}"
            )
        rates = TableRates(table, clustering) if table is not None \
            else TrueRates(instance)
        schedule = brute_force_solve(instance, rates)
        print("status: optimal (full group enumeration)", file=out)
        _print_schedule(schedule, out)
        return schedule.total
    if method == "colgen":
        master = run_colgen(instance, table, clustering)
        schedule = master.schedule() if master else Schedule.from_entries([])
        print("status: optimal (final pricing found no improving group)",
              file=out)
        if master:
            print(f"iterations: {len(master.objective_history)} master solves, "
                  f"{master.n_columns} columns", file=out)
        _print_schedule(schedule, out)
        return schedule.total
    if method == "dual-reduce":
        value, _ = reduced_dual_solve(instance, table, clustering)
        reduced = build_reduced_dual(instance, table, clustering)
        print("status: optimal value certified (no primal schedule)", file=out)
        print(f"constraints: {reduced.n_constraints}", file=out)
        print(f"total: {value:.9g}", file=out)
        return value
    if method == "decomposed":
        try:
            schedule = decomposed_solve(instance, table, clustering)
        except ValueError as exc:
            raise SystemExit(f"refusing decomposed solve: {exc}") from exc
        print("status: optimal (independent per-cluster solves)", file=out)
        _print_schedule(schedule, out)
        return schedule.total
    raise SystemExit(f"unknown method {method!r}")


# -- sweep-k -----------------------------------------------------------------

def sweep_rows(config: ExperimentConfig) -> list[SweepRow]:
    rows = []
    for seed in sorted(config.seeds):
        instance = generate_instance(seed, config.n_links,
                                     config.demand_lo, config.demand_hi)
        t_star = None
        if config.with_oracle:
            t_star = brute_force_solve(instance, TrueRates(instance)).total
        for k in sorted(config.k_values):
            start = time.perf_counter()
            clustering = kmeans(instance.lengths, k, seed=seed)
            t_lower, t_upper, (sched_lo, sched_hi) = bound_pair(instance, clustering)
            improved = improve_upper(instance, sched_hi)
            approx = approximate_solve(instance, clustering)
            ms = 1e3 * (time.perf_counter() - start)
            report = BoundsReport(
                t_lower=t_lower, t_upper=t_upper,
                t_upper_improved=improved.total, t_approx=approx.total,
                t_star=t_star, lower_schedule=sched_lo, upper_schedule=sched_hi,
                improved_schedule=improved, approx_schedule=approx,
            )
            rows.append(SweepRow(
                seed=seed, k=k, n=config.n_links,
                t_lower=report.t_lower, t_upper=report.t_upper,
                t_upper_improved=report.t_upper_improved,
                t_approx=report.t_approx, t_star=report.t_star,
                solve_ms=ms,
            ))
    return rows


def write_sweep_csv(rows: list[SweepRow], out_path: Path) -> None:
    rows = sorted(rows, key=lambda r: (r.seed, r.k))
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with out_path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SWEEP_HEADER.split(","))
        for row in rows:
            w.writerow(row.csv_fields())
        for k in sorted({r.k for r in rows}):
            sub = [r for r in rows if r.k == k]
            stars = [r.t_star for r in sub if r.t_star is not None]
            mean = lambda vals: _fmt(float(np.mean(vals)))
            w.writerow([
                "mean", str(k), str(sub[0].n),
                mean([r.t_lower for r in sub]), mean([r.t_upper for r in sub]),
                mean([r.t_upper_improved for r in sub]),
                mean([r.t_approx for r in sub]),
                mean(stars) if len(stars) == len(sub) else "",
                mean([r.norms["norm_gap_bounds"] for r in sub]),
                mean([r.norms["norm_gap_improved"] for r in sub]),
                mean([r.norms["norm_approx"] for r in sub]),
                mean([r.solve_ms for r in sub]),
            ])

    cdf_path = out_path.with_name(out_path.stem + "_cdf.csv")
    with cdf_path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["k", "norm_approx", "cdf"])
        for k in sorted({r.k for r in rows}):
            vals = sorted(r.norms["norm_approx"] for r in rows if r.k == k)
            for rank, v in enumerate(vals, start=1):
                w.writerow([str(k), _fmt(v), _fmt(rank / len(vals))])


def cmd_sweep_k(config: ExperimentConfig) -> list[SweepRow]:
    rows = sweep_rows(config)
    write_sweep_csv(rows, config.out)
    return rows


# -- bench -------------------------------------------------------------------

def bench_rows(n_values, k_values, seeds, demand_lo, demand_hi) -> list[dict]:
    rows = []
    for n in sorted(n_values):
        for k in sorted(kv for kv in k_values if kv <= n):
            for seed in sorted(seeds):
                instance = generate_instance(seed, n, demand_lo, demand_hi)
                clustering = kmeans(instance.lengths, k, seed=seed)
                table = build_rate_table(instance, clustering, RateVariant.MEAN)

                start = time.perf_counter()
                reduced = build_reduced_dual(instance, table, clustering)
                reduced_dual_solve(instance, table, clustering)
                ms_dual = 1e3 * (time.perf_counter() - start)
                rows.append({
                    "method": "dual-reduce", "n": n, "k": k, "seed": seed,
                    "profile_count": table.profile_count,
                    "lp_constraints": reduced.n_constraints,
                    "columns_generated": "",
                    "solve_ms": ms_dual,
                })

                start = time.perf_counter()
                master = run_colgen(instance, table, clustering)
                ms_cg = 1e3 * (time.perf_counter() - start)
                rows.append({
                    "method": "colgen", "n": n, "k": k, "seed": seed,
                    "profile_count": table.profile_count,
                    "lp_constraints": "",
                    "columns_generated": len(master.added_reduced_costs),
                    "solve_ms": ms_cg,
                })
    return rows


def write_bench_csv(rows: list[dict], out_path: Path) -> None:
    out_path.parent.mkdir(parents=True, exist_ok=True)
    with out_path.open("w", newline="") as fh:
        w = csv.writer(fh)
        cols = BENCH_HEADER.split(",")
        w.writerow(cols)
        for row in rows:
            w.writerow([
                _fmt(row[c]) if isinstance(row[c], float) else str(row[c])
                for c in cols
            ])


# -- argument parsing ---------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="minsched",
        description="Minimum-length wireless link scheduling toolkit",
    )
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write random instance JSON files")
    g.add_argument("--n", type=int, required=True, help="links per instance")
    g.add_argument("--seeds", required=True,
                   help="'100' for seeds 0..99 or '5:25' for a range")
    g.add_argument("--demand-lo", type=float, default=100.0)
    g.add_argument("--demand-hi", type=float, default=1500.0)
    g.add_argument("--out", type=Path, required=True, help="output directory")

    s = sub.add_parser("solve", help="solve one instance file")
    s.add_argument("instance", type=Path)
    s.add_argument("--method", required=True,
                   choices=["oracle", "colgen", "dual-reduce", "decomposed"])
    s.add_argument("--k", type=int, default=None, help="cluster count")
    s.add_argument("--variant", default="mean",
                   choices=[v.value for v in RateVariant])

    sw = sub.add_parser("sweep-k", help="bounds study over cluster counts")
    sw.add_argument("--n", type=int, required=True)
    sw.add_argument("--k", required=True,
                    help="comma-separated cluster counts, e.g. 1,2,3")
    sw.add_argument("--seeds", required=True)
    sw.add_argument("--demand-lo", type=float, default=100.0)
    sw.add_argument("--demand-hi", type=float, default=1500.0)
    sw.add_argument("--no-oracle", action="store_true",
                    help="skip the enumerated optimum even when feasible")
    sw.add_argument("--out", type=Path, required=True, help="output CSV path")

    b = sub.add_parser("bench", help="solver runtime measurements")
    b.add_argument("--n", required=True, help="comma-separated link counts")
    b.add_argument("--k", required=True, help="comma-separated cluster counts")
    b.add_argument("--seeds", default="3")
    b.add_argument("--demand-lo", type=float, default=100.0)
    b.add_argument("--demand-hi", type=float, default=1500.0)
    b.add_argument("--out", type=Path, required=True, help="output CSV path")
    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "generate":
        config = ExperimentConfig(
            n_links=args.n, k_values=[1], seeds=_parse_seeds(args.seeds),
            demand_lo=args.demand_lo, demand_hi=args.demand_hi, out=args.out,
        )
        paths = cmd_generate(config)
        print(f"wrote {len(paths)} instance files to {args.out}")
        return 0
    if args.command == "solve":
        cmd_solve(args.instance, args.method, args.k, RateVariant(args.variant))
        return 0
    if args.command == "sweep-k":
        k_values = [int(x) for x in args.k.split(",")]
        config = ExperimentConfig(
            n_links=args.n, k_values=k_values, seeds=_parse_seeds(args.seeds),
            demand_lo=args.demand_lo, demand_hi=args.demand_hi, out=args.out,
            with_oracle=(not args.no_oracle) and args.n <= BRUTE_FORCE_CAP,
        )
        rows = cmd_sweep_k(config)
        print(f"wrote {len(rows)} rows to {args.out}")
        return 0
    if args.command == "bench":
        rows = bench_rows(
            [int(x) for x in args.n.split(",")],
            [int(x) for x in args.k.split(",")],
            _parse_seeds(args.seeds), args.demand_lo, args.demand_hi,
        )
        write_bench_csv(rows, args.out)
        print(f"wrote {len(rows)} rows to {args.out}")
        return 0
    raise SystemExit(f"unknown command {args.command!r}")


if __name__ == "__main__":
    raise SystemExit(main())
