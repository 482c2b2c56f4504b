"""Command-line experiment runner.

    unionde run --strategies ude,rand2 --functions sphere,rastrigin --runs 25 --out results.csv
    unionde table results.csv --reference ude
    unionde compare results.csv rand2 ude
    unionde list

``run`` writes one CSV row per independent run; ``table`` and ``compare`` read
nothing but that CSV.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import io
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import benchmarks
from .core import ConfigurationError
from .engine import RunConfig, run
from .mutation import STRATEGY_NAMES, MutationStrategy
from .params import ParamPolicy
from .stats import PairedSample, mean_error, wilcoxon_signed_rank, win_tie_lose

CSV_HEADER = ("function", "strategy", "run_index", "seed", "final_error", "evals_used")


class CliError(Exception):
    pass


@dataclass
class CampaignConfig:
    strategies: list[str] = field(default_factory=lambda: ["ude"])
    functions: list[str] = field(default_factory=lambda: ["sphere"])
    runs: int = 50
    NP: int = 50
    D: int = 30
    max_evals: int | None = None
    base_seed: int = 0
    param_policy: str = "jde"
    output: str = "-"
    tie_tol: float = 0.0
    jobs: int = 0

    def validate(self) -> None:
        for s in self.strategies:
            MutationStrategy.from_name(s)
        for f in self.functions:
            if f not in benchmarks.FUNCTION_NAMES:
                raise ConfigurationError(
                    f"unknown function {f!r}; valid identifiers: {', '.join(benchmarks.FUNCTION_NAMES)}"
                )
        ParamPolicy.parse(self.param_policy)
        if self.runs < 1:
            raise ConfigurationError("runs must be at least 1")
        for s in self.strategies:
            MutationStrategy.from_name(s).check_population_size(self.NP)


def run_seed(base_seed: int, strategy: str, function: str, run_index: int) -> int:
    """64-bit seed that depends only on its own (strategy, function, run) cell."""
    key = f"{base_seed}|{strategy}|{function}|{run_index}".encode()
    return int.from_bytes(hashlib.blake2b(key, digest_size=8).digest(), "little")


# flat "key = value" config: list keys may repeat or hold comma-separated values
_LIST_KEYS = {"strategies": "strategies", "strategy": "strategies", "functions": "functions", "function": "functions"}
_SCALAR_KEYS = {
    "runs": ("runs", int),
    "np": ("NP", int),
    "dim": ("D", int),
    "max_evals": ("max_evals", int),
    "seed": ("base_seed", int),
    "policy": ("param_policy", str),
    "param_policy": ("param_policy", str),
    "out": ("output", str),
    "tie_tol": ("tie_tol", float),
    "jobs": ("jobs", int),
}


def read_config_file(path) -> dict:
    values: dict = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise CliError(f"cannot read config file {path}: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CliError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (p.strip() for p in line.split("=", 1))
        key = key.lower().replace("-", "_")
        if key in _LIST_KEYS:
            values.setdefault(_LIST_KEYS[key], []).extend(_split(value))
        elif key in _SCALAR_KEYS:
            name, conv = _SCALAR_KEYS[key]
            try:
                values[name] = conv(value)
            except ValueError:
                raise CliError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
        else:
            raise CliError(f"{path}:{lineno}: unknown key {key!r}")
    return values


def _split(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _run_cell(task) -> tuple:
    function, strategy, run_index, seed, NP, D, max_evals, policy = task
    cfg = RunConfig(
        NP=NP, D=D, max_evals=max_evals, seed=seed,
        strategy=strategy, param_policy=policy, objective_name=function,
    )
    result = run(cfg)
    return (function, strategy, run_index, seed, result.best_error, result.evals_used)


def campaign_rows(cfg: CampaignConfig, progress=None) -> list[tuple]:
    """Run every (function, strategy, run) cell; rows come back in canonical order."""
    cfg.validate()
    tasks = [
        (f, s, r, run_seed(cfg.base_seed, s, f, r), cfg.NP, cfg.D, cfg.max_evals, cfg.param_policy)
        for f in sorted(set(cfg.functions))
        for s in sorted(set(cfg.strategies))
        for r in range(cfg.runs)
    ]
    jobs = cfg.jobs or os.cpu_count() or 1
    rows = []
    if jobs == 1:
        results = map(_run_cell, tasks)
    else:
        pool = ProcessPoolExecutor(max_workers=jobs)
        results = pool.map(_run_cell, tasks)
    try:
        for n, row in enumerate(results, 1):
            rows.append(row)
            if progress:
                progress(f"[{n}/{len(tasks)}] {row[0]} {row[1]} run {row[2]}: error {row[4]:.6g}")
    finally:
        if jobs != 1:
            pool.shutdown()
    return rows


def write_csv(rows, stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for function, strategy, run_index, seed, error, evals in rows:
        w.writerow([function, strategy, run_index, seed, repr(float(error)), evals])


def read_results(path) -> list[dict]:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or tuple(header) != CSV_HEADER:
                raise CliError(f"{path}: header must be {','.join(CSV_HEADER)}")
            rows = []
            for lineno, rec in enumerate(reader, 2):
                if not rec:
                    continue
                if len(rec) != len(CSV_HEADER):
                    raise CliError(f"{path}:{lineno}: expected {len(CSV_HEADER)} fields, got {len(rec)}")
                try:
                    rows.append({
                        "function": rec[0],
                        "strategy": rec[1],
                        "run_index": int(rec[2]),
                        "seed": int(rec[3]),
                        "final_error": float(rec[4]),
                        "evals_used": int(rec[5]),
                    })
                except ValueError as exc:
                    raise CliError(f"{path}:{lineno}: {exc}") from None
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None
    return rows


def mean_table(rows: list[dict]) -> tuple[list[str], list[str], dict]:
    """Per-(function, strategy) mean errors plus the function and strategy orders."""
    functions, strategies, cells = [], [], {}
    for r in rows:
        if r["function"] not in functions:
            functions.append(r["function"])
        if r["strategy"] not in strategies:
            strategies.append(r["strategy"])
        cells.setdefault((r["function"], r["strategy"]), []).append(r["final_error"])
    means = {k: mean_error(v) for k, v in cells.items()}
    return functions, strategies, means


def format_table(rows: list[dict], reference: str | None = None, tie_tol: float = 0.0) -> str:
    functions, strategies, means = mean_table(rows)
    if not functions:
        raise CliError("no result rows")
    if reference is None:
        reference = "ude" if "ude" in strategies else strategies[-1]
    if reference not in strategies:
        raise CliError(f"reference strategy {reference!r} not in results ({', '.join(strategies)})")
    cols = [s for s in strategies if s != reference] + [reference]
    body = [["Fun."] + [f"{s} mean" for s in cols]]
    for f in functions:
        vals = [means.get((f, s)) for s in cols]
        present = [v for v in vals if v is not None]
        best = min(present)
        cells = [f]
        for v in vals:
            if v is None:
                cells.append("-")
            else:
                cells.append(f"{v:.6g}" + (" *" if v - best <= tie_tol else ""))
        body.append(cells)
    footer = ["W/T/L"]
    for s in cols[:-1]:
        common = [f for f in functions if (f, s) in means and (f, reference) in means]
        w, t, l = win_tie_lose([means[f, s] for f in common], [means[f, reference] for f in common], tie_tol)
        footer.append(f"Win: {w} lose: {l} tie: {t}")
    footer.append(f"(reference: {reference})")
    body.append(footer)
    widths = [max(len(r[c]) for r in body) for c in range(len(body[0]))]
    lines = ["  ".join(cell.ljust(wd) for cell, wd in zip(r, widths)).rstrip() for r in body]
    lines.insert(1, "-" * len(lines[0]))
    lines.insert(len(lines) - 1, "-" * len(lines[0]))
    return "\n".join(lines) + "\n"


def format_compare(rows: list[dict], strategy_a: str, strategy_b: str, alpha: float = 0.05) -> str:
    functions, strategies, means = mean_table(rows)
    for s in (strategy_a, strategy_b):
        if s not in strategies:
            raise CliError(f"strategy {s!r} not in results ({', '.join(strategies)})")
    common = [f for f in functions if (f, strategy_a) in means and (f, strategy_b) in means]
    if not common:
        raise CliError(f"{strategy_a} and {strategy_b} share no functions")
    res = wilcoxon_signed_rank(
        PairedSample([means[f, strategy_a] for f in common], [means[f, strategy_b] for f in common]),
        alpha,
    )
    header = ["Algorithm", "MR-", "MR+", "SR-", "SR+", "P-value", "Difference"]
    row = [
        f"{strategy_a} Vs. {strategy_b}",
        f"{res.mr_minus:.2f}", f"{res.mr_plus:.2f}", f"{res.sr_minus:.2f}", f"{res.sr_plus:.2f}",
        f"{res.p_value:.3g}", res.verdict,
    ]
    widths = [max(len(a), len(b)) for a, b in zip(header, row)]
    out = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in (header, row)]
    note = f"n_effective={res.n_effective} of {len(common)} functions, {res.method} p-value"
    if res.underpowered:
        note += ", underpowered (fewer than 5 non-zero differences)"
    out.append(note)
    return "\n".join(out) + "\n"


def format_listing(dim: int = 30) -> str:
    lines = ["strategies:"]
    lines += [f"  {s}" for s in STRATEGY_NAMES]
    lines.append("functions:")
    for f in benchmarks.suite(dim):
        lo, hi = f.bounds.lower[0], f.bounds.upper[0]
        lines.append(f"  {f.name:<18} D={f.dimension:<4} bounds=[{lo:g}, {hi:g}]  group={f.group}")
    lines.append("parameter policies:")
    lines.append("  jde")
    lines.append("  fixed:F=<v>,CR=<v>")
    return "\n".join(lines) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unionde", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run a seeded campaign and write a results CSV")
    r.add_argument("--config", help="flat key = value configuration file")
    r.add_argument("--strategies", help="comma-separated strategy identifiers")
    r.add_argument("--functions", help="comma-separated function identifiers")
    r.add_argument("--runs", type=int)
    r.add_argument("--np", type=int, dest="NP")
    r.add_argument("--dim", type=int, dest="D")
    r.add_argument("--max-evals", type=int, dest="max_evals")
    r.add_argument("--seed", type=int, dest="base_seed")
    r.add_argument("--policy", dest="param_policy", help="jde (default) or fixed:F=<v>,CR=<v>")
    r.add_argument("--jobs", type=int, help="worker processes (default: all cores)")
    r.add_argument("--out", dest="output", help="CSV path, '-' for stdout")
    r.add_argument("--tie-tol", type=float, dest="tie_tol")
    r.add_argument("--quiet", action="store_true")

    t = sub.add_parser("table", help="mean-error table with win/tie/lose footer")
    t.add_argument("results")
    t.add_argument("--reference")
    t.add_argument("--tie-tol", type=float, default=0.0, dest="tie_tol")

    c = sub.add_parser("compare", help="Wilcoxon signed-rank test between two strategies")
    c.add_argument("results")
    c.add_argument("strategy_a")
    c.add_argument("strategy_b")
    c.add_argument("--alpha", type=float, default=0.05)

    ls = sub.add_parser("list", help="list strategies and functions")
    ls.add_argument("--dim", type=int, default=30)
    return p


def _campaign_from_args(args) -> CampaignConfig:
    values = read_config_file(args.config) if args.config else {}
    for name in ("runs", "NP", "D", "max_evals", "base_seed", "param_policy", "jobs", "output", "tie_tol"):
        v = getattr(args, name)
        if v is not None:
            values[name] = v
    if args.strategies is not None:
        values["strategies"] = _split(args.strategies)
    if args.functions is not None:
        values["functions"] = _split(args.functions)
    return CampaignConfig(**values)


def cmd_run(args) -> int:
    cfg = _campaign_from_args(args)
    log = None if args.quiet else (lambda msg: print(msg, file=sys.stderr, flush=True))
    if cfg.output != "-":
        out = Path(cfg.output)
        if not out.parent.exists():
            raise CliError(f"output directory {out.parent} does not exist")
    rows = campaign_rows(cfg, progress=log)
    buf = io.StringIO()
    write_csv(rows, buf)
    if cfg.output == "-":
        sys.stdout.write(buf.getvalue())
    else:
        try:
            Path(cfg.output).write_text(buf.getvalue())
        except OSError as exc:
            raise CliError(f"cannot write {cfg.output}: {exc}") from None
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "table":
            sys.stdout.write(format_table(read_results(args.results), args.reference, args.tie_tol))
        elif args.command == "compare":
            sys.stdout.write(format_compare(read_results(args.results), args.strategy_a, args.strategy_b, args.alpha))
        else:
            sys.stdout.write(format_listing(args.dim))
    except (CliError, ConfigurationError) as exc:
        print(f"unionde: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
