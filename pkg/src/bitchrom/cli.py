"""
Command-line interface.

    bitchrom run      --length 128 --pop 100 --gens 300 --seed 7
    bitchrom tables   --capacity 65536
    bitchrom bench    --layout u8 --layout s64 --length 1000
    bitchrom analyze  --pattern '1********0' --k 2

Exit codes: 0 success, 1 runtime failure or divergence, 2 usage/config error.
Flags override values from ``--config FILE`` (flat JSON object keyed by the
long flag names, dashes or underscores), which override built-in defaults.
``BITCHROM_SEED`` sets the default seed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass
from typing import Any

from .errors import ConfigurationError, DegenerateFitnessError
from .ga import GAConfig, onemax_fitness, run
from .oracle import differential_run, memory_report
from .packed import (
    ALL_LAYOUTS,
    DEFAULT_CAPACITY,
    LayoutSpec,
    max_chromosome_length,
    memory_utilization,
)
from .schema import (
    Schema,
    SchemaTheoremInputs,
    disruption_probability,
    expected_schema_count,
    max_schemata_count,
)

FORMATS = ("text", "json", "csv")
ELIDE_BITS = 256
SEED_ENV = "BITCHROM_SEED"

RUN_CSV_COLUMNS = ("record", "generation", "best_fitness", "mean_fitness", "bits")
TABLE_CSV_COLUMNS = (
    "signedness", "width", "metadata_cap", "array_capacity_bits",
    "max_length", "utilization", "utilization_pct",
)
BENCH_MEMORY_COLUMNS = (
    "record", "layout", "length", "naive_bytes", "packed_bytes",
    "utilization_naive", "utilization_packed", "ratio",
)
BENCH_DIFF_COLUMNS = ("record", "layout", "length", "steps", "seed", "verdict", "divergence_step")
ANALYZE_CSV_COLUMNS = (
    "pattern", "order", "defining_length", "disruption_probability",
    "expected_count", "k", "length", "max_schemata_count",
)


class UsageError(Exception):
    pass


@dataclass
class RunSpec:
    length: int = 128
    pop: int = 100
    pc: float = 0.9
    pm: float | None = None
    gens: int = 300
    seed: int = 0
    width: int = 64
    signed: bool = False
    selection: str = "tournament"
    tournament_size: int = 2
    elitism: int = 0
    target_fitness: float | None = None
    roulette_fallback_uniform: bool = False
    format: str = "text"
    out: str | None = None

    def to_config(self) -> GAConfig:
        if self.format not in FORMATS:
            raise ConfigurationError("format", f"must be one of {FORMATS}, got {self.format!r}")
        try:
            layout = LayoutSpec(int(self.width), bool(self.signed))
        except ValueError as exc:
            raise ConfigurationError("width", str(exc)) from None
        return GAConfig(
            population_size=self.pop,
            crossover_probability=self.pc,
            mutation_probability=self.pm,
            chromosome_length=self.length,
            layout=layout,
            selection=self.selection,
            tournament_size=self.tournament_size,
            roulette_fallback_uniform=self.roulette_fallback_uniform,
            elitism_count=self.elitism,
            max_generations=self.gens,
            target_fitness=self.target_fitness,
            seed=self.seed,
        ).validate()


# --- output helpers -------------------------------------------------------


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(columns, rows) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({c: row.get(c, "") for c in columns})
    return buf.getvalue()


def _elide(bits: str) -> str:
    if len(bits) <= ELIDE_BITS:
        return bits
    half = ELIDE_BITS // 2
    return f"{bits[:half]}...{bits[-half:]} ({len(bits)} bits)"


def _fmt_table(header, rows) -> str:
    cells = [list(map(str, header))] + [[str(v) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


# --- run ------------------------------------------------------------------


def run_report(spec: RunSpec) -> dict:
    cfg = spec.to_config()
    t0 = time.perf_counter()
    result = run(cfg, onemax_fitness)
    elapsed = time.perf_counter() - t0
    config = asdict(cfg)
    config["layout"] = cfg.layout.name
    config["mutation_probability"] = cfg.pm
    return {
        "config": config,
        "best": {"fitness": result.best.fitness, "bits": result.best.chromosome.to_string()},
        "generations": result.stats[-1].generation,
        "elapsed_seconds": elapsed,
        "stats": [asdict(s) for s in result.stats],
    }


def render_run(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt == "csv":
        rows = [{"record": "stat", **s} for s in report["stats"]]
        rows.append({
            "record": "best",
            "generation": report["generations"],
            "best_fitness": report["best"]["fitness"],
            "bits": report["best"]["bits"],
        })
        return _csv(RUN_CSV_COLUMNS, rows)
    cfg = report["config"]
    head = (
        f"OneMax  L={cfg['chromosome_length']}  N={cfg['population_size']}  "
        f"pc={cfg['crossover_probability']}  pm={cfg['mutation_probability']:.6g}  "
        f"layout={cfg['layout']}  selection={cfg['selection']}  seed={cfg['seed']}\n"
        f"best fitness: {report['best']['fitness']}\n"
        f"best individual: {_elide(report['best']['bits'])}\n"
        f"generations: {report['generations']}  ({report['elapsed_seconds']:.2f}s)\n\n"
    )
    rows = [(s["generation"], s["best_fitness"], f"{s['mean_fitness']:.4f}") for s in report["stats"]]
    return head + _fmt_table(("generation", "best_fitness", "mean_fitness"), rows)


# --- tables ---------------------------------------------------------------


def truncate_pct(fraction) -> float:
    """Percentage cut (not rounded) to two decimals: 0.79375 -> 79.37."""
    return math.floor(fraction * 10000) / 100


def tables_report(capacity: int = DEFAULT_CAPACITY) -> dict:
    if capacity < 2:
        raise ConfigurationError("capacity", f"must be >= 2, got {capacity}")
    rows, notes = [], []
    for layout in ALL_LAYOUTS:
        n = layout.usable_bits
        L = max_chromosome_length(layout, capacity)
        u = memory_utilization(L, layout)
        rows.append({
            "signedness": "signed" if layout.signed else "unsigned",
            "width": layout.element_width,
            "metadata_cap": layout.metadata_cap,
            "array_capacity_bits": n * (capacity - 1),
            "max_length": L,
            "utilization": float(u),
            "utilization_pct": truncate_pct(u),
        })
        if n * (capacity - 1) < layout.metadata_cap:
            alt = min(layout.metadata_cap, n * capacity)
            alt_u = float(memory_utilization(alt, layout)) * 100
            notes.append(
                f"{layout.name}: array capacity counts n*(M-1) = {n * (capacity - 1)} bits "
                f"since one element holds the length; n*M = {n * capacity} bits would give "
                f"max length {alt} at {alt_u:.4f}%."
            )
    return {"capacity": capacity, "rows": rows, "notes": notes}


def render_tables(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt == "csv":
        return _csv(TABLE_CSV_COLUMNS, report["rows"])
    out = []
    for kind in ("unsigned", "signed"):
        rows = [r for r in report["rows"] if r["signedness"] == kind]
        out.append(f"{kind.upper()} element type, array capacity M = {report['capacity']}\n")
        out.append(_fmt_table(
            ("width", "metadata cap", "array capacity (bit)", "max length", "utilization %"),
            [(r["width"], r["metadata_cap"], r["array_capacity_bits"], r["max_length"],
              f"{r['utilization_pct']:.2f}") for r in rows],
        ))
        out.append("\n")
    for i, note in enumerate(report["notes"], 1):
        out.append(f"[{i}] {note}\n")
    return "".join(out)


# --- bench ----------------------------------------------------------------

DEFAULT_BENCH_LENGTHS = (10, 127, 255, 1000, 65535, 10**6)


def differential_lengths(layout: LayoutSpec) -> list[int]:
    n = layout.usable_bits
    return sorted({1, n - 1, n, n + 1, 2 * n, 37})


def bench_report(
    layouts=ALL_LAYOUTS,
    lengths=DEFAULT_BENCH_LENGTHS,
    seed: int = 0,
    steps: int = 2000,
    capacity: int = DEFAULT_CAPACITY,
) -> dict:
    memory, diffs = [], []
    for layout in layouts:
        ls = sorted({L for L in lengths if L <= layout.metadata_cap}
                    | {max_chromosome_length(layout, capacity)})
        for L in ls:
            r = memory_report(L, layout)
            memory.append({
                "record": "memory",
                "layout": layout.name,
                "length": L,
                "naive_bytes": r.naive_bytes,
                "packed_bytes": r.packed_bytes,
                "utilization_naive": float(r.utilization_naive),
                "utilization_packed": float(r.utilization_packed),
                "ratio": float(r.ratio),
            })
        for i, L in enumerate(differential_lengths(layout)):
            d = differential_run(layout, L, steps, seed + i)
            row = {
                "record": "differential",
                "layout": layout.name,
                "length": L,
                "steps": steps,
                "seed": seed + i,
                "verdict": d.verdict,
                "divergence_step": None,
            }
            if d.divergence is not None:
                row["divergence_step"] = d.divergence.step
                row["divergence"] = {
                    "operation": d.divergence.operation,
                    "packed": repr(d.divergence.packed),
                    "naive": repr(d.divergence.naive),
                }
            diffs.append(row)
    return {
        "memory": memory,
        "differential": diffs,
        "equivalent": all(d["verdict"] == "equivalent" for d in diffs),
    }


def render_bench(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt == "csv":
        return (_csv(BENCH_MEMORY_COLUMNS, report["memory"])
                + "\n" + _csv(BENCH_DIFF_COLUMNS, report["differential"]))
    out = ["Memory footprint (analytic)\n"]
    out.append(_fmt_table(
        ("layout", "length", "naive B", "packed B", "naive %", "packed %", "ratio"),
        [(r["layout"], r["length"], r["naive_bytes"], r["packed_bytes"],
          f"{100 * r['utilization_naive']:.2f}", f"{100 * r['utilization_packed']:.2f}",
          f"{r['ratio']:.4f}") for r in report["memory"]],
    ))
    out.append("\nDifferential check against the one-byte-per-allele oracle\n")
    out.append(_fmt_table(
        ("layout", "length", "steps", "seed", "verdict", "first divergence"),
        [(r["layout"], r["length"], r["steps"], r["seed"], r["verdict"],
          "" if r["divergence_step"] is None else
          f"step {r['divergence_step']} {r['divergence']['operation']}")
         for r in report["differential"]],
    ))
    for r in report["differential"]:
        if r["divergence_step"] is not None:
            out.append(f"\n{r['layout']} L={r['length']}: packed={r['divergence']['packed']}\n"
                       f"{' ' * len(r['layout'])} naive ={r['divergence']['naive']}\n")
    return "".join(out)


# --- analyze --------------------------------------------------------------


def analyze_report(
    pattern: str,
    k: int = 2,
    length: int | None = None,
    count: float = 1.0,
    schema_fitness: float = 1.0,
    pop_fitness: float = 1.0,
    pc: float = 0.9,
    pm: float | None = None,
) -> dict:
    try:
        schema = Schema(pattern)
    except ValueError as exc:
        raise ConfigurationError("pattern", str(exc)) from None
    L = len(schema)
    pm = 1.0 / L if pm is None else pm
    report = {
        "pattern": pattern,
        "order": schema.order,
        "defining_length": schema.defining_length,
        "k": k,
        "length": L if length is None else length,
        "max_schemata_count": max_schemata_count(k, L if length is None else length),
        "disruption_probability": None,
        "expected_count": None,
    }
    if L >= 2:
        report["disruption_probability"] = disruption_probability(schema, L, pc)
        report["expected_count"] = expected_schema_count(
            schema, SchemaTheoremInputs(count, schema_fitness, pop_fitness, L, pc, pm)
        )
    report["inputs"] = {"count": count, "schema_fitness": schema_fitness,
                        "pop_fitness": pop_fitness, "pc": pc, "pm": pm}
    return report


def render_analyze(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2) + "\n"
    if fmt == "csv":
        return _csv(ANALYZE_CSV_COLUMNS, [report])
    inp = report["inputs"]
    lines = [
        f"schema            {report['pattern']}",
        f"order             {report['order']}",
        f"defining length   {report['defining_length']}",
        f"disruption prob.  {report['disruption_probability']}",
        f"expected count    {report['expected_count']}"
        f"   (m={inp['count']}, f(H)={inp['schema_fitness']}, f={inp['pop_fitness']}, "
        f"pc={inp['pc']}, pm={inp['pm']:.6g})",
        f"max schemata      {report['max_schemata_count']}   (k={report['k']}, L={report['length']})",
    ]
    return "\n".join(lines) + "\n"


# --- argument handling ----------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None)
    common.add_argument("--out", metavar="PATH", default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--config", metavar="FILE", default=None)

    p = _Parser(prog="bitchrom", description="Bit-packed binary chromosomes for GAs.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    r = sub.add_parser("run", parents=[common], help="run a OneMax GA experiment")
    r.add_argument("--length", type=int)
    r.add_argument("--pop", type=int)
    r.add_argument("--pc", type=float)
    r.add_argument("--pm", type=float)
    r.add_argument("--gens", type=int)
    r.add_argument("--width", type=int, choices=(8, 16, 32, 64))
    r.add_argument("--signed", action="store_true", default=None)
    r.add_argument("--selection", choices=("tournament", "roulette"))
    r.add_argument("--tournament-size", type=int)
    r.add_argument("--elitism", type=int)
    r.add_argument("--target-fitness", type=float)
    r.add_argument("--roulette-fallback-uniform", action="store_true", default=None)

    t = sub.add_parser("tables", parents=[common], help="memory utilization tables")
    t.add_argument("--capacity", type=int, metavar="M")

    b = sub.add_parser("bench", parents=[common], help="memory + differential benchmark")
    b.add_argument("--layout", action="append", metavar="LAYOUT",
                   help="u8, s8, u16, ... (repeatable; default all eight)")
    b.add_argument("--width", type=int, choices=(8, 16, 32, 64),
                   help="restrict to one element width")
    b.add_argument("--signed", action="store_true", default=None,
                   help="restrict to signed layouts")
    b.add_argument("--length", type=int, action="append", help="repeatable")
    b.add_argument("--steps", type=int, help="differential steps per length")
    b.add_argument("--capacity", type=int, metavar="M")

    a = sub.add_parser("analyze", parents=[common], help="schema formulas")
    a.add_argument("--pattern")
    a.add_argument("--k", type=int)
    a.add_argument("--length", type=int, help="length for the schemata count")
    a.add_argument("--count", type=float, help="schema instances now")
    a.add_argument("--schema-fitness", type=float)
    a.add_argument("--pop-fitness", type=float)
    a.add_argument("--pc", type=float)
    a.add_argument("--pm", type=float)
    return p


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigurationError("config", f"cannot read {path}: {exc}") from None
    if not isinstance(data, dict) or any(isinstance(v, (dict, list)) for v in data.values()):
        raise ConfigurationError("config", "must be a flat JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _env_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigurationError("seed", f"{SEED_ENV}={raw!r} is not an integer") from None


def _merged(args: argparse.Namespace, defaults: dict[str, Any]) -> dict[str, Any]:
    """defaults < env seed < config file < explicit flags."""
    values = dict(defaults)
    if "seed" in values:
        values["seed"] = _env_seed()
    config = _load_config(args.config)
    unknown = set(config) - set(values)
    if unknown:
        raise ConfigurationError("config", f"unknown keys {sorted(unknown)}")
    values.update(config)
    for key in values:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    return values


def _cmd_run(args) -> int:
    spec = RunSpec(**_merged(args, asdict(RunSpec())))
    report = run_report(spec)
    _emit(render_run(report, spec.format), spec.out)
    return 0


def _cmd_tables(args) -> int:
    v = _merged(args, {"capacity": DEFAULT_CAPACITY, "format": "text", "out": None})
    _emit(render_tables(tables_report(v["capacity"]), v["format"]), v["out"])
    return 0


def _cmd_bench(args) -> int:
    v = _merged(args, {
        "layout": None, "width": None, "signed": None, "length": None, "steps": 2000,
        "capacity": DEFAULT_CAPACITY, "seed": 0, "format": "text", "out": None,
    })
    try:
        layouts = [LayoutSpec.parse(s) for s in v["layout"]] if v["layout"] else list(ALL_LAYOUTS)
    except ValueError as exc:
        raise ConfigurationError("layout", str(exc)) from None
    if v["width"] is not None:
        layouts = [l for l in layouts if l.element_width == v["width"]]
    if v["signed"]:
        layouts = [l for l in layouts if l.signed]
    if not layouts:
        raise ConfigurationError("layout", "no layouts selected")
    if v["steps"] < 1:
        raise ConfigurationError("steps", f"must be >= 1, got {v['steps']}")
    lengths = v["length"] or DEFAULT_BENCH_LENGTHS
    if isinstance(lengths, int):
        lengths = [lengths]
    if any(L < 1 for L in lengths):
        raise ConfigurationError("length", "lengths must be >= 1")
    if v["capacity"] < 2:
        raise ConfigurationError("capacity", f"must be >= 2, got {v['capacity']}")
    report = bench_report(layouts, lengths, v["seed"], v["steps"], v["capacity"])
    _emit(render_bench(report, v["format"]), v["out"])
    return 0 if report["equivalent"] else 1


def _cmd_analyze(args) -> int:
    v = _merged(args, {
        "pattern": None, "k": 2, "length": None, "count": 1.0, "schema_fitness": 1.0,
        "pop_fitness": 1.0, "pc": 0.9, "pm": None, "seed": 0, "format": "text", "out": None,
    })
    if not v["pattern"]:
        raise ConfigurationError("pattern", "a schema pattern over {0,1,*} is required")
    for name in ("pc", "pm"):
        if v[name] is not None and not 0.0 <= v[name] <= 1.0:
            raise ConfigurationError(name, f"must be in [0, 1], got {v[name]}")
    if v["k"] < 1:
        raise ConfigurationError("k", f"must be >= 1, got {v['k']}")
    if v["length"] is not None and v["length"] < 1:
        raise ConfigurationError("length", f"must be >= 1, got {v['length']}")
    if v["pop_fitness"] <= 0:
        raise ConfigurationError("pop_fitness", f"must be > 0, got {v['pop_fitness']}")
    report = analyze_report(
        v["pattern"], v["k"], v["length"], v["count"], v["schema_fitness"],
        v["pop_fitness"], v["pc"], v["pm"],
    )
    _emit(render_analyze(report, v["format"]), v["out"])
    return 0


COMMANDS = {"run": _cmd_run, "tables": _cmd_tables, "bench": _cmd_bench, "analyze": _cmd_analyze}


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except DegenerateFitnessError as exc:
        print(f"runtime error: {exc} (see --roulette-fallback-uniform)", file=sys.stderr)
        return 1
    except (OSError, RuntimeError, ValueError, ArithmeticError) as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
