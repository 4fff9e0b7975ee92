"""Command-line front end.

    bisruin compute --config model.json [--out psi.csv] [--svg]
    bisruin reproduce --table {1,2,3,4} [--svg chart.svg]
    bisruin oracle --config model.json --pairs 400 --paths 100000 --seed 1

Exit codes: 0 success, 1 published-value mismatch, 2 usage or config error,
3 numeric failure (precision exhausted, window too small).
"""

from __future__ import annotations

import argparse
import csv
import sys
from decimal import ROUND_HALF_EVEN, Decimal
from pathlib import Path

import mpmath

from .config import RunConfig, load_config
from .engine import RuinTable, ruin_table
from .errors import ConfigError, ModelClassError, ParameterError, PrecisionError
from .joint import UNDEFINED, pearson_correlation
from .oracle import GENERATOR, finite_horizon_table, monte_carlo_ruin, oracle_matrix
from .presets import DELTA_BOUND, TABLES, TOLERANCE, published_values
from .svgplot import write_chart

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


def fmt4(v) -> str:
    """Round half-to-even at 4 decimals."""
    d = Decimal(mpmath.nstr(v, 40, strip_zeros=False) if isinstance(v, mpmath.mpf) else repr(float(v)))
    return str(d.quantize(Decimal("0.0001"), rounding=ROUND_HALF_EVEN))


def fmt_csv(v) -> str:
    """10 significant digits."""
    return f"{float(v):.10g}"


def write_csv(path, psi) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["u", "psi"])
        for u, v in enumerate(psi):
            w.writerow([u, fmt_csv(v)])
    return path


def read_csv(path) -> list[float]:
    with Path(path).open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    return [float(r["psi"]) for r in sorted(rows, key=lambda r: int(r["u"]))]


def _evaluate(cfg: RunConfig) -> tuple[RuinTable, object]:
    return ruin_table(cfg.model, cfg.u_max, cfg.N, cfg.precision_bits, cfg.trunc_eps)


def _summary(table: RuinTable, m, cfg: RunConfig, out=None) -> None:
    out = out or sys.stdout
    corr = pearson_correlation(m)
    print(f"model class : {table.model_class}", file=out)
    print(f"E[X+Y]      : {mpmath.nstr(table.es, 10)}", file=out)
    print(f"psi(0)      : {fmt4(table.psi[0])}", file=out)
    print(f"delta       : {mpmath.nstr(table.delta, 3)}", file=out)
    print(
        "correlation : " + ("undefined" if corr is UNDEFINED else mpmath.nstr(corr, 4)),
        file=out,
    )
    print(f"N, precision: {cfg.N}, {cfg.precision_bits} bits", file=out)


def cmd_compute(args) -> int:
    cfg = load_config(args.config)
    table, m = _evaluate(cfg)
    _summary(table, m, cfg)
    path = args.out or cfg.output_path or f"{Path(args.config).stem}.csv"
    write_csv(path, table.psi)
    print(f"wrote {path}")
    if args.svg or cfg.output_format == "csv+svg":
        svg = Path(path).with_suffix(".svg")
        write_chart(svg, {Path(args.config).stem: table.psi_float()}, "psi(u)")
        print(f"wrote {svg}")
    return EXIT_OK


def reproduce_table(table_id: int, u_max: int = 12, N: int = 20, prec: int = 256):
    """Computed tables, published values and offending cells for one table."""
    settings = TABLES[table_id]
    published = published_values(table_id)
    tol = TOLERANCE[table_id]
    computed, bad = [], []
    for setting, ref in zip(settings, published):
        table, _ = ruin_table(setting.model, u_max, N, prec)
        computed.append(table)
        for u, (mine, theirs) in enumerate(zip(table.psi_float(), ref)):
            if abs(mine - theirs) > tol:
                bad.append((setting.label, u, mine, theirs))
    return computed, published, bad


def cmd_reproduce(args) -> int:
    t = args.table
    computed, published, bad = reproduce_table(t)
    labels = [s.label for s in TABLES[t]]
    print(f"table {t}, tolerance {TOLERANCE[t]:g}")
    head = " u " + "".join(f"| {lab:^26} " for lab in labels)
    print(head)
    print(" " * 3 + "".join(f"| {'computed':>8} {'published':>9} {'diff':>8} " for _ in labels))
    for u in range(len(published[0])):
        cells = []
        for table, col in zip(computed, published):
            mine, ref = table.psi_float()[u], col[u]
            cells.append(f"| {fmt4(table.psi[u]):>8} {ref:>9.4f} {abs(mine - ref):>8.1e} ")
        print(f"{u:>2} " + "".join(cells))
    for lab, table, bound in zip(labels, computed, DELTA_BOUND[t]):
        print(f"delta[{lab}] = {mpmath.nstr(table.delta, 3)} (published bound {bound:g})")
    if args.svg:
        series = {lab: tab.psi_float() for lab, tab in zip(labels, computed)}
        write_chart(args.svg, series, f"psi(u), table {t}")
        print(f"wrote {args.svg}")
    if bad:
        print(f"{len(bad)} cell(s) outside tolerance:")
        for lab, u, mine, theirs in bad:
            print(f"  {lab} u={u}: computed {mine:.6f}, published {theirs:.4f}")
        return EXIT_MISMATCH
    print("all cells within tolerance")
    return EXIT_OK


def cmd_oracle(args) -> int:
    cfg = load_config(args.config)
    table, _ = _evaluate(cfg)
    m = oracle_matrix(cfg.model, cfg.u_max, args.pairs)
    dp = finite_horizon_table(m, cfg.u_max, args.pairs)
    print(f"pairs={args.pairs} paths={args.paths} seed={args.seed} generator={GENERATOR}")
    print(f"{'u':>3} {'engine':>10} {'dp':>10} {'mc':>10} {'stderr':>10}")
    for u in range(cfg.u_max + 1):
        mc = monte_carlo_ruin(m, u, args.pairs, args.paths, args.seed)
        print(
            f"{u:>3} {fmt4(table.psi[u]):>10} {1 - dp[u]:>10.4f} "
            f"{mc.estimate:>10.4f} {mc.stderr:>10.2e}"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bisruin", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", help="ruin probabilities for one model config")
    c.add_argument("--config", required=True)
    c.add_argument("--out")
    c.add_argument("--svg", action="store_true")
    c.set_defaults(func=cmd_compute)

    r = sub.add_parser("reproduce", help="compare against a published table")
    r.add_argument("--table", type=int, required=True, choices=(1, 2, 3, 4))
    r.add_argument("--svg")
    r.set_defaults(func=cmd_reproduce)

    o = sub.add_parser("oracle", help="engine vs finite-horizon DP vs Monte Carlo")
    o.add_argument("--config", required=True)
    o.add_argument("--pairs", type=int, default=400)
    o.add_argument("--paths", type=int, default=100_000)
    o.add_argument("--seed", type=int, default=0)
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PrecisionError, ModelClassError, IndexError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
