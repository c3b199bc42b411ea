"""Command-line experiment runner.

Subcommands:
  price <config.json>   single valuation, one CSV row
  sweep <config.json>   one CSV row per sweep grid point
  validate              run the desk-scale invariant suite

Exit codes: 0 success, 1 invariant failure, 2 config error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys

from .config import RunConfig, load_config
from .engine import ZeroCouponBond, bcva_full_forward, zcb_report
from .errors import ConfigError, NumericalError
from .mc import McConfig

CSV_COLUMNS = [
    "sweep_value",
    "risk_free_value",
    "ucva_a",
    "udva_a",
    "bilateral_cva",
    "bilateral_dva",
    "full_price",
    "simplified_price",
    "difference",
    "difference_stderr",
    "method",
    "n_paths",
    "seed",
]


def _fmt(x) -> str:
    if x is None or x == "":
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _report_row(config: RunConfig, model, sweep_value, threads: int) -> dict:
    if isinstance(config.instrument, ZeroCouponBond):
        rep = zcb_report(config.instrument, config.credit, model, config.market())
        diff_se = 0.0
    else:
        rep = bcva_full_forward(
            config.instrument,
            config.credit,
            model,
            config.market(),
            method=config.method,
            estimator=config.estimator,
            threads=threads,
        )
        diff_se = rep.std_errors.get("difference", 0.0)
    is_mc = isinstance(config.method, McConfig)
    return {
        "sweep_value": sweep_value,
        "risk_free_value": rep.risk_free_value,
        "ucva_a": rep.ucva_a,
        "udva_a": rep.udva_a,
        "bilateral_cva": rep.bilateral_cva,
        "bilateral_dva": rep.bilateral_dva,
        "full_price": rep.full_price,
        "simplified_price": rep.simplified_price,
        "difference": rep.difference,
        "difference_stderr": diff_se,
        "method": "mc" if is_mc else "semi_analytic",
        "n_paths": config.method.n_paths if is_mc else "",
        "seed": config.method.seed if is_mc else "",
    }


def run_rows(config: RunConfig, threads: int = 1) -> list[dict]:
    """Evaluate the config, one result dict per sweep point."""
    if config.sweep is None:
        return [_report_row(config, config.model(), "", threads)]
    rows = []
    for value in config.sweep.grid:
        if config.sweep.variable == "tau":
            theta = 1.0 / (1.0 - value)
            model = config.model(theta=theta)
        else:
            model = config.model(lambda_a=value)
        rows.append(_report_row(config, model, value, threads))
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_svg(rows: list[dict], svg_path: str, sweep_variable: str):
    import matplotlib

    matplotlib.use("svg")
    import matplotlib.pyplot as plt

    x = [row["sweep_value"] for row in rows]
    y = [row["difference"] for row in rows]
    fig, ax = plt.subplots(figsize=(8, 5))
    ax.plot(x, y, marker="o")
    ax.set_xlabel("Kendall's tau" if sweep_variable == "tau" else "lambda_a")
    ax.set_ylabel("full minus simplified bilateral price")
    ax.grid(True, alpha=0.3)
    fig.savefig(svg_path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _cmd_run(args, need_sweep: bool) -> int:
    try:
        config = load_config(args.config)
        if need_sweep and config.sweep is None:
            raise ConfigError("sweep: required for the 'sweep' subcommand")
        if not need_sweep and config.sweep is not None:
            raise ConfigError("sweep: not allowed for the 'price' subcommand")
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        rows = run_rows(config, threads=args.threads)
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    _emit(rows_to_csv(rows), args.out)
    if args.svg:
        variable = config.sweep.variable if config.sweep else "tau"
        _emit_svg(rows, args.svg, variable)
    return 0


def _cmd_validate(args) -> int:
    from .validation import run_all

    lines = []
    failed = None
    for result in run_all():
        status = "PASS" if result.passed else "FAIL"
        lines.append(f"{status} {result.name}: {result.detail}")
        if not result.passed and failed is None:
            failed = result.name
    report = "\n".join(lines) + "\n"
    _emit(report, args.out)
    if failed is not None:
        print(f"invariant failure: {failed}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bcva",
        description="Bilateral CVA engine: price, sweep and validate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("price", "single valuation from a JSON config"),
        ("sweep", "sweep a dependence or intensity grid from a JSON config"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("config", help="path to JSON config")
        p.add_argument("--out", default=None, help="write CSV here instead of stdout")
        p.add_argument("--svg", default=None, help="also write an SVG line chart")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads (speed only, never results)")
    v = sub.add_parser("validate", help="run the invariant suite")
    v.add_argument("--out", default=None, help="write the report here instead of stdout")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "price":
        return _cmd_run(args, need_sweep=False)
    if args.command == "sweep":
        return _cmd_run(args, need_sweep=True)
    return _cmd_validate(args)


if __name__ == "__main__":
    sys.exit(main())
