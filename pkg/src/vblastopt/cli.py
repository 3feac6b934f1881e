"""Command-line front end.

Three subcommands: `sweep` runs Monte Carlo outage sweeps and writes one
CSV per strategy, `verify` runs a named self-check suite, `fit` emits
coefficient tables for the two closed-form allocation laws. Every run
writes a manifest naming the resolved configuration and all outputs,
and renders figures next to the CSVs unless --no-plot is given.

Exit codes: 0 success, 1 failed check or failed fit, 2 usage error.
SNR is taken in dB on the command line; rates are nats per stream by
default, with --rate-bits converting by ln 2. A flat key=value config
file can seed any option; explicit flags win. The default output
directory comes from $VBLASTOPT_OUTDIR, falling back to the working
directory.
"""

from __future__ import annotations

import argparse
import datetime
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .engine import SimConfig, curve_csv, run_outage_sweep
from .plots import plot_allocation_vs_snr, plot_outage_curves, plot_scaling_fit
from .strategies import (
    STRATEGY_TAGS,
    avg_ergodic_allocation,
    ergodic_coefficients,
    fit_theorem3,
)
from .verify import SUITES

ENV_OUTDIR = "VBLASTOPT_OUTDIR"

CONFIG_KEYS = {
    "n", "m", "rate_nats", "rate_bits", "snr_db", "trials", "seed",
    "strategies", "threads", "outdir", "no_plot",
}


def parse_snr_spec(text: str) -> tuple[float, ...]:
    """Parse an SNR grid given in dB.

    Three forms: a single value ("20"), a comma list ("5,10,15"), or a
    range "start:stop:step" with inclusive endpoints (step optional,
    default 1 dB). The result must be strictly increasing.
    """
    text = text.strip()
    try:
        if ":" in text:
            parts = [float(p) for p in text.split(":")]
            if len(parts) == 2:
                start, stop = parts
                step = 1.0
            elif len(parts) == 3:
                start, stop, step = parts
            else:
                raise ValueError
            if step <= 0 or stop < start:
                raise ValueError
            # half-step slack keeps the inclusive endpoint despite rounding
            grid = tuple(np.arange(start, stop + step / 2.0, step))
        elif "," in text:
            grid = tuple(float(p) for p in text.split(","))
        else:
            grid = (float(text),)
    except ValueError:
        raise ValueError(
            f"bad SNR spec {text!r}: use START:STOP[:STEP], a comma list, "
            f"or one value, increasing dB"
        ) from None
    if len(grid) > 1 and np.any(np.diff(grid) <= 0):
        raise ValueError(f"bad SNR spec {text!r}: grid must be strictly increasing")
    return tuple(float(g) for g in grid)


def load_config(path: str) -> dict[str, str]:
    """Read a flat key=value config file; # starts a comment line."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if key not in CONFIG_KEYS:
            raise ValueError(
                f"{path}:{lineno}: unknown key {key!r} "
                f"(valid: {', '.join(sorted(CONFIG_KEYS))})"
            )
        out[key] = value.strip()
    return out


def _resolve(args: argparse.Namespace, parser: argparse.ArgumentParser) -> dict:
    """Merge defaults, config file, and flags into one options dict."""
    defaults = {
        "n": 2, "m": 2, "rate_nats": 1.0, "snr_db": "5:25:2",
        "trials": 100_000, "seed": 0, "strategies": "uniform,ora,opra",
        "threads": 1, "outdir": None, "no_plot": False,
    }
    merged = dict(defaults)

    cfg: dict[str, str] = {}
    if getattr(args, "config", None):
        try:
            cfg = load_config(args.config)
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
    if "rate_nats" in cfg and "rate_bits" in cfg:
        parser.error("config sets both rate_nats and rate_bits")
    try:
        if "n" in cfg:
            merged["n"] = int(cfg["n"])
        if "m" in cfg:
            merged["m"] = int(cfg["m"])
        if "rate_nats" in cfg:
            merged["rate_nats"] = float(cfg["rate_nats"])
        if "rate_bits" in cfg:
            merged["rate_nats"] = float(cfg["rate_bits"]) * math.log(2.0)
        if "snr_db" in cfg:
            merged["snr_db"] = cfg["snr_db"]
        if "trials" in cfg:
            merged["trials"] = int(cfg["trials"])
        if "seed" in cfg:
            merged["seed"] = int(cfg["seed"])
        if "strategies" in cfg:
            merged["strategies"] = cfg["strategies"]
        if "threads" in cfg:
            merged["threads"] = int(cfg["threads"])
        if "outdir" in cfg:
            merged["outdir"] = cfg["outdir"]
        if "no_plot" in cfg:
            merged["no_plot"] = cfg["no_plot"].lower() in ("1", "true", "yes")
    except ValueError as exc:
        parser.error(f"bad config value: {exc}")

    # explicit flags override the file
    for key in ("n", "m", "trials", "seed", "threads", "outdir"):
        val = getattr(args, key, None)
        if val is not None:
            merged[key] = val
    if getattr(args, "rate_nats", None) is not None:
        merged["rate_nats"] = args.rate_nats
    if getattr(args, "rate_bits", None) is not None:
        merged["rate_nats"] = args.rate_bits * math.log(2.0)
    if getattr(args, "snr_db", None) is not None:
        merged["snr_db"] = args.snr_db
    if getattr(args, "strategies", None) is not None:
        merged["strategies"] = args.strategies
    if getattr(args, "no_plot", False):
        merged["no_plot"] = True

    try:
        merged["grid"] = parse_snr_spec(merged["snr_db"])
    except ValueError as exc:
        parser.error(str(exc))
    tags = tuple(t.strip() for t in merged["strategies"].split(",") if t.strip())
    for t in tags:
        if t not in STRATEGY_TAGS:
            parser.error(
                f"unknown strategy {t!r}; valid tags: {', '.join(STRATEGY_TAGS)}"
            )
    merged["tags"] = tags

    if merged["outdir"] is None:
        merged["outdir"] = os.environ.get(ENV_OUTDIR, ".")
    return merged


def _prepare_outdir(path_str: str, parser: argparse.ArgumentParser) -> Path:
    path = Path(path_str)
    try:
        path.mkdir(parents=True, exist_ok=True)
        probe = path / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        parser.error(f"output directory {path_str!r} is not writable: {exc}")
    return path


def _write_manifest(
    outdir: Path, command: str, config_lines: list[str], outputs: list[str]
) -> None:
    stamp = datetime.datetime.now(datetime.timezone.utc).isoformat()
    lines = [
        f"tool: vblastopt {__version__}",
        f"generated: {stamp}",
        f"command: {command}",
        "[config]",
        *config_lines,
        "[outputs]",
        *outputs,
        "",
    ]
    (outdir / "manifest.txt").write_text("\n".join(lines))


def cmd_sweep(args, parser) -> int:
    opts = _resolve(args, parser)
    outdir = _prepare_outdir(opts["outdir"], parser)
    cfg = SimConfig(
        n=opts["n"], m=opts["m"], gamma0_db_grid=opts["grid"],
        rate_nats=opts["rate_nats"], trials=opts["trials"],
        master_seed=opts["seed"], strategies=opts["tags"],
    )
    curves = run_outage_sweep(cfg, threads=opts["threads"])
    outputs = []
    for curve in curves:
        name = f"sweep_{curve.strategy}.csv"
        (outdir / name).write_text(curve_csv(curve))
        outputs.append(name)
    if not opts["no_plot"]:
        plot_outage_curves(curves, outdir / "sweep_curves.png", opts["rate_nats"])
        outputs.append("sweep_curves.png")
    config_lines = [
        f"n={cfg.n}", f"m={cfg.m}", f"rate_nats={cfg.rate_nats!r}",
        f"snr_db={','.join(repr(g) for g in cfg.gamma0_db_grid)}",
        f"trials={cfg.trials}", f"seed={cfg.master_seed}",
        f"strategies={','.join(cfg.strategies)}",
        f"threads={opts['threads']}",
    ]
    _write_manifest(outdir, "sweep", config_lines, outputs)
    for name in outputs + ["manifest.txt"]:
        print(outdir / name)
    return 0


def cmd_verify(args, parser) -> int:
    opts = _resolve(args, parser)
    outdir = _prepare_outdir(opts["outdir"], parser)
    report = SUITES[args.suite](threads=opts["threads"])

    lines = [f"suite: {report.suite}"]
    for r in report.results:
        lines.append(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.detail}")
    n_pass = sum(r.passed for r in report.results)
    lines.append(
        f"result: {'PASS' if report.passed else 'FAIL'} "
        f"({n_pass}/{len(report.results)})"
    )
    text = "\n".join(lines) + "\n"
    print(text, end="")

    outputs = [f"verify_{report.suite}.txt", f"verify_{report.suite}.csv"]
    (outdir / outputs[0]).write_text(text)
    csv_lines = ["check,passed,detail"]
    for r in report.results:
        detail = r.detail.replace('"', "'")
        csv_lines.append(f"{r.name},{'true' if r.passed else 'false'},\"{detail}\"")
    (outdir / outputs[1]).write_text("\n".join(csv_lines) + "\n")
    for stem, table in report.tables.items():
        name = f"verify_{report.suite}_{stem}.csv"
        (outdir / name).write_text(table)
        outputs.append(name)
    for curve in report.curves:
        name = f"verify_{report.suite}_{curve.strategy}.csv"
        (outdir / name).write_text(curve_csv(curve))
        outputs.append(name)
    if report.curves and not opts["no_plot"]:
        name = f"verify_{report.suite}_curves.png"
        plot_outage_curves(report.curves, outdir / name)
        outputs.append(name)
    config_lines = [f"suite={report.suite}", f"threads={opts['threads']}"]
    _write_manifest(outdir, f"verify {report.suite}", config_lines, outputs)
    return 0 if report.passed else 1


def cmd_fit(args, parser) -> int:
    opts = _resolve(args, parser)
    outdir = _prepare_outdir(opts["outdir"], parser)
    n, m = opts["n"], opts["m"]
    grid_db = np.asarray(opts["grid"])
    gamma0 = 10.0 ** (grid_db / 10.0)
    outputs = []
    config_lines = [
        f"target={args.target}", f"n={n}", f"m={m}",
        f"rate_nats={opts['rate_nats']!r}",
        f"snr_db={','.join(repr(float(g)) for g in grid_db)}",
    ]

    if args.target == "theorem3":
        if m < 2 or len(gamma0) < 4:
            parser.error("fit theorem3 needs m >= 2 and at least 4 SNR points")
        try:
            fit = fit_theorem3(n, m, gamma0, rate_nats=opts["rate_nats"])
        except (ValueError, RuntimeError) as exc:
            print(f"fit failed: {exc}", file=sys.stderr)
            return 1
        if not (np.all(fit.b > 0) and np.all(np.isfinite(fit.r_squared))):
            print("fit failed: degenerate coefficients", file=sys.stderr)
            return 1
        lines = ["stream,b,exponent,r_squared"]
        for j in range(len(fit.b)):
            lines.append(
                f"{j + 2},{float(fit.b[j])!r},{float(fit.exponents[j])!r},"
                f"{float(fit.r_squared[j])!r}"
            )
        (outdir / "fit_theorem3.csv").write_text("\n".join(lines) + "\n")
        outputs.append("fit_theorem3.csv")
        if not opts["no_plot"]:
            plot_scaling_fit(fit, outdir / "fit_theorem3.png")
            outputs.append("fit_theorem3.png")
        print("\n".join(lines))
    else:
        coeff = np.array([ergodic_coefficients(n, m, g) for g in gamma0])
        allocs = np.array([avg_ergodic_allocation(n, m, g) for g in gamma0])
        head = (
            ["gamma0_db"]
            + [f"A_{i + 1}" for i in range(m)]
            + [f"alpha_{i + 1}" for i in range(m)]
        )
        lines = [",".join(head)]
        for k in range(len(gamma0)):
            row = [repr(float(grid_db[k]))]
            row += [repr(float(v)) for v in coeff[k]]
            row += [repr(float(v)) for v in allocs[k]]
            lines.append(",".join(row))
        (outdir / "fit_ergodic.csv").write_text("\n".join(lines) + "\n")
        outputs.append("fit_ergodic.csv")
        if not opts["no_plot"]:
            plot_allocation_vs_snr(grid_db, allocs, outdir / "fit_ergodic.png")
            outputs.append("fit_ergodic.png")
        print("\n".join(lines))

    _write_manifest(outdir, f"fit {args.target}", config_lines, outputs)
    return 0


def _add_common(sub: argparse.ArgumentParser, rates: bool = True) -> None:
    sub.add_argument("--config", help="flat key=value config file")
    sub.add_argument("--n", type=int, help="receive antennas")
    sub.add_argument("--m", type=int, help="transmit antennas / streams")
    if rates:
        group = sub.add_mutually_exclusive_group()
        group.add_argument(
            "--rate-nats", type=float, dest="rate_nats",
            help="per-stream target rate in nats",
        )
        group.add_argument(
            "--rate-bits", type=float, dest="rate_bits",
            help="per-stream target rate in bits (converted by ln 2)",
        )
    sub.add_argument("--snr-db", dest="snr_db", help="grid: START:STOP[:STEP] or list")
    sub.add_argument("--threads", type=int, help="worker threads (default 1)")
    sub.add_argument(
        "--outdir", help=f"output directory (default ${ENV_OUTDIR} or .)"
    )
    sub.add_argument(
        "--no-plot", action="store_true", dest="no_plot",
        help="skip figure rendering",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vblastopt",
        description="Power and rate allocation toolkit for layered MIMO links",
    )
    parser.add_argument(
        "--version", action="version", version=f"vblastopt {__version__}"
    )
    subs = parser.add_subparsers(dest="command", required=True)

    sweep = subs.add_parser("sweep", help="Monte Carlo outage sweep")
    _add_common(sweep)
    sweep.add_argument("--trials", type=int, help="trials per SNR point")
    sweep.add_argument("--seed", type=int, help="master seed")
    sweep.add_argument(
        "--strategies",
        help=f"comma list from: {', '.join(STRATEGY_TAGS)}",
    )
    sweep.set_defaults(func=cmd_sweep)

    verify = subs.add_parser("verify", help="run a self-check suite")
    verify.add_argument("suite", choices=sorted(SUITES))
    _add_common(verify)
    verify.set_defaults(func=cmd_verify)

    fit = subs.add_parser("fit", help="fit closed-form allocation laws")
    fit.add_argument("target", choices=("theorem3", "ergodic"))
    _add_common(fit)
    fit.set_defaults(func=cmd_fit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args, parser)


if __name__ == "__main__":
    sys.exit(main())
