"""Command-line front end.

    logicalnoise logical --code repetition:3 --noise '{"type":"rotation","axis":"X","angle":0.2}'
    logicalnoise sweep --codes repetition:3,repetition:5 --noise '{"type":"rotation","axis":"X"}' \\
        --param angle --grid logspace:0.02:0.2:10 --out sweep.csv
    logicalnoise rounds --code repetition:3 --noise '{"type":"rotation","axis":"X","angle":0.077}' \\
        --hs 1,10,100,1000
    logicalnoise fuzz-lemma1 --count 100000 --seed 7

Exit status is 0 on success, 1 when an oracle verification or fuzz check
fails, and 2 for invalid input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import experiments
from .codes import load_recovery_table
from .pauli import MAX_DENSE_QUBITS
from .specs import code_from_spec, noise_from_spec, parse_noise_arg

VERIFY_TOL = 1e-10


class UsageError(Exception):
    pass


def parse_grid(text: str) -> list[float]:
    """``logspace:a:b:num`` (geometric, endpoints included), ``linspace:a:b:num``
    or a comma-separated list."""
    text = text.strip()
    if not text:
        return []
    if text.startswith(("logspace:", "linspace:")):
        kind, a, b, num = text.split(":")
        a, b, num = float(a), float(b), int(num)
        grid = np.geomspace(a, b, num) if kind == "logspace" else np.linspace(a, b, num)
        return [float(v) for v in grid]
    return [float(v) for v in text.split(",") if v.strip()]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _load_code(args):
    code = code_from_spec(args.code)
    recovery = getattr(args, "recovery", "none")
    if recovery.startswith("@"):
        code = load_recovery_table(code, recovery[1:])
        recovery = "table"
    return code, recovery


def cmd_logical(args) -> int:
    code, recovery = _load_code(args)
    noise = noise_from_spec(parse_noise_arg(args.noise), code.n)
    if args.verify and code.n > MAX_DENSE_QUBITS:
        raise UsageError(f"--verify needs n <= {MAX_DENSE_QUBITS} (set LOGICALNOISE_MAX_N)")
    report = experiments.analyze(code, noise, recovery, verify=args.verify)
    _emit(_dump(report.to_dict()), args.out)
    if report.verification is not None:
        dev = report.verification["max"]
        ok = dev < VERIFY_TOL
        print(f"max deviation {dev:.3e} {'<' if ok else '>='} {VERIFY_TOL:g}", file=sys.stderr)
        return 0 if ok else 1
    return 0


def _sweep_config(args) -> experiments.SweepConfig:
    cfg = {}
    if args.config:
        cfg = parse_noise_arg(args.config)
        if not isinstance(cfg, dict):
            raise UsageError("--config must be a JSON object")
    codes = cfg.get("codes") or ([c for c in args.codes.split(",") if c] if args.codes else [])
    noise = cfg.get("noise") or (parse_noise_arg(args.noise) if args.noise else None)
    if noise is None:
        raise UsageError("sweep needs --noise or a config with 'noise'")
    if isinstance(noise, str):
        noise = {"type": noise}
    grid = cfg.get("grid")
    if grid is None:
        grid = parse_grid(args.grid or "")
    elif isinstance(grid, str):
        grid = parse_grid(grid)
    recovery = cfg.get("recovery", args.recovery)
    return experiments.SweepConfig(
        codes=codes,
        noise=noise,
        param_key=cfg.get("param", args.param),
        grid=[float(v) for v in grid],
        recovery=recovery not in (False, "none"),
        verify=bool(cfg.get("verify", args.verify)),
        jobs=int(cfg.get("jobs", args.jobs)),
    )


def cmd_sweep(args) -> int:
    config = _sweep_config(args)
    rows = experiments.run_sweep(config)
    _emit(experiments.rows_to_csv(rows, experiments.SWEEP_COLUMNS), args.out)
    if config.verify:
        devs = [r["oracle_dev"] for r in rows if r["kind"] == "point" and r["oracle_dev"] != ""]
        if devs:
            dev = max(devs)
            print(f"max deviation {dev:.3e} over {len(devs)} points", file=sys.stderr)
            return 0 if dev < VERIFY_TOL else 1
    return 0


def cmd_rounds(args) -> int:
    code, _ = _load_code(args)
    noise = noise_from_spec(parse_noise_arg(args.noise), code.n)
    hs = [int(round(h)) for h in parse_grid(args.hs)]
    if not hs or min(hs) < 1:
        raise UsageError("--hs needs positive round counts")
    rows, summary = experiments.rounds_table(code, noise, hs, recovery=args.recovery != "none")
    _emit(experiments.rows_to_csv(rows, experiments.ROUNDS_COLUMNS), args.out)
    text = _dump(summary)
    if args.summary:
        Path(args.summary).write_text(text)
    else:
        sys.stderr.write(text)
    return 0


def cmd_fuzz(args) -> int:
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    report = experiments.fuzz_lemma1(args.count, args.seed, tol=args.tol)
    _emit(_dump(report.to_dict()), args.out)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logicalnoise",
        description="Exact syndrome-conditioned logical channels of stabilizer codes.",
        epilog=__doc__.split("\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("logical", help="per-syndrome and averaged logical channels")
    p.add_argument("--code", required=True, help="builtin name (repetition:N, five_qubit, steane) or @file.json")
    p.add_argument("--noise", required=True, help="inline JSON, @file.json, or 'identity'")
    p.add_argument("--recovery", default="none", help="none, minweight, or @table.json")
    p.add_argument("--verify", action="store_true", help="cross-check against the dense oracle")
    p.add_argument("--out")
    p.add_argument("--seed", type=int, default=0, help="accepted for interface uniformity; unused")
    p.set_defaults(func=cmd_logical)

    p = sub.add_parser("sweep", help="metric sweep over a noise-parameter grid")
    p.add_argument("--config", help="inline JSON or @file.json with codes/noise/param/grid")
    p.add_argument("--codes", help="comma-separated code specs")
    p.add_argument("--noise", help="channel spec template")
    p.add_argument("--param", default="angle", help="key of the template replaced by grid values")
    p.add_argument("--grid", help="logspace:a:b:num, linspace:a:b:num or a comma list")
    p.add_argument("--recovery", default="minweight", choices=["none", "minweight"])
    p.add_argument("--verify", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=0, help="accepted for interface uniformity; unused")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("rounds", help="error accumulation over repeated rounds")
    p.add_argument("--code", required=True)
    p.add_argument("--noise", required=True)
    p.add_argument("--hs", default="1,2,5,10,20,50,100,200,500,1000,2000,5000")
    p.add_argument("--recovery", default="minweight", choices=["none", "minweight"])
    p.add_argument("--out")
    p.add_argument("--summary", help="write the crossover summary JSON here (default stderr)")
    p.set_defaults(func=cmd_rounds)

    p = sub.add_parser("fuzz-lemma1", help="check the error-matrix bounds on random channels")
    p.add_argument("--count", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--out")
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
