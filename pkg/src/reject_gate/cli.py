"""Command-line entry point: ``demo``, ``experiment`` and ``verify``.

Exit codes: 0 success, 1 configuration error, 2 I/O error,
3 verification failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from . import config as config_io
from .errors import ConfigError
from .evaluation import DEMO_SEED, figure_demo_data, run_experiment

SEED_ENV = "REJECT_GATE_SEED"

EXIT_OK, EXIT_CONFIG, EXIT_IO, EXIT_VERIFY = 0, 1, 2, 3


def _common(parser, suppress):
    default = argparse.SUPPRESS if suppress else None
    parser.add_argument("--seed", type=int, default=default, help="master seed override")
    parser.add_argument("--out", default=default, help="output directory")
    parser.add_argument("--workers", type=int, default=argparse.SUPPRESS if suppress else 1,
                        help="worker processes (affects wall time only)")
    parser.add_argument("--no-svg", action="store_true",
                        default=argparse.SUPPRESS if suppress else False,
                        help="write CSV only")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reject-gate", description=__doc__.splitlines()[0])
    _common(parser, suppress=False)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    demo = sub.add_parser("demo", help="tabulate and plot an illustration figure")
    demo.add_argument("which", choices=("fig1", "fig2a", "fig2b"))
    _common(demo, suppress=True)

    exp = sub.add_parser("experiment", help="run the AuReC experiment from a config file")
    exp.add_argument("config", help="path to a key = value config file")
    _common(exp, suppress=True)

    ver = sub.add_parser("verify", help="run the oracle suite")
    _common(ver, suppress=True)
    ver.add_argument("--perturb-epistemic", type=float, default=0.0, help=argparse.SUPPRESS)
    return parser


def _env_seed():
    raw = os.environ.get(SEED_ENV)
    if raw is None or not raw.strip():
        return None
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(SEED_ENV, f"expected an integer, got {raw!r}") from None


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_demo(args) -> int:
    seed = args.seed if args.seed is not None else _env_seed()
    if seed is None:
        seed = DEMO_SEED
    out = Path(args.out or ".")
    table = figure_demo_data(args.which, seed=seed)
    _write(out / f"{args.which}.csv", table.to_csv())
    if not args.no_svg:
        from .plotting import plot_demo

        plot_demo(table, out / f"{args.which}.svg")
    print(f"wrote {out / (args.which + '.csv')}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    try:
        text = Path(args.config).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    cfg = config_io.loads(text)
    env_seed = _env_seed()
    if args.seed is not None:
        cfg = cfg.replace(master_seed=args.seed)
    elif env_seed is not None:
        cfg = cfg.replace(master_seed=env_seed)
    out = Path(args.out or cfg.output_dir)

    start = time.perf_counter()
    result = run_experiment(cfg, workers=max(1, args.workers))
    elapsed = time.perf_counter() - start
    _write(out / "aurec.csv", result.to_csv())
    if not args.no_svg:
        from .plotting import plot_aurec

        plot_aurec(result, out / "aurec.svg")

    print(f"{'m':>5}  {'method':<17}{'mean_aurec':>12}{'stderr':>11}{'q40':>11}{'q60':>11}{'n':>6}")
    for r in result.rows:
        print(f"{r.m:>5}  {r.method:<17}{r.mean_aurec:>12.5g}{r.stderr:>11.3g}"
              f"{r.q40:>11.5g}{r.q60:>11.5g}{r.trials:>6}")
    print(f"{cfg.trials} trials x {len(cfg.m_values)} sizes in {elapsed:.1f}s; "
          f"wrote {out / 'aurec.csv'}")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_suite

    failed = None
    for check in run_suite(epistemic_offset=args.perturb_epistemic):
        status = "ok  " if check.passed else "FAIL"
        print(f"{status} {check.name:<20} max deviation {check.deviation:.3e} "
              f"(tol {check.tolerance:g})  {check.detail}")
        if not check.passed and failed is None:
            failed = check.name
    if failed is not None:
        print(f"verification failed: {failed}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


_COMMANDS = {"demo": cmd_demo, "experiment": cmd_experiment, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
