"""Command line interface.

Every subcommand writes CSV (or SVG) to ``--out`` or stdout. On failure a
single line ``error: code=<CODE> message=<text>`` goes to stderr and the exit
status is nonzero (2 for bad input, 3 for I/O problems).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from pydantic import ValidationError

from .analytic import ObjectiveMode
from .channel import ChannelParams, snr_db_to_power
from .constellation import build
from .design import optimize_kn
from .errors import PskPamError
from .harness.config import (ConstellationSpec, DecoderOptions, ExperimentConfig, content_hash,
                             load_experiment, load_figure)
from .harness.curves import run_analytic_curve
from .harness.io import (CONSTELLATION_COLUMNS, DESIGN_COLUMNS, base_metadata, read_csv,
                         render_csv, write_text)
from .harness.plot import Series, render_svg
from .harness.reproduce import (FIGURES, analytic_csv, bundled_figure, experiment_metadata,
                                reproduce, ser_csv)
from .harness.simulate import run_sweep


def parse_snr_grid(text: str) -> list[float]:
    """``start:step:stop`` (stop included), ``a,b,c`` or a single value."""
    text = text.strip()
    if ":" in text:
        try:
            start, step, stop = (float(p) for p in text.split(":"))
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad SNR range {text!r}") from None
        if step <= 0:
            raise argparse.ArgumentTypeError("SNR step must be positive")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        return [start + j * step for j in range(max(count, 0))]
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad SNR list {text!r}") from None


def _on_off(text: str) -> bool:
    if text not in ("on", "off"):
        raise argparse.ArgumentTypeError("expected on or off")
    return text == "on"


def _constellation_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=["psk-pam", "qam", "psk"], default="psk-pam")
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--norm", choices=["mean", "paper-sum"], default="mean")


def _channel_flags(p: argparse.ArgumentParser, snr_default: str) -> None:
    p.add_argument("--phase-bound", type=float, default=math.pi / 8, help="a, in radians")
    p.add_argument("--snr-db", type=parse_snr_grid, default=parse_snr_grid(snr_default),
                   help="start:step:stop, a comma list, or one value")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pskpam", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constellation", help="list constellation points")
    _constellation_flags(p)
    p.add_argument("--out")

    p = sub.add_parser("ser", help="Monte Carlo SER sweep")
    _constellation_flags(p)
    _channel_flags(p, "0:5:30")
    p.add_argument("--config", help="JSON experiment file; replaces the constellation/channel flags")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--reestimate", type=_on_off, default=True, metavar="on|off")
    p.add_argument("--receiver", choices=["auto", "two-step", "coherent"], default="auto")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")

    p = sub.add_parser("analytic", help="union bound / dominant terms over SNR")
    _constellation_flags(p)
    _channel_flags(p, "0:5:30")
    p.add_argument("--mode", choices=["union", "dominant"], default="union")
    p.add_argument("--objective", choices=[m.value for m in ObjectiveMode], default="default")
    p.add_argument("--out")

    p = sub.add_parser("design", help="min-max (K, N) search")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--norm", choices=["mean", "paper-sum"], default="mean")
    _channel_flags(p, "20")
    p.add_argument("--objective", choices=[m.value for m in ObjectiveMode], default="default")
    p.add_argument("--union", action="store_true", help="rank by the full union bound")
    p.add_argument("--out")

    p = sub.add_parser("plot", help="SVG from ser/analytic CSV files")
    p.add_argument("inputs", nargs="+")
    p.add_argument("--label", action="append", default=[], help="legend text, one per input")
    p.add_argument("--title", default="")
    p.add_argument("--out", required=True)

    p = sub.add_parser("reproduce", help="run a figure configuration")
    p.add_argument("figure", help=f"one of {', '.join(FIGURES)} or a JSON path")
    p.add_argument("--out", default="out")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--trials", type=int, default=None, help="override trials per point")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        write_text(out, text)
    else:
        sys.stdout.write(text)


def _spec(args) -> ConstellationSpec:
    return ConstellationSpec(family=args.family, m=args.m, k=args.k, norm=args.norm)


def cmd_constellation(args) -> None:
    c = build(args.family, args.m, args.k, args.norm)
    rows = [(n, p.subset_index, p.amplitude_index, p.value.real, p.value.imag) for n, p in enumerate(c.points)]
    meta = base_metadata(constellation=c.label, norm=c.norm_mode.value, radius_r=repr(c.radius_r))
    _emit(render_csv(CONSTELLATION_COLUMNS, rows, meta), args.out)


def cmd_ser(args) -> None:
    if args.config:
        cfg = load_experiment(args.config)
    else:
        cfg = ExperimentConfig(constellation=_spec(args), phase_bound=args.phase_bound, snr_db=args.snr_db,
                               trials_per_point=args.trials, seed=args.seed,
                               decoder=DecoderOptions(reestimate=args.reestimate, receiver=args.receiver))
    estimates = run_sweep(cfg, args.workers)
    text = ser_csv(estimates, experiment_metadata(cfg))
    _emit(text, args.out or cfg.output.csv)
    if cfg.output.svg:
        series = Series(cfg.constellation.display, tuple(e.snr_db for e in estimates),
                        tuple(e.ser for e in estimates))
        write_text(cfg.output.svg, render_svg([series]))


def cmd_analytic(args) -> None:
    cfg = ExperimentConfig(constellation=_spec(args), phase_bound=args.phase_bound, snr_db=args.snr_db,
                           trials_per_point=1)
    points = run_analytic_curve(cfg, mode=args.mode, objective=ObjectiveMode(args.objective))
    meta = experiment_metadata(cfg, analytic_mode=args.mode, objective_mode=args.objective,
                               subset_argument=ObjectiveMode(args.objective).subset_form.value)
    _emit(analytic_csv(points, meta), args.out)


def cmd_design(args) -> None:
    if len(args.snr_db) != 1:
        raise PskPamError("design takes a single --snr-db value", code="BAD_ARGUMENT")
    params = ChannelParams(snr_db_to_power(args.snr_db[0]), args.phase_bound)
    report = optimize_kn(args.m, params, norm_mode=args.norm, objective_mode=args.objective,
                         use_union=args.union)
    rows = [(c.k, c.n, c.p_subset_dominant, c.p_pam_dominant, c.objective, (c.k, c.n) == report.best)
            for c in report.candidates]
    flagged = [f"({c.k},{c.n})" for c in report.candidates if not c.eligible]
    meta = base_metadata(m=args.m, phase_bound=repr(args.phase_bound), snr_db=repr(args.snr_db[0]),
                         norm=args.norm, objective_mode=args.objective,
                         subset_argument=ObjectiveMode(args.objective).subset_form.value,
                         objective="union bound" if args.union else "max of dominant terms",
                         best=f"({report.best[0]},{report.best[1]})",
                         ineligible=" ".join(flagged) or None)
    _emit(render_csv(DESIGN_COLUMNS, rows, meta), args.out)


def cmd_plot(args) -> None:
    series = []
    for n, path in enumerate(args.inputs):
        _, rows = read_csv(path)
        if not rows:
            continue
        ycol = "ser" if "ser" in rows[0] else "p_total"
        label = args.label[n] if n < len(args.label) else Path(path).stem
        series.append(Series(label, tuple(float(r["snr_db"]) for r in rows),
                             tuple(float(r[ycol]) for r in rows), dashed=ycol == "p_total"))
    write_text(args.out, render_svg(series, title=args.title))


def cmd_reproduce(args) -> None:
    fig = load_figure(args.figure) if args.figure.endswith(".json") else bundled_figure(args.figure)
    if args.trials:
        fig = fig.model_copy(update={"trials_per_point": args.trials})
    result = reproduce(fig, args.out, workers=args.workers)
    for path in result.files:
        print(path)


COMMANDS = {
    "constellation": cmd_constellation,
    "ser": cmd_ser,
    "analytic": cmd_analytic,
    "design": cmd_design,
    "plot": cmd_plot,
    "reproduce": cmd_reproduce,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        COMMANDS[args.command](args)
    except PskPamError as exc:
        print(f"error: code={exc.code} message={json.dumps(str(exc))}", file=sys.stderr)
        return 3 if exc.code == "IO_ERROR" else 2
    except ValidationError as exc:
        first = exc.errors()[0]
        print(f"error: code=BAD_CONFIG message={json.dumps(str(first['loc']) + ': ' + first['msg'])}",
              file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
