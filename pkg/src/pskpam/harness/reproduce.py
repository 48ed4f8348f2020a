"""Run a bundled (or user-supplied) figure configuration end to end."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..analytic import DEFAULT_QUAD, QuadratureSpec
from ..constellation import Family
from ..errors import HarnessError
from .config import ExperimentConfig, FigureConfig, content_hash, load_figure
from .curves import AnalyticPoint, run_analytic_curve
from .io import ANALYTIC_COLUMNS, SER_COLUMNS, base_metadata, render_csv, write_text
from .plot import Series, emit_plot
from .simulate import SerEstimate, run_sweep

FIGURES = ("fig3", "fig4", "fig5", "fig6", "fig7")


def bundled_figure(name: str) -> FigureConfig:
    path = resources.files("pskpam") / "configs" / f"{name}.json"
    if name not in FIGURES or not path.is_file():
        raise HarnessError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}",
                           code="UNKNOWN_FIGURE")
    with resources.as_file(path) as p:
        return load_figure(p)


def experiment_metadata(cfg: ExperimentConfig, **extra) -> dict:
    return base_metadata(
        config_hash=content_hash(cfg),
        seed=cfg.seed,
        constellation=cfg.constellation.display,
        norm=cfg.constellation.norm.value,
        phase_bound=repr(cfg.phase_bound),
        receiver=cfg.receiver,
        reestimate="on" if cfg.decoder.reestimate else "off",
        qam_geometry=("8-QAM is the 4x2 rectangular grid"
                      if cfg.constellation.family is Family.QAM and cfg.constellation.m == 8 else None),
        **extra,
    )


def ser_csv(estimates: list[SerEstimate], metadata: dict) -> str:
    rows = [(e.snr_db, e.trials, e.errors, e.ser, e.ci95_low, e.ci95_high) for e in estimates]
    return render_csv(SER_COLUMNS, rows, metadata)


def analytic_csv(points: list[AnalyticPoint], metadata: dict) -> str:
    clamped = [p.snr_db for p in points if p.clamped]
    if clamped:
        metadata = {**metadata, "clamped_snr_db": " ".join(repr(s) for s in clamped)}
    rows = [(p.snr_db, p.p_subset_dom, p.p_pam_dom, p.p_total) for p in points]
    return render_csv(ANALYTIC_COLUMNS, rows, metadata)


@dataclass
class FigureResult:
    ser: dict[str, list[SerEstimate]] = field(default_factory=dict)
    analytic: dict[str, list[AnalyticPoint]] = field(default_factory=dict)
    files: list[Path] = field(default_factory=list)


def reproduce(fig: FigureConfig, out_dir, workers: int = 1,
              quad: QuadratureSpec = DEFAULT_QUAD) -> FigureResult:
    out_dir = Path(out_dir)
    result = FigureResult()
    plot_series = []
    wanted = set(fig.analytic.labels) if fig.analytic else set()
    fig_hash = content_hash(fig)
    for exp in fig.experiments():
        label = exp.constellation.display
        estimates = run_sweep(exp, workers)
        result.ser[label] = estimates
        meta = experiment_metadata(exp, figure=fig.name, figure_hash=fig_hash)
        path = out_dir / f"{fig.name}_{exp.constellation.slug}.csv"
        write_text(path, ser_csv(estimates, meta))
        result.files.append(path)
        plot_series.append(Series(label, tuple(e.snr_db for e in estimates), tuple(e.ser for e in estimates)))
        if label in wanted:
            points = run_analytic_curve(exp, quad, fig.analytic.mode)
            result.analytic[label] = points
            meta = experiment_metadata(exp, figure=fig.name, figure_hash=fig_hash,
                                       analytic_mode=fig.analytic.mode, objective_mode="default")
            path = out_dir / f"{fig.name}_{exp.constellation.slug}_analytic.csv"
            write_text(path, analytic_csv(points, meta))
            result.files.append(path)
            plot_series.append(Series(f"{label} {fig.analytic.mode} bound",
                                      tuple(p.snr_db for p in points), tuple(p.p_total for p in points),
                                      dashed=True))
    svg = out_dir / f"{fig.name}.svg"
    emit_plot(plot_series, svg, title=fig.description or fig.name)
    result.files.append(svg)
    return result
