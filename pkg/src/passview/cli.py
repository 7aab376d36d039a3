"""Batch command line: evaluate scenario files, build report artifacts,
generate synthetic corpora, combine value maps, or serve the HTTP facade.

Artifacts are byte-deterministic: identical invocations write identical
files (all randomness flows from the explicit seed, no timestamps).
"""

from __future__ import annotations

import csv
import io
from pathlib import Path

import click

from .dataio import (
    DataFormatError,
    SYNTH_FIELD,
    SynthConfig,
    generate_synthetic,
    read_scenario_file,
    read_value_map,
    save_scenario_file,
)
from .epvbridge import ValueMapError, combine_with_orientation, rank_receiver_values
from .evaluation import (
    EvaluationError,
    RankResult,
    build_report,
    topx_accuracy,
    write_report_csv,
    write_report_svgs,
)
from .feasibility import FeasibilityError, ModelParams, evaluate_scenario, normalize_mode

_FATAL = (DataFormatError, FeasibilityError, EvaluationError, ValueMapError, OSError)


def _fail(exc: Exception) -> click.ClickException:
    return click.ClickException(str(exc))


def _build_params(psi: float | None, neighbors: int | None,
                  circle_radius: float | None) -> ModelParams:
    kwargs: dict = {}
    if psi is not None:
        kwargs["view_half_angle"] = psi
    if neighbors is not None:
        kwargs["neighbor_count"] = neighbors
    if circle_radius is not None:
        kwargs["circle_radius"] = circle_radius
    try:
        return ModelParams(**kwargs)
    except FeasibilityError as exc:
        raise _fail(exc) from None


def _params_options(f):
    f = click.option("--psi", type=float, default=None,
                     help="View half-angle in degrees.")(f)
    f = click.option("--neighbors", type=int, default=None,
                     help="Defenders scored per side of the pass.")(f)
    f = click.option("--circle-radius", type=float, default=None,
                     help="Projection circle radius.")(f)
    return f


def _read_scenarios(path: str):
    try:
        return read_scenario_file(path)
    except _FATAL as exc:
        raise _fail(exc) from None


def _fmt(value: float | None) -> str:
    return "" if value is None else repr(value)


@click.group()
def main() -> None:
    """Pass feasibility scoring from player positions and orientations."""


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--output", "output_path", required=True, type=click.Path())
@click.option("--mode", default="F", help="F, Fpd, Fo, Fd, or Fp.")
@_params_options
def evaluate(input_path: str, output_path: str, mode: str, psi: float | None,
             neighbors: int | None, circle_radius: float | None) -> None:
    """Score every event; write one CSV row per receiver, best first."""
    params = _build_params(psi, neighbors, circle_radius)
    try:
        mode = normalize_mode(mode)
    except FeasibilityError as exc:
        raise _fail(exc) from None
    _, scenarios, warnings = _read_scenarios(input_path)
    for warning in warnings:
        click.echo(f"warning: {warning}", err=True)

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["event", "receiver_id", "rank", "orientation", "passer_defense",
                     "receiver_defense", "defense", "proximity", "combined",
                     "proximity_defense", "score", "is_ground_truth"])
    for index, scenario in enumerate(scenarios):
        try:
            result = evaluate_scenario(scenario, params, mode)
        except _FATAL as exc:
            raise _fail(DataFormatError(f"event {index}: {exc}")) from None
        for rank, receiver_id in enumerate(result.ranking, start=1):
            b = result.breakdown_for(receiver_id)
            writer.writerow([
                str(index), receiver_id, str(rank),
                _fmt(b.orientation), _fmt(b.passer_defense), _fmt(b.receiver_defense),
                _fmt(b.defense), _fmt(b.proximity), _fmt(b.combined),
                _fmt(b.proximity_defense), _fmt(b.score(mode)),
                "true" if receiver_id == scenario.ground_truth_receiver else "false",
            ])
    Path(output_path).write_text(buf.getvalue(), encoding="utf-8")
    click.echo(f"wrote {output_path} ({len(scenarios)} events)")


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--outdir", required=True, type=click.Path())
@click.option("--mode", "modes", multiple=True, default=("F", "Fpd"),
              help="Repeatable; defaults to F and Fpd.")
@click.option("--split", default="none", type=click.Choice(["none", "position", "phase"]))
@_params_options
def report(input_path: str, outdir: str, modes: tuple[str, ...], split: str,
           psi: float | None, neighbors: int | None, circle_radius: float | None) -> None:
    """Top-1/Top-3 table (CSV) plus rank histograms (SVG) per class and mode."""
    params = _build_params(psi, neighbors, circle_radius)
    _, scenarios, warnings = _read_scenarios(input_path)
    if not scenarios:
        raise click.ClickException("no events")
    try:
        result = build_report(scenarios, params, modes, split)
    except _FATAL as exc:
        raise _fail(exc) from None
    for warning in (*warnings, *result.warnings):
        click.echo(f"warning: {warning}", err=True)
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "report.csv"
    write_report_csv(result, csv_path)
    svg_paths = write_report_svgs(result, out)
    click.echo(f"wrote {csv_path}")
    for path in svg_paths:
        click.echo(f"wrote {path}")


@main.command()
@click.option("--output", "output_path", required=True, type=click.Path())
@click.option("--seed", default=0, type=int, show_default=True)
@click.option("--count", "-n", default=100, type=int, show_default=True)
@click.option("--pressure", default=0.5, type=float, show_default=True)
@click.option("--noise", default=10.0, type=float, show_default=True,
              help="Orientation jitter std in degrees.")
@click.option("--planted/--no-planted", default=False,
              help="Make the model's own top pick the ground truth.")
@click.option("--temperature", default=0.08, type=float, show_default=True)
def synth(output_path: str, seed: int, count: int, pressure: float, noise: float,
          planted: bool, temperature: float) -> None:
    """Write a deterministic synthetic scenario file."""
    try:
        config = SynthConfig(count=count, seed=seed, pressure=pressure,
                             orientation_noise=noise, planted_best=planted,
                             temperature=temperature)
        scenarios = generate_synthetic(config)
        save_scenario_file(output_path, SYNTH_FIELD, scenarios)
    except _FATAL as exc:
        raise _fail(exc) from None
    click.echo(f"wrote {output_path} ({count} events)")


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True))
@click.option("--map", "map_path", required=True, type=click.Path(exists=True))
@click.option("--output", "output_path", required=True, type=click.Path())
@click.option("--kind", default="VP", type=click.Choice(["VP", "VE"]),
              help="Label for the map semantics (same math).")
@_params_options
def epv(input_path: str, map_path: str, output_path: str, kind: str,
        psi: float | None, neighbors: int | None, circle_radius: float | None) -> None:
    """Rank receivers by map value alone and by map value times orientation;
    write Top-1/Top-3 rows for both."""
    params = _build_params(psi, neighbors, circle_radius)
    _, scenarios, warnings = _read_scenarios(input_path)
    if not scenarios:
        raise click.ClickException("no events")
    try:
        vmap = read_value_map(map_path)
    except _FATAL as exc:
        raise _fail(exc) from None
    for warning in warnings:
        click.echo(f"warning: {warning}", err=True)

    by_value: list[RankResult] = []
    by_product: list[RankResult] = []
    for index, scenario in enumerate(scenarios):
        if scenario.ground_truth_receiver is None:
            click.echo(f"warning: event {index}: no ground truth, skipped", err=True)
            continue
        try:
            ranking = combine_with_orientation(scenario, vmap, params, kind)
        except _FATAL as exc:
            raise _fail(DataFormatError(f"event {index}: {exc}")) from None
        success = True if scenario.success is None else scenario.success
        value_order = rank_receiver_values(ranking.entries, primary="map_value")
        gt = scenario.ground_truth_receiver
        by_value.append(RankResult(index, value_order.index(gt) + 1, success))
        by_product.append(RankResult(index, ranking.ranking.index(gt) + 1, success))

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["split_class", "mode", "top1_succ", "top1_nsucc",
                     "top3_succ", "top3_nsucc", "n_events"])

    def fmt_rate(value: float | None) -> str:
        return "" if value is None else f"{value:.6f}"

    for label, results in ((kind, by_value), (f"{kind}xFo", by_product)):
        top1 = topx_accuracy(results, 1) if results else (None, None)
        top3 = topx_accuracy(results, 3) if results else (None, None)
        writer.writerow(["all", label, fmt_rate(top1[0]), fmt_rate(top1[1]),
                         fmt_rate(top3[0]), fmt_rate(top3[1]), str(len(results))])
    Path(output_path).write_text(buf.getvalue(), encoding="utf-8")
    click.echo(f"wrote {output_path}")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, type=int, show_default=True)
@click.option("--maps-dir", default=None, type=click.Path())
@click.option("--ui-dir", default=None, type=click.Path())
@click.option("--smoothing-window", default=None, type=int)
@_params_options
def serve(host: str, port: int, maps_dir: str | None, ui_dir: str | None,
          smoothing_window: int | None, psi: float | None, neighbors: int | None,
          circle_radius: float | None) -> None:
    """Run the HTTP facade (see the service module for endpoints)."""
    import uvicorn

    from .service import create_app

    params = _build_params(psi, neighbors, circle_radius)
    try:
        app = create_app(params=params, maps_dir=maps_dir,
                         smoothing_window=smoothing_window, ui_dir=ui_dir)
    except _FATAL as exc:
        raise _fail(exc) from None
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
