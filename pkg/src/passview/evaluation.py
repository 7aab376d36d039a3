"""Corpus metrics: rank of the actual receiver per event, Top-X rates split
by pass outcome, rank histograms, and splits by passer role or game phase.
Reports serialize to CSV plus self-contained SVG histograms.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .feasibility import DEFAULT_PARAMS, ModelParams, Scenario, evaluate_scenario, normalize_mode

HISTOGRAM_BINS = 9

PHASES = ("build_up", "progression", "finalization")
SPLIT_ROLES = ("defender", "midfielder", "forward")
SPLITS = ("none", "position", "phase")


class EvaluationError(ValueError):
    """Invalid inputs to the evaluation protocol."""


@dataclass(frozen=True)
class RankResult:
    """Rank (1 = best) of the event's actual receiver under some mode."""

    scenario_index: int
    rank: int
    success: bool

    def __post_init__(self) -> None:
        if self.rank < 1:
            raise EvaluationError("rank must be >= 1")


def rank_actual_receivers(scenarios: list[Scenario],
                          params: ModelParams = DEFAULT_PARAMS,
                          mode: str = "combined") -> tuple[list[RankResult], list[str]]:
    """Rank every labeled event's actual receiver. Events without a ground
    truth are skipped with a warning; events without a success flag count as
    successful."""
    results: list[RankResult] = []
    warnings: list[str] = []
    for index, scenario in enumerate(scenarios):
        if scenario.ground_truth_receiver is None:
            warnings.append(f"event {index}: no ground truth, skipped")
            continue
        evaluation = evaluate_scenario(scenario, params, mode)
        rank = evaluation.rank_of(scenario.ground_truth_receiver)
        success = True if scenario.success is None else scenario.success
        results.append(RankResult(index, rank, success))
    return results, warnings


def topx_accuracy(results: list[RankResult], x: int) -> tuple[float | None, float | None]:
    """Fraction of events with rank <= x, per outcome class. A class with no
    events is absent (None), never reported as 0."""
    if x < 1:
        raise EvaluationError("x must be >= 1")

    def rate(subset: list[RankResult]) -> float | None:
        if not subset:
            return None
        return sum(1 for r in subset if r.rank <= x) / len(subset)

    return (rate([r for r in results if r.success]),
            rate([r for r in results if not r.success]))


@dataclass(frozen=True)
class RankHistogram:
    """Counts of rank 1..HISTOGRAM_BINS plus an overflow tally for deeper ranks."""

    outcome: str  # "successful" | "unsuccessful"
    bins: tuple[int, ...]
    overflow: int

    @property
    def total(self) -> int:
        return sum(self.bins) + self.overflow


def rank_histogram(results: list[RankResult]) -> tuple[RankHistogram, RankHistogram]:
    """(successful, unsuccessful) histograms over the rank of the actual receiver."""

    def build(outcome: str, subset: list[RankResult]) -> RankHistogram:
        bins = [0] * HISTOGRAM_BINS
        overflow = 0
        for r in subset:
            if r.rank <= HISTOGRAM_BINS:
                bins[r.rank - 1] += 1
            else:
                overflow += 1
        return RankHistogram(outcome, tuple(bins), overflow)

    return (build("successful", [r for r in results if r.success]),
            build("unsuccessful", [r for r in results if not r.success]))


def _kmeans_1d(depths: np.ndarray, k: int = 3, max_iter: int = 100) -> np.ndarray:
    """Deterministic 1-D k-means: centers seeded at the 1/6, 3/6, 5/6
    quantiles, points assigned to the nearest center (ties to the lower
    index), iterated until the centers stop moving."""
    centers = np.quantile(depths, [(2 * i + 1) / (2 * k) for i in range(k)])
    for _ in range(max_iter):
        labels = np.argmin(np.abs(depths[:, None] - centers[None, :]), axis=1)
        updated = centers.copy()
        for i in range(k):
            member = depths[labels == i]
            if len(member):
                updated[i] = member.mean()
        if np.array_equal(updated, centers):
            break
        centers = updated
    return np.sort(centers)


def classify_phase(scenario: Scenario) -> str:
    """Game phase from the passer's depth against the clustered defensive rows.

    Depth is the coordinate along the attack axis. Defenders labeled as
    goalkeepers stay out of the row clustering.
    """
    defenders = [d for d in scenario.defenders if d.role != "goalkeeper"]
    if len(defenders) < 3:
        raise EvaluationError("insufficient defenders for phase clustering")

    def depth(x: float) -> float:
        return x if scenario.field.attack_direction == "+x" else scenario.field.length - x

    centers = _kmeans_1d(np.array([depth(d.position.x) for d in defenders]))
    passer_depth = depth(scenario.passer.position.x)
    if passer_depth < centers[0]:
        return "build_up"
    if passer_depth > centers[-1]:
        return "finalization"
    return "progression"


@dataclass(frozen=True)
class ReportRow:
    """One (split class, mode) cell of the report."""

    split_class: str
    mode: str
    top1_succ: float | None
    top1_nsucc: float | None
    top3_succ: float | None
    top3_nsucc: float | None
    n_events: int
    hist_succ: RankHistogram
    hist_nsucc: RankHistogram


@dataclass(frozen=True)
class SplitReport:
    split: str
    rows: tuple[ReportRow, ...]
    warnings: tuple[str, ...]


def build_report(scenarios: list[Scenario], params: ModelParams = DEFAULT_PARAMS,
                 modes: tuple[str, ...] = ("combined", "proximity_defense"),
                 split: str = "none") -> SplitReport:
    """Top-1/Top-3 per outcome and rank histograms for every (class, mode).

    split "none" puts everything in one class; "position" groups by the
    passer's role (defender/midfielder/forward, others excluded with a
    warning); "phase" groups by classify_phase (unclassifiable events
    excluded with a warning). Classes with no events are omitted.
    """
    if split not in SPLITS:
        raise EvaluationError(f"unknown split {split!r}; expected one of {SPLITS}")
    modes = tuple(normalize_mode(m) for m in modes)

    warnings: list[str] = []
    if split == "none":
        classes: dict[str, list[Scenario]] = {"all": list(scenarios)}
        order = ("all",)
    elif split == "position":
        classes = {role: [] for role in SPLIT_ROLES}
        order = SPLIT_ROLES
        for index, scenario in enumerate(scenarios):
            role = scenario.passer.role
            if role in SPLIT_ROLES:
                classes[role].append(scenario)
            else:
                warnings.append(
                    f"event {index}: passer role {role!r} not splittable, excluded")
    else:
        classes = {phase: [] for phase in PHASES}
        order = PHASES
        for index, scenario in enumerate(scenarios):
            try:
                classes[classify_phase(scenario)].append(scenario)
            except EvaluationError as exc:
                warnings.append(f"event {index}: {exc}, excluded")

    rows: list[ReportRow] = []
    for split_class in order:
        members = classes[split_class]
        if not members:
            continue
        for mode in modes:
            results, rank_warnings = rank_actual_receivers(members, params, mode)
            if mode == modes[0]:
                warnings.extend(f"{split_class}: {w}" for w in rank_warnings)
            top1_succ, top1_nsucc = topx_accuracy(results, 1) if results else (None, None)
            top3_succ, top3_nsucc = topx_accuracy(results, 3) if results else (None, None)
            hist_succ, hist_nsucc = rank_histogram(results)
            rows.append(ReportRow(split_class, mode, top1_succ, top1_nsucc,
                                  top3_succ, top3_nsucc, len(results),
                                  hist_succ, hist_nsucc))
    return SplitReport(split, tuple(rows), tuple(warnings))


def _fmt_rate(value: float | None) -> str:
    return "" if value is None else f"{value:.6f}"


def report_csv_text(report: SplitReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["split_class", "mode", "top1_succ", "top1_nsucc",
                     "top3_succ", "top3_nsucc", "n_events"])
    for row in report.rows:
        writer.writerow([row.split_class, row.mode,
                         _fmt_rate(row.top1_succ), _fmt_rate(row.top1_nsucc),
                         _fmt_rate(row.top3_succ), _fmt_rate(row.top3_nsucc),
                         str(row.n_events)])
    return buf.getvalue()


def write_report_csv(report: SplitReport, path: str | Path) -> None:
    Path(path).write_text(report_csv_text(report), encoding="utf-8")


# --- SVG histograms --------------------------------------------------------

_SVG_W, _SVG_H = 480, 300
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 46, 12, 34, 40
_SUCC_COLOR = "#1f77b4"
_NSUCC_COLOR = "#ff7f0e"


def histogram_svg(row: ReportRow) -> str:
    """Self-contained SVG: paired bars per rank 1..9 plus a 10+ overflow slot."""
    labels = [str(i) for i in range(1, HISTOGRAM_BINS + 1)] + ["10+"]
    succ = list(row.hist_succ.bins) + [row.hist_succ.overflow]
    nsucc = list(row.hist_nsucc.bins) + [row.hist_nsucc.overflow]
    peak = max(max(succ), max(nsucc), 1)

    plot_w = _SVG_W - _MARGIN_L - _MARGIN_R
    plot_h = _SVG_H - _MARGIN_T - _MARGIN_B
    slot = plot_w / len(labels)
    bar = slot * 0.36

    def bar_rect(i: int, count: int, offset: float, color: str) -> str:
        h = plot_h * count / peak
        x = _MARGIN_L + i * slot + slot / 2 + offset
        y = _MARGIN_T + plot_h - h
        return (f'<rect x="{x:.2f}" y="{y:.2f}" width="{bar:.2f}" '
                f'height="{h:.2f}" fill="{color}"/>')

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}" '
        f'viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<text x="{_MARGIN_L}" y="20" font-family="sans-serif" font-size="14">'
        f'{row.split_class} / {row.mode}</text>',
        f'<line x1="{_MARGIN_L}" y1="{_MARGIN_T + plot_h}" x2="{_SVG_W - _MARGIN_R}" '
        f'y2="{_MARGIN_T + plot_h}" stroke="#333"/>',
        f'<line x1="{_MARGIN_L}" y1="{_MARGIN_T}" x2="{_MARGIN_L}" '
        f'y2="{_MARGIN_T + plot_h}" stroke="#333"/>',
        f'<text x="10" y="{_MARGIN_T + 4}" font-family="sans-serif" font-size="11">{peak}</text>',
        f'<text x="10" y="{_MARGIN_T + plot_h + 4}" font-family="sans-serif" font-size="11">0</text>',
    ]
    for i, label in enumerate(labels):
        parts.append(bar_rect(i, succ[i], -bar, _SUCC_COLOR))
        parts.append(bar_rect(i, nsucc[i], 0.0, _NSUCC_COLOR))
        x = _MARGIN_L + i * slot + slot / 2
        parts.append(f'<text x="{x:.2f}" y="{_MARGIN_T + plot_h + 16}" '
                     f'font-family="sans-serif" font-size="11" '
                     f'text-anchor="middle">{label}</text>')
    legend_y = _SVG_H - 10
    parts.extend([
        f'<text x="{_MARGIN_L}" y="{_MARGIN_T + plot_h + 32}" font-family="sans-serif" '
        f'font-size="11">rank of actual receiver</text>',
        f'<rect x="{_SVG_W - 200}" y="{legend_y - 10}" width="10" height="10" fill="{_SUCC_COLOR}"/>',
        f'<text x="{_SVG_W - 186}" y="{legend_y}" font-family="sans-serif" font-size="11">successful</text>',
        f'<rect x="{_SVG_W - 110}" y="{legend_y - 10}" width="10" height="10" fill="{_NSUCC_COLOR}"/>',
        f'<text x="{_SVG_W - 96}" y="{legend_y}" font-family="sans-serif" font-size="11">unsuccessful</text>',
        "</svg>",
    ])
    return "\n".join(parts) + "\n"


def write_report_svgs(report: SplitReport, outdir: str | Path) -> list[Path]:
    out = Path(outdir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    for row in report.rows:
        path = out / f"hist_{row.split_class}_{row.mode}.svg"
        path.write_text(histogram_svg(row), encoding="utf-8")
        written.append(path)
    return written
