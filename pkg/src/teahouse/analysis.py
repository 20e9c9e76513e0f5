"""Dataset analysis: demographics, usability, workload, Likert sections, and
per-game performance by age group with normality screening and the rank-based
group comparison. Output is plain text plus CSV tables; no plotting."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Sequence

from .core import AgeGroup, EducationBand, GameId, Gender
from .metrics import GroupCell, INDICATORS, metrics_table
from .questionnaires import (
    LikertSummary,
    TLX_DIMENSIONS,
    UsabilityBand,
    likert_frequencies,
    score_sus,
    summarize_tlx,
)
from .session import Dataset, SessionRecord
from .stats import (
    ALPHA,
    DegenerateSampleError,
    StatTestResult,
    StatsError,
    describe,
    kruskal_wallis,
    shapiro_wilk,
)

GROUP_ORDER = (AgeGroup.G60_69, AgeGroup.G70_79, AgeGroup.G80_PLUS)

GAME_LABELS = {GameId.DIMSUM: "Dim Sum", GameId.STEAMER: "Steamer", GameId.CASHIER: "Cashier"}
INDICATOR_LABELS = {
    "inaccuracy_pct": "Inaccuracy (%)",
    "omission_pct": "Omission (%)",
    "total_time_s": "Total time (s)",
}

SMALL_GROUP_N = 5


def p_display(p: float) -> str:
    """Three decimals with a star under the significance threshold."""
    return f"{p:.3f}" + ("*" if p < ALPHA else "")


def load_published_summary() -> dict[str, Any]:
    """The published per-age-group performance summary, kept verbatim as
    display strings so reports can echo it exactly."""
    with resources.files("teahouse.data").joinpath("published_summary.json").open() as f:
        return json.load(f)


@dataclass
class AnalysisReport:
    n: int
    group_ns: dict[AgeGroup, int]
    gender_counts: dict[AgeGroup | None, dict[str, int]]
    education_counts: dict[AgeGroup | None, dict[str, int]]
    moca: dict[AgeGroup | None, tuple[float, float | None]]
    sus_items: list[tuple[float, float | None]]
    sus_scores: list[float]
    sus_mean: float | None
    sus_sd: float | None
    sus_bands: dict[UsabilityBand, int]
    sus_item_means_score: float | None
    tlx: dict[str, Any]
    likert: dict[str, dict[str, LikertSummary]]
    performance: dict[tuple[GameId, str], dict[AgeGroup, GroupCell | None]]
    kw: dict[tuple[GameId, str], StatTestResult | None]
    normality: dict[tuple[GameId, str], StatTestResult | None]
    notes: list[str] = field(default_factory=list)
    published: dict[str, Any] | None = None

    # -- rendering ----------------------------------------------------------

    def render_text(self) -> str:
        lines: list[str] = []
        add = lines.append
        group_heads = [
            f"{g.value} (n={self.group_ns.get(g, 0)})" for g in GROUP_ORDER
        ] + [f"All (n={self.n})"]

        add("ANALYSIS REPORT")
        add("=" * 79)
        add("")
        add("Demographics")
        add("-" * 79)
        add(_row(["", *group_heads]))
        add("Gender, n (%)")
        for gender in Gender:
            add(_row([f"  {gender.value}", *self._count_cells(self.gender_counts, gender.value)]))
        add("Education, n (%)")
        for band in EducationBand:
            add(_row([f"  {band.value}", *self._count_cells(self.education_counts, band.value)]))
        moca_cells = []
        for g in (*GROUP_ORDER, None):
            mean_sd = self.moca.get(g)
            if mean_sd is None:
                moca_cells.append("-")
            else:
                mean, sd = mean_sd
                moca_cells.append(f"{mean:.1f}" + (f" ({sd:.1f})" if sd is not None else ""))
        add(_row(["Screening score, mean (SD)", *moca_cells]))
        add("")

        add("Usability scale")
        add("-" * 79)
        if self.sus_items:
            add(_row(["item", "mean", "SD"], widths=(28, 8, 8)))
            for i, (mean, sd) in enumerate(self.sus_items, start=1):
                add(
                    _row(
                        [f"  q{i}", f"{mean:.2f}", "-" if sd is None else f"{sd:.2f}"],
                        widths=(28, 8, 8),
                    )
                )
            assert self.sus_mean is not None
            add(
                f"Global score: mean={self.sus_mean:.2f}"
                + (f", SD={self.sus_sd:.2f}" if self.sus_sd is not None else "")
                + f", n={len(self.sus_scores)}"
            )
            bands = ", ".join(
                f"{band.value}={self.sus_bands.get(band, 0)}" for band in UsabilityBand
            )
            add(f"Band distribution: {bands}")
            if self.sus_item_means_score is not None:
                add(
                    "Item-means pseudo-respondent score: "
                    f"{self.sus_item_means_score:.2f}"
                    " (the scale formula is linear, so with complete responses this"
                    " equals the respondent mean; a published global mean that differs"
                    " from it was computed some other way)"
                )
        else:
            add("No usability responses in dataset.")
        add("")

        add("Workload (six dimensions, 1-7)")
        add("-" * 79)
        if self.tlx:
            add(_row(["dimension", "mean", "SD"], widths=(28, 8, 8)))
            for name in TLX_DIMENSIONS:
                s = self.tlx[name]
                add(
                    _row(
                        [f"  {name}", f"{s.mean:.2f}", "-" if s.sd is None else f"{s.sd:.2f}"],
                        widths=(28, 8, 8),
                    )
                )
        else:
            add("No workload responses in dataset.")
        add("")

        add("Likert sections")
        add("-" * 79)
        for section, items in self.likert.items():
            add(f"[{section}]")
            for item, summary in items.items():
                counts = " ".join(f"{lv}:{summary.counts[lv]}" for lv in range(1, 6))
                add(f"  {item}: {counts}  top-2-box {summary.top2box_pct:.1f}%")
        if not self.likert:
            add("No Likert responses in dataset.")
        add("")

        add("Performance by age group")
        add("-" * 79)
        head = ["game", "indicator"] + [g.value for g in GROUP_ORDER] + ["H", "p"]
        add(_row(head, widths=(10, 16, 10, 10, 10, 9, 9)))
        for game in GameId:
            for ind in INDICATORS:
                cells = self.performance[(game, ind)]
                vals = [
                    "-" if cells[g] is None else cells[g].display for g in GROUP_ORDER
                ]
                test = self.kw.get((game, ind))
                h = "-" if test is None else f"{test.statistic:.3f}"
                p = "-" if test is None else p_display(test.p_value)
                add(
                    _row(
                        [GAME_LABELS[game], INDICATOR_LABELS[ind], *vals, h, p],
                        widths=(10, 16, 10, 10, 10, 9, 9),
                    )
                )
        add("")
        add("Normality screening (W, p)")
        for game in GameId:
            for ind in INDICATORS:
                r = self.normality.get((game, ind))
                if r is None:
                    add(f"  {GAME_LABELS[game]} {INDICATOR_LABELS[ind]}: not testable")
                else:
                    add(
                        f"  {GAME_LABELS[game]} {INDICATOR_LABELS[ind]}: "
                        f"W={r.statistic:.4f} p={p_display(r.p_value)}"
                    )
        add("")

        if self.notes:
            add("Notes")
            add("-" * 79)
            for note in self.notes:
                add(f"- {note}")
            add("")

        if self.published:
            add("Published summary (echoed verbatim from fixture)")
            add("-" * 79)
            pub = self.published
            add(_row(["game", "indicator", *pub["groups"], "p"], widths=(10, 16, 22, 22, 26, 8)))
            for row in pub["rows"]:
                add(
                    _row(
                        [row["game"], row["indicator"], *row["values"], row["p"]],
                        widths=(10, 16, 22, 22, 26, 8),
                    )
                )
            add("")
        return "\n".join(lines) + "\n"

    def _count_cells(
        self, table: dict[AgeGroup | None, dict[str, int]], key: str
    ) -> list[str]:
        out = []
        for g in (*GROUP_ORDER, None):
            counts = table.get(g, {})
            total = sum(counts.values())
            c = counts.get(key, 0)
            out.append(f"{c} ({100.0 * c / total:.1f})" if total else "-")
        return out

    # -- CSV exports ----------------------------------------------------------

    def write_csvs(self, records: Sequence[SessionRecord], outdir: str | Path) -> None:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        with open(outdir / "participants.csv", "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(
                [
                    "participant_id",
                    "age",
                    "age_group",
                    "gender",
                    "education_band",
                    "moca_score",
                    "gaming_frequency",
                    "computer_proficiency",
                    "prior_vr",
                    "prior_motion_capture",
                    "sensory_impairment",
                ]
            )
            for r in records:
                p = r.profile
                w.writerow(
                    [
                        p.participant_id,
                        p.age,
                        p.age_group.value,
                        p.gender.value,
                        p.education_band.value,
                        p.moca_score,
                        p.tech.gaming_frequency,
                        p.tech.computer_proficiency,
                        int(p.tech.prior_vr),
                        int(p.tech.prior_motion_capture),
                        int(p.tech.sensory_impairment),
                    ]
                )
        with open(outdir / "sus.csv", "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["participant_id"] + [f"q{i}" for i in range(1, 11)] + ["score"])
            for r in records:
                if r.questionnaires.sus is None:
                    continue
                res = score_sus(r.questionnaires.sus)
                w.writerow([r.profile.participant_id, *r.questionnaires.sus.items, res.score])
        with open(outdir / "tlx.csv", "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["participant_id", *TLX_DIMENSIONS])
            for r in records:
                if r.questionnaires.tlx is None:
                    continue
                w.writerow([r.profile.participant_id, *r.questionnaires.tlx.items])
        with open(outdir / "metrics.csv", "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["participant_id", "game", "inaccuracy_pct", "omission_pct", "total_time_s"])
            for r in records:
                for game in GameId:
                    m = r.metrics.get(game)
                    if m is None:
                        continue
                    w.writerow(
                        [
                            r.profile.participant_id,
                            game.value,
                            m.inaccuracy_pct,
                            m.omission_pct,
                            m.total_time_s,
                        ]
                    )
        with open(outdir / "group_means.csv", "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["game", "indicator", *(g.value for g in GROUP_ORDER), "kw_h", "kw_p", "significant"])
            for game in GameId:
                for ind in INDICATORS:
                    cells = self.performance[(game, ind)]
                    test = self.kw.get((game, ind))
                    w.writerow(
                        [
                            game.value,
                            ind,
                            *(
                                "" if cells[g] is None else repr(cells[g].mean)
                                for g in GROUP_ORDER
                            ),
                            "" if test is None else test.statistic,
                            "" if test is None else test.p_value,
                            "" if test is None else int(test.significant),
                        ]
                    )


def _row(cells: Sequence[str], widths: Sequence[int] = (28, 16, 16, 16, 16)) -> str:
    out = []
    for i, cell in enumerate(cells):
        w = widths[i] if i < len(widths) else widths[-1]
        out.append(str(cell).ljust(w))
    return "  ".join(out).rstrip()


def analyze(
    dataset: Dataset | Sequence[SessionRecord],
    published: dict[str, Any] | None = None,
) -> AnalysisReport:
    records = list(dataset.records if isinstance(dataset, Dataset) else dataset)
    if not records:
        raise StatsError("empty dataset")
    notes: list[str] = []

    by_group: dict[AgeGroup, list[SessionRecord]] = {g: [] for g in GROUP_ORDER}
    for r in records:
        by_group[r.profile.age_group].append(r)
    group_ns = {g: len(rs) for g, rs in by_group.items()}
    for g, count in group_ns.items():
        if count == 0:
            notes.append(f"age group {g.value} has no participants; omitted from comparisons")
        elif count < SMALL_GROUP_N:
            notes.append(
                f"age group {g.value} has n={count} (<{SMALL_GROUP_N}); interpretation is limited"
            )

    def count_by(attr) -> dict[AgeGroup | None, dict[str, int]]:
        out: dict[AgeGroup | None, dict[str, int]] = {}
        for g in (*GROUP_ORDER, None):
            rs = by_group[g] if g is not None else records
            counts: dict[str, int] = {}
            for r in rs:
                key = attr(r)
                counts[key] = counts.get(key, 0) + 1
            out[g] = counts
        return out

    gender_counts = count_by(lambda r: r.profile.gender.value)
    education_counts = count_by(lambda r: r.profile.education_band.value)
    moca: dict[AgeGroup | None, tuple[float, float | None]] = {}
    for g in (*GROUP_ORDER, None):
        rs = by_group[g] if g is not None else records
        if rs:
            summary = describe([r.profile.moca_score for r in rs])
            moca[g] = (summary.mean, summary.sd)

    # Usability
    sus_responses = [r.questionnaires.sus for r in records if r.questionnaires.sus]
    sus_items: list[tuple[float, float | None]] = []
    sus_scores: list[float] = []
    sus_bands: dict[UsabilityBand, int] = {b: 0 for b in UsabilityBand}
    sus_mean = sus_sd = item_means_score = None
    if sus_responses:
        for i in range(10):
            d = describe([resp.items[i] for resp in sus_responses])
            sus_items.append((d.mean, d.sd))
        for resp in sus_responses:
            res = score_sus(resp)
            sus_scores.append(res.score)
            sus_bands[res.band] += 1
        d = describe(sus_scores)
        sus_mean, sus_sd = d.mean, d.sd
        item_means_score = score_sus([m for m, _ in sus_items]).score

    # Workload
    tlx_responses = [r.questionnaires.tlx for r in records if r.questionnaires.tlx]
    tlx = summarize_tlx(tlx_responses) if tlx_responses else {}

    # Likert sections
    likert: dict[str, dict[str, LikertSummary]] = {}
    section_items: dict[str, dict[str, list[int]]] = {}
    for r in records:
        for section, items in r.questionnaires.likert.items():
            for item, rating in items.items():
                section_items.setdefault(section, {}).setdefault(item, []).append(rating)
    for section in sorted(section_items):
        likert[section] = {
            item: likert_frequencies(ratings)
            for item, ratings in sorted(section_items[section].items())
        }

    # Performance
    perf_rows = [(r.profile.age_group, r.metrics) for r in records]
    performance = metrics_table(perf_rows)
    kw: dict[tuple[GameId, str], StatTestResult | None] = {}
    normality: dict[tuple[GameId, str], StatTestResult | None] = {}
    tests_possible = len(records) > 1
    if not tests_possible:
        notes.append("single-participant dataset: no between-group tests run")
    for game in GameId:
        for ind in INDICATORS:
            groups = []
            for g in GROUP_ORDER:
                vals = [r.metrics[game].indicator(ind) for r in by_group[g] if game in r.metrics]
                if vals:
                    groups.append(vals)
            if tests_possible and len(groups) >= 2 and sum(len(v) for v in groups) >= 3:
                kw[(game, ind)] = kruskal_wallis(groups)
            else:
                kw[(game, ind)] = None
            pooled = [r.metrics[game].indicator(ind) for r in records if game in r.metrics]
            try:
                normality[(game, ind)] = shapiro_wilk(pooled) if len(pooled) >= 3 else None
            except DegenerateSampleError:
                normality[(game, ind)] = None
                notes.append(
                    f"{GAME_LABELS[game]} {INDICATOR_LABELS[ind]}: constant across the dataset; "
                    "normality not testable"
                )

    return AnalysisReport(
        n=len(records),
        group_ns=group_ns,
        gender_counts=gender_counts,
        education_counts=education_counts,
        moca=moca,
        sus_items=sus_items,
        sus_scores=sus_scores,
        sus_mean=sus_mean,
        sus_sd=sus_sd,
        sus_bands=sus_bands,
        sus_item_means_score=item_means_score,
        tlx=tlx,
        likert=likert,
        performance=performance,
        kw=kw,
        normality=normality,
        notes=notes,
        published=published,
    )
