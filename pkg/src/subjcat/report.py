"""Run the full analysis and render every result table as CSV/JSON text.

Nothing is written until all requested sections have been computed, so a
failing run never leaves a partial bundle behind.
"""

from __future__ import annotations

import csv
import io
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Sequence

from . import corpus as corpus_mod
from .corpus import SYSTEMS, Category, Corpus
from .cover import DEFAULT_BUDGET, DEFAULT_EXACT_CAP, MODES, cover_survey, meta_cover, summarize_survey
from .metrics import (
    DegenerateTestError,
    UndefinedCorrelationError,
    dispersion_buckets,
    journal_dispersions,
    pearson,
    score_buckets,
    wilcoxon_signed_rank,
)
from .setalgebra import relate, similarity_sweep

log = logging.getLogger(__name__)

SECTIONS = ("ingest", "stats", "relations", "sweep", "cover")


class InputMissingError(FileNotFoundError):
    pass


def histogram(values: Sequence[int], bin_width: int) -> list[tuple[int, int]]:
    """Counts in bins [0, w), [w, 2w), ... up to the last non-empty bin."""
    if bin_width < 1:
        raise ValueError("bin_width must be >= 1")
    if not values:
        return []
    if min(values) < 0:
        raise ValueError("histogram values must be non-negative")
    counts = [0] * (max(values) // bin_width + 1)
    for v in values:
        counts[v // bin_width] += 1
    return [(k * bin_width, c) for k, c in enumerate(counts)]


def size_extremes(
    categories: Sequence[Category], small_cutoff: int, large_cutoff: int
) -> tuple[list[tuple[str, int]], list[tuple[str, int]]]:
    """Categories with fewer than small_cutoff / more than large_cutoff members, by name."""
    if small_cutoff <= 0 or large_cutoff <= 0:
        raise ValueError("cutoffs must be positive")
    cats = sorted(categories, key=lambda c: c.name)
    small = [(c.name, c.size) for c in cats if c.size < small_cutoff]
    large = [(c.name, c.size) for c in cats if c.size > large_cutoff]
    return small, large


@dataclass
class RunConfig:
    input_a: str
    input_b: str
    out_dir: str
    thresholds: tuple[float, ...] = (1.0, 0.95, 0.90)
    sweep_step: int = 5
    bin_width: int = 15
    exact_cap: int = DEFAULT_EXACT_CAP
    budget: int = DEFAULT_BUDGET
    small_cutoff: int = 10
    large_cutoff: int = 350
    seed: int = 0

    def __post_init__(self):
        self.thresholds = tuple(float(t) for t in self.thresholds)
        if not self.thresholds:
            raise ValueError("at least one cover threshold is required")
        for t in self.thresholds:
            if not 0 < t <= 1:
                raise ValueError(f"threshold {t} must lie in (0, 1]")
        if self.bin_width < 1:
            raise ValueError("bin_width must be >= 1")
        if self.sweep_step <= 0 or 100 % self.sweep_step:
            raise ValueError("sweep_step must be a positive divisor of 100")
        if self.exact_cap < 0 or self.budget < 1:
            raise ValueError("exact_cap must be >= 0 and budget >= 1")
        if self.small_cutoff <= 0 or self.large_cutoff <= 0:
            raise ValueError("cutoffs must be positive")


@dataclass
class ReportBundle:
    config: RunConfig
    corpus: Corpus
    diagnostics: corpus_mod.MatchDiagnostics
    summary: dict = field(default_factory=dict)
    files: dict[str, str] = field(default_factory=dict)

    def write(self, out_dir: str | Path | None = None) -> list[Path]:
        out = Path(out_dir or self.config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        paths = []
        for name in sorted(self.files):
            p = out / name
            p.write_text(self.files[name], encoding="utf-8")
            paths.append(p)
        return paths


def render_csv(rows: Sequence[dict], columns: Sequence[str] | None = None) -> str:
    buf = io.StringIO()
    cols = list(columns or (rows[0].keys() if rows else []))
    w = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n", extrasaction="ignore")
    w.writeheader()
    for row in rows:
        w.writerow({k: _cell(row.get(k)) for k in cols})
    return buf.getvalue()


def _cell(v):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return "" if v is None else v


def render_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def load_corpus(config: RunConfig):
    for p in (config.input_a, config.input_b):
        if not Path(p).is_file():
            raise InputMissingError(f"input file not found: {p}")
    raw_a = corpus_mod.read_journal_table(config.input_a, "a")
    raw_b = corpus_mod.read_journal_table(config.input_b, "b")
    act_a, off_a = corpus_mod.filter_active(raw_a)
    act_b, off_b = corpus_mod.filter_active(raw_b)
    matches, diag = corpus_mod.match_journals(act_a, act_b)
    diag.inactive = off_a + off_b
    corp = corpus_mod.build_corpus(matches)
    totals = {"a": len(raw_a), "b": len(raw_b), "active_a": len(act_a), "active_b": len(act_b)}
    return corp, diag, totals


def table1(corp: Corpus, totals: dict) -> list[dict]:
    rows = []
    for s in SYSTEMS:
        st = corpus_mod.corpus_stats(corp, s)
        rows.append({
            "system": s,
            "n_categories": st.n_categories,
            "total_journals": totals[s],
            "active_journals": totals[f"active_{s}"],
            "journals_analysed": st.n_journals,
            "journals_per_category_mean": st.journals_per_category_mean,
            "journals_per_category_sd": st.journals_per_category_sd,
            "journals_per_category_median": st.journals_per_category_median,
            "categories_per_journal_mean": st.categories_per_journal_mean,
            "categories_per_journal_sd": st.categories_per_journal_sd,
            "categories_per_journal_median": st.categories_per_journal_median,
        })
    return rows


def _maybe(fn, *args):
    try:
        return fn(*args)
    except (UndefinedCorrelationError, DegenerateTestError, ValueError) as exc:
        log.warning("%s skipped: %s", getattr(fn, "__name__", fn), exc)
        return {"error": str(exc)}


def _pearson_dict(x, y):
    r, p = pearson(x, y)
    return {"r": r, "p": p, "n": len(x)}


def _wilcoxon_dict(pairs):
    w = wilcoxon_signed_rank(pairs)
    return asdict(w)


def run_pipeline(config: RunConfig, sections: Sequence[str] = SECTIONS) -> ReportBundle:
    """Compute the requested sections and return the rendered bundle (not yet written)."""
    unknown = set(sections) - set(SECTIONS)
    if unknown:
        raise ValueError(f"unknown sections {sorted(unknown)}")
    corp, diag, totals = load_corpus(config)
    cfg = asdict(config)
    cfg["thresholds"] = list(config.thresholds)
    del cfg["out_dir"]  # keeps bundles byte-identical wherever they are written
    bundle = ReportBundle(config, corp, diag)
    files = bundle.files
    t1 = table1(corp, totals)
    summary = {
        "config": cfg,
        "match": diag.to_dict(),
        "unscored_excluded": len(corp.unscored),
        "table1": t1,
    }
    files["table1.csv"] = render_csv(t1)
    files["match_diagnostics.csv"] = render_csv(
        diag.rows() + [_unscored_row(m) for m in corp.unscored],
        ["system", "line", "name", "issn", "eissn", "reason"],
    )

    if "stats" in sections:
        summary["stats"] = _stats_section(corp, config, files)
    if "relations" in sections:
        summary["relations"] = _relations_section(corp, files)
    if "sweep" in sections:
        summary["sweep"] = _sweep_section(corp, config, files)
    if "cover" in sections:
        summary["cover"] = _cover_section(corp, config, files)

    summary["files"] = sorted([*files, "summary.json"])
    files["summary.json"] = render_json(summary)
    bundle.summary = summary
    return bundle


def _unscored_row(m: corpus_mod.MatchedJournal) -> dict:
    missing = "".join(s for s in SYSTEMS if m.record(s).score is None)
    return {
        "system": "ab",
        "line": "",
        "name": m.record_a.name,
        "issn": m.record_a.raw_issn or "",
        "eissn": m.record_a.raw_eissn or "",
        "reason": f"unscored in {missing}",
    }


def _stats_section(corp: Corpus, config: RunConfig, files: dict) -> dict:
    out = {}
    per_journal_counts = {s: corp.categories_per_journal(s) for s in SYSTEMS}
    extremes = []
    for s in SYSTEMS:
        cats = corp.categories(s)
        files[f"journals_per_category_hist_{s}.csv"] = render_csv(
            [{"bin_start": b, "bin_end": b + config.bin_width, "categories": n}
             for b, n in histogram([c.size for c in cats], config.bin_width)],
            ["bin_start", "bin_end", "categories"],
        )
        files[f"categories_per_journal_{s}.csv"] = render_csv(
            [{"categories": b, "journals": n}
             for b, n in histogram(list(per_journal_counts[s].values()), 1) if b > 0],
            ["categories", "journals"],
        )
        files[f"category_sizes_{s}.csv"] = render_csv(
            [{"category": c.name, "journals": c.size} for c in cats], ["category", "journals"]
        )
        small, large = size_extremes(cats, config.small_cutoff, config.large_cutoff)
        extremes += [{"system": s, "kind": "small", "category": n, "journals": k} for n, k in small]
        extremes += [{"system": s, "kind": "large", "category": n, "journals": k} for n, k in large]

        buckets = score_buckets(corp, s)
        files[f"score_buckets_{s}.csv"] = render_csv([asdict(b) for b in buckets])

        disp = journal_dispersions(corp, s)
        files[f"dispersion_{s}.csv"] = render_csv(
            [asdict(d) for d in disp], ["journal", "category_count", "mm", "var", "mean_percentile"]
        )
        files[f"dispersion_summary_{s}.csv"] = render_csv(dispersion_buckets(disp))
        counts = [d.category_count for d in disp]
        out[f"pearson_mm_{s}"] = _maybe(_pearson_dict, counts, [d.mm for d in disp])
        out[f"pearson_var_{s}"] = _maybe(_pearson_dict, counts, [d.var for d in disp])
    files["size_extremes.csv"] = render_csv(extremes, ["system", "kind", "category", "journals"])
    pairs = [(per_journal_counts["a"][j], per_journal_counts["b"][j]) for j in sorted(corp.journal_ids)]
    out["wilcoxon_categories_per_journal"] = _maybe(_wilcoxon_dict, pairs)
    out["n_small"] = {s: sum(1 for e in extremes if e["system"] == s and e["kind"] == "small") for s in SYSTEMS}
    out["n_large"] = {s: sum(1 for e in extremes if e["system"] == s and e["kind"] == "large") for s in SYSTEMS}
    return out


def _relations_section(corp: Corpus, files: dict) -> dict:
    out = {}
    for s in SYSTEMS:
        rep = relate(corp.categories(s), corp.categories(s), same_system=True)
        files[f"relations_intra_{s}.json"] = render_json(rep.to_dict())
        files[f"intersection_counts_{s}.csv"] = render_csv(
            [{"category": r[1], "journals": rep.sizes[r], "intersecting": n}
             for r, n in sorted(rep.intersect_counts.items())],
            ["category", "journals", "intersecting"],
        )
        out[f"intra_{s}"] = rep.summary()
    for src, dst in (("a", "b"), ("b", "a")):
        rep = relate(corp.categories(src), corp.categories(dst), same_system=False)
        files[f"relations_inter_{src}_{dst}.json"] = render_json(rep.to_dict())
        out[f"inter_{src}_{dst}"] = rep.summary()
    return out


def _sweep_section(corp: Corpus, config: RunConfig, files: dict) -> dict:
    out = {}
    rows = []
    for src, dst in (("a", "b"), ("b", "a")):
        curve = similarity_sweep(corp.categories(src), corp.categories(dst), config.sweep_step)
        rows += [{"source": src, "target": dst, "threshold": t, "fraction": f} for t, f in curve]
        out[f"{src}_to_{dst}"] = [[t, f] for t, f in curve]
    files["similarity_sweep.csv"] = render_csv(rows, ["source", "target", "threshold", "fraction"])
    return out


SURVEY_COLUMNS = (
    "category", "system", "mode", "threshold", "feasible", "cover_size",
    "covered", "target_size", "method", "optimal",
)


def _cover_section(corp: Corpus, config: RunConfig, files: dict) -> dict:
    rows, meta_rows, summaries = [], [], {}
    for mode in MODES:
        for t in config.thresholds:
            results = cover_survey(corp, mode, t, config.exact_cap, config.budget)
            for cat, res in results:
                rows.append({
                    "category": cat.name, "system": cat.system_id, "mode": mode, "threshold": t,
                    "feasible": res.feasible, "cover_size": res.size, "covered": res.covered,
                    "target_size": res.target_size, "method": res.method, "optimal": res.optimal,
                })
            summaries[f"{mode}@{t!r}"] = summarize_survey(results)
    for direction in ("a_by_b", "b_by_a"):
        for t in config.thresholds:
            res = meta_cover(corp, direction, t, config.exact_cap, config.budget)
            meta_rows.append({
                "direction": direction, "threshold": t, "feasible": res.feasible,
                "cover_size": res.size, "covering_system_categories": len(corp.categories(direction[-1])),
                "covered": res.covered, "target_size": res.target_size,
                "method": res.method, "optimal": res.optimal,
            })
    files["cover_survey.csv"] = render_csv(rows, SURVEY_COLUMNS)
    files["meta_cover.csv"] = render_csv(meta_rows)
    return {"surveys": summaries, "meta": meta_rows}
