"""Experiment drivers: the artificial-language grid sweep, per-config
aggregation, the factor regression, corpus correlation runs and
problematic-pair extraction.

Every run of the sweep derives its own seeds from
``(master_seed, purpose tag, grid levels, run index)``, so grid points and
runs are independent work units and results do not depend on the worker
count.
"""

from __future__ import annotations

import csv
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.stats import rankdata

from .langgen import LanguageSpec, generate_language, generate_random_baseline
from .metrics import (
    DistanceMatrix,
    cosine_matrix,
    euclidean_matrix,
    hamming_matrix,
    levenshtein_matrix,
    pairwise_matrix,
)
from .stats import MantelConfig, MantelResult, OLSFit, dummy_code, mantel, ols_fit
from .trees import ted, ted_normalized

__all__ = [
    "SweepConfig",
    "RunRecord",
    "ConfigSummary",
    "RankedPair",
    "run_artificial_sweep",
    "aggregate_runs",
    "fit_factor_model",
    "mfc_for_corpus",
    "problematic_pairs",
    "marginal_quartiles",
    "write_runs_csv",
    "write_summary_csv",
]

BASELINE_KINDS = ("fixed-length", "variable-length")

MEANING_METRICS = {"cosine": cosine_matrix, "euclidean": euclidean_matrix}
FORM_METRICS = {
    "levenshtein": lambda msgs: levenshtein_matrix(msgs, normalized=False),
    "levenshtein-norm": lambda msgs: levenshtein_matrix(msgs, normalized=True),
    "ted": lambda trees: pairwise_matrix(trees, ted),
    "ted-norm": lambda trees: pairwise_matrix(trees, ted_normalized),
}


@dataclass(frozen=True)
class SweepConfig:
    h_values: tuple[int, ...] = (1, 2, 3, 4, 5)
    s_values: tuple[int, ...] = (1, 2, 3)
    u_values: tuple[int, ...] = (0, 1, 2, 3)
    p_values: tuple[int, ...] = (1, 2, 3)
    k: int = 5
    runs_per_config: int = 50
    include_baselines: bool = True
    mantel: MantelConfig = field(default_factory=lambda: MantelConfig(method="spearman"))
    master_seed: int = 20200331

    def __post_init__(self) -> None:
        for name in ("h_values", "s_values", "u_values", "p_values"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be non-empty")
        if self.runs_per_config < 1:
            raise ValueError("runs_per_config must be at least 1")

    def grid(self) -> list[tuple[int, int, int, int]]:
        return [
            (h, s, u, p)
            for h in self.h_values
            for s in self.s_values
            for u in self.u_values
            for p in self.p_values
        ]


@dataclass(frozen=True)
class RunRecord:
    config: str
    levels: tuple[int, int, int, int] | None
    run: int
    n_items: int
    r: float | None
    p_value: float | None
    z_score: float | None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class ConfigSummary:
    config: str
    levels: tuple[int, int, int, int] | None
    runs: tuple[RunRecord, ...]
    mean_r: float
    mean_p: float
    quartiles: tuple[float, float, float]
    significant: bool
    n_failed: int


@dataclass(frozen=True)
class RankedPair:
    index_a: int
    index_b: int
    meaning_rank: float
    form_rank: float
    rank_gap: float


def _derive_seed(*parts: int) -> int:
    return int(np.random.SeedSequence(entropy=tuple(int(p) for p in parts)).generate_state(1, np.uint64)[0])


def _grid_label(levels: tuple[int, int, int, int]) -> str:
    h, s, u, p = levels
    return f"h{h}_s{s}_u{u}_p{p}"


def _run_grid_point(
    cfg: SweepConfig, levels: tuple[int, int, int, int], run: int
) -> RunRecord:
    h, s, u, p = levels
    label = _grid_label(levels)
    spec = LanguageSpec(
        k=cfg.k, h=h, s=s, u=u, p=p,
        seed=_derive_seed(cfg.master_seed, 0, h, s, u, p, run),
    )
    language = generate_language(spec)
    mantel_cfg = MantelConfig(
        method=cfg.mantel.method,
        n_permutations=cfg.mantel.n_permutations,
        alternative=cfg.mantel.alternative,
        alpha=cfg.mantel.alpha,
        seed=_derive_seed(cfg.master_seed, 1, h, s, u, p, run),
    )
    return _mantel_record(label, levels, run, language, mantel_cfg)


def _run_baseline(cfg: SweepConfig, kind_index: int, run: int) -> RunRecord:
    kind = BASELINE_KINDS[kind_index]
    label = f"baseline_{kind}"
    language = generate_random_baseline(
        kind, cfg.k, _derive_seed(cfg.master_seed, 2, kind_index, run)
    )
    mantel_cfg = MantelConfig(
        method=cfg.mantel.method,
        n_permutations=cfg.mantel.n_permutations,
        alternative=cfg.mantel.alternative,
        alpha=cfg.mantel.alpha,
        seed=_derive_seed(cfg.master_seed, 3, kind_index, run),
    )
    return _mantel_record(label, None, run, language, mantel_cfg)


def _mantel_record(label, levels, run, language, mantel_cfg) -> RunRecord:
    n_items = len(language.pairs)
    try:
        dm_meaning = hamming_matrix(language.meanings)
        dm_form = levenshtein_matrix(language.messages, normalized=True)
        result = mantel(dm_meaning, dm_form, mantel_cfg)
    except ValueError as exc:
        return RunRecord(
            config=label, levels=levels, run=run, n_items=n_items,
            r=None, p_value=None, z_score=None, error=str(exc),
        )
    return RunRecord(
        config=label, levels=levels, run=run, n_items=n_items,
        r=result.r, p_value=result.p_value, z_score=result.z_score,
    )


def aggregate_runs(records: Sequence[RunRecord], alpha: float) -> ConfigSummary:
    """Means and r-quartiles over the successful runs of one configuration.

    Failed runs are excluded from the statistics but kept in the record list;
    a configuration with no successful run is never significant.
    """
    if not records:
        raise ValueError("no runs to aggregate")
    ok = [rec for rec in records if rec.ok]
    n_failed = len(records) - len(ok)
    if ok:
        rs = np.array([rec.r for rec in ok])
        ps = np.array([rec.p_value for rec in ok])
        mean_r = float(rs.mean())
        mean_p = float(ps.mean())
        q1, q2, q3 = (float(q) for q in np.percentile(rs, [25, 50, 75]))
        significant = mean_p < alpha
    else:
        mean_r = mean_p = float("nan")
        q1 = q2 = q3 = float("nan")
        significant = False
    first = records[0]
    return ConfigSummary(
        config=first.config,
        levels=first.levels,
        runs=tuple(records),
        mean_r=mean_r,
        mean_p=mean_p,
        quartiles=(q1, q2, q3),
        significant=significant,
        n_failed=n_failed,
    )


def run_artificial_sweep(
    cfg: SweepConfig,
    workers: int = 1,
    progress: Callable[[int, int], None] | None = None,
) -> list[ConfigSummary]:
    """Run the full grid (plus baselines) and aggregate each configuration.

    ``workers`` only controls parallelism; results are identical for any
    worker count.
    """
    tasks: list[tuple] = []
    for levels in cfg.grid():
        for run in range(cfg.runs_per_config):
            tasks.append(("grid", levels, run))
    if cfg.include_baselines:
        for kind_index in range(len(BASELINE_KINDS)):
            for run in range(cfg.runs_per_config):
                tasks.append(("baseline", kind_index, run))

    def execute(task) -> RunRecord:
        kind, key, run = task
        if kind == "grid":
            return _run_grid_point(cfg, key, run)
        return _run_baseline(cfg, key, run)

    records: list[RunRecord | None] = [None] * len(tasks)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for i, rec in enumerate(pool.map(execute, tasks)):
                records[i] = rec
                if progress:
                    progress(i + 1, len(tasks))
    else:
        for i, task in enumerate(tasks):
            records[i] = execute(task)
            if progress:
                progress(i + 1, len(tasks))

    by_config: dict[str, list[RunRecord]] = {}
    order: list[str] = []
    for rec in records:
        assert rec is not None
        if rec.config not in by_config:
            order.append(rec.config)
        by_config.setdefault(rec.config, []).append(rec)
    return [aggregate_runs(by_config[label], cfg.mantel.alpha) for label in order]


def fit_factor_model(summaries: Sequence[ConfigSummary]) -> OLSFit:
    """Dummy-coded OLS of per-run correlation on the four grid factors.

    Baselines and failed runs are excluded; the reference cell is
    ``h=1, s=1, u=0, p=1``.
    """
    rows: list[tuple[int, int, int, int]] = []
    responses: list[float] = []
    for summary in summaries:
        if summary.levels is None:
            continue
        for rec in summary.runs:
            if rec.ok:
                rows.append(rec.levels)  # type: ignore[arg-type]
                responses.append(rec.r)  # type: ignore[arg-type]
    if not rows:
        raise ValueError("no successful grid runs to fit")
    # factors pinned to one level in a restricted sweep carry no information
    all_baselines = (1, 1, 0, 1)
    all_names = ["h", "s", "u", "p"]
    keep = [f for f in range(4) if len({row[f] for row in rows}) > 1]
    if not keep:
        raise ValueError("every factor is constant; nothing to fit")
    reduced = [tuple(row[f] for f in keep) for row in rows]
    design, names = dummy_code(
        reduced,
        baselines=tuple(all_baselines[f] for f in keep),
        factor_names=[all_names[f] for f in keep],
    )
    return ols_fit(design, responses, names)


def mfc_for_corpus(
    meaning_items: Sequence,
    form_items: Sequence,
    meaning_metric,
    form_metric,
    cfg: MantelConfig | None = None,
) -> MantelResult:
    """Meaning-form correlation of a corpus: build both condensed matrices
    and run the Mantel test.

    Metrics may be names (``cosine``/``euclidean`` for meanings,
    ``levenshtein``/``levenshtein-norm``/``ted``/``ted-norm`` for forms) or
    arbitrary two-argument callables.
    """
    if len(meaning_items) != len(form_items):
        raise ValueError(
            f"item counts differ: {len(meaning_items)} meanings vs {len(form_items)} forms"
        )
    dm_meaning = _build_matrix(meaning_items, meaning_metric, MEANING_METRICS)
    dm_form = _build_matrix(form_items, form_metric, FORM_METRICS)
    return mantel(dm_meaning, dm_form, cfg)


def _build_matrix(items, metric, registry) -> DistanceMatrix:
    if isinstance(metric, str):
        if metric not in registry:
            raise ValueError(f"unknown metric {metric!r}; expected one of {sorted(registry)}")
        if metric in ("cosine", "euclidean"):
            return registry[metric](np.asarray(items, dtype=float))
        return registry[metric](items)
    return pairwise_matrix(items, metric)


def problematic_pairs(
    dm_meaning: DistanceMatrix, dm_form: DistanceMatrix, k: int = 100
) -> list[RankedPair]:
    """Item pairs whose meaning- and form-distance ranks disagree the most.

    Both condensed vectors are converted to average ranks; the top ``k``
    pairs by absolute rank difference are returned, largest gap first, ties
    broken by ascending pair indices.
    """
    if dm_meaning.n != dm_form.n:
        raise ValueError(f"matrix sizes differ: {dm_meaning.n} vs {dm_form.n}")
    n_pairs = dm_meaning.values.shape[0]
    if k > n_pairs:
        raise ValueError(f"k={k} exceeds the {n_pairs} available pairs")
    meaning_ranks = rankdata(dm_meaning.values)
    form_ranks = rankdata(dm_form.values)
    gaps = np.abs(meaning_ranks - form_ranks)

    n = dm_meaning.n
    iu0, iu1 = np.triu_indices(n, 1)
    order = sorted(range(n_pairs), key=lambda t: (-gaps[t], iu0[t], iu1[t]))
    return [
        RankedPair(
            index_a=int(iu0[t]),
            index_b=int(iu1[t]),
            meaning_rank=float(meaning_ranks[t]),
            form_rank=float(form_ranks[t]),
            rank_gap=float(gaps[t]),
        )
        for t in order[:k]
    ]


def marginal_quartiles(
    summaries: Sequence[ConfigSummary],
    factor: str,
    significant_only: bool = True,
) -> dict[int, tuple[float, float, float]]:
    """Quartiles of per-config mean correlation, pooled by one factor's level.

    Levels with no contributing configuration are omitted (this is what makes
    a fully holistic level disappear when nothing there is significant).
    """
    index = {"h": 0, "s": 1, "u": 2, "p": 3}[factor]
    pooled: dict[int, list[float]] = {}
    for summary in summaries:
        if summary.levels is None:
            continue
        if significant_only and not summary.significant:
            continue
        if np.isnan(summary.mean_r):
            continue
        pooled.setdefault(summary.levels[index], []).append(summary.mean_r)
    return {
        level: tuple(float(q) for q in np.percentile(values, [25, 50, 75]))
        for level, values in sorted(pooled.items())
    }


def write_runs_csv(summaries: Sequence[ConfigSummary], path) -> None:
    """Long-format CSV: one row per (configuration, run)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["config", "h", "s", "u", "p", "run", "n_items", "r", "p_value", "z_score", "error"])
        for summary in summaries:
            for rec in summary.runs:
                levels = rec.levels if rec.levels is not None else ("", "", "", "")
                writer.writerow([
                    rec.config, *levels, rec.run, rec.n_items,
                    "" if rec.r is None else repr(rec.r),
                    "" if rec.p_value is None else repr(rec.p_value),
                    "" if rec.z_score is None else repr(rec.z_score),
                    rec.error or "",
                ])


def write_summary_csv(summaries: Sequence[ConfigSummary], path) -> None:
    """One row per configuration with means, quartiles and significance."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([
            "config", "h", "s", "u", "p", "n_runs", "n_failed",
            "mean_r", "mean_p", "q1", "q2", "q3", "significant",
        ])
        for summary in summaries:
            levels = summary.levels if summary.levels is not None else ("", "", "", "")
            writer.writerow([
                summary.config, *levels, len(summary.runs), summary.n_failed,
                repr(summary.mean_r), repr(summary.mean_p),
                repr(summary.quartiles[0]), repr(summary.quartiles[1]), repr(summary.quartiles[2]),
                int(summary.significant),
            ])
