"""Command-line front end.

Every command writes a ``manifest.json`` next to its outputs; ``mfcorr
replay <manifest>`` re-executes the recorded command and reproduces the
result files byte for byte. Exit codes: 0 success, 1 runtime failure,
2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import statistics
import sys
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from .experiments import (
    FORM_METRICS,
    MEANING_METRICS,
    SweepConfig,
    fit_factor_model,
    mfc_for_corpus,
    problematic_pairs,
    run_artificial_sweep,
    write_runs_csv,
    write_summary_csv,
)
from .metrics import DistanceMatrix
from .stats import MantelConfig

SCHEMA_VERSION = 1
THREADS_ENV = "MFCORR_THREADS"


class UsageError(Exception):
    pass


def _default_threads() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise UsageError(f"{THREADS_ENV} must be an integer, got {env!r}")
    return os.cpu_count() or 1


def _parse_grid(tokens: list[str]) -> dict[str, tuple[int, ...]]:
    grid: dict[str, tuple[int, ...]] = {}
    for token in tokens:
        if "=" not in token:
            raise UsageError(f"bad grid token {token!r}; expected name=v1,v2,...")
        name, _, values = token.partition("=")
        if name not in ("h", "s", "u", "p"):
            raise UsageError(f"unknown grid factor {name!r}")
        try:
            grid[name] = tuple(int(v) for v in values.split(","))
        except ValueError:
            raise UsageError(f"bad grid values in {token!r}")
    return grid


def _write_manifest(outdir: Path, command: str, params: dict) -> None:
    manifest = {"schema_version": SCHEMA_VERSION, "command": command, "params": params}
    (outdir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def cmd_sweep(args) -> int:
    if args.runs < 1:
        raise UsageError("--runs must be at least 1")
    if args.permutations < 99:
        raise UsageError("--permutations must be at least 99")
    params = {
        "grid": args.grid or [],
        "runs": args.runs,
        "permutations": args.permutations,
        "method": args.method,
        "alternative": args.alternative,
        "alpha": args.alpha,
        "seed": args.seed,
        "baselines": not args.no_baselines,
        "threads": args.threads,
    }
    return _execute_sweep(params, Path(args.out))


def _execute_sweep(params: dict, outdir: Path) -> int:
    grid = _parse_grid(params["grid"])
    cfg = SweepConfig(
        h_values=grid.get("h", (1, 2, 3, 4, 5)),
        s_values=grid.get("s", (1, 2, 3)),
        u_values=grid.get("u", (0, 1, 2, 3)),
        p_values=grid.get("p", (1, 2, 3)),
        runs_per_config=params["runs"],
        include_baselines=params["baselines"],
        mantel=MantelConfig(
            method=params["method"],
            n_permutations=params["permutations"],
            alternative=params["alternative"],
            alpha=params["alpha"],
        ),
        master_seed=params["seed"],
    )
    outdir.mkdir(parents=True, exist_ok=True)
    threads = params.get("threads") or 1
    summaries = run_artificial_sweep(cfg, workers=threads)
    write_runs_csv(summaries, outdir / "runs.csv")
    write_summary_csv(summaries, outdir / "summary.csv")
    try:
        fit = fit_factor_model(summaries)
        fit.save_csv(outdir / "factor_model.csv")
    except ValueError as exc:
        print(f"factor model skipped: {exc}", file=sys.stderr)
    _write_manifest(outdir, "sweep", params)
    print(f"sweep complete: {len(summaries)} configurations -> {outdir}")
    return 0


def _load_corpus_items(params: dict):
    """Entries, meaning vectors and form items for an mfc run, pre-sampling."""
    source = params["definitions"] or params["sentences"]
    entries = corpus_mod.load_definitions(source)
    control = corpus_mod.ControlConfig(
        stoplist=corpus_mod.load_stoplist(params["stoplist"]) if "stopwords" in params["controls"] else None,
        synonym_map=corpus_mod.load_synonym_map(params["synonym_map"]) if "synonyms" in params["controls"] else None,
        paraphrase_sampling="paraphrases" in params["controls"],
    )
    table = corpus_mod.load_embeddings(params["embeddings"])
    return entries, control, table


def cmd_mfc(args) -> int:
    if bool(args.definitions) == bool(args.sentences):
        raise UsageError("exactly one of --definitions / --sentences is required")
    controls = args.control or []
    if "stopwords" in controls and args.form_metric.startswith("ted"):
        raise UsageError(
            "stop-word removal cannot be combined with tree distances: "
            "the stored parses no longer match the filtered tokens"
        )
    if "stopwords" in controls and not args.stoplist:
        raise UsageError("--control stopwords requires --stoplist")
    if "synonyms" in controls and not args.synonym_map:
        raise UsageError("--control synonyms requires --synonym-map")
    if "paraphrases" in controls and not args.sample_size:
        raise UsageError("--control paraphrases requires --sample-size")
    if args.repeats < 1:
        raise UsageError("--repeats must be at least 1")
    params = {
        "definitions": args.definitions,
        "sentences": args.sentences,
        "embeddings": args.embeddings,
        "meaning_metric": args.meaning_metric,
        "form_metric": args.form_metric,
        "controls": controls,
        "stoplist": args.stoplist,
        "synonym_map": args.synonym_map,
        "sample_size": args.sample_size,
        "repeats": args.repeats,
        "seed": args.seed,
        "permutations": args.permutations,
        "method": args.method,
    }
    return _execute_mfc(params, Path(args.out))


def _execute_mfc(params: dict, outdir: Path) -> int:
    entries, control, table = _load_corpus_items(params)
    outdir.mkdir(parents=True, exist_ok=True)
    results = []
    for repeat in range(params["repeats"]):
        seed = int(np.random.SeedSequence(entropy=(params["seed"], repeat)).generate_state(1, np.uint64)[0])
        if params["sample_size"]:
            sample = corpus_mod.sample_definitions(
                entries,
                n=params["sample_size"],
                one_per_definiendum=not control.paraphrase_sampling,
                seed=seed,
            )
        else:
            sample = list(entries)
        kept, _ = corpus_mod.meaning_vectors_for_definitions(sample, table)

        meanings = []
        forms = []
        for entry, vector in kept:
            tokens = corpus_mod.apply_controls(entry.gloss, control)
            if not tokens:
                continue
            if params["form_metric"].startswith("ted"):
                if entry.parse is None:
                    raise ValueError(f"no parse tree for {entry.definiendum!r}")
                forms.append(entry.parse)
            else:
                forms.append(tuple(tokens))
            meanings.append(vector)

        result = mfc_for_corpus(
            meanings, forms, params["meaning_metric"], params["form_metric"],
            MantelConfig(
                method=params["method"],
                n_permutations=params["permutations"],
                seed=seed,
            ),
        )
        results.append(result)
        path = outdir / f"result_{repeat + 1}.json"
        path.write_text(result.to_json() + "\n", encoding="utf-8")

    rs = [res.r for res in results]
    summary = {
        "repeats": params["repeats"],
        "mean_r": statistics.fmean(rs),
        "stdev_r": statistics.stdev(rs) if len(rs) > 1 else 0.0,
        "mean_p": statistics.fmean(res.p_value for res in results),
        "results": [res.to_dict() for res in results],
    }
    (outdir / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    _write_manifest(outdir, "mfc", params)
    print(f"mfc complete: mean r={summary['mean_r']:.6f} stdev={summary['stdev_r']:.6f} -> {outdir}")
    return 0


def cmd_eval_embeddings(args) -> int:
    params = {
        "embeddings": args.embeddings,
        "ratings": args.ratings,
        "metric": args.metric,
    }
    table = corpus_mod.load_embeddings(params["embeddings"])
    pairs = corpus_mod.load_ratings(params["ratings"])
    result = corpus_mod.eval_embedding_benchmark(table, pairs, metric=params["metric"])
    print(
        f"spearman_rho={result.spearman_rho:.6f} "
        f"covered={result.n_covered} skipped={result.n_skipped}"
    )
    if args.json:
        payload = {
            "spearman_rho": result.spearman_rho,
            "covered": result.n_covered,
            "skipped": result.n_skipped,
        }
        Path(args.json).write_text(json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8")
    return 0


def cmd_problem_pairs(args) -> int:
    matrix_route = bool(args.meaning_matrix or args.form_matrix)
    corpus_route = bool(args.definitions)
    if matrix_route == corpus_route:
        raise UsageError("provide either both matrix files or a corpus route")
    if matrix_route and not (args.meaning_matrix and args.form_matrix):
        raise UsageError("both --meaning-matrix and --form-matrix are required")
    if args.k < 1:
        raise UsageError("--k must be at least 1")

    texts: list[str] | None = None
    if matrix_route:
        dm_meaning = DistanceMatrix.load_csv(args.meaning_matrix)
        dm_form = DistanceMatrix.load_csv(args.form_matrix)
    else:
        if not args.embeddings:
            raise UsageError("corpus route requires --embeddings")
        entries = corpus_mod.load_definitions(args.definitions)
        table = corpus_mod.load_embeddings(args.embeddings)
        kept, _ = corpus_mod.meaning_vectors_for_definitions(entries, table)
        vectors = np.array([vec for _, vec in kept])
        glosses = [entry.gloss for entry, _ in kept]
        texts = [f"{entry.definiendum}: {' '.join(entry.gloss)}" for entry, _ in kept]
        dm_meaning = MEANING_METRICS[args.meaning_metric](vectors)
        dm_form = FORM_METRICS[args.form_metric](glosses)

    n_pairs = dm_meaning.n * (dm_meaning.n - 1) // 2
    if args.k > n_pairs:
        raise UsageError(f"--k {args.k} exceeds the {n_pairs} available pairs")
    ranked = problematic_pairs(dm_meaning, dm_form, k=args.k)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        header = ["index_a", "index_b", "meaning_rank", "form_rank", "rank_gap"]
        if texts is not None:
            header += ["text_a", "text_b"]
        writer.writerow(header)
        for pair in ranked:
            row = [
                pair.index_a, pair.index_b,
                repr(pair.meaning_rank), repr(pair.form_rank), repr(pair.rank_gap),
            ]
            if texts is not None:
                row += [texts[pair.index_a], texts[pair.index_b]]
            writer.writerow(row)
    print(f"wrote {len(ranked)} ranked pairs -> {out}")
    return 0


def cmd_replay(args) -> int:
    manifest = json.loads(Path(args.manifest).read_text(encoding="utf-8"))
    if manifest.get("schema_version") != SCHEMA_VERSION:
        raise UsageError(f"unsupported manifest schema: {manifest.get('schema_version')}")
    command = manifest["command"]
    params = manifest["params"]
    outdir = Path(args.out)
    if command == "sweep":
        return _execute_sweep(params, outdir)
    if command == "mfc":
        return _execute_mfc(params, outdir)
    raise UsageError(f"manifest command {command!r} cannot be replayed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mfcorr", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="artificial-language grid sweep")
    p_sweep.add_argument("--grid", nargs="+", metavar="F=V1,V2", help="factor levels, e.g. h=1,2 s=1")
    p_sweep.add_argument("--runs", type=int, default=50)
    p_sweep.add_argument("--permutations", type=int, default=9999)
    p_sweep.add_argument("--method", choices=["pearson", "spearman"], default="spearman")
    p_sweep.add_argument("--alternative", choices=["greater", "two-sided"], default="greater")
    p_sweep.add_argument("--alpha", type=float, default=0.05)
    p_sweep.add_argument("--seed", type=int, default=20200331)
    p_sweep.add_argument("--no-baselines", action="store_true")
    p_sweep.add_argument("--threads", type=int, default=None)
    p_sweep.add_argument("--out", required=True)
    p_sweep.set_defaults(func=cmd_sweep)

    p_mfc = sub.add_parser("mfc", help="meaning-form correlation of a corpus")
    p_mfc.add_argument("--definitions")
    p_mfc.add_argument("--sentences")
    p_mfc.add_argument("--embeddings", required=True)
    p_mfc.add_argument("--meaning-metric", choices=["cosine", "euclidean"], default="cosine")
    p_mfc.add_argument(
        "--form-metric",
        choices=["levenshtein", "levenshtein-norm", "ted", "ted-norm"],
        default="levenshtein",
    )
    p_mfc.add_argument("--control", action="append", choices=["stopwords", "synonyms", "paraphrases"])
    p_mfc.add_argument("--stoplist")
    p_mfc.add_argument("--synonym-map")
    p_mfc.add_argument("--sample-size", type=int, default=None)
    p_mfc.add_argument("--repeats", type=int, default=1)
    p_mfc.add_argument("--seed", type=int, default=0)
    p_mfc.add_argument("--permutations", type=int, default=9999)
    p_mfc.add_argument("--method", choices=["pearson", "spearman"], default="pearson")
    p_mfc.add_argument("--out", required=True)
    p_mfc.set_defaults(func=cmd_mfc)

    p_eval = sub.add_parser("eval-embeddings", help="check embeddings against human ratings")
    p_eval.add_argument("--embeddings", required=True)
    p_eval.add_argument("--ratings", required=True)
    p_eval.add_argument("--metric", choices=["cosine", "euclidean"], default="cosine")
    p_eval.add_argument("--json", help="also write the result to this JSON file")
    p_eval.set_defaults(func=cmd_eval_embeddings)

    p_pp = sub.add_parser("problem-pairs", help="pairs with maximal rank disagreement")
    p_pp.add_argument("--meaning-matrix")
    p_pp.add_argument("--form-matrix")
    p_pp.add_argument("--definitions")
    p_pp.add_argument("--embeddings")
    p_pp.add_argument("--meaning-metric", choices=["cosine", "euclidean"], default="cosine")
    p_pp.add_argument(
        "--form-metric",
        choices=["levenshtein", "levenshtein-norm", "ted", "ted-norm"],
        default="levenshtein",
    )
    p_pp.add_argument("--k", type=int, default=100)
    p_pp.add_argument("--out", required=True)
    p_pp.set_defaults(func=cmd_problem_pairs)

    p_replay = sub.add_parser("replay", help="re-run a command from its manifest")
    p_replay.add_argument("manifest")
    p_replay.add_argument("--out", required=True)
    p_replay.set_defaults(func=cmd_replay)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", None) is None and args.command == "sweep":
        try:
            args.threads = _default_threads()
        except UsageError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
