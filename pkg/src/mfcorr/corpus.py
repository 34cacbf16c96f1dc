"""Natural-language ingestion: definition/sentence files, embedding tables,
rating benchmarks, and the control transformations (synonym mapping,
stop-word removal, paraphrase-friendly sampling).

File formats (all UTF-8):

* definitions: TSV ``definiendum<TAB>gloss[<TAB>bracketed parse]``
* stop list: one token per line
* synonym lexicon: TSV ``token<TAB>canonical``
* ratings: TSV ``item_a<TAB>item_b<TAB>score``
* embeddings: optional ``<count> <dim>`` first line, then
  ``token v1 v2 ... vdim`` per line
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import rankdata

from .metrics import cosine_distance, euclidean_distance
from .trees import ParseTree, parse_bracketed

__all__ = [
    "DefinitionEntry",
    "EmbeddingTable",
    "RatedPair",
    "ControlConfig",
    "load_definitions",
    "sample_definitions",
    "load_embeddings",
    "load_stoplist",
    "load_synonym_map",
    "load_ratings",
    "remove_stopwords",
    "apply_synonym_map",
    "apply_controls",
    "eval_embedding_benchmark",
    "BenchmarkResult",
    "meaning_vectors_for_definitions",
]

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class DefinitionEntry:
    definiendum: str
    gloss: tuple[str, ...]
    parse: ParseTree | None = None

    def __post_init__(self) -> None:
        if not self.gloss:
            raise ValueError("gloss must be non-empty")
        if not self.definiendum or any(ch.isspace() for ch in self.definiendum):
            raise ValueError(f"definiendum must be a single token, got {self.definiendum!r}")


@dataclass(frozen=True)
class EmbeddingTable:
    dimension: int
    vectors: dict[str, np.ndarray]

    def __contains__(self, token: str) -> bool:
        return token in self.vectors

    def __len__(self) -> int:
        return len(self.vectors)

    def get(self, token: str) -> np.ndarray | None:
        return self.vectors.get(token)


@dataclass(frozen=True)
class RatedPair:
    item_a: str
    item_b: str
    human_score: float

    def __post_init__(self) -> None:
        if not np.isfinite(self.human_score):
            raise ValueError("human score must be finite")


@dataclass(frozen=True)
class ControlConfig:
    """Which control transformations an ingest pass applies.

    Enabled controls run in fixed order: synonym map first, then stop-word
    removal. Paraphrase sampling is a sampling-stage flag (multiple glosses
    per definiendum allowed), not a token transform.
    """

    stoplist: frozenset[str] | None = None
    synonym_map: dict[str, str] | None = None
    paraphrase_sampling: bool = False


def load_definitions(path, frequency_filter: set[str] | None = None) -> list[DefinitionEntry]:
    """Read a definitions TSV, optionally keeping only allowlisted definienda."""
    entries: list[DefinitionEntry] = []
    with open(path, encoding="utf-8") as fh:
        lineno = 0
        for line in fh:
            lineno += 1
            line = line.rstrip("\n")
            if not line.strip():
                continue
            cells = line.split("\t")
            if len(cells) not in (2, 3):
                raise ValueError(f"{path}:{lineno}: expected 2 or 3 tab-separated fields")
            definiendum = cells[0].strip()
            gloss = tuple(cells[1].split())
            if not definiendum:
                raise ValueError(f"{path}:{lineno}: empty definiendum")
            if not gloss:
                raise ValueError(f"{path}:{lineno}: empty gloss")
            parse = None
            if len(cells) == 3 and cells[2].strip():
                try:
                    parse = parse_bracketed(cells[2])
                except ValueError as exc:
                    raise ValueError(f"{path}:{lineno}: bad parse tree: {exc}") from exc
            if frequency_filter is not None and definiendum not in frequency_filter:
                continue
            entries.append(DefinitionEntry(definiendum=definiendum, gloss=gloss, parse=parse))
    if not entries:
        raise ValueError(f"{path}: no definitions loaded")
    return entries


def sample_definitions(
    entries: Sequence[DefinitionEntry],
    n: int,
    one_per_definiendum: bool,
    seed: int,
) -> list[DefinitionEntry]:
    """Uniform sample of ``n`` definitions without replacement.

    With ``one_per_definiendum`` set, one gloss is first chosen uniformly per
    definiendum and the sample is drawn from those representatives.
    """
    rng = np.random.default_rng(seed)
    pool: list[DefinitionEntry]
    if one_per_definiendum:
        by_word: dict[str, list[DefinitionEntry]] = {}
        for entry in entries:
            by_word.setdefault(entry.definiendum, []).append(entry)
        pool = [group[rng.integers(len(group))] for _, group in sorted(by_word.items())]
    else:
        pool = list(entries)
    if n > len(pool):
        raise ValueError(f"cannot sample {n} from {len(pool)} candidates")
    chosen = rng.choice(len(pool), size=n, replace=False)
    return [pool[i] for i in sorted(chosen)]


def load_embeddings(path) -> EmbeddingTable:
    """Read a whitespace-separated embedding table.

    A first line of two integers is treated as a ``<count> <dim>`` header;
    a count that disagrees with the body is only warned about.
    """
    vectors: dict[str, np.ndarray] = {}
    dimension: int | None = None
    declared_count: int | None = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            parts = line.split()
            if not parts:
                continue
            if lineno == 1 and len(parts) == 2:
                try:
                    declared_count, dimension = int(parts[0]), int(parts[1])
                    continue
                except ValueError:
                    pass  # not a header line after all
            token, fields = parts[0], parts[1:]
            if dimension is None:
                dimension = len(fields)
                if dimension == 0:
                    raise ValueError(f"{path}:{lineno}: no vector components")
            if len(fields) != dimension:
                raise ValueError(
                    f"{path}:{lineno}: expected {dimension} components, got {len(fields)}"
                )
            if token in vectors:
                raise ValueError(f"{path}:{lineno}: duplicate token {token!r}")
            try:
                vectors[token] = np.array([float(v) for v in fields])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: non-numeric field: {exc}") from exc
    if not vectors or dimension is None:
        raise ValueError(f"{path}: no vectors loaded")
    if declared_count is not None and declared_count != len(vectors):
        log.warning(
            "%s: header declares %d vectors but body has %d; using the body",
            path, declared_count, len(vectors),
        )
    return EmbeddingTable(dimension=dimension, vectors=vectors)


def load_stoplist(path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        tokens = {line.strip().lower() for line in fh if line.strip()}
    return frozenset(tokens)


def load_synonym_map(path) -> dict[str, str]:
    mapping: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            cells = line.split("\t")
            if len(cells) != 2 or not cells[0].strip() or not cells[1].strip():
                raise ValueError(f"{path}:{lineno}: expected token<TAB>canonical")
            mapping[cells[0].strip().lower()] = cells[1].strip()
    return mapping


def load_ratings(path) -> list[RatedPair]:
    pairs: list[RatedPair] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            cells = line.split("\t")
            if len(cells) != 3:
                raise ValueError(f"{path}:{lineno}: expected item_a<TAB>item_b<TAB>score")
            try:
                score = float(cells[2])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: bad score: {exc}") from exc
            pairs.append(RatedPair(item_a=cells[0], item_b=cells[1], human_score=score))
    if not pairs:
        raise ValueError(f"{path}: no rated pairs loaded")
    return pairs


def remove_stopwords(tokens: Iterable[str], stoplist: frozenset[str]) -> list[str]:
    """Drop stop-listed tokens, matching case-insensitively.

    May return an empty list; callers decide whether to drop such items.
    """
    return [tok for tok in tokens if tok.lower() not in stoplist]


def apply_synonym_map(tokens: Iterable[str], lexicon: dict[str, str]) -> list[str]:
    """Replace each token by its canonical form where the lexicon has one."""
    return [lexicon.get(tok.lower(), tok) for tok in tokens]


def apply_controls(tokens: Sequence[str], config: ControlConfig) -> list[str]:
    """Run the enabled token transforms in their fixed order."""
    out = list(tokens)
    if config.synonym_map is not None:
        out = apply_synonym_map(out, config.synonym_map)
    if config.stoplist is not None:
        out = remove_stopwords(out, config.stoplist)
    return out


@dataclass(frozen=True)
class BenchmarkResult:
    spearman_rho: float
    n_covered: int
    n_skipped: int


def eval_embedding_benchmark(
    table: EmbeddingTable, pairs: Sequence[RatedPair], metric: str = "cosine"
) -> BenchmarkResult:
    """Spearman correlation of vector distances against human similarity.

    Pairs with out-of-vocabulary items are skipped and counted. Sensible
    embeddings anti-correlate: high human similarity, low distance.
    """
    if metric not in ("cosine", "euclidean"):
        raise ValueError(f"unknown metric {metric!r}")
    dist = cosine_distance if metric == "cosine" else euclidean_distance
    distances, scores = [], []
    skipped = 0
    for pair in pairs:
        va, vb = table.get(pair.item_a), table.get(pair.item_b)
        if va is None or vb is None:
            skipped += 1
            continue
        distances.append(dist(va, vb))
        scores.append(pair.human_score)
    if len(distances) < 3:
        raise ValueError(f"only {len(distances)} rated pairs covered by the table")
    ranked_d = rankdata(distances)
    ranked_s = rankdata(scores)
    dm = ranked_d - ranked_d.mean()
    sm = ranked_s - ranked_s.mean()
    denom = np.linalg.norm(dm) * np.linalg.norm(sm)
    if denom == 0:
        raise ValueError("constant distances or scores: correlation undefined")
    rho = float(np.clip(dm @ sm / denom, -1.0, 1.0))
    return BenchmarkResult(spearman_rho=rho, n_covered=len(distances), n_skipped=skipped)


def meaning_vectors_for_definitions(
    entries: Sequence[DefinitionEntry], table: EmbeddingTable
) -> tuple[list[tuple[DefinitionEntry, np.ndarray]], int]:
    """Pair each definition with its definiendum's embedding.

    Entries whose definiendum is out of vocabulary are dropped; the drop
    count is returned alongside.
    """
    if len(table) == 0:
        raise ValueError("empty embedding table")
    kept: list[tuple[DefinitionEntry, np.ndarray]] = []
    dropped = 0
    for entry in entries:
        vec = table.get(entry.definiendum)
        if vec is None:
            dropped += 1
            continue
        kept.append((entry, vec))
    if not kept:
        raise ValueError("every definiendum is out of vocabulary")
    if dropped:
        log.info("dropped %d definitions with out-of-vocabulary definienda", dropped)
    return kept, dropped
