"""Meaning-form correlation toolkit.

Measures how strongly pairwise meaning distances correlate with pairwise
form distances over a set of utterances, via Mantel permutation tests.
Includes an artificial-language generator with controllable structural
confounds, string/tree/vector distance functions, a factor regression over
sweep results, and ingestion pipelines for dictionary-definition and
sentence corpora with precomputed embeddings.
"""

from .langgen import (
    BaselineSpec,
    Language,
    LanguageSpec,
    Lexicon,
    build_lexicon,
    enumerate_meanings,
    generate_language,
    generate_random_baseline,
)
from .metrics import (
    DistanceMatrix,
    cosine_distance,
    euclidean_distance,
    hamming,
    hamming_matrix,
    levenshtein,
    levenshtein_matrix,
    levenshtein_normalized,
    pairwise_matrix,
)
from .stats import (
    MantelConfig,
    MantelResult,
    OLSFit,
    dummy_code,
    mantel,
    ols_fit,
    pearson,
    spearman,
)
from .trees import ParseTree, parse_bracketed, ted, ted_normalized, tree_height, tree_size
from .experiments import (
    ConfigSummary,
    RankedPair,
    SweepConfig,
    aggregate_runs,
    fit_factor_model,
    marginal_quartiles,
    mfc_for_corpus,
    problematic_pairs,
    run_artificial_sweep,
)
from .corpus import (
    ControlConfig,
    DefinitionEntry,
    EmbeddingTable,
    RatedPair,
    apply_synonym_map,
    eval_embedding_benchmark,
    load_definitions,
    load_embeddings,
    meaning_vectors_for_definitions,
    remove_stopwords,
    sample_definitions,
)

__version__ = "0.1.0"
