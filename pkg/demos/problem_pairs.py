"""Find the item pairs that drag a meaning-form correlation down.

Converting both distance matrices to ranks and sorting pairs by rank
disagreement surfaces the items whose meaning distance and form distance
point in opposite directions: short lookalike glosses for unrelated words,
or paraphrases with wildly different wording.
"""

import numpy as np

from mfcorr import MantelConfig, mfc_for_corpus, problematic_pairs
from mfcorr.metrics import euclidean_matrix, levenshtein_matrix

rng = np.random.default_rng(2)

# 15 items whose forms track their meanings, plus one planted troublemaker:
# items 3 and 7 mean nearly the same thing but have completely different forms.
meanings = np.column_stack([np.arange(15.0), np.ones(15)])
meanings[7, 0] = meanings[3, 0] + 0.01

forms = []
for i in range(15):
    forms.append(tuple(f"tok{j}" for j in range(i + 1)))
forms[7] = tuple(f"alien{j}" for j in range(15))  # same meaning as 3, alien form

dm_meaning = euclidean_matrix(meanings)
dm_form = levenshtein_matrix(forms)

result = mfc_for_corpus(
    list(meanings), forms, "euclidean", "levenshtein",
    MantelConfig(n_permutations=999, seed=5),
)
print(f"overall correlation with the troublemaker in place: r={result.r:.3f}")

print("\ntop rank-disagreement pairs (index_a, index_b, gap):")
for pair in problematic_pairs(dm_meaning, dm_form, k=5):
    print(
        f"  ({pair.index_a:2d}, {pair.index_b:2d})  "
        f"meaning rank {pair.meaning_rank:6.1f} vs form rank {pair.form_rank:6.1f}  "
        f"gap {pair.rank_gap:6.1f}"
    )

print(
    "\nThe planted pair (3, 7) tops the list: nearly identical meanings,"
    "\nmaximally distant forms. On real corpora this extraction is how one"
    "\ndiscovers systematic artifacts (shared boilerplate, synonym glosses)"
    "\nrather than guessing at them."
)
