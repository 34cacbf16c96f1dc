"""Walk through the artificial-language experiment at desk scale.

Generates languages whose structure we control exactly, measures how well
normalized edit distance between messages tracks Hamming distance between
meanings, and fits the factor model that summarizes which structural
properties help or hurt the correlation.

Run time: about a minute. The full-scale version (50 runs per
configuration, 9999 permutations) lives behind `mfcorr sweep`.
"""

from mfcorr import (
    LanguageSpec,
    MantelConfig,
    SweepConfig,
    fit_factor_model,
    generate_language,
    hamming_matrix,
    levenshtein_matrix,
    mantel,
    marginal_quartiles,
    run_artificial_sweep,
)

# --- one language, end to end ----------------------------------------------

spec = LanguageSpec(k=5, h=1, s=1, u=0, p=1, seed=42)
language = generate_language(spec)
print(f"fully compositional language: {len(language.pairs)} meaning-message pairs")
for meaning, message in language.pairs[:4]:
    print(f"  {meaning} -> {' '.join(message)}")

dm_meaning = hamming_matrix(language.meanings)
dm_form = levenshtein_matrix(language.messages, normalized=True)
result = mantel(dm_meaning, dm_form, MantelConfig(method="spearman", n_permutations=999, seed=1))
print(f"meaning-form correlation: r={result.r:.3f}, p={result.p_value:.4f}, z={result.z_score:.1f}")

# Token order is drawn per meaning, so even this fully compositional
# language scores well below 1: a reminder that the measurement mixes
# compositional structure with word-order noise.

# --- a small sweep over the four structural factors -------------------------

print("\nsweeping a reduced grid (this is the shape of the real experiment)...")
cfg = SweepConfig(
    h_values=(1, 3, 5),
    s_values=(1, 3),
    u_values=(0, 2),
    p_values=(1, 3),
    runs_per_config=6,
    include_baselines=True,
    mantel=MantelConfig(method="spearman", n_permutations=499),
    master_seed=7,
)
summaries = run_artificial_sweep(cfg)

print(f"{'config':>16} {'mean r':>8} {'mean p':>8} {'significant':>12}")
for s in summaries:
    print(f"{s.config:>16} {s.mean_r:8.3f} {s.mean_p:8.3f} {str(s.significant):>12}")

# Random baselines land at r ~ 0 with large p-values; holistic languages
# (h=5) without fillers have constant form distances and fail outright.

print("\nmedian r by holistic-merge width (significant configs only):")
for level, (q1, q2, q3) in marginal_quartiles(summaries, "h").items():
    print(f"  h={level}: q1={q1:.3f} median={q2:.3f} q3={q3:.3f}")

fit = fit_factor_model(summaries)
print("\nfactor model (per-run correlations on dummy-coded levels):")
for name, est, t in zip(fit.names, fit.estimates, fit.t_values):
    print(f"  {name:>10}: {est:+.4f}  (t={t:+.1f})")

print(
    "\nReading: synonyms (s) and fillers (u) depress the correlation even"
    "\nthough they leave compositional structure intact; paraphrases (p)"
    "\nnudge it back up. Holistic merging (h) is what the measurement is"
    "\nsupposed to detect, yet its coefficients are comparable to the"
    "\nconfounds, which is the core caution of this toolkit."
)
