"""Correlation coefficients, the Mantel permutation test and OLS with
dummy-coded categorical predictors.

The Mantel test correlates two condensed distance matrices and assesses
significance by jointly permuting the rows and columns of the second matrix.
Permutations are drawn in fixed-size batches, each batch seeded from
``(seed, batch_index)``, so results do not depend on scheduling.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np
from numba import njit
from scipy.stats import rankdata
from scipy.stats import t as student_t

from .metrics import DistanceMatrix

__all__ = [
    "pearson",
    "spearman",
    "MantelConfig",
    "MantelResult",
    "mantel",
    "dummy_code",
    "OLSFit",
    "ols_fit",
]

_PERM_BATCH = 512


def _validate_series(xs, ys) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError(f"series shapes differ: {x.shape} vs {y.shape}")
    if x.shape[0] < 3:
        raise ValueError(f"need at least 3 observations, got {x.shape[0]}")
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise ValueError("constant series has no defined correlation")
    return x, y


def _unit_correlation(x_unit: np.ndarray, y_unit: np.ndarray) -> float:
    """Dot product of unit vectors via whichever squared distance is smaller.

    ``1 - ||u - v||^2 / 2`` and ``||u + v||^2 / 2 - 1`` agree analytically;
    picking by proximity makes exactly collinear inputs return exactly +/-1.
    """
    diff = x_unit - y_unit
    total = x_unit + y_unit
    d_minus = float(diff @ diff)
    d_plus = float(total @ total)
    r = 1.0 - 0.5 * d_minus if d_minus <= d_plus else 0.5 * d_plus - 1.0
    return min(1.0, max(-1.0, r))


def pearson(xs, ys) -> float:
    """Sample Pearson correlation of two equal-length numeric series."""
    x, y = _validate_series(xs, ys)
    xm = x - x.mean()
    ym = y - y.mean()
    return _unit_correlation(xm / np.linalg.norm(xm), ym / np.linalg.norm(ym))


def spearman(xs, ys) -> float:
    """Pearson correlation of average-ranked series (ties share mean rank)."""
    x, y = _validate_series(xs, ys)
    return pearson(rankdata(x), rankdata(y))


@dataclass(frozen=True)
class MantelConfig:
    method: str = "pearson"
    n_permutations: int = 9999
    alternative: str = "greater"
    alpha: float = 0.05
    seed: int = 0

    def __post_init__(self) -> None:
        if self.method not in ("pearson", "spearman"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.alternative not in ("greater", "two-sided"):
            raise ValueError(f"unknown alternative {self.alternative!r}")
        if self.n_permutations < 99:
            raise ValueError("need at least 99 permutations")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")


@dataclass(frozen=True)
class MantelResult:
    r: float
    p_value: float
    z_score: float
    n_permutations: int

    def to_dict(self) -> dict:
        return {
            "r": self.r,
            "p_value": self.p_value,
            "z_score": self.z_score,
            "n_permutations": self.n_permutations,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@njit(cache=True, nogil=True)
def _mantel_kernel(y_flat, x_std, iu0, iu1, perms, n, r_obs, abs_obs):
    """Count permuted correlations at or above the observed one.

    Returns (count >= r_obs, count |.| >= |r_obs|, sum, sum of squares).
    """
    count_ge = 0
    count_abs = 0
    total = 0.0
    total_sq = 0.0
    for k in range(perms.shape[0]):
        acc = 0.0
        for t in range(iu0.shape[0]):
            acc += x_std[t] * y_flat[perms[k, iu0[t]] * n + perms[k, iu1[t]]]
        if acc >= r_obs:
            count_ge += 1
        if abs(acc) >= abs_obs:
            count_abs += 1
        total += acc
        total_sq += acc * acc
    return count_ge, count_abs, total, total_sq


def mantel(dm_a: DistanceMatrix, dm_b: DistanceMatrix, config: MantelConfig | None = None) -> MantelResult:
    """Mantel permutation test between two condensed distance matrices.

    The observed statistic is the (Pearson or Spearman) correlation of the
    condensed vectors. Each permutation relabels the items of ``dm_b`` and
    recomputes the correlation; the one-sided p-value is
    ``(1 + #{r_perm >= r_obs}) / (1 + n_permutations)``.
    """
    cfg = config or MantelConfig()
    if dm_a.n != dm_b.n:
        raise ValueError(f"matrix sizes differ: {dm_a.n} vs {dm_b.n}")
    n = dm_a.n
    if n < 3:
        raise ValueError(f"need at least 3 items, got {n}")

    x = dm_a.values.astype(np.float64)
    y = dm_b.values.astype(np.float64)
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise ValueError("constant distance matrix: correlation undefined")
    if cfg.method == "spearman":
        x = rankdata(x)
        y = rankdata(y)
    xm = x - x.mean()
    ym = y - y.mean()
    norm_x = np.linalg.norm(xm)
    norm_y = np.linalg.norm(ym)
    if norm_x == 0.0 or norm_y == 0.0:
        raise ValueError("constant distance matrix: correlation undefined")
    x_unit = xm / norm_x
    y_unit = ym / norm_y
    r_obs = _unit_correlation(x_unit, y_unit)

    # Permuting rows/columns of a symmetric matrix rearranges its condensed
    # entries, so mean and norm are permutation-invariant and the permuted
    # correlation is a plain gather-and-dot against the standardized values.
    iu0, iu1 = np.triu_indices(n, 1)
    iu0 = iu0.astype(np.int64)
    iu1 = iu1.astype(np.int64)
    y_square = np.zeros((n, n))
    y_square[iu0, iu1] = y_unit
    y_flat = (y_square + y_square.T).ravel()

    identity = np.arange(n)
    count_ge = 0
    count_abs = 0
    total = 0.0
    total_sq = 0.0
    done = 0
    batch_index = 0
    while done < cfg.n_permutations:
        size = min(_PERM_BATCH, cfg.n_permutations - done)
        rng = np.random.default_rng(np.random.SeedSequence(entropy=(cfg.seed, batch_index)))
        perms = rng.permuted(np.tile(identity, (size, 1)), axis=1)
        ge, ab, tot, tot_sq = _mantel_kernel(
            y_flat, x_unit, iu0, iu1, perms, n, r_obs, abs(r_obs)
        )
        count_ge += ge
        count_abs += ab
        total += tot
        total_sq += tot_sq
        done += size
        batch_index += 1

    m = cfg.n_permutations
    mean_perm = total / m
    var_perm = max(0.0, (total_sq - m * mean_perm**2) / (m - 1))
    std_perm = np.sqrt(var_perm)
    if std_perm == 0.0:
        raise ValueError("degenerate permutation distribution: zero spread")
    z = (r_obs - mean_perm) / std_perm
    hits = count_ge if cfg.alternative == "greater" else count_abs
    p_value = (1 + hits) / (1 + m)
    return MantelResult(r=r_obs, p_value=float(p_value), z_score=float(z), n_permutations=m)


def dummy_code(
    rows: list[tuple], baselines: tuple, factor_names: list[str] | None = None
) -> tuple[np.ndarray, list[str]]:
    """Design matrix with an intercept and one 0/1 column per non-baseline level.

    ``rows`` holds one tuple of factor levels per observation; ``baselines``
    names the reference level of each factor. Levels are ordered by their
    natural sort within each factor.
    """
    if not rows:
        raise ValueError("no rows to code")
    n_factors = len(baselines)
    if any(len(row) != n_factors for row in rows):
        raise ValueError("row arity does not match baselines")
    if factor_names is None:
        factor_names = [f"f{i}" for i in range(n_factors)]

    levels_per_factor = []
    for f in range(n_factors):
        levels = sorted({row[f] for row in rows})
        if baselines[f] not in levels:
            raise ValueError(
                f"baseline {baselines[f]!r} of factor {factor_names[f]!r} absent from data"
            )
        non_base = [lv for lv in levels if lv != baselines[f]]
        if not non_base:
            raise ValueError(f"factor {factor_names[f]!r} only has its baseline level")
        levels_per_factor.append(non_base)

    names = ["intercept"]
    for f, non_base in enumerate(levels_per_factor):
        names.extend(f"{factor_names[f]}={lv}" for lv in non_base)

    design = np.zeros((len(rows), len(names)))
    design[:, 0] = 1.0
    col = 1
    for f, non_base in enumerate(levels_per_factor):
        for lv in non_base:
            design[:, col] = [1.0 if row[f] == lv else 0.0 for row in rows]
            col += 1
    return design, names


@dataclass(frozen=True)
class OLSFit:
    names: list[str]
    estimates: np.ndarray
    std_errors: np.ndarray
    t_values: np.ndarray
    p_values: np.ndarray
    residual_std: float
    n_observations: int

    def coefficient(self, name: str) -> float:
        return float(self.estimates[self.names.index(name)])

    def to_dict(self) -> dict:
        return {
            "predictors": [
                {
                    "name": name,
                    "estimate": float(est),
                    "std_error": float(se),
                    "t_value": float(t),
                    "p_value": float(p),
                }
                for name, est, se, t, p in zip(
                    self.names, self.estimates, self.std_errors, self.t_values, self.p_values
                )
            ],
            "residual_std": self.residual_std,
            "n_observations": self.n_observations,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    def save_csv(self, path) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["predictor", "estimate", "std_error", "t_value", "p_value"])
            for name, est, se, t, p in zip(
                self.names, self.estimates, self.std_errors, self.t_values, self.p_values
            ):
                writer.writerow([name, repr(float(est)), repr(float(se)), repr(float(t)), repr(float(p))])


def ols_fit(design: np.ndarray, responses, names: list[str] | None = None) -> OLSFit:
    """Least-squares fit with classical standard errors.

    Solved through an orthogonal decomposition; the contract is the usual
    normal-equation solution with ``s^2 = RSS / (n - k)`` and two-sided
    Student-t p-values on n - k degrees of freedom.
    """
    X = np.asarray(design, dtype=float)
    y = np.asarray(responses, dtype=float)
    if X.ndim != 2 or y.ndim != 1 or X.shape[0] != y.shape[0]:
        raise ValueError(f"incompatible design {X.shape} and responses {y.shape}")
    n, k = X.shape
    if n <= k:
        raise ValueError(f"need more observations ({n}) than predictors ({k})")
    if np.linalg.matrix_rank(X) < k:
        raise ValueError("design matrix is rank deficient")
    if names is None:
        names = [f"x{i}" for i in range(k)]
    if len(names) != k:
        raise ValueError("one name per design column required")

    beta, _, _, _ = np.linalg.lstsq(X, y, rcond=None)
    residuals = y - X @ beta
    dof = n - k
    s2 = float(residuals @ residuals) / dof
    cov = s2 * np.linalg.inv(X.T @ X)
    std_errors = np.sqrt(np.diag(cov))
    t_values = beta / std_errors
    p_values = 2.0 * student_t.sf(np.abs(t_values), dof)
    return OLSFit(
        names=list(names),
        estimates=beta,
        std_errors=std_errors,
        t_values=t_values,
        p_values=p_values,
        residual_std=float(np.sqrt(s2)),
        n_observations=n,
    )
