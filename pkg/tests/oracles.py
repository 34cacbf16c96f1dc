"""Independent reference implementations used only to check the package.

These are deliberately written in the most obvious way available, with no
code shared with the library: a full-table Levenshtein dynamic program, a
direct transliteration of the Zhang-Shasha tree-edit-distance algorithm,
and small brute-force helpers.
"""

from __future__ import annotations

import numpy as np

from mfcorr.trees import ParseTree


def levenshtein_dp(x, y) -> int:
    """Full-matrix edit distance, the textbook way."""
    n, m = len(x), len(y)
    table = [[0] * (m + 1) for _ in range(n + 1)]
    for i in range(n + 1):
        table[i][0] = i
    for j in range(m + 1):
        table[0][j] = j
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            cost = 0 if x[i - 1] == y[j - 1] else 1
            table[i][j] = min(
                table[i - 1][j] + 1,
                table[i][j - 1] + 1,
                table[i - 1][j - 1] + cost,
            )
    return table[n][m]


class _ZhangShashaTree:
    """Postorder bookkeeping for the reference tree edit distance."""

    def __init__(self, root: ParseTree):
        self.labels: list[str] = []
        self.lmld: list[int] = []  # leftmost leaf descendant, 1-indexed
        self._walk(root)
        self.n = len(self.labels)
        # keyroots: nodes with a left sibling, plus the root
        lmld_seen = {}
        for i in range(1, self.n + 1):
            lmld_seen[self.lmld[i - 1]] = i
        self.keyroots = sorted(lmld_seen.values())

    def _walk(self, node: ParseTree) -> int:
        if node.children:
            first = None
            for child in node.children:
                leaf = self._walk(child)
                if first is None:
                    first = leaf
            self.labels.append(node.label)
            self.lmld.append(first)
        else:
            self.labels.append(node.label)
            self.lmld.append(len(self.labels))
        return self.lmld[-1]


def zhang_shasha_ted(a: ParseTree, b: ParseTree) -> int:
    """Reference unit-cost tree edit distance (Zhang & Shasha, 1989).

    Follows the published forest-distance recurrence verbatim, with
    1-indexed arrays and a quadratic table per keyroot pair.
    """
    ta, tb = _ZhangShashaTree(a), _ZhangShashaTree(b)
    td = [[0] * (tb.n + 1) for _ in range(ta.n + 1)]

    def treedist(i: int, j: int) -> None:
        li, lj = ta.lmld[i - 1], tb.lmld[j - 1]
        m, n = i - li + 2, j - lj + 2
        fd = [[0] * n for _ in range(m)]
        for x in range(1, m):
            fd[x][0] = fd[x - 1][0] + 1
        for y in range(1, n):
            fd[0][y] = fd[0][y - 1] + 1
        for x in range(1, m):
            for y in range(1, n):
                node_x = li + x - 1
                node_y = lj + y - 1
                if ta.lmld[node_x - 1] == li and tb.lmld[node_y - 1] == lj:
                    cost = 0 if ta.labels[node_x - 1] == tb.labels[node_y - 1] else 1
                    fd[x][y] = min(
                        fd[x - 1][y] + 1,
                        fd[x][y - 1] + 1,
                        fd[x - 1][y - 1] + cost,
                    )
                    td[node_x][node_y] = fd[x][y]
                else:
                    px = ta.lmld[node_x - 1] - li
                    py = tb.lmld[node_y - 1] - lj
                    fd[x][y] = min(
                        fd[x - 1][y] + 1,
                        fd[x][y - 1] + 1,
                        fd[px][py] + td[node_x][node_y],
                    )

    for i in ta.keyroots:
        for j in tb.keyroots:
            treedist(i, j)
    return td[ta.n][tb.n]


def random_tree(rng: np.random.Generator, n_nodes: int, n_labels: int = 4) -> ParseTree:
    """Uniformly grown random ordered tree with ``n_nodes`` nodes."""
    labels = [f"L{rng.integers(n_labels)}" for _ in range(n_nodes)]
    children: list[list[int]] = [[] for _ in range(n_nodes)]
    for node in range(1, n_nodes):
        parent = int(rng.integers(node))
        position = int(rng.integers(len(children[parent]) + 1))
        children[parent].insert(position, node)

    def build(idx: int) -> ParseTree:
        return ParseTree(labels[idx], tuple(build(c) for c in children[idx]))

    return build(0)


def random_token_sequence(rng: np.random.Generator, max_len: int, n_tokens: int = 5):
    length = int(rng.integers(0, max_len + 1))
    return tuple(f"t{rng.integers(n_tokens)}" for _ in range(length))


def average_ranks(values) -> list[float]:
    """Brute-force average ranks (1-based, ties share the mean rank)."""
    values = list(values)
    ranks = []
    for v in values:
        less = sum(1 for w in values if w < v)
        equal = sum(1 for w in values if w == v)
        ranks.append(less + (equal + 1) / 2.0)
    return ranks


def quantile_linear(values, q: float) -> float:
    """Linear-interpolation quantile, computed from the definition."""
    ordered = sorted(values)
    if len(ordered) == 1:
        return float(ordered[0])
    pos = q * (len(ordered) - 1)
    lo = int(np.floor(pos))
    hi = int(np.ceil(pos))
    frac = pos - lo
    return float(ordered[lo] * (1 - frac) + ordered[hi] * frac)
