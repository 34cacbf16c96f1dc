"""Ordered labeled trees: bracketed parsing and tree edit distance.

The edit distance uses unit costs for insert, delete and relabel, computed
over postorder-numbered subtrees with the keyroot decomposition, so it is
exact on any pair of ordered labeled trees.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ParseTree",
    "parse_bracketed",
    "read_bracketed_file",
    "serialize_tree",
    "tree_size",
    "tree_height",
    "ted",
    "ted_normalized",
]


@dataclass(frozen=True)
class ParseTree:
    label: str
    children: tuple["ParseTree", ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        object.__setattr__(self, "children", tuple(self.children))


def tree_size(tree: ParseTree) -> int:
    """Total node count."""
    return 1 + sum(tree_size(c) for c in tree.children)


def tree_height(tree: ParseTree) -> int:
    """Node count on the longest root-to-leaf path; a single node has height 1."""
    if not tree.children:
        return 1
    return 1 + max(tree_height(c) for c in tree.children)


def parse_bracketed(text: str) -> ParseTree:
    """Parse a single-rooted bracketed expression such as ``(NP (DT a) (NN cat))``.

    Bare tokens become leaves; raises ValueError on empty input, unbalanced
    brackets or multiple roots.
    """
    tokens = text.replace("(", " ( ").replace(")", " ) ").split()
    if not tokens:
        raise ValueError("empty input")
    pos = 0

    def parse_node() -> ParseTree:
        nonlocal pos
        if tokens[pos] == ")":
            raise ValueError("unexpected ')'")
        if tokens[pos] != "(":
            label = tokens[pos]
            pos += 1
            return ParseTree(label)
        pos += 1  # consume '('
        if pos >= len(tokens) or tokens[pos] in "()":
            raise ValueError("node without a label")
        label = tokens[pos]
        pos += 1
        children = []
        while pos < len(tokens) and tokens[pos] != ")":
            children.append(parse_node())
        if pos >= len(tokens):
            raise ValueError("unbalanced brackets: missing ')'")
        pos += 1  # consume ')'
        return ParseTree(label, tuple(children))

    if tokens[0] != "(":
        raise ValueError("tree must start with '('")
    root = parse_node()
    if pos != len(tokens):
        raise ValueError("multiple roots or trailing input")
    return root


def read_bracketed_file(path) -> list[ParseTree]:
    """One bracketed parse per line; blank lines are skipped."""
    trees = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                trees.append(parse_bracketed(line))
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from exc
    if not trees:
        raise ValueError(f"{path}: no trees loaded")
    return trees


def serialize_tree(tree: ParseTree) -> str:
    """Inverse of :func:`parse_bracketed` up to tree equality."""

    def render(node: ParseTree) -> str:
        if not node.children:
            return node.label
        inner = " ".join(render(c) for c in node.children)
        return f"({node.label} {inner})"

    if not tree.children:
        return f"({tree.label})"
    return render(tree)


def _postorder(tree: ParseTree):
    """Postorder labels and leftmost-leaf-descendant indices, plus keyroots."""
    labels: list[str] = []
    lmd: list[int] = []

    def walk(node: ParseTree) -> int:
        first_leaf = -1
        for child in node.children:
            leaf = walk(child)
            if first_leaf == -1:
                first_leaf = leaf
        idx = len(labels)
        labels.append(node.label)
        lmd.append(first_leaf if first_leaf != -1 else idx)
        return lmd[idx]

    walk(tree)
    seen: set[int] = set()
    keyroots = []
    for i in range(len(labels) - 1, -1, -1):
        if lmd[i] not in seen:
            seen.add(lmd[i])
            keyroots.append(i)
    keyroots.reverse()
    return labels, np.array(lmd, dtype=np.int64), keyroots


def ted(f: ParseTree, g: ParseTree) -> int:
    """Exact unit-cost tree edit distance between two ordered labeled trees."""
    labels_f, lmd_f, keyroots_f = _postorder(f)
    labels_g, lmd_g, keyroots_g = _postorder(g)
    nf, ng = len(labels_f), len(labels_g)
    treedist = np.zeros((nf, ng), dtype=np.int64)

    for i in keyroots_f:
        for j in keyroots_g:
            li, lj = lmd_f[i], lmd_g[j]
            m, n = i - li + 2, j - lj + 2
            fd = np.zeros((m, n), dtype=np.int64)
            fd[1:, 0] = np.arange(1, m)
            fd[0, 1:] = np.arange(1, n)
            for x in range(1, m):
                fx = li + x - 1
                for y in range(1, n):
                    gy = lj + y - 1
                    if lmd_f[fx] == li and lmd_g[gy] == lj:
                        relabel = fd[x - 1, y - 1] + (labels_f[fx] != labels_g[gy])
                        fd[x, y] = min(fd[x - 1, y] + 1, fd[x, y - 1] + 1, relabel)
                        treedist[fx, gy] = fd[x, y]
                    else:
                        px = lmd_f[fx] - li
                        py = lmd_g[gy] - lj
                        fd[x, y] = min(
                            fd[x - 1, y] + 1,
                            fd[x, y - 1] + 1,
                            fd[px, py] + treedist[fx, gy],
                        )
    return int(treedist[nf - 1, ng - 1])


def ted_normalized(f: ParseTree, g: ParseTree) -> float:
    """Tree edit distance scaled into [0, 1].

    The denominator ``size(f) + size(g) - min(height(f), height(g))`` is an
    upper bound on the unit-cost distance, so the ratio never exceeds 1.
    """
    denom = tree_size(f) + tree_size(g) - min(tree_height(f), tree_height(g))
    return ted(f, g) / denom
