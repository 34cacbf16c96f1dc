"""Artificial languages: sets of meaning-message pairs under four
structural parameters, plus random baselines.

Meanings are binary vectors over ``k`` concepts. A language merges the first
``h`` concepts into one holistic expression, gives every expression ``s``
interchangeable synonym symbols, scatters ``u`` meaning-free filler symbols
through every message, and produces ``p`` candidate messages per meaning
before duplicate pairs are dropped.

Generation conventions (they define the message distribution and are part of
the determinism contract):

* the grounded expressions of a meaning are emitted in a random order drawn
  once per meaning and shared by all of its ``p`` candidates;
* synonym choices are drawn independently per candidate and per slot;
* each filler symbol is inserted sequentially at a position drawn uniformly
  over the current token positions, i.e. never appended after the final
  token;
* duplicate (meaning, message) pairs are dropped, keeping first occurrence.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable

import numpy as np

__all__ = [
    "MeaningVector",
    "Message",
    "LanguageSpec",
    "BaselineSpec",
    "Lexicon",
    "Language",
    "enumerate_meanings",
    "build_lexicon",
    "generate_language",
    "generate_random_baseline",
    "decode_message",
]

MeaningVector = tuple[int, ...]
Message = tuple[str, ...]

BASELINE_ALPHABET = tuple("abcdefghijklmnopqrstuvwxyz")
FIXED_BASELINE_LENGTH = 5
VARIABLE_BASELINE_RANGE = (1, 10)


@dataclass(frozen=True)
class LanguageSpec:
    """Parameters of one artificial language."""

    k: int = 5
    h: int = 1
    s: int = 1
    u: int = 0
    p: int = 1
    seed: int = 0

    def __post_init__(self) -> None:
        if not 1 <= self.k <= 16:
            raise ValueError(f"k must lie in 1..16, got {self.k}")
        if not 1 <= self.h <= self.k:
            raise ValueError(f"h must lie in 1..k, got {self.h}")
        if self.s < 1:
            raise ValueError(f"s must be at least 1, got {self.s}")
        if self.u < 0:
            raise ValueError(f"u must be non-negative, got {self.u}")
        if self.p < 1:
            raise ValueError(f"p must be at least 1, got {self.p}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must fit in 64 unsigned bits")

    @property
    def message_length(self) -> int:
        """Token count of every generated message: one holistic slot, one
        slot per unmerged concept, plus the fillers."""
        return (self.k - self.h + 1) + self.u


@dataclass(frozen=True)
class BaselineSpec:
    """Descriptor of a random-message baseline language."""

    kind: str
    k: int = 5
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("fixed-length", "variable-length"):
            raise ValueError(f"unknown baseline kind {self.kind!r}")
        if not 1 <= self.k <= 16:
            raise ValueError(f"k must lie in 1..16, got {self.k}")


@dataclass(frozen=True)
class Lexicon:
    """Symbol tables of one language.

    ``holistic`` maps each value combination of the first h concepts to its
    synonym symbols; ``atomic`` maps (concept index, value) for the remaining
    concepts; ``ungrounded`` lists the filler symbols. All symbols are
    globally distinct.
    """

    holistic: dict[tuple[int, ...], tuple[str, ...]]
    atomic: dict[tuple[int, int], tuple[str, ...]]
    ungrounded: tuple[str, ...]

    def all_symbols(self) -> set[str]:
        symbols: set[str] = set(self.ungrounded)
        for syns in self.holistic.values():
            symbols.update(syns)
        for syns in self.atomic.values():
            symbols.update(syns)
        return symbols


@dataclass(frozen=True)
class Language:
    pairs: tuple[tuple[MeaningVector, Message], ...]
    spec: LanguageSpec | BaselineSpec

    @property
    def meanings(self) -> list[MeaningVector]:
        return [m for m, _ in self.pairs]

    @property
    def messages(self) -> list[Message]:
        return [msg for _, msg in self.pairs]

    def to_jsonl(self) -> str:
        """One pair per line: {"meaning": [...], "message": [...]}."""
        lines = [
            json.dumps({"meaning": list(meaning), "message": list(message)})
            for meaning, message in self.pairs
        ]
        return "\n".join(lines) + "\n"

    @staticmethod
    def pairs_from_jsonl(text: str) -> list[tuple[MeaningVector, Message]]:
        pairs = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                pairs.append((tuple(record["meaning"]), tuple(record["message"])))
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise ValueError(f"line {lineno}: bad language record: {exc}") from exc
        return pairs


def enumerate_meanings(k: int) -> list[MeaningVector]:
    """All 2^k binary vectors in lexicographic order."""
    if not 1 <= k <= 16:
        raise ValueError(f"k must lie in 1..16, got {k}")
    return [tuple(bits) for bits in itertools.product((0, 1), repeat=k)]


def _render_symbols(count: int, rng: np.random.Generator) -> list[str]:
    """Distinct printable symbols with randomized id assignment."""
    width = max(2, len(str(max(count - 1, 0))))
    ids = rng.permutation(count)
    return [f"s{int(i):0{width}d}" for i in ids]


def build_lexicon(spec: LanguageSpec, rng: np.random.Generator) -> Lexicon:
    """Assign distinct symbols to every expression and filler slot.

    Inventory size is ``2^h * s + (k - h) * 2 * s + u``.
    """
    n_holistic = 2**spec.h
    total = n_holistic * spec.s + (spec.k - spec.h) * 2 * spec.s + spec.u
    symbols = iter(_render_symbols(total, rng))

    holistic = {}
    for combo in itertools.product((0, 1), repeat=spec.h):
        holistic[combo] = tuple(next(symbols) for _ in range(spec.s))
    atomic = {}
    for concept in range(spec.h, spec.k):
        for value in (0, 1):
            atomic[(concept, value)] = tuple(next(symbols) for _ in range(spec.s))
    ungrounded = tuple(next(symbols) for _ in range(spec.u))
    return Lexicon(holistic=holistic, atomic=atomic, ungrounded=ungrounded)


def generate_language(spec: LanguageSpec) -> Language:
    """Produce the deduplicated meaning-message pairs of ``spec``.

    Deterministic: identical specs (including the seed) give identical
    languages.
    """
    rng = np.random.default_rng(spec.seed)
    lexicon = build_lexicon(spec, rng)
    grounded_slots = spec.k - spec.h + 1

    pairs: list[tuple[MeaningVector, Message]] = []
    seen: set[tuple[MeaningVector, Message]] = set()
    for meaning in enumerate_meanings(spec.k):
        slot_order = rng.permutation(grounded_slots)
        holistic_key = meaning[: spec.h]
        for _ in range(spec.p):
            slots = [lexicon.holistic[holistic_key][rng.integers(spec.s)]]
            for concept in range(spec.h, spec.k):
                syns = lexicon.atomic[(concept, meaning[concept])]
                slots.append(syns[rng.integers(spec.s)])
            message = [slots[i] for i in slot_order]
            for filler in lexicon.ungrounded:
                message.insert(int(rng.integers(len(message))), filler)
            pair = (meaning, tuple(message))
            if pair not in seen:
                seen.add(pair)
                pairs.append(pair)
    return Language(pairs=tuple(pairs), spec=spec)


def generate_random_baseline(kind: str, k: int, rng) -> Language:
    """One uniformly random message per meaning.

    ``kind`` is ``fixed-length`` (always 5 symbols) or ``variable-length``
    (length uniform on 1..10); symbols come from a 26-letter alphabet.
    ``rng`` may be a Generator, a seed, or a SeedSequence.
    """
    spec = BaselineSpec(kind=kind, k=k, seed=_seed_of(rng))
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    lo, hi = VARIABLE_BASELINE_RANGE
    pairs = []
    for meaning in enumerate_meanings(k):
        length = FIXED_BASELINE_LENGTH if kind == "fixed-length" else int(gen.integers(lo, hi + 1))
        message = tuple(BASELINE_ALPHABET[i] for i in gen.integers(0, len(BASELINE_ALPHABET), length))
        pairs.append((meaning, message))
    return Language(pairs=tuple(pairs), spec=spec)


def _seed_of(rng) -> int:
    if isinstance(rng, (int, np.integer)):
        return int(rng)
    return 0


def decode_message(message: Iterable[str], lexicon: Lexicon, k: int, h: int) -> MeaningVector:
    """Reconstruct the meaning a grid-generated message expresses.

    Fillers are skipped; every other symbol is looked up in the lexicon.
    Raises ValueError if the message does not ground a complete meaning.
    """
    by_symbol: dict[str, tuple] = {}
    for combo, syns in lexicon.holistic.items():
        for sym in syns:
            by_symbol[sym] = ("holistic", combo)
    for (concept, value), syns in lexicon.atomic.items():
        for sym in syns:
            by_symbol[sym] = ("atomic", concept, value)
    fillers = set(lexicon.ungrounded)

    values: dict[int, int] = {}
    for symbol in message:
        if symbol in fillers:
            continue
        entry = by_symbol.get(symbol)
        if entry is None:
            raise ValueError(f"symbol {symbol!r} is not in the lexicon")
        if entry[0] == "holistic":
            for concept, value in enumerate(entry[1]):
                values[concept] = value
        else:
            values[entry[1]] = entry[2]
    if sorted(values) != list(range(k)):
        raise ValueError("message does not express every concept")
    return tuple(values[c] for c in range(k))
